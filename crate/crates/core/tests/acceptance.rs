//! Acceptance suite: one line per criterion, nonzero exit if any fails or overruns its budget.

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::{Duration, Instant};

use num_integer::Integer;
use spf_core::combinatorics::{binomial, Partition};
use spf_core::derived::{bott_check, decalage_check, derived_functors, iterate_check, Comparison, DerivedRequest};
use spf_core::functor::{dimension, eval_map, FunctorExpr};
use spf_core::linalg::{smith_normal_form, ChainComplexData, GradedModule, Int, Matrix, Ring};
use spf_core::ringel::{
    bar_complex, check_descent, injective_coresolution, plethysm_check, theta, theta_complex, verify_main_theorem, LambdaComplex,
    Route,
};
use spf_core::schur_algebra::{block_disjoint, blocks, build_algebra, ext_groups, hom_space, module_of};
use spf_core::simplicial::{apply_functor, chains, k_n};

const Z: Ring = Ring::Integers;
const Q: Ring = Ring::Rationals;
const F2: Ring = Ring::PrimeField(2);
const F3: Ring = Ring::PrimeField(3);

type Outcome = Result<String, String>;

fn fe(s: &str) -> FunctorExpr {
    s.parse().unwrap_or_else(|e| panic!("{s}: {e}"))
}

fn part(s: &str) -> Partition {
    s.parse().unwrap()
}

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn graded(ring: Ring, entries: &[(i64, usize, &[u64])]) -> GradedModule {
    let mut g = GradedModule::new(ring);
    for (q, r, t) in entries {
        g.set(*q, *r, t.iter().map(|x| Int::from(*x)).collect());
    }
    g
}

fn all_match(cs: &[Comparison]) -> Result<usize, String> {
    match cs.iter().find(|c| !c.matches()) {
        Some(c) => Err(c.to_string()),
        None => Ok(cs.len()),
    }
}

/// Partitions of weight 1..=3 read as multi-indices.
fn small_partitions() -> Vec<Partition> {
    (1..=3).flat_map(Partition::all).collect()
}

fn tensor_of(letter: &str, lambda: &Partition) -> FunctorExpr {
    let s: Vec<String> = lambda.parts().iter().map(|a| format!("{letter}[{a}]")).collect();
    fe(&s.join("*"))
}

/// Closed-form dimensions of S^a, Λ^a, Γ^a on k^m, multiplied over the parts.
fn closed_dim(letter: &str, lambda: &Partition, m: usize) -> usize {
    lambda
        .parts()
        .iter()
        .map(|&a| match letter {
            "W" => binomial(m, a),
            _ => binomial(m + a - 1, a),
        } as usize)
        .product()
}

fn catalog_of_duals() -> Outcome {
    let mut n = 0;
    for lambda in small_partitions() {
        for (from, to) in [("S", "W"), ("W", "G")] {
            let h = theta(&tensor_of(from, &lambda), 1, &[1, 2, 3], Z).map_err(|e| e.to_string())?;
            for m in 1..=3 {
                let want = graded(Z, &[(0, closed_dim(to, &lambda, m), &[])]);
                ensure(h[&m] == want, || format!("Θ({from}^{lambda}) at m = {m}: {} against {to}^{lambda} = {want}", h[&m]))?;
                n += 1;
            }
        }
    }
    Ok(format!("{n} evaluations of Θ(S^λ) = Λ^λ and Θ(Λ^λ) = Γ^λ"))
}

/// The two-term complex ⊗² → Γ², v⊗w ↦ v⊗w + w⊗v, written down directly.
fn symmetrization_cohomology(ring: Ring, m: usize) -> GradedModule {
    let pairs: Vec<(usize, usize)> = (0..m).flat_map(|i| (i..m).map(move |j| (i, j))).collect();
    let mut trip = Vec::new();
    for i in 0..m {
        for j in 0..m {
            let row = pairs.iter().position(|&p| p == (i.min(j), i.max(j))).unwrap();
            let c = if i == j { 2 } else { 1 };
            trip.push((row, i * m + j, ring.reduce(Int::from(c))));
        }
    }
    let up = Matrix::from_triplets(ring, pairs.len(), m * m, trip);
    let ranks = [(0, m * m), (1, pairs.len())].into_iter().collect();
    let maps = [(0, up)].into_iter().collect();
    ChainComplexData::from_cochain(ring, &ranks, &maps).homology_all().regrade(|q| -q)
}

fn theta_of_divided_square() -> Outcome {
    let z = theta(&fe("G[2]"), 1, &[1, 2, 3], Z).map_err(|e| e.to_string())?;
    let at2 = graded(Z, &[(0, 1, &[]), (1, 0, &[2, 2])]);
    ensure(z[&2] == at2, || format!("ΘΓ² over Z at m = 2 is {}", z[&2]))?;
    let f2 = theta(&fe("G[2]"), 1, &[1, 2, 3], F2).map_err(|e| e.to_string())?;
    for m in 1..=3 {
        ensure(z[&m] == symmetrization_cohomology(Z, m), || format!("ΘΓ² over Z at m = {m} against ⊗² → Γ²"))?;
        ensure(f2[&m] == symmetrization_cohomology(F2, m), || format!("ΘΓ² over F2 at m = {m} against ⊗² → Γ²"))?;
        let h0 = f2[&m].get(0).free_rank;
        ensure(h0 == binomial(m + 1, 2) as usize, || format!("H⁰ΘΓ² over F2 at m = {m} has dim {h0}"))?;
    }
    Ok("over Z at m = 2: H⁰ = Z, H¹ = (Z/2)²; over F2 H⁰ = Γ² at m ≤ 3".into())
}

fn main_theorem_grid() -> Outcome {
    let functors = ["S[2]", "W[2]", "G[2]", "T[2]", "S[3]", "W[3]", "G[3]", "Schur[2,1]"];
    let mut n = 0;
    for f in functors {
        for height in 1..=2 {
            for ring in [Z, F2, F3] {
                let cs = verify_main_theorem(&fe(f), height, &[1, 2], ring).map_err(|e| format!("{f}, n = {height}, {ring}: {e}"))?;
                n += all_match(&cs)?;
            }
        }
    }
    Ok(format!("{n} comparisons L_(nd-i)F(k^m;n) = H^i(ΘⁿF)(k^m)"))
}

fn symmetric_cube_over_f3() -> Outcome {
    let l3 = derived_functors(&DerivedRequest::new(fe("S[3]"), F3, 3, 3)).map_err(|e| e.to_string())?;
    let want3 = graded(F3, &[(7, 3, &[]), (8, 3, &[]), (9, 1, &[])]);
    ensure(l3 == want3, || format!("L_*S³(F3³;3) = {l3}"))?;
    let l2 = derived_functors(&DerivedRequest::new(fe("S[3]"), F3, 3, 2)).map_err(|e| e.to_string())?;
    ensure(l2 == graded(F3, &[(6, 10, &[])]), || format!("L_*S³(F3³;2) = {l2}"))?;
    Ok("L_*S³(F3³;3) = {L9: 1, L8: 3, L7: 3}, L_*S³(F3³;2) = {L6: 10}".into())
}

fn three_primary_symmetric_cube() -> Outcome {
    let l = derived_functors(&DerivedRequest::new(fe("S[3]"), Z, 1, 3)).map_err(|e| e.to_string())?;
    let p3 = l.p_primary(3);
    ensure(p3 == graded(Z, &[(7, 0, &[3])]), || format!("3-primary part of L_*S³(Z;3) = {p3}"))?;
    Ok("3-primary part of L_*S³(Z;3) is Z/3 in degree 7".into())
}

fn lie_cube() -> Outcome {
    let l = derived_functors(&DerivedRequest::new(fe("Schur[2,1]"), Z, 2, 2)).map_err(|e| e.to_string())?;
    let want = graded(Z, &[(5, 0, &[3, 3]), (6, 2, &[])]);
    ensure(l == want, || format!("L_*S_(2,1)(Z²;2) = {l}"))?;
    // Second route: S_(2,1) → S²⊗S¹ → S³ and L_*S³(V;2) = Γ³(V)[6] leave only the top of the long
    // exact sequence, so L6 and L5 are the kernel and cokernel of Γ²⊗Γ¹ → Γ³ on Z².
    let s3 = derived_functors(&DerivedRequest::new(fe("S[3]"), Z, 2, 2)).map_err(|e| e.to_string())?;
    ensure(s3 == graded(Z, &[(6, 4, &[])]), || format!("L_*S³(Z²;2) = {s3}"))?;
    let snf = smith_normal_form(&divided_multiplication()).map_err(|e| e.to_string())?;
    let (rank, cols) = (snf.factors.len(), 6);
    let torsion: Vec<Int> = snf.factors.into_iter().filter(|f| *f != Int::from(1)).collect();
    ensure(cols - rank == 2 && torsion == [Int::from(3), Int::from(3)], || format!("Γ²⊗Γ¹ → Γ³: kernel rank {}, cokernel torsion {torsion:?}", cols - rank))?;
    let theta2 = verify_main_theorem(&fe("Schur[2,1]"), 2, &[2], Z).map_err(|e| e.to_string())?;
    all_match(&theta2)?;
    Ok("L6 = Z², L5 = (Z/3)², all else 0; the 3-torsion sits in L_(3n-1) = L5 and L1 = 0".into())
}

/// Multiplication Γ²⊗Γ¹ → Γ³ on Z²: x^[a]y^[b] · x^[c]y^[d] = C(a+c,a)·C(b+d,b)·x^[a+c]y^[b+d].
fn divided_multiplication() -> Matrix {
    let mut rows = vec![vec![0i64; 6]; 4];
    for (col, (a, b, c, d)) in (0..=2).rev().flat_map(|a| [(a, 2 - a, 1, 0), (a, 2 - a, 0, 1)]).enumerate() {
        let coeff = binomial(a + c, a) * binomial(b + d, b);
        rows[3 - (a + c)][col] = coeff as i64;
    }
    Matrix::from_i64_rows(Z, &rows)
}

fn decalage_suite() -> Outcome {
    let mut n = 0;
    for lambda in small_partitions() {
        for m in 1..=2 {
            for ring in [Z, F3] {
                n += all_match(&[decalage_check(&lambda, 1, m, ring).map_err(|e| e.to_string())?])?;
            }
            for height in 1..=2 {
                n += all_match(&[bott_check(&lambda, height, m).map_err(|e| e.to_string())?])?;
            }
        }
    }
    Ok(format!("{n} décalage and Bott comparisons"))
}

fn ext_suite() -> Outcome {
    let mut n = 0;
    for ring in [F2, F3] {
        for d in 1..=3 {
            let alg = build_algebra(d, d, ring).map_err(|e| e.to_string())?;
            let module = |s: &str| module_of(&alg, &fe(s)).map_err(|e| e.to_string());
            let wedge = module(&format!("W[{d}]"))?;
            for mu in Partition::all(d) {
                let ext = ext_groups(&wedge, &module(&tensor_of("S", &mu).to_string())?, 3).map_err(|e| e.to_string())?;
                ensure(ext.degrees.keys().all(|&q| q == 0), || format!("Ext^*(Λ^{d}, S^{mu}) over {ring} = {ext}"))?;
                n += 1;
            }
            let names: Vec<String> = ["S", "W", "G", "T"].iter().map(|x| format!("{x}[{d}]")).collect();
            for a in &names {
                for b in &names {
                    let (ma, mb) = (module(a)?, module(b)?);
                    let e0 = ext_groups(&ma, &mb, 0).map_err(|e| e.to_string())?.get(0).free_rank;
                    let hom = hom_space(&ma, &mb).map_err(|e| e.to_string())?.len();
                    ensure(e0 == hom, || format!("Ext⁰({a}, {b}) over {ring} is {e0}, hom_space has {hom}"))?;
                    n += 1;
                }
            }
        }
    }
    let alg = build_algebra(3, 3, F3).map_err(|e| e.to_string())?;
    let ext = ext_groups(&module_of(&alg, &fe("S[3]")).unwrap(), &module_of(&alg, &fe("G[3]")).unwrap(), 5).map_err(|e| e.to_string())?;
    ensure(ext == graded(F3, &[(0, 1, &[]), (3, 1, &[]), (4, 1, &[])]), || format!("Ext^*(S³, Γ³) over F3 = {ext}"))?;
    let l = derived_functors(&DerivedRequest::new(fe("G[3]"), F3, 1, 2)).map_err(|e| e.to_string())?;
    ensure(ext == l.regrade(|q| 6 - q), || format!("Ext^i(S³, Γ³) against L_(6-i)Γ³(F3;2) = {l}"))?;
    Ok(format!("{n} Ext computations; Ext^i(S³,Γ³) over F3 = 1 at i = 0, 3, 4"))
}

fn hook_blocks() -> Outcome {
    let hook = part("2,1");
    let b = blocks(3, 2).map_err(|e| e.to_string())?;
    ensure(b.values().any(|ps| ps == &vec![hook.clone()]), || format!("blocks of weight 3 at p = 2: {b:?}"))?;
    ensure(block_disjoint(&[part("1,1,1")], &hook, 2).unwrap(), || "(2,1) shares a block with (1,1,1)".into())?;
    let z = derived_functors(&DerivedRequest::new(fe("Schur[2,1]"), Z, 1, 2)).map_err(|e| e.to_string())?;
    let direct = derived_functors(&DerivedRequest::new(fe("Schur[2,1]"), F2, 1, 2)).map_err(|e| e.to_string())?;
    ensure(z.base_change_fp(2).is_zero() && direct.is_zero(), || format!("L_*S_(2,1)(Z;2) = {z}, over F2 {direct}"))?;
    let alg = build_algebra(3, 3, F2).map_err(|e| e.to_string())?;
    let ext = ext_groups(&module_of(&alg, &fe("S[3]")).unwrap(), &module_of(&alg, &fe("Schur[2,1]")).unwrap(), 6).map_err(|e| e.to_string())?;
    ensure(ext.is_zero(), || format!("Ext^*(S³, S_(2,1)) over F2 = {ext}"))?;
    let mut n = 0;
    for (m, height) in [(1, 1), (2, 1), (3, 1), (1, 2), (2, 2), (1, 3)] {
        let l = derived_functors(&DerivedRequest::new(fe("Schur[2,1]"), Z, m, height)).map_err(|e| e.to_string())?;
        for (q, h) in &l.degrees {
            for t in &h.torsion {
                ensure(Int::from(12).is_multiple_of(t), || format!("Z/{t} in L_{q}S_(2,1)(Z^{m};{height})"))?;
                n += 1;
            }
        }
    }
    Ok(format!("(2,1) alone in its 2-block; L_*S_(2,1)(Z;2)⊗F2 = 0 three ways; {n} torsion factors divide 12"))
}

fn plethysm_and_frobenius() -> Outcome {
    let cs = plethysm_check(&fe("S[2]"), &fe("S[2]"), 1, &[1, 2, 3], Z).map_err(|e| e.to_string())?;
    all_match(&cs)?;
    for (m, c) in (1..=3).zip(&cs) {
        let l2 = binomial(m, 2) as usize;
        let want = graded(Z, &[(0, binomial(l2 + 1, 2) as usize, &[])]);
        let want = if want.get(0).free_rank == 0 { GradedModule::new(Z) } else { want };
        ensure(c.lhs == want, || format!("Θ(S²∘S²) at m = {m} is {} against Γ²∘Λ²", c.lhs))?;
        ensure(dimension(&fe("G[2] o W[2]"), m, Z).unwrap() == want.total_rank(), || format!("dim Γ²∘Λ²(k^{m})"))?;
    }
    for p in [2u64, 3] {
        let ring = Ring::PrimeField(p);
        let h = theta(&FunctorExpr::Twist(1), 1, &[1, 2, 3], ring).map_err(|e| e.to_string())?;
        for m in 1..=3 {
            let want = graded(ring, &[(p as i64 - 1, m, &[])]);
            ensure(h[&m] == want, || format!("Θ(I^(1)) over F{p} at m = {m} is {}", h[&m]))?;
        }
    }
    Ok("Θ(S²∘S²) = Γ²∘Λ² at m ≤ 3; Θ(I^(1)) = I^(1)[1-p] over F2, F3".into())
}

fn iteration() -> Outcome {
    for f in ["S[2]", "G[2]", "T[2]"] {
        all_match(&[iterate_check(&fe(f), 1, 1, 1, Z).map_err(|e| e.to_string())?])?;
    }
    Ok("L(L(F;1);1) = L(F;2) for S², Γ², ⊗² at m = 1".into())
}

/// Entries of a fixed linear congruence, in [−5, 5].
fn congruential(rows: usize, cols: usize, seed: &mut u64) -> Matrix {
    let data: Vec<Vec<i64>> = (0..rows)
        .map(|_| {
            (0..cols)
                .map(|_| {
                    *seed = seed.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
                    ((*seed >> 33) % 11) as i64 - 5
                })
                .collect()
        })
        .collect();
    Matrix::from_i64_rows(Z, &data)
}

fn property_suites() -> Outcome {
    let mut seed = 0x5eed;
    // Smith normal form.
    for k in 0..40 {
        let a = congruential(1 + k % 5, 1 + (k / 5) % 5, &mut seed);
        let s = smith_normal_form(&a).map_err(|e| e.to_string())?;
        let d = s.u.mul(&a).mul(&s.v);
        for r in 0..d.rows() {
            for c in 0..d.cols() {
                let want = if r == c && r < s.factors.len() { s.factors[r].clone() } else { Int::from(0) };
                ensure(d.get(r, c) == want, || format!("U·A·V is not diagonal for {a:?}"))?;
            }
        }
        ensure(s.factors.windows(2).all(|w| w[1].is_multiple_of(&w[0])), || format!("divisibility chain fails: {:?}", s.factors))?;
    }
    // Simplicial identities and d² = 0 on F(K(n)).
    for ring in [Z, F2, F3] {
        for n in 1..=2 {
            for f in ["S[2]", "W[2]", "G[2]", "Schur[2,1]"] {
                let q_max = 2 * n + 1;
                let x = apply_functor(&fe(f), &k_n(n, q_max, ring), 1, q_max).map_err(|e| e.to_string())?;
                ensure(x.satisfies_identities(), || format!("{f}(K({n})) over {ring}: {:?}", x.identity_violation()))?;
                for normalized in [false, true] {
                    ensure(chains(&x, normalized).map_err(|e| e.to_string())?.is_complex(), || format!("d² ≠ 0 on chains of {f}(K({n}))"))?;
                }
            }
        }
    }
    for f in ["S[2]", "G[3]", "Schur[2,1]"] {
        for n in 1..=2 {
            for ring in [Z, F2, F3] {
                let c = theta_complex(&fe(f), n, ring).map_err(|e| e.to_string())?;
                for m in 1..=2 {
                    ensure(c.is_complex_at(m).map_err(|e| e.to_string())?, || format!("d² ≠ 0 on Θ^{n}{f} at m = {m} over {ring}"))?;
                }
            }
        }
    }
    // Functoriality of composites.
    for f in ["S[2] o W[2]", "G[2] o S[2]", "Dual(T[2]) * S[1]", "Param(Schur[2,1],2)", "Weyl[2,1]"] {
        for _ in 0..4 {
            let (a, b) = (congruential(3, 2, &mut seed), congruential(2, 3, &mut seed));
            let (e, ab) = (fe(f), a.mul(&b));
            let lhs = eval_map(&e, &ab).map_err(|e| e.to_string())?;
            let rhs = eval_map(&e, &a).unwrap().mul(&eval_map(&e, &b).unwrap());
            ensure(lhs == rhs, || format!("{f}(AB) ≠ {f}(A){f}(B)"))?;
        }
    }
    // Universal coefficients between Z and F_p runs.
    for (f, m, n) in [("G[2]", 2, 1), ("S[3]", 1, 3), ("Schur[2,1]", 2, 2), ("W[3]", 1, 2)] {
        let z = derived_functors(&DerivedRequest::new(fe(f), Z, m, n)).map_err(|e| e.to_string())?;
        for p in [2, 3] {
            let fp = derived_functors(&DerivedRequest::new(fe(f), Ring::PrimeField(p), m, n)).map_err(|e| e.to_string())?;
            ensure(z.base_change_fp(p) == fp, || format!("L_*{f}(k^{m};{n}): Z gives {z}, F{p} gives {fp}"))?;
        }
        let q = derived_functors(&DerivedRequest::new(fe(f), Q, m, n)).map_err(|e| e.to_string())?;
        ensure(z.rationalize() == q, || format!("L_*{f}(k^{m};{n}) over Q"))?;
    }
    // Resolution independence: the bar model of Λ^d against the minimal coresolution.
    for ring in [Z, F2, F3] {
        for d in 2..=3 {
            let bar = LambdaComplex::from_injective(&bar_complex(d, ring).unwrap().complex).map_err(|e| e.to_string())?.complex;
            let minimal = theta(&FunctorExpr::Wedge(d), 1, &[1, 2], ring).map_err(|e| e.to_string())?;
            for m in 1..=2 {
                ensure(bar.cohomology(m).unwrap() == minimal[&m], || format!("Θ(Λ^{d}) over {ring}: bar model and minimal coresolution differ"))?;
            }
        }
    }
    // Descent: ℋ(Λ^d, ψ) independent of the chosen lifts.
    let mut lifts = 0;
    for ring in [Z, F3] {
        for f in ["G[2]", "G[3]", "Schur[2,1]"] {
            let j = injective_coresolution(&fe(f), ring, 3).map_err(|e| e.to_string())?;
            let lam = LambdaComplex::from_injective(&j.complex).map_err(|e| e.to_string())?;
            for (route, c) in [(Route::Multiplication, &j.complex), (Route::Comultiplication, &lam.complex)] {
                for (&i, es) in &c.maps {
                    for (k, e) in es.iter().enumerate() {
                        let (s, t) = (c.term(i)[e.source], c.term(i + 1)[e.target]);
                        let ok = check_descent(route, &c.algebra, s, t, &e.psi, 101 + k as u64).map_err(|e| e.to_string())?;
                        ensure(ok, || format!("descent fails for {f} over {ring} in degree {i}"))?;
                        lifts += 1;
                    }
                }
            }
        }
    }
    Ok(format!("SNF, simplicial, d², functoriality, base change, resolution independence, descent ({lifts} lifts)"))
}

struct Criterion {
    id: u32,
    name: &'static str,
    budget: Duration,
    run: fn() -> Outcome,
}

fn main() {
    let secs = Duration::from_secs;
    let criteria = [
        Criterion { id: 1, name: "Ringel duals of S^λ and Λ^λ", budget: secs(30), run: catalog_of_duals },
        Criterion { id: 2, name: "ΘΓ² over Z and F2", budget: secs(5), run: theta_of_divided_square },
        Criterion { id: 3, name: "main theorem grid", budget: secs(600), run: main_theorem_grid },
        Criterion { id: 4, name: "L_*S³ over F3", budget: secs(300), run: symmetric_cube_over_f3 },
        Criterion { id: 5, name: "3-primary L_*S³(Z;3)", budget: secs(300), run: three_primary_symmetric_cube },
        Criterion { id: 6, name: "L_*S_(2,1)(Z²;2)", budget: secs(300), run: lie_cube },
        Criterion { id: 7, name: "décalage and Bott", budget: secs(600), run: decalage_suite },
        Criterion { id: 8, name: "Ext suite", budget: secs(600), run: ext_suite },
        Criterion { id: 9, name: "blocks and torsion of S_(2,1)", budget: secs(300), run: hook_blocks },
        Criterion { id: 10, name: "plethysm and Frobenius", budget: secs(600), run: plethysm_and_frobenius },
        Criterion { id: 11, name: "iteration", budget: secs(300), run: iteration },
        Criterion { id: 12, name: "property suites", budget: secs(300), run: property_suites },
    ];
    let only: Vec<u32> = std::env::args().skip(1).filter_map(|a| a.parse().ok()).collect();
    let mut failed = 0;
    for c in criteria.iter().filter(|c| only.is_empty() || only.contains(&c.id)) {
        let start = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(c.run)).unwrap_or_else(|e| {
            let msg = e.downcast_ref::<String>().cloned().or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()));
            Err(format!("panic: {}", msg.unwrap_or_default()))
        });
        let took = start.elapsed();
        let outcome = match outcome {
            Ok(_) if took > c.budget => Err(format!("took {:.1} s, budget {} s", took.as_secs_f64(), c.budget.as_secs())),
            o => o,
        };
        match outcome {
            Ok(detail) => println!("PASS {:>2} {} ({:.1} s): {detail}", c.id, c.name, took.as_secs_f64()),
            Err(why) => {
                failed += 1;
                println!("FAIL {:>2} {} ({:.1} s): {}", c.id, c.name, took.as_secs_f64(), why.trim_end());
            }
        }
    }
    if failed > 0 {
        println!("{failed} criteria failed");
        std::process::exit(1);
    }
}
