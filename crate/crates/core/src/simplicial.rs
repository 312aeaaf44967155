//! Simplicial free modules, the Dold–Kan functor K, chains, and Eilenberg–Zilber shuffles.

use crate::combinatorics::{shuffles, subsets};
use crate::error::{internal, Result};
use crate::functor::{eval_map, FunctorExpr};
use crate::linalg::{kernel_basis, solve, ChainComplexData, Matrix, Ring};

/// Levels 0..=q_max with face and degeneracy matrices.
///
/// `faces[q][i]` is d_i: X_q → X_{q−1} (q ≥ 1); `degens[q][i]` is s_i: X_q → X_{q+1} (q < q_max).
#[derive(Clone, Debug, PartialEq)]
pub struct SimplicialModule {
    pub ring: Ring,
    pub q_max: usize,
    pub ranks: Vec<usize>,
    pub faces: Vec<Vec<Matrix>>,
    pub degens: Vec<Vec<Matrix>>,
}

/// An order-preserving surjection [q] ↠ [p], stored as its jump positions J ⊂ {1..q}, |J| = p.
type Surjection = Vec<usize>;

fn surjections(q: usize) -> Vec<(usize, Surjection)> {
    (0..=q)
        .flat_map(|p| subsets(q, p).into_iter().map(move |s| (p, s.into_iter().map(|x| x + 1).collect())))
        .collect()
}

fn apply_surjection(jumps: &[usize], i: usize) -> usize {
    jumps.iter().filter(|&&j| j <= i).count()
}

enum Mono {
    Identity,
    FirstFace,
    Other,
}

/// Epi–mono factorization of η∘θ where θ: [q'] → [q] is given by its values.
fn factor(jumps: &[usize], p: usize, theta: &[usize]) -> (usize, Surjection, Mono) {
    let g: Vec<usize> = theta.iter().map(|&i| apply_surjection(jumps, i)).collect();
    let mut image = g.clone();
    image.dedup();
    let p2 = image.len() - 1;
    let new_jumps: Surjection = (1..g.len()).filter(|&i| g[i] != g[i - 1]).collect();
    let mono = if image.len() == p + 1 {
        Mono::Identity
    } else if image.len() == p && image[0] == 1 {
        Mono::FirstFace
    } else {
        Mono::Other
    };
    (p2, new_jumps, mono)
}

fn face_values(q: usize, i: usize) -> Vec<usize> {
    (0..q).map(|j| if j < i { j } else { j + 1 }).collect()
}

fn degen_values(q: usize, i: usize) -> Vec<usize> {
    (0..q + 2).map(|j| if j <= i { j } else { j - 1 }).collect()
}

struct DkLevel {
    summands: Vec<(usize, Surjection)>,
    offsets: Vec<usize>,
    rank: usize,
}

fn dk_level(c: &ChainComplexData, q: usize) -> DkLevel {
    let summands = surjections(q);
    let mut offsets = Vec::with_capacity(summands.len());
    let mut acc = 0;
    for (p, _) in &summands {
        offsets.push(acc);
        acc += c.rank(*p as i64);
    }
    DkLevel { summands, offsets, rank: acc }
}

fn dk_operator(c: &ChainComplexData, src: &DkLevel, tgt: &DkLevel, theta: &[usize]) -> Matrix {
    let mut trip = Vec::new();
    for (k, (p, jumps)) in src.summands.iter().enumerate() {
        let (p2, j2, mono) = factor(jumps, *p, theta);
        let block = match mono {
            Mono::Identity => Matrix::identity(c.ring, c.rank(*p as i64)),
            Mono::FirstFace => c.differential(*p as i64),
            Mono::Other => continue,
        };
        let t = tgt.summands.iter().position(|(pp, jj)| *pp == p2 && *jj == j2).expect("summand");
        for (col, entries) in block.columns().into_iter().enumerate() {
            for (row, x) in entries {
                trip.push((tgt.offsets[t] + row, src.offsets[k] + col, x));
            }
        }
    }
    Matrix::from_triplets(c.ring, tgt.rank, src.rank, trip)
}

/// K(C) truncated at `q_max`: level q is ⊕ over surjections [q] ↠ [p] of C_p.
pub fn dold_kan(c: &ChainComplexData, q_max: usize) -> SimplicialModule {
    let levels: Vec<DkLevel> = (0..=q_max).map(|q| dk_level(c, q)).collect();
    let faces = (0..=q_max)
        .map(|q| {
            if q == 0 {
                return Vec::new();
            }
            (0..=q).map(|i| dk_operator(c, &levels[q], &levels[q - 1], &face_values(q, i))).collect()
        })
        .collect();
    let degens = (0..=q_max)
        .map(|q| {
            if q == q_max {
                return Vec::new();
            }
            (0..=q).map(|i| dk_operator(c, &levels[q], &levels[q + 1], &degen_values(q, i))).collect()
        })
        .collect();
    SimplicialModule { ring: c.ring, q_max, ranks: levels.iter().map(|l| l.rank).collect(), faces, degens }
}

/// K(n) = K(k[−n]).
pub fn k_n(n: usize, q_max: usize, ring: Ring) -> SimplicialModule {
    let mut c = ChainComplexData::new(ring);
    c.set_rank(n as i64, 1);
    dold_kan(&c, q_max)
}

impl SimplicialModule {
    /// Constant simplicial module on k^r.
    pub fn constant(ring: Ring, r: usize, q_max: usize) -> SimplicialModule {
        let mut c = ChainComplexData::new(ring);
        c.set_rank(0, r);
        dold_kan(&c, q_max)
    }

    pub fn face(&self, q: usize, i: usize) -> &Matrix {
        &self.faces[q][i]
    }

    pub fn degeneracy(&self, q: usize, i: usize) -> &Matrix {
        &self.degens[q][i]
    }

    /// First violated simplicial identity, if any.
    pub fn identity_violation(&self) -> Option<String> {
        let id = |q: usize| Matrix::identity(self.ring, self.ranks[q]);
        for q in 2..=self.q_max {
            for j in 0..=q {
                for i in 0..j {
                    if self.faces[q - 1][i].mul(&self.faces[q][j]) != self.faces[q - 1][j - 1].mul(&self.faces[q][i]) {
                        return Some(format!("d_{i} d_{j} at level {q}"));
                    }
                }
            }
        }
        for q in 0..self.q_max.saturating_sub(1) {
            for j in 0..=q {
                for i in 0..=j {
                    if self.degens[q + 1][i].mul(&self.degens[q][j]) != self.degens[q + 1][j + 1].mul(&self.degens[q][i]) {
                        return Some(format!("s_{i} s_{j} at level {q}"));
                    }
                }
            }
        }
        for q in 0..self.q_max {
            for j in 0..=q {
                for i in 0..=q + 1 {
                    let lhs = self.faces[q + 1][i].mul(&self.degens[q][j]);
                    let rhs = if i < j {
                        self.degens[q - 1][j - 1].mul(&self.faces[q][i])
                    } else if i == j || i == j + 1 {
                        id(q)
                    } else {
                        self.degens[q - 1][j].mul(&self.faces[q][i - 1])
                    };
                    if lhs != rhs {
                        return Some(format!("d_{i} s_{j} at level {q}"));
                    }
                }
            }
        }
        None
    }

    pub fn satisfies_identities(&self) -> bool {
        self.identity_violation().is_none()
    }

    /// Alternating face sum d = Σ(−1)^i d_i : X_q → X_{q−1}.
    pub fn alternating_face_sum(&self, q: usize) -> Matrix {
        let mut d = Matrix::zeros(self.ring, self.ranks[q - 1], self.ranks[q]);
        for (i, f) in self.faces[q].iter().enumerate() {
            d = if i % 2 == 0 { d.add(f) } else { d.sub(f) };
        }
        d
    }
}

/// Basis of N_q = ∩_{i≥1} ker d_i as columns in X_q.
pub fn normalized_basis(x: &SimplicialModule, q: usize) -> Matrix {
    if q == 0 {
        return Matrix::identity(x.ring, x.ranks[0]);
    }
    let stacked: Vec<&Matrix> = x.faces[q][1..].iter().collect();
    kernel_basis(&Matrix::vstack(&stacked))
}

/// Unnormalized chains C X, or normalized chains N X with the differential induced by d_0.
pub fn chains(x: &SimplicialModule, normalized: bool) -> Result<ChainComplexData> {
    let mut c = ChainComplexData::new(x.ring);
    if !normalized {
        for q in 0..=x.q_max {
            c.set_rank(q as i64, x.ranks[q]);
            if q > 0 {
                c.set_differential(q as i64, x.alternating_face_sum(q));
            }
        }
        return Ok(c);
    }
    let bases: Vec<Matrix> = (0..=x.q_max).map(|q| normalized_basis(x, q)).collect();
    for q in 0..=x.q_max {
        c.set_rank(q as i64, bases[q].cols());
        if q > 0 && bases[q].cols() > 0 && bases[q - 1].cols() > 0 {
            let img = x.faces[q][0].mul(&bases[q]);
            let s = solve(&bases[q - 1], &img).map_err(|e| internal(format!("d_0 leaves the normalized chains: {e}")))?;
            c.set_differential(q as i64, s.x);
        }
    }
    Ok(c)
}

/// Level q = F(X_q ⊗ k^m), with structure maps F(θ ⊗ id).
pub fn apply_functor(f: &FunctorExpr, x: &SimplicialModule, m: usize, q_max: usize) -> Result<SimplicialModule> {
    let q_max = q_max.min(x.q_max);
    let idm = Matrix::identity(x.ring, m);
    let lift = |a: &Matrix| eval_map(f, &a.kron(&idm));
    let mut ranks = Vec::with_capacity(q_max + 1);
    for q in 0..=q_max {
        ranks.push(crate::functor::dimension(f, x.ranks[q] * m, x.ring)?);
    }
    let faces = (0..=q_max)
        .map(|q| if q == 0 { Ok(Vec::new()) } else { x.faces[q].iter().map(lift).collect() })
        .collect::<Result<Vec<_>>>()?;
    let degens = (0..=q_max)
        .map(|q| if q == q_max { Ok(Vec::new()) } else { x.degens[q].iter().map(lift).collect() })
        .collect::<Result<Vec<_>>>()?;
    Ok(SimplicialModule { ring: x.ring, q_max, ranks, faces, degens })
}

/// Diagonal of the external product X ⊠ Y: level q = X_q ⊗ Y_q.
pub fn diagonal(x: &SimplicialModule, y: &SimplicialModule) -> SimplicialModule {
    let q_max = x.q_max.min(y.q_max);
    let faces = (0..=q_max)
        .map(|q| if q == 0 { Vec::new() } else { (0..=q).map(|i| x.faces[q][i].kron(&y.faces[q][i])).collect() })
        .collect();
    let degens = (0..=q_max)
        .map(|q| if q == q_max { Vec::new() } else { (0..=q).map(|i| x.degens[q][i].kron(&y.degens[q][i])).collect() })
        .collect();
    SimplicialModule { ring: x.ring, q_max, ranks: (0..=q_max).map(|q| x.ranks[q] * y.ranks[q]).collect(), faces, degens }
}

/// K(n,m), the diagonal of K(n) ⊠ K(m).
pub fn diagonal_product(n: usize, m: usize, q_max: usize, ring: Ring) -> SimplicialModule {
    diagonal(&k_n(n, q_max, ring), &k_n(m, q_max, ring))
}

/// Tensor product of chain complexes concentrated in degrees ≥ 0, with the Koszul sign.
///
/// Degree n is ⊕_{p+q=n} A_p ⊗ B_q in increasing p; `offsets[n]` lists (p, start row).
pub struct TensorComplex {
    pub complex: ChainComplexData,
    pub offsets: Vec<Vec<(usize, usize)>>,
}

pub fn tensor_complex(a: &ChainComplexData, b: &ChainComplexData, top: usize) -> TensorComplex {
    let ring = a.ring;
    let mut offsets = Vec::with_capacity(top + 1);
    let mut ranks = Vec::with_capacity(top + 1);
    for n in 0..=top {
        let mut off = Vec::new();
        let mut acc = 0;
        for p in 0..=n {
            off.push((p, acc));
            acc += a.rank(p as i64) * b.rank((n - p) as i64);
        }
        offsets.push(off);
        ranks.push(acc);
    }
    let mut c = ChainComplexData::new(ring);
    for n in 0..=top {
        c.set_rank(n as i64, ranks[n]);
        if n == 0 {
            continue;
        }
        let mut trip = Vec::new();
        for &(p, start) in &offsets[n] {
            let q = n - p;
            let (ra, rb) = (a.rank(p as i64), b.rank(q as i64));
            if p > 0 {
                let blk = a.differential(p as i64).kron(&Matrix::identity(ring, rb));
                let t = offsets[n - 1][p - 1].1;
                for (col, ent) in blk.columns().into_iter().enumerate() {
                    for (row, x) in ent {
                        trip.push((t + row, start + col, x));
                    }
                }
            }
            if q > 0 {
                let mut blk = Matrix::identity(ring, ra).kron(&b.differential(q as i64));
                if p % 2 == 1 {
                    blk = blk.neg();
                }
                let t = offsets[n - 1][p].1;
                for (col, ent) in blk.columns().into_iter().enumerate() {
                    for (row, x) in ent {
                        trip.push((t + row, start + col, x));
                    }
                }
            }
        }
        c.set_differential(n as i64, Matrix::from_triplets(ring, ranks[n - 1], ranks[n], trip));
    }
    TensorComplex { complex: c, offsets }
}

fn apply_degeneracies(x: &SimplicialModule, from: usize, idx: &[usize]) -> Matrix {
    let mut m = Matrix::identity(x.ring, x.ranks[from]);
    for (k, &i) in idx.iter().enumerate() {
        m = x.degens[from + k][i].mul(&m);
    }
    m
}

/// Shuffle map ∇_n: (C X ⊗ C Y)_n → C(X ⊠ Y diagonal)_n for n ≤ top.
///
/// ∇(x ⊗ y) = Σ ε(μ,ν) s_{ν_q}⋯s_{ν_1} x ⊗ s_{μ_p}⋯s_{μ_1} y over (p,q)-shuffles (μ,ν).
pub fn shuffle_map(x: &SimplicialModule, y: &SimplicialModule, top: usize) -> Vec<Matrix> {
    let ring = x.ring;
    let top = top.min(x.q_max).min(y.q_max);
    let cx = chains(x, false).expect("unnormalized chains");
    let cy = chains(y, false).expect("unnormalized chains");
    let tc = tensor_complex(&cx, &cy, top);
    (0..=top)
        .map(|n| {
            let mut blocks = Vec::new();
            for &(p, _) in &tc.offsets[n] {
                let q = n - p;
                let mut total = Matrix::zeros(ring, x.ranks[n] * y.ranks[n], x.ranks[p] * y.ranks[q]);
                for sh in shuffles(p, q) {
                    let mu: Vec<usize> = sh.perm[..p].iter().map(|v| v - 1).collect();
                    let nu: Vec<usize> = sh.perm[p..].iter().map(|v| v - 1).collect();
                    let term = apply_degeneracies(x, p, &nu).kron(&apply_degeneracies(y, q, &mu));
                    total = if sh.sign > 0 { total.add(&term) } else { total.sub(&term) };
                }
                blocks.push(total);
            }
            let refs: Vec<&Matrix> = blocks.iter().collect();
            Matrix::hstack(&refs)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::combinatorics::binomial;
    use crate::linalg::{Homology, Int};

    fn z() -> Ring {
        Ring::Integers
    }

    #[test]
    fn dold_kan_ranks_and_identities() {
        for n in 0..=3 {
            let k = k_n(n, 5, z());
            for q in 0..=5 {
                assert_eq!(k.ranks[q] as u128, binomial(q, n));
            }
            assert!(k.satisfies_identities(), "{:?}", k.identity_violation());
        }
        let c = SimplicialModule::constant(z(), 1, 3);
        assert!(c.faces[2].iter().all(|f| *f == Matrix::identity(z(), 1)));
    }

    #[test]
    fn round_trip() {
        let mut c = ChainComplexData::new(z());
        c.set_rank(0, 1);
        c.set_rank(1, 1);
        c.set_differential(1, Matrix::from_i64_rows(z(), &[vec![2]]));
        let k = dold_kan(&c, 4);
        assert!(k.satisfies_identities());
        let n = chains(&k, true).unwrap();
        assert_eq!(n.rank(0), 1);
        assert_eq!(n.rank(1), 1);
        assert_eq!(n.rank(2), 0);
        assert_eq!(n.differential(1).get(0, 0).magnitude(), &2u32.into());
        let h = chains(&k, false).unwrap().homology_all();
        assert_eq!(h.get(0), Homology { free_rank: 0, torsion: vec![Int::from(2)] });
        assert!((1..4).all(|q| h.get(q).is_zero()));
    }

    #[test]
    fn k_n_homology() {
        for n in 0..=3 {
            let k = k_n(n, n + 2, z());
            let h = chains(&k, false).unwrap().homology_all();
            let mut cut = h.clone();
            cut.degrees.retain(|&q, _| q <= (n + 1) as i64);
            assert_eq!(cut.degrees.len(), 1);
            assert_eq!(cut.get(n as i64).free_rank, 1);
            let nn = chains(&k, true).unwrap();
            assert_eq!(nn.rank(n as i64), 1);
            assert_eq!(nn.ranks.values().sum::<usize>(), 1);
        }
    }

    #[test]
    fn functor_levels() {
        let k1 = k_n(1, 4, z());
        let s2 = apply_functor(&FunctorExpr::Sym(2), &k1, 1, 4).unwrap();
        for q in 0..=4 {
            assert_eq!(s2.ranks[q] as u128, binomial(q + 1, 2));
        }
        assert!(s2.satisfies_identities());
        let c = apply_functor(&FunctorExpr::Const, &k1, 2, 4).unwrap();
        let h = chains(&c, false).unwrap().homology_all();
        assert_eq!(h.get(0).free_rank, 1);
        assert_eq!(h.total_rank(), 1);
    }

    #[test]
    fn diagonal_products() {
        let k11 = diagonal_product(1, 1, 4, z());
        assert!(k11.satisfies_identities());
        assert_eq!(k11.ranks[3], 9);
        let h = chains(&k11, false).unwrap().homology_all();
        assert_eq!(h.get(2).free_rank, 1);
        assert_eq!(h.degrees.keys().filter(|&&q| q < 4).count(), 1);
        let k12 = diagonal_product(1, 2, 5, z());
        let h = chains(&k12, false).unwrap().homology_all();
        assert_eq!(h.get(3).free_rank, 1);
        assert_eq!(k_n(2, 4, z()), diagonal_product(0, 2, 4, z()));
    }

    #[test]
    fn shuffle_is_a_chain_map() {
        let x = k_n(1, 4, z());
        let y = k_n(1, 4, z());
        let cx = chains(&x, false).unwrap();
        let cy = chains(&y, false).unwrap();
        let tc = tensor_complex(&cx, &cy, 4);
        let nabla = shuffle_map(&x, &y, 4);
        let diag = chains(&diagonal(&x, &y), false).unwrap();
        for n in 1..=4 {
            let lhs = diag.differential(n as i64).mul(&nabla[n]);
            let rhs = nabla[n - 1].mul(&tc.complex.differential(n as i64));
            assert_eq!(lhs, rhs, "degree {n}");
        }
        // x ⊗ y in bidegree (1,1) goes to a generator of H_2(C K(1,1)) = Z.
        let h = diag.homology_all();
        assert_eq!(h.get(2).free_rank, 1);
        let mut with_gen = diag.clone();
        with_gen.set_rank(3, diag.rank(3) + 1);
        let d3 = diag.differential(3);
        with_gen.set_differential(3, Matrix::hstack(&[&d3, &nabla[2]]));
        assert!(with_gen.homology(2).is_zero());

        let c = SimplicialModule::constant(z(), 1, 2);
        assert_eq!(shuffle_map(&c, &c, 2)[0], Matrix::identity(z(), 1));
    }
}
