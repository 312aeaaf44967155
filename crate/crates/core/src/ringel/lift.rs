//! ℋ(Λ^d, −) on morphisms through the tensor covers, using ⊗^d_W ≅ W^{⊗d} ⊗ ⊗^d.
//!
//! A natural map ⊗^d_W → ⊗^d_{W'} is Σ_σ A_σ ⊗ σ with A_σ ∈ hom(W^{⊗d}, W'^{⊗d}); it acts on
//! w_b ⊗ [π] by Σ_σ A_σ w_b ⊗ [σπ]. Place permutations act by Q_σ(w_b) = w_{b∘σ}, so that
//! Q_σ Q_π = Q_{πσ}. Everything is restricted to the multilinear words of the two weights.

use std::collections::{BTreeMap, HashMap};
use std::sync::Arc;

use num_integer::Integer;
use num_traits::{One, Zero};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use super::{Class, Entry, ParamComplex};
use crate::combinatorics::{perm_sign, permutations, words};
use crate::error::{internal, invalid, Result};
use crate::linalg::{kernel_basis, solve, Int, Matrix, Ring};
use crate::schur_algebra::SchurAlgebraData;

type Vector = Vec<(usize, Int)>;

/// Which cover ℋ(Λ^d, −) is computed through.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Route {
    /// S-class maps, lifted through the multiplications ⊗^d → S^μ; the image is Λ-class.
    Multiplication,
    /// Λ-class maps, lifted along the comultiplications Λ^μ → ⊗^d; the image is Γ-class.
    Comultiplication,
}

impl Route {
    pub fn source_class(self) -> Class {
        match self {
            Route::Multiplication => Class::Injective,
            Route::Comultiplication => Class::Lambda,
        }
    }

    pub fn target_class(self) -> Class {
        match self {
            Route::Multiplication => Class::Lambda,
            Route::Comultiplication => Class::Gamma,
        }
    }
}

/// A sign-twisted lift Σ_σ ε(σ)A_σ ⊗ σ of one component X^μ → X^ν.
#[derive(Clone, Debug)]
pub struct Lift {
    pub route: Route,
    pub source: usize,
    pub target: usize,
    pub perms: Vec<Vec<usize>>,
    /// ε(σ)A_σ on multilinear words, scaled by `denominator`.
    pub twisted: Vec<Matrix>,
    pub denominator: Int,
}

struct Setting {
    ring: Ring,
    perms: Vec<Vec<usize>>,
    index: HashMap<Vec<usize>, usize>,
    signs: Vec<i64>,
    source_words: Vec<Vec<usize>>,
    target_words: Vec<Vec<usize>>,
    /// Q_σ on source and target words.
    qs: Vec<Matrix>,
    qt: Vec<Matrix>,
}

fn content_words(alg: &SchurAlgebraData, w: usize) -> Vec<Vec<usize>> {
    let mu = &alg.weights()[w];
    words(alg.n(), alg.d())
        .into_iter()
        .filter(|b| (0..alg.n()).all(|j| b.iter().filter(|&&x| x == j).count() == mu[j]))
        .collect()
}

fn place_matrix(ring: Ring, ws: &[Vec<usize>], sigma: &[usize]) -> Matrix {
    let pos: HashMap<&Vec<usize>, usize> = ws.iter().enumerate().map(|(i, w)| (w, i)).collect();
    let cols = ws
        .iter()
        .map(|b| {
            let moved: Vec<usize> = sigma.iter().map(|&k| b[k]).collect();
            vec![(pos[&moved], Int::one())]
        })
        .collect();
    Matrix::from_columns(ring, ws.len(), cols)
}

impl Setting {
    fn new(alg: &SchurAlgebraData, source: usize, target: usize) -> Setting {
        let ring = alg.ring();
        let perms = permutations(alg.d());
        let index = perms.iter().cloned().enumerate().map(|(i, p)| (p, i)).collect();
        let signs = perms.iter().map(|p| perm_sign(p)).collect();
        let source_words = content_words(alg, source);
        let target_words = content_words(alg, target);
        let qs = perms.iter().map(|p| place_matrix(ring, &source_words, p)).collect();
        let qt = perms.iter().map(|p| place_matrix(ring, &target_words, p)).collect();
        Setting { ring, perms, index, signs, source_words, target_words, qs, qt }
    }

    /// Index of a∘b.
    fn compose(&self, a: usize, b: usize) -> usize {
        let (pa, pb) = (&self.perms[a], &self.perms[b]);
        self.index[&pb.iter().map(|&k| pa[k]).collect::<Vec<_>>()]
    }

    fn inverse(&self, a: usize) -> usize {
        let pa = &self.perms[a];
        let mut inv = vec![0; pa.len()];
        for (k, &x) in pa.iter().enumerate() {
            inv[x] = k;
        }
        self.index[&inv]
    }

    fn sign(&self, a: usize) -> Int {
        Int::from(self.signs[a])
    }

    /// ρ_⊗(ψ) on multilinear words: entry (I, J) is the coefficient of ξ_{content(I,J)}.
    fn multilinear(&self, alg: &SchurAlgebraData, psi: &[(usize, Int)]) -> Matrix {
        let n = alg.n();
        let coeff: HashMap<usize, &Int> = psi.iter().map(|(c, x)| (*c, x)).collect();
        let mut trip = Vec::new();
        for (j, jw) in self.source_words.iter().enumerate() {
            for (i, iw) in self.target_words.iter().enumerate() {
                let mut c = vec![0; n * n];
                for k in 0..iw.len() {
                    c[iw[k] * n + jw[k]] += 1;
                }
                if let Some(x) = alg.index_of(&c).and_then(|c| coeff.get(&c)) {
                    trip.push((i, j, (*x).clone()));
                }
            }
        }
        Matrix::from_triplets(self.ring, self.target_words.len(), self.source_words.len(), trip)
    }

    /// Reads ψ back from a multilinear matrix, failing unless the matrix is ρ_⊗(ψ).
    fn read(&self, alg: &SchurAlgebraData, f: &Matrix, source: usize, target: usize) -> Result<Vector> {
        let n = alg.n();
        let spos: HashMap<&Vec<usize>, usize> = self.source_words.iter().enumerate().map(|(i, w)| (w, i)).collect();
        let tpos: HashMap<&Vec<usize>, usize> = self.target_words.iter().enumerate().map(|(i, w)| (w, i)).collect();
        let mut psi = Vec::new();
        for &c in alg.between(source, target) {
            let cm = alg.element(c);
            let (mut iw, mut jw) = (Vec::new(), Vec::new());
            for a in 0..n {
                for b in 0..n {
                    for _ in 0..cm[a * n + b] {
                        iw.push(a);
                        jw.push(b);
                    }
                }
            }
            let x = f.get(tpos[&iw], spos[&jw]);
            if !x.is_zero() {
                psi.push((c, x));
            }
        }
        if &self.multilinear(alg, &psi) != f {
            return Err(internal("descended map is not an element of the Schur algebra"));
        }
        Ok(psi)
    }
}

fn perturb(ring: Ring, x: &Matrix, system: &Matrix, seed: u64) -> Matrix {
    let kern = kernel_basis(system);
    if kern.cols() == 0 {
        return x.clone();
    }
    let mut rng = StdRng::seed_from_u64(seed);
    let rows: Vec<Vec<i64>> = (0..kern.cols()).map(|_| (0..x.cols()).map(|_| rng.gen_range(-2..=2)).collect()).collect();
    x.add(&kern.mul(&Matrix::from_i64_rows(ring, &rows)))
}

fn blocks(x: &Matrix, count: usize, size: usize) -> Vec<Matrix> {
    (0..count).map(|s| x.select_rows(&(s * size..(s + 1) * size).collect::<Vec<_>>())).collect()
}

fn solved(sol: std::result::Result<crate::linalg::Solved, crate::linalg::NoSolution>) -> Result<(Matrix, Int)> {
    let s = sol.map_err(|e| internal(format!("no lift through the tensor cover: {e}")))?;
    Ok((s.x, s.denominator))
}

/// Solves for (A_σ) with Σ_σ Q_σ A_σ = F.
fn lift_multiplication(st: &Setting, f: &Matrix, seed: Option<u64>) -> Result<(Vec<Matrix>, Int)> {
    let refs: Vec<&Matrix> = st.qt.iter().collect();
    let k = Matrix::hstack(&refs);
    let (mut x, den) = solved(solve(&k, f))?;
    if let Some(s) = seed {
        x = perturb(st.ring, &x, &k, s);
    }
    Ok((blocks(&x, st.perms.len(), st.target_words.len()), den))
}

/// Solves for (A_σ) with Σ_τ ε(τ) A_{πτ} Q_τ = ε(π) Q_{π⁻¹} F for every π.
///
/// The equations only mix equal rows of the A_σ, so the transposed system is solved once
/// with one right-hand side per target word.
fn lift_comultiplication(st: &Setting, f: &Matrix, seed: Option<u64>) -> Result<(Vec<Matrix>, Int)> {
    let g = st.perms.len();
    let s = st.source_words.len();
    let mut trip = Vec::new();
    let mut rhs = Vec::new();
    for pi in 0..g {
        let pinv = st.inverse(pi);
        for sigma in 0..g {
            let tau = st.compose(pinv, sigma);
            let blk = st.qs[tau].transpose();
            let e = st.sign(tau);
            for (c, col) in blk.columns().into_iter().enumerate() {
                for (r, v) in col {
                    trip.push((pi * s + r, sigma * s + c, &e * v));
                }
            }
        }
        rhs.push(st.qt[pinv].mul(f).scale(&st.sign(pi)).transpose());
    }
    let k = Matrix::from_triplets(st.ring, g * s, g * s, trip);
    let refs: Vec<&Matrix> = rhs.iter().collect();
    let (mut y, den) = solved(solve(&k, &Matrix::vstack(&refs)))?;
    if let Some(sd) = seed {
        y = perturb(st.ring, &y, &k, sd);
    }
    Ok((blocks(&y, g, s).into_iter().map(|b| b.transpose()).collect(), den))
}

fn divide(m: &Matrix, den: &Int) -> Result<Matrix> {
    if den.is_one() {
        return Ok(m.clone());
    }
    let cols = m
        .columns()
        .into_iter()
        .map(|col| {
            col.into_iter()
                .map(|(r, x)| {
                    let (q, rem) = x.div_rem(den);
                    if rem.is_zero() {
                        Ok((r, q))
                    } else {
                        Err(internal("descended map has a fractional entry"))
                    }
                })
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(Matrix::from_columns(m.ring(), m.rows(), cols))
}

/// The Λ-class image computed from the preimage of x_a twisted by τ:
/// ε(τ) Σ_σ ε(στ⁻¹) Q_{στ⁻¹} Ã_σ Q_τ.
fn descend(st: &Setting, twisted: &[Matrix], tau: usize) -> Matrix {
    let tinv = st.inverse(tau);
    let mut out = Matrix::zeros(st.ring, st.target_words.len(), st.source_words.len());
    for (sigma, a) in twisted.iter().enumerate() {
        let st_inv = st.compose(sigma, tinv);
        let term = st.qt[st_inv].mul(a).mul(&st.qs[tau]).scale(&(st.sign(st_inv) * st.sign(tau)));
        out = out.add(&term);
    }
    out
}

/// The Γ-class image: the [e]-coefficient Σ_τ Ã_τ Q_τ, after checking every [π]-coefficient
/// is Q_{π⁻¹} times it (the image lies in Γ^d ⊂ ⊗^d).
fn restrict(st: &Setting, twisted: &[Matrix]) -> Result<Matrix> {
    let coefficient = |pi: usize| {
        let mut out = Matrix::zeros(st.ring, st.target_words.len(), st.source_words.len());
        for tau in 0..st.perms.len() {
            out = out.add(&twisted[st.compose(pi, tau)].mul(&st.qs[tau]));
        }
        out
    };
    let f = coefficient(st.index[&(0..st.perms[0].len()).collect::<Vec<_>>()]);
    for pi in 0..st.perms.len() {
        if coefficient(pi) != st.qt[st.inverse(pi)].mul(&f) {
            return Err(internal("twisted lift does not restrict to the divided powers"));
        }
    }
    Ok(f)
}

fn run(route: Route, st: &Setting, f: &Matrix, seed: Option<u64>) -> Result<(Vec<Matrix>, Int)> {
    let (a, den) = match route {
        Route::Multiplication => lift_multiplication(st, f, seed)?,
        Route::Comultiplication => lift_comultiplication(st, f, seed)?,
    };
    let twisted = a.iter().enumerate().map(|(s, m)| m.scale(&st.sign(s))).collect();
    Ok((twisted, den))
}

fn image(route: Route, st: &Setting, twisted: &[Matrix], den: &Int, tau: usize) -> Result<Matrix> {
    let raw = match route {
        Route::Multiplication => descend(st, twisted, tau),
        Route::Comultiplication => restrict(st, twisted)?,
    };
    divide(&raw, den)
}

fn check_weights(alg: &SchurAlgebraData, psi: &[(usize, Int)], source: usize, target: usize) -> Result<()> {
    if psi.iter().all(|(c, _)| alg.source(*c) == source && alg.target(*c) == target) {
        Ok(())
    } else {
        Err(invalid("component does not map the given source weight to the given target weight"))
    }
}

/// ℋ(Λ^d, ψ) for a component ψ: X^{w(source)} → X^{w(target)}: the image ψ' and the twisted lift.
pub fn internal_hom_lambda(
    route: Route,
    alg: &Arc<SchurAlgebraData>,
    source: usize,
    target: usize,
    psi: &[(usize, Int)],
) -> Result<(Lift, Vector)> {
    check_weights(alg, psi, source, target)?;
    let st = Setting::new(alg, source, target);
    hom_with(route, alg, &st, source, target, psi)
}

fn hom_with(
    route: Route,
    alg: &SchurAlgebraData,
    st: &Setting,
    source: usize,
    target: usize,
    psi: &[(usize, Int)],
) -> Result<(Lift, Vector)> {
    let f = st.multilinear(alg, psi);
    let (twisted, den) = run(route, st, &f, None)?;
    let out = st.read(alg, &image(route, st, &twisted, &den, 0)?, source, target)?;
    let lift = Lift { route, source, target, perms: st.perms.clone(), twisted, denominator: den };
    Ok((lift, out))
}

/// Recomputes ℋ(Λ^d, ψ) from two perturbed lifts and, on the multiplication route, two random
/// preimage twists; true when all of them agree.
pub fn check_descent(
    route: Route,
    alg: &Arc<SchurAlgebraData>,
    source: usize,
    target: usize,
    psi: &[(usize, Int)],
    seed: u64,
) -> Result<bool> {
    check_weights(alg, psi, source, target)?;
    let st = Setting::new(alg, source, target);
    let f = st.multilinear(alg, psi);
    let mut rng = StdRng::seed_from_u64(seed);
    let mut images = Vec::new();
    for k in 0..2u64 {
        let (twisted, den) = run(route, &st, &f, Some(seed.wrapping_mul(31).wrapping_add(k)))?;
        let tau = rng.gen_range(0..st.perms.len());
        images.push(image(route, &st, &twisted, &den, tau)?);
        images.push(image(route, &st, &twisted, &den, 0)?);
    }
    Ok(images.windows(2).all(|w| w[0] == w[1]))
}

/// ℋ(Λ^d, C) for a complex of S-class or Λ-class terms, with the lifts of every component.
///
/// The differential in degree i carries the sign (−1)^i of the Hom complex out of Λ^d.
#[derive(Clone, Debug)]
pub struct LambdaComplex {
    pub complex: ParamComplex,
    pub lifts: BTreeMap<i64, Vec<Lift>>,
}

impl LambdaComplex {
    /// ℋ(Λ^d, J) for a complex of injectives.
    pub fn from_injective(j: &ParamComplex) -> Result<LambdaComplex> {
        apply(j, Route::Multiplication)
    }

    /// ℋ(Λ^d, C) for a complex of Λ-class terms; Γ-class.
    pub fn from_lambda(c: &ParamComplex) -> Result<LambdaComplex> {
        apply(c, Route::Comultiplication)
    }
}

fn apply(c: &ParamComplex, route: Route) -> Result<LambdaComplex> {
    c.require(route.source_class())?;
    let alg = &c.algebra;
    let mut settings: HashMap<(usize, usize), Setting> = HashMap::new();
    let mut out = c.relabel(route.target_class());
    let mut lifts = BTreeMap::new();
    for (&i, entries) in &c.maps {
        let sign = if i.rem_euclid(2) == 0 { Int::one() } else { -Int::one() };
        let mut es = Vec::new();
        let mut ls = Vec::new();
        for e in entries {
            let (ws, wt) = (c.term(i)[e.source], c.term(i + 1)[e.target]);
            let st = settings.entry((ws, wt)).or_insert_with(|| Setting::new(alg, ws, wt));
            let (lift, psi) = hom_with(route, alg, st, ws, wt, &e.psi)?;
            let psi = psi.into_iter().map(|(k, x)| (k, alg.ring().reduce(x * &sign))).filter(|(_, x)| !x.is_zero()).collect();
            es.push(Entry { source: e.source, target: e.target, psi });
            ls.push(lift);
        }
        out.maps.insert(i, es);
        lifts.insert(i, ls);
    }
    Ok(LambdaComplex { complex: out, lifts })
}
