//! Injective coresolutions: dual Γ-covers of F^♯ (or of C^♯ for a complex), and the bar model of Λ^d.

use std::collections::{BTreeMap, HashMap};
use std::sync::{Arc, Mutex, OnceLock};

use num_traits::{One, Zero};

use super::param::label_index;
use super::{algebra, param_eval, Class, Entry, ParamComplex};
use crate::combinatorics::{positive_compositions, subsets};
use crate::error::{invalid, Result};
use crate::functor::arith::{monomial_exponent, MAX_VARS};
use crate::functor::{eval_generic, FunctorExpr, GMat, Poly, Polys};
use crate::linalg::{ChainComplexData, Int, Matrix, Ring};
use crate::schur_algebra::{module_of, resolve, GeneratorChoice, ModuleComplex, Resolution, DEFAULT_RESOLUTION_BUDGET};

type Vector = Vec<(usize, Int)>;

/// F → J^0 → J^1 → … with J^i sums of S^μ_{k^N}.
#[derive(Clone, Debug)]
pub struct InjectiveComplex {
    pub functor: FunctorExpr,
    pub complex: ParamComplex,
    /// For each summand S^μ of J^0, a linear form g on F(k^N) of weight μ; the augmentation
    /// sends y ∈ F(V) to the polynomial ⟨g, F(X)y⟩ in the entries of X: V → k^N, read in S^μ(V).
    pub yoneda: Vec<Vector>,
    /// Terms above this degree were not computed; cohomology is only meaningful below it.
    pub truncation: i64,
}

impl InjectiveComplex {
    pub fn ring(&self) -> Ring {
        self.complex.algebra.ring()
    }

    /// F(k^m) → J^0(k^m).
    pub fn augmentation(&self, m: usize) -> Result<Matrix> {
        let alg = &self.complex.algebra;
        let (n, d, ring) = (alg.n(), alg.d(), alg.ring());
        if n * m > MAX_VARS {
            return Err(invalid(format!("augmentation at rank {m} needs {} variables", n * m)));
        }
        let x = GMat { rows: n, cols: (0..m).map(|v| (0..n).map(|w| (w, Poly::var(w * m + v))).collect()).collect() };
        let fx = eval_generic(&Polys(ring), &self.functor, &x)?;
        let eval = param_eval(Class::Injective, alg, m)?;
        let labels = label_index(Class::Injective, d, n, m);
        let mut offsets = vec![0];
        for &w in self.complex.term(0) {
            offsets.push(offsets.last().unwrap() + eval.pieces[w].len());
        }
        let mut trip = Vec::new();
        for (col, entries) in fx.cols.iter().enumerate() {
            for (s, g) in self.yoneda.iter().enumerate() {
                let g: HashMap<usize, &Int> = g.iter().map(|(i, x)| (*i, x)).collect();
                let mut acc: BTreeMap<usize, Int> = BTreeMap::new();
                for (row, p) in entries {
                    let Some(gi) = g.get(row) else { continue };
                    for (mono, c) in p.terms() {
                        let mut label = Vec::with_capacity(d);
                        for var in 0..n * m {
                            for _ in 0..monomial_exponent(*mono, var) {
                                label.push(var);
                            }
                        }
                        let b = labels[&label];
                        if !eval.pieces[self.complex.term(0)[s]].contains(&b) {
                            return Err(invalid("Yoneda form has the wrong weight"));
                        }
                        *acc.entry(offsets[s] + eval.local(b)).or_insert_with(Int::zero) += *gi * c;
                    }
                }
                trip.extend(acc.into_iter().map(|(r, v)| (r, col, v)));
            }
        }
        Ok(Matrix::from_triplets(ring, *offsets.last().unwrap(), fx.ncols(), trip))
    }

    /// The augmented complex F(k^m) → J(k^m), F in cohomological degree −1.
    pub fn augmented(&self, m: usize) -> Result<ChainComplexData> {
        let mut c = self.complex.evaluate(m)?;
        let eps = self.augmentation(m)?;
        c.set_rank(1, eps.cols());
        c.set_differential(1, eps);
        Ok(c)
    }

    /// d² = 0 and exactness of the augmented complex below the top degree, at V = k^m.
    pub fn check(&self, m: usize) -> Result<bool> {
        let c = self.augmented(m)?;
        if !c.is_complex() {
            return Ok(false);
        }
        let top = self.truncation;
        let h = c.homology_all().regrade(|q| -q);
        Ok(h.degrees.keys().all(|&q| q >= top))
    }
}

fn from_resolution(res: &Resolution, class: Class) -> ParamComplex {
    let mut c = ParamComplex::new(class, res.algebra.clone());
    for (k, gens) in res.generators.iter().enumerate() {
        c.terms.insert(res.lo + k as i64, gens.clone());
        if k > 0 {
            let es = res.boundary[k].iter().map(|(h, g, psi)| Entry { source: *g, target: *h, psi: psi.clone() }).collect();
            c.maps.insert(res.lo + k as i64 - 1, es);
        }
    }
    c
}

type CoresolutionKey = (FunctorExpr, Ring, i64);

/// Coresolution of F up to degree `length`, by dualizing a Γ-cover resolution of F^♯.
pub fn injective_coresolution(f: &FunctorExpr, ring: Ring, length: i64) -> Result<Arc<InjectiveComplex>> {
    static CACHE: OnceLock<Mutex<HashMap<CoresolutionKey, Arc<InjectiveComplex>>>> = OnceLock::new();
    let key = (f.clone(), ring, length);
    let cache = CACHE.get_or_init(Default::default);
    if let Some(j) = cache.lock().unwrap().get(&key) {
        return Ok(j.clone());
    }
    if length < 0 {
        return Err(invalid("coresolution length must be nonnegative"));
    }
    f.check_ring(ring)?;
    let d = f.degree(ring)?;
    let alg = algebra(d.max(1), d, ring)?;
    let module = module_of(&alg, f)?;
    let res = resolve(&ModuleComplex::single(module.dual()), length, GeneratorChoice::Minimal, DEFAULT_RESOLUTION_BUDGET)?;
    let mut yoneda = Vec::new();
    let mut offset = 0;
    for &w in &res.generators[0] {
        let p = res.projective(w);
        yoneda.push(res.comparison[0].col(offset + p.generator));
        offset += p.module.dim();
    }
    let j = Arc::new(InjectiveComplex { functor: f.clone(), complex: from_resolution(&res, Class::Injective), yoneda, truncation: length });
    cache.lock().unwrap().insert(key, j.clone());
    Ok(j)
}

/// A complex of injectives quasi-isomorphic to a bounded Γ-class complex C, up to degree `length`:
/// the dual of a Γ-cover resolution of C^♯.
pub fn coresolve(c: &ParamComplex, length: i64) -> Result<ParamComplex> {
    c.require(Class::Gamma)?;
    let Some((lo, hi)) = c.support() else { return Ok(ParamComplex::new(Class::Injective, c.algebra.clone())) };
    let dual = c.dual();
    let n = c.algebra.n();
    let terms = (lo..=hi).map(|k| dual.module_term(-k)).collect::<Result<Vec<_>>>()?;
    let down = (lo..hi).map(|k| dual.differential_at(-k - 1, n)).collect::<Result<Vec<_>>>()?;
    let cx = ModuleComplex { lo, terms, down };
    let res = resolve(&cx, length.max(hi), GeneratorChoice::Minimal, DEFAULT_RESOLUTION_BUDGET)?;
    Ok(from_resolution(&res, Class::Injective))
}

/// The bar model Λ^d → ⊗^d → ⊕ S^{α} → … → S^d: a composition α with q parts sits in degree
/// d − q, and merging parts i, i+1 (0-based) carries the sign (−1)^i.
pub fn bar_complex(d: usize, ring: Ring) -> Result<InjectiveComplex> {
    if d == 0 {
        return Err(invalid("the bar model needs d ≥ 1"));
    }
    let alg = algebra(d, d, ring)?;
    let by_parts: Vec<Vec<Vec<usize>>> =
        (0..=d).map(|q| positive_compositions(d).into_iter().filter(|a| a.len() == q).collect()).collect();
    let weight = |a: &[usize]| {
        let mut w = a.to_vec();
        w.resize(d, 0);
        alg.weight_index(&w).expect("composition weight")
    };
    let mut c = ParamComplex::new(Class::Injective, alg.clone());
    for q in 1..=d {
        c.terms.insert((d - q) as i64, by_parts[q].iter().map(|a| weight(a)).collect());
    }
    for q in 2..=d {
        let pos: HashMap<&Vec<usize>, usize> = by_parts[q - 1].iter().enumerate().map(|(i, a)| (a, i)).collect();
        let mut es = Vec::new();
        for (s, a) in by_parts[q].iter().enumerate() {
            for i in 0..q - 1 {
                let mut merged = a[..i].to_vec();
                merged.push(a[i] + a[i + 1]);
                merged.extend_from_slice(&a[i + 2..]);
                let mut cm = vec![0; d * d];
                for (j, &x) in a.iter().enumerate() {
                    let row = if j <= i { j } else { j - 1 };
                    cm[row * d + j] = x;
                }
                let sign = if i % 2 == 0 { Int::one() } else { ring.reduce(-Int::one()) };
                let psi = vec![(alg.index_of(&cm).expect("merge matrix"), sign)];
                es.push(Entry { source: s, target: pos[&merged], psi });
            }
        }
        c.maps.insert((d - q) as i64, es);
    }
    let top: Vec<usize> = (0..d).collect();
    let g = subsets(d, d).iter().position(|s| *s == top).expect("top exterior power");
    Ok(InjectiveComplex { functor: FunctorExpr::Wedge(d), complex: c, yoneda: vec![vec![(g, Int::one())]], truncation: d as i64 })
}
