//! Parameterized standard objects X^d_{k^N}(V) = X^d(k^N ⊗ V), split into their weight pieces X^μ(V).

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use super::Class;
use crate::combinatorics::{multisets, subsets};
use crate::error::{invalid, Result};
use crate::functor::arith::{gkron, MAX_VARS};
use crate::functor::{eval_generic, GMat, Poly, Polys};
use crate::linalg::{Int, Matrix, Ring};
use crate::schur_algebra::{build_algebra, coefficient_matrices, SchurAlgebraData, SchurModule};

type AlgebraKey = (usize, usize, Ring);

/// S(N,d), shared across the module.
pub fn algebra(n: usize, d: usize, ring: Ring) -> Result<Arc<SchurAlgebraData>> {
    static CACHE: OnceLock<Mutex<HashMap<AlgebraKey, Arc<SchurAlgebraData>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(Default::default);
    if let Some(a) = cache.lock().unwrap().get(&(n, d, ring)) {
        return Ok(a.clone());
    }
    let a = build_algebra(n, d, ring)?;
    cache.lock().unwrap().insert((n, d, ring), a.clone());
    Ok(a)
}

fn generic(n: usize) -> GMat<Poly> {
    GMat { rows: n, cols: (0..n).map(|j| (0..n).map(|i| (i, Poly::var(i * n + j))).collect()).collect() }
}

fn labels(class: Class, d: usize, dim: usize) -> Vec<Vec<usize>> {
    match class {
        Class::Lambda => subsets(dim, d),
        _ => multisets(dim, d),
    }
}

/// X^d(k^N ⊗ k^m) with the parameter action; basis label j·m + v stands for e_j ⊗ e_v.
pub struct ParamEval {
    pub m: usize,
    /// Basis positions of each weight piece X^μ(k^m), indexed by weight.
    pub pieces: Vec<Vec<usize>>,
    local: Vec<usize>,
    coeffs: Vec<Matrix>,
    blocks: Mutex<HashMap<usize, Arc<Matrix>>>,
    algebra: Arc<SchurAlgebraData>,
}

impl ParamEval {
    /// Position of a global basis vector inside its piece.
    pub fn local(&self, b: usize) -> usize {
        self.local[b]
    }

    /// ρ(ξ_c) restricted to the pieces it connects: X^{colsum c}(k^m) → X^{rowsum c}(k^m).
    pub fn block(&self, c: usize) -> Arc<Matrix> {
        if let Some(b) = self.blocks.lock().unwrap().get(&c) {
            return b.clone();
        }
        let alg = &self.algebra;
        let b = Arc::new(self.coeffs[c].select_rows(&self.pieces[alg.target(c)]).select_cols(&self.pieces[alg.source(c)]));
        self.blocks.lock().unwrap().insert(c, b.clone());
        b
    }

    /// The map X^μ → X^ν given by ψ = Σ x_c ξ_c.
    pub fn map(&self, psi: &[(usize, Int)], source: usize, target: usize) -> Matrix {
        let ring = self.algebra.ring();
        let mut out = Matrix::zeros(ring, self.pieces[target].len(), self.pieces[source].len());
        for (c, x) in psi {
            debug_assert!(self.algebra.source(*c) == source && self.algebra.target(*c) == target);
            out = out.add(&self.block(*c).scale(x));
        }
        out
    }
}

type EvalKey = (Class, usize, usize, Ring, usize);

/// Cached parameter evaluation at k^m.
pub fn param_eval(class: Class, alg: &Arc<SchurAlgebraData>, m: usize) -> Result<Arc<ParamEval>> {
    static CACHE: OnceLock<Mutex<HashMap<EvalKey, Arc<ParamEval>>>> = OnceLock::new();
    let (n, d, ring) = (alg.n(), alg.d(), alg.ring());
    let key = (class, n, d, ring, m);
    let cache = CACHE.get_or_init(Default::default);
    if let Some(e) = cache.lock().unwrap().get(&key) {
        return Ok(e.clone());
    }
    if n * n > MAX_VARS {
        return Err(invalid(format!("parameter rank N = {n} exceeds the generic-matrix limit")));
    }
    let ar = Polys(ring);
    let t = gkron(&ar, &generic(n), &GMat::identity(&ar, m));
    let img = eval_generic(&ar, &class.functor(d), &t)?;
    let coeffs = coefficient_matrices(alg, &img)?;
    let (pieces, local) = split(alg, class, d, n, m, |x| x / m.max(1));
    let e = Arc::new(ParamEval { m, pieces, local, coeffs, blocks: Mutex::new(HashMap::new()), algebra: alg.clone() });
    cache.lock().unwrap().insert(key, e.clone());
    Ok(e)
}

fn split(
    alg: &SchurAlgebraData,
    class: Class,
    d: usize,
    n: usize,
    m: usize,
    slot: impl Fn(usize) -> usize,
) -> (Vec<Vec<usize>>, Vec<usize>) {
    let mut pieces = vec![Vec::new(); alg.weights().len()];
    let mut local = Vec::new();
    for l in labels(class, d, n * m) {
        let mut w = vec![0; n];
        for &x in &l {
            w[slot(x)] += 1;
        }
        let i = alg.weight_index(&w).expect("piece weight");
        local.push(pieces[i].len());
        pieces[i].push(local.len() - 1);
    }
    (pieces, local)
}

type PieceKey = (Class, usize, usize, Ring, usize);

/// X^μ(k^N) as an S(N,d)-module, acting on V = k^N; bases agree with [`ParamEval::pieces`] at m = N.
pub fn piece_module(class: Class, alg: &Arc<SchurAlgebraData>, w: usize) -> Result<Arc<SchurModule>> {
    static CACHE: OnceLock<Mutex<HashMap<PieceKey, Arc<SchurModule>>>> = OnceLock::new();
    let (n, d, ring) = (alg.n(), alg.d(), alg.ring());
    let key = (class, n, d, ring, w);
    let cache = CACHE.get_or_init(Default::default);
    if let Some(e) = cache.lock().unwrap().get(&key) {
        return Ok(e.clone());
    }
    let all = vmodule_actions(class, alg)?;
    let piece = &param_eval(class, alg, n)?.pieces[w];
    let actions = all.iter().map(|a| a.select_rows(piece).select_cols(piece)).collect();
    let module = Arc::new(SchurModule::from_actions(alg.clone(), piece.len(), actions)?);
    cache.lock().unwrap().insert(key, module.clone());
    Ok(module)
}

fn vmodule_actions(class: Class, alg: &Arc<SchurAlgebraData>) -> Result<Arc<Vec<Matrix>>> {
    static CACHE: OnceLock<Mutex<HashMap<(Class, usize, usize, Ring), Arc<Vec<Matrix>>>>> = OnceLock::new();
    let (n, d, ring) = (alg.n(), alg.d(), alg.ring());
    let cache = CACHE.get_or_init(Default::default);
    if let Some(e) = cache.lock().unwrap().get(&(class, n, d, ring)) {
        return Ok(e.clone());
    }
    let ar = Polys(ring);
    let t = gkron(&ar, &GMat::identity(&ar, n), &generic(n));
    let img = eval_generic(&ar, &class.functor(d), &t)?;
    let acts = Arc::new(coefficient_matrices(alg, &img)?);
    cache.lock().unwrap().insert((class, n, d, ring), acts.clone());
    Ok(acts)
}

/// Basis index of every label of X^d(k^N ⊗ k^m), for reading off polynomial coefficients.
pub fn label_index(class: Class, d: usize, n: usize, m: usize) -> HashMap<Vec<usize>, usize> {
    labels(class, d, n * m).into_iter().enumerate().map(|(i, l)| (l, i)).collect()
}
