//! The Schur algebra S(N,d) and degree-d functors as S(N,d)-modules.
//!
//! Basis elements ξ_c are indexed by N×N matrices c of nonnegative integers with total `d`
//! (row-major). On a functor value, ξ_c acts as the coefficient of the monomial t^c in
//! F(T) for the generic matrix T = (t_ij). It sends the weight space of weight colsum(c)
//! to the weight space of weight rowsum(c).

mod resolution;

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::{Arc, Mutex};

use num_traits::Zero;

use crate::combinatorics::{compositions, p_core, words, Partition};
use crate::error::{internal, invalid, Result};
use crate::functor::arith::{monomial_exponent, Monomial, MAX_VARS};
use crate::functor::{eval_generic, FunctorExpr, GMat, Poly, Polys};
use crate::linalg::{kernel_basis, Int, Matrix, Ring};

pub use resolution::{ext_groups, ext_groups_with, resolve, GeneratorChoice, ModuleComplex, Projective, Resolution, DEFAULT_RESOLUTION_BUDGET};

/// S(N,d) over a ring: basis, weights and lazily computed structure constants.
pub struct SchurAlgebraData {
    ring: Ring,
    n: usize,
    d: usize,
    basis: Vec<Vec<usize>>,
    index: HashMap<Vec<usize>, usize>,
    weights: Vec<Vec<usize>>,
    weight_index: HashMap<Vec<usize>, usize>,
    source: Vec<usize>,
    target: Vec<usize>,
    by_pair: HashMap<(usize, usize), Vec<usize>>,
    by_source: Vec<Vec<usize>>,
    transpose: Vec<usize>,
    products: Mutex<HashMap<(usize, usize), Vec<(usize, Int)>>>,
}

impl fmt::Debug for SchurAlgebraData {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "S({},{}) over {}", self.n, self.d, self.ring)
    }
}

/// Builds S(N,d); requires N ≥ d so that evaluation at k^N is faithful.
pub fn build_algebra(n: usize, d: usize, ring: Ring) -> Result<Arc<SchurAlgebraData>> {
    if n < d {
        return Err(invalid(format!("Schur algebra S({n},{d}) needs N >= d")));
    }
    let basis = compositions(d, n * n);
    let index: HashMap<Vec<usize>, usize> = basis.iter().cloned().enumerate().map(|(i, c)| (c, i)).collect();
    let weights = compositions(d, n);
    let weight_index: HashMap<Vec<usize>, usize> = weights.iter().cloned().enumerate().map(|(i, w)| (w, i)).collect();
    let colsum = |c: &[usize]| -> Vec<usize> { (0..n).map(|j| (0..n).map(|i| c[i * n + j]).sum()).collect() };
    let rowsum = |c: &[usize]| -> Vec<usize> { (0..n).map(|i| c[i * n..(i + 1) * n].iter().sum()).collect() };
    let source: Vec<usize> = basis.iter().map(|c| weight_index[&colsum(c)]).collect();
    let target: Vec<usize> = basis.iter().map(|c| weight_index[&rowsum(c)]).collect();
    let mut by_pair: HashMap<(usize, usize), Vec<usize>> = HashMap::new();
    let mut by_source = vec![Vec::new(); weights.len()];
    for i in 0..basis.len() {
        by_pair.entry((source[i], target[i])).or_default().push(i);
        by_source[source[i]].push(i);
    }
    let transpose = basis
        .iter()
        .map(|c| {
            let t: Vec<usize> = (0..n * n).map(|k| c[(k % n) * n + k / n]).collect();
            index[&t]
        })
        .collect();
    Ok(Arc::new(SchurAlgebraData {
        ring,
        n,
        d,
        basis,
        index,
        weights,
        weight_index,
        source,
        target,
        by_pair,
        by_source,
        transpose,
        products: Mutex::new(HashMap::new()),
    }))
}

impl SchurAlgebraData {
    pub fn ring(&self) -> Ring {
        self.ring
    }
    pub fn n(&self) -> usize {
        self.n
    }
    pub fn d(&self) -> usize {
        self.d
    }
    pub fn dim(&self) -> usize {
        self.basis.len()
    }
    /// The matrix c of basis element `i`, row-major.
    pub fn element(&self, i: usize) -> &[usize] {
        &self.basis[i]
    }
    pub fn index_of(&self, c: &[usize]) -> Option<usize> {
        self.index.get(c).copied()
    }
    /// Weak compositions of d into N parts, decreasing lexicographic.
    pub fn weights(&self) -> &[Vec<usize>] {
        &self.weights
    }
    pub fn weight_index(&self, w: &[usize]) -> Option<usize> {
        self.weight_index.get(w).copied()
    }
    /// Weight index of colsum(c).
    pub fn source(&self, i: usize) -> usize {
        self.source[i]
    }
    /// Weight index of rowsum(c).
    pub fn target(&self, i: usize) -> usize {
        self.target[i]
    }
    /// Basis elements of 1_target · S · 1_source.
    pub fn between(&self, source: usize, target: usize) -> &[usize] {
        self.by_pair.get(&(source, target)).map_or(&[], |v| v.as_slice())
    }
    /// Basis elements of S · 1_source.
    pub fn from_weight(&self, source: usize) -> &[usize] {
        &self.by_source[source]
    }
    /// Index of ξ_{cᵀ}.
    pub fn transpose(&self, i: usize) -> usize {
        self.transpose[i]
    }
    /// The weight idempotent 1_w = ξ_{diag(w)}.
    pub fn idempotent(&self, w: usize) -> usize {
        let n = self.n;
        let mut c = vec![0; n * n];
        for (j, &x) in self.weights[w].iter().enumerate() {
            c[j * n + j] = x;
        }
        self.index[&c]
    }

    /// Basis index for a monomial in the variables t_ij (variable i·N + j).
    pub fn monomial_index(&self, m: Monomial) -> Option<usize> {
        let c: Vec<usize> = (0..self.n * self.n).map(|k| monomial_exponent(m, k) as usize).collect();
        if (self.n * self.n..MAX_VARS).any(|k| monomial_exponent(m, k) != 0) {
            return None;
        }
        self.index_of(&c)
    }

    /// Divided powers E_{i,j}^{(a)} 1_μ with |i − j| = 1: together with the idempotents they generate S(N,d).
    pub fn generators(&self) -> Vec<usize> {
        let n = self.n;
        let mut out = Vec::new();
        for (w, mu) in self.weights.iter().enumerate() {
            out.push(self.idempotent(w));
            for j in 0..n {
                for i in [j.wrapping_sub(1), j + 1] {
                    if i >= n {
                        continue;
                    }
                    for a in 1..=mu[j] {
                        let mut c = vec![0; n * n];
                        for (k, &x) in mu.iter().enumerate() {
                            c[k * n + k] = x;
                        }
                        c[j * n + j] -= a;
                        c[i * n + j] += a;
                        out.push(self.index[&c]);
                    }
                }
            }
        }
        out
    }

    /// Structure constants of ξ_a·ξ_b, read off the faithful action on (k^N)^{⊗d}.
    pub fn multiply(&self, a: usize, b: usize) -> Vec<(usize, Int)> {
        if let Some(v) = self.products.lock().unwrap().get(&(a, b)) {
            return v.clone();
        }
        let mut out = Vec::new();
        if self.source[a] == self.target[b] {
            let (n, d) = (self.n, self.d);
            let content = |x: &[usize], y: &[usize]| -> Vec<usize> {
                let mut c = vec![0; n * n];
                for k in 0..d {
                    c[x[k] * n + y[k]] += 1;
                }
                c
            };
            let ks = words(n, d);
            for &c in self.between(self.source[b], self.target[a]) {
                let (mut rows, mut cols) = (Vec::new(), Vec::new());
                for (k, &x) in self.basis[c].iter().enumerate() {
                    for _ in 0..x {
                        rows.push(k / n);
                        cols.push(k % n);
                    }
                }
                let count = ks
                    .iter()
                    .filter(|k| content(&rows, k) == self.basis[a] && content(k, &cols) == self.basis[b])
                    .count();
                let v = self.ring.reduce(Int::from(count));
                if !v.is_zero() {
                    out.push((c, v));
                }
            }
        }
        self.products.lock().unwrap().insert((a, b), out.clone());
        out
    }
}

/// A functor value F(k^N) with the exact action of every basis element of S(N,d).
#[derive(Clone, Debug)]
pub struct SchurModule {
    algebra: Arc<SchurAlgebraData>,
    weights: Vec<usize>,
    actions: Vec<Matrix>,
}

impl SchurModule {
    /// Wraps action matrices; the basis must consist of weight vectors.
    pub fn from_actions(algebra: Arc<SchurAlgebraData>, dim: usize, actions: Vec<Matrix>) -> Result<SchurModule> {
        if actions.len() != algebra.dim() || actions.iter().any(|a| a.rows() != dim || a.cols() != dim) {
            return Err(invalid("action matrices do not match the algebra"));
        }
        let mut weights = vec![usize::MAX; dim];
        for w in 0..algebra.weights.len() {
            let e = &actions[algebra.idempotent(w)];
            for (b, col) in e.columns().into_iter().enumerate() {
                match col.as_slice() {
                    [] => {}
                    [(i, v)] if *i == b && *v == Int::from(1) && weights[b] == usize::MAX => weights[b] = w,
                    _ => return Err(internal("module basis is not a weight basis")),
                }
            }
        }
        if weights.iter().any(|&w| w == usize::MAX) {
            return Err(internal("weight idempotents do not sum to the identity"));
        }
        Ok(SchurModule { algebra, weights, actions })
    }

    pub fn algebra(&self) -> &Arc<SchurAlgebraData> {
        &self.algebra
    }
    pub fn dim(&self) -> usize {
        self.weights.len()
    }
    pub fn ring(&self) -> Ring {
        self.algebra.ring
    }
    /// Weight index of basis vector `b`.
    pub fn weight(&self, b: usize) -> usize {
        self.weights[b]
    }
    /// Basis vectors of weight `w`, in order.
    pub fn weight_space(&self, w: usize) -> Vec<usize> {
        (0..self.dim()).filter(|&b| self.weights[b] == w).collect()
    }
    pub fn action(&self, i: usize) -> &Matrix {
        &self.actions[i]
    }

    /// ρ(ξ_i)·v for a sparse vector.
    pub fn apply(&self, i: usize, v: &[(usize, Int)]) -> Vec<(usize, Int)> {
        let a = &self.actions[i];
        let mut acc: BTreeMap<usize, Int> = BTreeMap::new();
        for (j, x) in v {
            if self.weights[*j] != self.algebra.source[i] {
                continue;
            }
            for (r, y) in a.col(*j) {
                *acc.entry(r).or_insert_with(Int::zero) += x * y;
            }
        }
        let ring = self.ring();
        acc.into_iter().map(|(r, x)| (r, ring.reduce(x))).filter(|(_, x)| !x.is_zero()).collect()
    }

    /// The dual module M♯ = M(k^N)^∨ with ρ♯(ξ_c) = ρ(ξ_{cᵀ})ᵀ.
    pub fn dual(&self) -> SchurModule {
        let actions = (0..self.actions.len()).map(|i| self.actions[self.algebra.transpose[i]].transpose()).collect();
        SchurModule { algebra: self.algebra.clone(), weights: self.weights.clone(), actions }
    }

    pub fn direct_sum(parts: &[&SchurModule], algebra: &Arc<SchurAlgebraData>) -> SchurModule {
        let ring = algebra.ring;
        let actions = (0..algebra.dim())
            .map(|i| {
                let ms: Vec<&Matrix> = parts.iter().map(|p| &p.actions[i]).collect();
                Matrix::block_diag(&ms, ring)
            })
            .collect();
        let weights = parts.iter().flat_map(|p| p.weights.iter().copied()).collect();
        SchurModule { algebra: algebra.clone(), weights, actions }
    }

    /// Whether the weight idempotents sum to the identity.
    pub fn identity_acts_trivially(&self) -> bool {
        let ring = self.ring();
        let mut sum = Matrix::zeros(ring, self.dim(), self.dim());
        for w in 0..self.algebra.weights.len() {
            sum = sum.add(&self.actions[self.algebra.idempotent(w)]);
        }
        sum == Matrix::identity(ring, self.dim())
    }

    /// Checks ρ(ξ_a)ρ(ξ_b) = Σ_c m_ab^c ρ(ξ_c) on the given pairs.
    pub fn respects_products(&self, pairs: &[(usize, usize)]) -> bool {
        let ring = self.ring();
        pairs.iter().all(|&(a, b)| {
            let lhs = self.actions[a].mul(&self.actions[b]);
            let mut rhs = Matrix::zeros(ring, self.dim(), self.dim());
            for (c, m) in self.algebra.multiply(a, b) {
                rhs = rhs.add(&self.actions[c].scale(&m));
            }
            lhs == rhs
        })
    }
}

fn generic_matrix(n: usize) -> GMat<Poly> {
    GMat { rows: n, cols: (0..n).map(|j| (0..n).map(|i| (i, Poly::var(i * n + j))).collect()).collect() }
}

/// Splits a polynomial matrix into its coefficient matrices, one per basis element.
pub(crate) fn coefficient_matrices(algebra: &SchurAlgebraData, img: &GMat<Poly>) -> Result<Vec<Matrix>> {
    let ring = algebra.ring;
    let (rows, cols) = (img.rows, img.ncols());
    let mut trip: Vec<Vec<(usize, usize, Int)>> = vec![Vec::new(); algebra.dim()];
    for (col, entries) in img.cols.iter().enumerate() {
        for (row, p) in entries {
            for (m, c) in p.terms() {
                let i = algebra.monomial_index(*m).ok_or_else(|| internal("non-homogeneous functor value"))?;
                trip[i].push((*row, col, c.clone()));
            }
        }
    }
    Ok(trip.into_iter().map(|t| Matrix::from_triplets(ring, rows, cols, t)).collect())
}

/// F(k^N) as an S(N,d)-module: the actions are the coefficients of F(T) for generic T.
pub fn module_of(algebra: &Arc<SchurAlgebraData>, f: &FunctorExpr) -> Result<SchurModule> {
    let ring = algebra.ring;
    f.check_ring(ring)?;
    let d = f.degree(ring)?;
    if d != algebra.d {
        return Err(invalid(format!("{f} has degree {d}, the algebra has degree {}", algebra.d)));
    }
    if algebra.n * algebra.n > MAX_VARS {
        return Err(invalid(format!("generic evaluation supports N <= 4, got N = {}", algebra.n)));
    }
    let img = eval_generic(&Polys(ring), f, &generic_matrix(algebra.n))?;
    let dim = img.rows;
    SchurModule::from_actions(algebra.clone(), dim, coefficient_matrices(algebra, &img)?)
}

fn same_algebra(a: &SchurModule, b: &SchurModule) -> Result<()> {
    let (x, y) = (&a.algebra, &b.algebra);
    if Arc::ptr_eq(x, y) || (x.n == y.n && x.d == y.d && x.ring == y.ring) {
        Ok(())
    } else {
        Err(invalid("modules over different Schur algebras"))
    }
}

/// Basis of the S(N,d)-equivariant maps M → M' (each a dim M' × dim M matrix); a Hermite lattice basis over Z.
pub fn hom_space(m: &SchurModule, m2: &SchurModule) -> Result<Vec<Matrix>> {
    same_algebra(m, m2)?;
    Ok(hom_commuting_with(m, m2, &m.algebra.generators()))
}

/// Maps commuting with the listed algebra elements, restricted to weight-preserving maps.
pub fn hom_commuting_with(m: &SchurModule, m2: &SchurModule, elems: &[usize]) -> Vec<Matrix> {
    let alg = &m.algebra;
    let ring = alg.ring;
    let nw = alg.weights.len();
    let sp1: Vec<Vec<usize>> = (0..nw).map(|w| m.weight_space(w)).collect();
    let sp2: Vec<Vec<usize>> = (0..nw).map(|w| m2.weight_space(w)).collect();
    let mut off = vec![0; nw + 1];
    for w in 0..nw {
        off[w + 1] = off[w] + sp1[w].len() * sp2[w].len();
    }
    let mut trip = Vec::new();
    let mut eq = 0;
    for &x in elems {
        let (mu, nu) = (alg.source[x], alg.target[x]);
        let a = m.actions[x].select_rows(&sp1[nu]).select_cols(&sp1[mu]);
        let b = m2.actions[x].select_rows(&sp2[nu]).select_cols(&sp2[mu]);
        let (l_mu, l_nu) = (sp1[mu].len(), sp1[nu].len());
        let brows = b.row_lists();
        let acols = a.columns();
        for (r, brow) in brows.iter().enumerate() {
            for (s, acol) in acols.iter().enumerate() {
                for (t, v) in acol {
                    trip.push((eq, off[nu] + r * l_nu + t, v.clone()));
                }
                for (t, v) in brow {
                    trip.push((eq, off[mu] + t * l_mu + s, -v));
                }
                eq += 1;
            }
        }
    }
    let system = Matrix::from_triplets(ring, eq, off[nw], trip);
    let kernel = kernel_basis(&system);
    kernel
        .columns()
        .into_iter()
        .map(|col| {
            let mut entries = Vec::new();
            for (k, v) in col {
                let w = off.partition_point(|&o| o <= k) - 1;
                let local = k - off[w];
                let l1 = sp1[w].len();
                entries.push((sp2[w][local / l1], sp1[w][local % l1], v));
            }
            Matrix::from_triplets(ring, m2.dim(), m.dim(), entries)
        })
        .collect()
}

/// Partitions of `d` grouped into blocks by their p-core.
pub fn blocks(d: usize, p: u64) -> Result<BTreeMap<Partition, Vec<Partition>>> {
    Ring::prime_field(p)?;
    let mut out: BTreeMap<Partition, Vec<Partition>> = BTreeMap::new();
    for lambda in Partition::all(d) {
        out.entry(p_core(&lambda, p as usize)).or_default().push(lambda);
    }
    Ok(out)
}

/// True when no listed partition shares the p-core of `lambda`.
pub fn block_disjoint(factors: &[Partition], lambda: &Partition, p: u64) -> Result<bool> {
    Ring::prime_field(p)?;
    let core = p_core(lambda, p as usize);
    Ok(factors.iter().all(|f| p_core(f, p as usize) != core))
}
