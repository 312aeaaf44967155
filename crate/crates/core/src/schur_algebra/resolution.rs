//! Projective resolutions by sums of Γ^μ and Ext groups.
//!
//! A bounded complex D is resolved by a complex P of projectives with a quasi-isomorphism
//! f: P → D, built degree by degree: P_k covers the cycles of the cone
//! Cone_k = P_{k−1} ⊕ D_k, d(p, x) = (−∂p, f p + ∂x), modulo the image of D_{k+1}.
//! A single module in degree 0 gives an ordinary projective resolution.

use std::collections::HashMap;
use std::sync::Arc;

use num_traits::One;

use super::{module_of, SchurAlgebraData, SchurModule};
use crate::combinatorics::multisets;
use crate::error::{internal, invalid, Error, Result};
use crate::functor::FunctorExpr;
use crate::linalg::{image_basis, kernel_basis, rank, smith_normal_form, solve, GradedModule, Int, Matrix, Ring};

/// Total dimension of all projective terms allowed before giving up.
pub const DEFAULT_RESOLUTION_BUDGET: u128 = 200_000;

type Vector = Vec<(usize, Int)>;

/// A bounded homological complex of modules; `down[i]` maps `terms[i + 1]` to `terms[i]`.
#[derive(Clone, Debug)]
pub struct ModuleComplex {
    pub lo: i64,
    pub terms: Vec<SchurModule>,
    pub down: Vec<Matrix>,
}

impl ModuleComplex {
    pub fn single(m: SchurModule) -> ModuleComplex {
        ModuleComplex { lo: 0, terms: vec![m], down: Vec::new() }
    }

    pub fn term(&self, k: i64) -> Option<&SchurModule> {
        if k < self.lo {
            return None;
        }
        self.terms.get((k - self.lo) as usize)
    }

    /// The boundary D_k → D_{k−1}.
    pub fn boundary(&self, k: i64) -> Option<&Matrix> {
        if k <= self.lo {
            return None;
        }
        self.down.get((k - self.lo - 1) as usize)
    }
}

/// How cone cycles are covered.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GeneratorChoice {
    /// Complements weight by weight, then drops redundant generators.
    Minimal,
    /// Every weight-basis vector of the cycles becomes a generator.
    AllBasis,
}

/// Γ^μ(k^N) with its Yoneda generator ⊗_j γ_{μ_j}(e_j) and the label ξ_c of each basis vector.
#[derive(Debug)]
pub struct Projective {
    pub weight: usize,
    pub module: SchurModule,
    pub generator: usize,
    /// `label[b] = c` when basis vector b equals ξ_c applied to the generator.
    pub label: Vec<usize>,
}

fn projective(alg: &Arc<SchurAlgebraData>, w: usize) -> Result<Projective> {
    let mu = alg.weights()[w].clone();
    let factors: Vec<FunctorExpr> = mu.iter().filter(|&&x| x > 0).map(|&x| FunctorExpr::Div(x)).collect();
    let module = module_of(alg, &FunctorExpr::Tensor(factors))?;
    let mut generator = 0;
    for (j, &x) in mu.iter().enumerate() {
        if x > 0 {
            let ms = multisets(alg.n(), x);
            let pos = ms.iter().position(|s| s.iter().all(|&y| y == j)).unwrap();
            generator = generator * ms.len() + pos;
        }
    }
    let mut label = vec![usize::MAX; module.dim()];
    for &c in alg.from_weight(w) {
        match module.apply(c, &[(generator, Int::one())]).as_slice() {
            [(b, x)] if x.is_one() && label[*b] == usize::MAX => label[*b] = c,
            _ => return Err(internal("projective basis is not the orbit of its generator")),
        }
    }
    if label.contains(&usize::MAX) {
        return Err(internal("projective generator does not generate"));
    }
    Ok(Projective { weight: w, module, generator, label })
}

/// A projective resolution P → D of a bounded complex, truncated at a top degree.
#[derive(Debug)]
pub struct Resolution {
    pub algebra: Arc<SchurAlgebraData>,
    pub lo: i64,
    /// Generator weights of P_k for k = lo, lo + 1, …
    pub generators: Vec<Vec<usize>>,
    /// `boundary[i]` lists (h, g, ψ): the boundary of generator h of P_{lo+i} has component ψ·u_g
    /// in summand g of P_{lo+i−1}, with ψ ∈ 1_{w(h)} S 1_{w(g)}.
    pub boundary: Vec<Vec<(usize, usize, Vector)>>,
    pub modules: Vec<SchurModule>,
    /// P_k → P_{k−1} (zero for k = lo).
    pub boundary_matrices: Vec<Matrix>,
    /// The comparison map f_k: P_k → D_k.
    pub comparison: Vec<Matrix>,
    projectives: HashMap<usize, Arc<Projective>>,
}

impl Resolution {
    pub fn projective(&self, w: usize) -> &Projective {
        &self.projectives[&w]
    }

    pub fn top(&self) -> i64 {
        self.lo + self.generators.len() as i64 - 1
    }
}

fn local_coords(v: &[(usize, Int)], pos: &HashMap<usize, usize>) -> Vector {
    v.iter().filter_map(|(i, x)| pos.get(i).map(|&p| (p, x.clone()))).collect()
}

struct WeightData {
    idx: Vec<usize>,
    pos: HashMap<usize, usize>,
    cycles: Matrix,
    boundaries: Vec<Vector>,
}

fn span_matrix(
    cone: &SchurModule,
    wd: &WeightData,
    w: usize,
    gens: &[(usize, Vector)],
    skip: Option<usize>,
) -> Matrix {
    let alg = cone.algebra();
    let mut cols: Vec<Vector> = wd.boundaries.clone();
    for (k, (u, g)) in gens.iter().enumerate() {
        if Some(k) == skip {
            continue;
        }
        for &x in alg.between(*u, w) {
            let v = local_coords(&cone.apply(x, g), &wd.pos);
            if !v.is_empty() {
                cols.push(v);
            }
        }
    }
    Matrix::from_columns(cone.ring(), wd.idx.len(), cols)
}

/// Local coordinate vectors completing `span` to the cycle lattice (empty when it already generates).
fn complement(cycles: &Matrix, span: &Matrix) -> Result<Vec<Vector>> {
    let r = cycles.cols();
    if r == 0 {
        return Ok(Vec::new());
    }
    let ring = cycles.ring();
    let y = if span.cols() == 0 {
        Matrix::zeros(ring, r, 0)
    } else {
        solve(cycles, span).map_err(|e| internal(format!("span leaves the cycles: {e}")))?.x
    };
    let picks: Vec<Vector> = match ring {
        Ring::Integers => {
            let snf = smith_normal_form(&y)?;
            let uinv = solve(&snf.u, &Matrix::identity(ring, r)).map_err(|_| internal("Smith transform not unimodular"))?.x;
            (0..r)
                .filter(|&i| i >= snf.factors.len() || !snf.factors[i].is_one())
                .map(|i| uinv.col(i))
                .collect()
        }
        _ => {
            let h = image_basis(&y);
            let pivots: Vec<usize> = h.columns().iter().filter_map(|c| c.first().map(|e| e.0)).collect();
            (0..r).filter(|i| !pivots.contains(i)).map(|i| vec![(i, Int::one())]).collect()
        }
    };
    Ok(picks
        .into_iter()
        .map(|c| cycles.mul(&Matrix::from_columns(ring, r, vec![c])).col(0))
        .collect())
}

fn direct_sum_of(alg: &Arc<SchurAlgebraData>, parts: &[&SchurModule]) -> SchurModule {
    SchurModule::direct_sum(parts, alg)
}

/// Resolves `cx` up to homological degree `top`.
pub fn resolve(cx: &ModuleComplex, top: i64, choice: GeneratorChoice, budget: u128) -> Result<Resolution> {
    let alg = cx
        .terms
        .first()
        .map(|m| m.algebra().clone())
        .ok_or_else(|| invalid("empty complex"))?;
    let ring = alg.ring();
    let empty = direct_sum_of(&alg, &[]);
    let mut res = Resolution {
        algebra: alg.clone(),
        lo: cx.lo,
        generators: Vec::new(),
        boundary: Vec::new(),
        modules: Vec::new(),
        boundary_matrices: Vec::new(),
        comparison: Vec::new(),
        projectives: HashMap::new(),
    };
    let mut used: u128 = 0;
    for k in cx.lo..=top {
        let i = (k - cx.lo) as usize;
        let prev = if i > 0 { &res.modules[i - 1] } else { &empty };
        let dk = cx.term(k).unwrap_or(&empty);
        let (pd, dd) = (prev.dim(), dk.dim());
        let cone = direct_sum_of(&alg, &[prev, dk]);
        // cone differential into P_{k−2} ⊕ D_{k−1}
        let p2 = if i > 1 { res.modules[i - 2].dim() } else { 0 };
        let d1 = cx.term(k - 1).map_or(0, |m| m.dim());
        let mut trip = Vec::new();
        if i > 1 {
            for (c, col) in res.boundary_matrices[i - 1].columns().into_iter().enumerate() {
                for (r, v) in col {
                    trip.push((r, c, -v));
                }
            }
        }
        if i > 0 && d1 > 0 {
            for (c, col) in res.comparison[i - 1].columns().into_iter().enumerate() {
                for (r, v) in col {
                    trip.push((p2 + r, c, v));
                }
            }
        }
        if let Some(b) = cx.boundary(k) {
            for (c, col) in b.columns().into_iter().enumerate() {
                for (r, v) in col {
                    trip.push((p2 + r, pd + c, v));
                }
            }
        }
        let dcone = Matrix::from_triplets(ring, p2 + d1, pd + dd, trip);
        let bnext: Vec<Vector> = match cx.boundary(k + 1) {
            Some(b) => b.columns().into_iter().map(|c| c.into_iter().map(|(r, v)| (pd + r, v)).collect()).collect(),
            None => Vec::new(),
        };
        let next_weights: Vec<usize> = cx.term(k + 1).map_or(Vec::new(), |m| (0..m.dim()).map(|b| m.weight(b)).collect());
        let nw = alg.weights().len();
        let mut data = Vec::with_capacity(nw);
        for w in 0..nw {
            let idx = cone.weight_space(w);
            let pos: HashMap<usize, usize> = idx.iter().enumerate().map(|(p, &b)| (b, p)).collect();
            let cycles = kernel_basis(&dcone.select_cols(&idx));
            let boundaries = bnext
                .iter()
                .zip(&next_weights)
                .filter(|(_, &u)| u == w)
                .map(|(c, _)| local_coords(c, &pos))
                .filter(|c| !c.is_empty())
                .collect();
            data.push(WeightData { idx, pos, cycles, boundaries });
        }
        let lift = |wd: &WeightData, v: Vector| -> Vector { v.into_iter().map(|(p, x)| (wd.idx[p], x)).collect() };
        let mut gens: Vec<(usize, Vector)> = Vec::new();
        for (w, wd) in data.iter().enumerate() {
            if wd.cycles.cols() == 0 {
                continue;
            }
            let new = match choice {
                GeneratorChoice::AllBasis => wd.cycles.columns(),
                GeneratorChoice::Minimal => complement(&wd.cycles, &span_matrix(&cone, wd, w, &gens, None))?,
            };
            gens.extend(new.into_iter().map(|v| (w, lift(wd, v))));
        }
        if choice == GeneratorChoice::Minimal {
            let mut j = gens.len();
            while j > 0 {
                j -= 1;
                let mut redundant = true;
                for (w, wd) in data.iter().enumerate() {
                    if wd.cycles.cols() > 0 && !complement(&wd.cycles, &span_matrix(&cone, wd, w, &gens, Some(j)))?.is_empty() {
                        redundant = false;
                        break;
                    }
                }
                if redundant {
                    gens.remove(j);
                }
            }
        }
        // assemble P_k, its boundary and the comparison map
        let mut parts = Vec::new();
        for (w, _) in &gens {
            if !res.projectives.contains_key(w) {
                res.projectives.insert(*w, Arc::new(projective(&alg, *w)?));
            }
            parts.push(res.projectives[w].clone());
        }
        let mods: Vec<&SchurModule> = parts.iter().map(|p| &p.module).collect();
        let pk = direct_sum_of(&alg, &mods);
        used += pk.dim() as u128;
        if used > budget {
            return Err(Error::BudgetExceeded { estimate: used, budget });
        }
        let (mut bcols, mut fcols) = (Vec::new(), Vec::new());
        for ((_, g), proj) in gens.iter().zip(&parts) {
            for &c in &proj.label {
                let v = cone.apply(c, g);
                bcols.push(v.iter().filter(|(r, _)| *r < pd).map(|(r, x)| (*r, -x)).collect::<Vector>());
                fcols.push(v.iter().filter(|(r, _)| *r >= pd).map(|(r, x)| (r - pd, x.clone())).collect::<Vector>());
            }
        }
        let mut entries = Vec::new();
        if i > 0 {
            let offsets: Vec<usize> = res.generators[i - 1]
                .iter()
                .scan(0, |acc, w| {
                    let o = *acc;
                    *acc += res.projectives[w].module.dim();
                    Some(o)
                })
                .collect();
            for (h, (_, g)) in gens.iter().enumerate() {
                let mut by_summand: HashMap<usize, Vector> = HashMap::new();
                for (r, x) in g.iter().filter(|(r, _)| *r < pd) {
                    let s = offsets.partition_point(|&o| o <= *r) - 1;
                    let proj = &res.projectives[&res.generators[i - 1][s]];
                    by_summand.entry(s).or_default().push((proj.label[r - offsets[s]], ring.reduce(-x)));
                }
                let mut keys: Vec<usize> = by_summand.keys().copied().collect();
                keys.sort_unstable();
                for s in keys {
                    let mut psi = by_summand.remove(&s).unwrap();
                    psi.sort_by_key(|e| e.0);
                    entries.push((h, s, psi));
                }
            }
        }
        res.generators.push(gens.iter().map(|(w, _)| *w).collect());
        res.boundary.push(entries);
        res.boundary_matrices.push(Matrix::from_columns(ring, pd, bcols));
        res.comparison.push(Matrix::from_columns(ring, dd, fcols));
        res.modules.push(pk);
    }
    Ok(res)
}

/// Ext^i(M, N) for i ≤ top over a prime field, from a minimal-style resolution of M.
pub fn ext_groups(m: &SchurModule, n: &SchurModule, top: usize) -> Result<GradedModule> {
    ext_groups_with(m, n, top, GeneratorChoice::Minimal)
}

pub fn ext_groups_with(m: &SchurModule, n: &SchurModule, top: usize, choice: GeneratorChoice) -> Result<GradedModule> {
    let ring = m.ring();
    if !matches!(ring, Ring::PrimeField(_)) {
        return Err(Error::UnsupportedRing(format!("Ext groups are computed over prime fields, got {ring}")));
    }
    super::same_algebra(m, n)?;
    let res = resolve(&ModuleComplex::single(m.clone()), top as i64 + 1, choice, DEFAULT_RESOLUTION_BUDGET)?;
    let alg = &res.algebra;
    let spaces: Vec<Vec<usize>> = (0..alg.weights().len()).map(|w| n.weight_space(w)).collect();
    let offsets: Vec<Vec<usize>> = res
        .generators
        .iter()
        .map(|gs| {
            let mut o = vec![0];
            for w in gs {
                o.push(o.last().unwrap() + spaces[*w].len());
            }
            o
        })
        .collect();
    // δ^k: Hom(P_k, N) → Hom(P_{k+1}, N), (δφ)(u_h) = Σ ψ·φ(u_g)
    let mut ranks = Vec::new();
    for k in 0..=top {
        let (src, tgt) = (&offsets[k], &offsets[k + 1]);
        let mut trip = Vec::new();
        for (h, g, psi) in &res.boundary[k + 1] {
            let (wh, wg) = (res.generators[k + 1][*h], res.generators[k][*g]);
            for (c, x) in psi {
                let block = n.action(*c).select_rows(&spaces[wh]).select_cols(&spaces[wg]);
                for (col, entries) in block.columns().into_iter().enumerate() {
                    for (row, v) in entries {
                        trip.push((tgt[*h] + row, src[*g] + col, x * v));
                    }
                }
            }
        }
        let delta = Matrix::from_triplets(ring, *tgt.last().unwrap(), *src.last().unwrap(), trip);
        ranks.push(rank(&delta));
    }
    let mut out = GradedModule::new(ring);
    for k in 0..=top {
        let dim = offsets[k].last().unwrap() - ranks[k] - if k > 0 { ranks[k - 1] } else { 0 };
        out.set(k as i64, dim, Vec::new());
    }
    Ok(out)
}
