//! Dold–Puppe derived functors L_qF(V;n) of strict polynomial functors.
//!
//! The fast engine works on nondegenerate monomial labels of F(K(n₁) ⊠ ⋯ ⊠ K(n_k) ⊗ V)
//! and totalizes the normalized multicomplex. Schur and Weyl functors are handled as images
//! of their generator chain maps. The generic engine applies `eval_map` levelwise to K(n) and
//! takes normalized chains by kernel intersection; it is slower and serves as a cross-check.

mod checks;
pub mod model;
mod pairing;
pub mod shape;

pub use checks::{bott_check, decalage_check, iterate_check, Comparison};
pub use pairing::{homology_presentation, pairing, HomologyPresentation};

use crate::combinatorics::{compositions, factorial, sigma_lambda, Partition};
use crate::error::{Error, Result};
use crate::functor::{dimension, FunctorExpr};
use crate::linalg::{ChainComplexData, GradedModule, Matrix, Ring};
use crate::simplicial::{apply_functor, chains, k_n};
use model::{assemble, image_complex, BlockKind, Budget, GeneratorMap, Model};
use shape::Shape;

/// Default cap on the number of enumerated labels.
pub const DEFAULT_BUDGET: u128 = 4_000_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Strategy {
    /// One simplicial direction K(n).
    DirectKn,
    /// n directions K(1) ⊠ ⋯ ⊠ K(1), totalized.
    IteratedHeight1,
}

#[derive(Clone, Debug)]
pub struct DerivedRequest {
    pub functor: FunctorExpr,
    pub ring: Ring,
    pub rank: usize,
    pub height: usize,
    pub strategy: Option<Strategy>,
    pub budget: u128,
}

impl DerivedRequest {
    pub fn new(functor: FunctorExpr, ring: Ring, rank: usize, height: usize) -> DerivedRequest {
        DerivedRequest { functor, ring, rank, height, strategy: None, budget: DEFAULT_BUDGET }
    }

    pub fn with_strategy(mut self, s: Strategy) -> DerivedRequest {
        self.strategy = Some(s);
        self
    }

    pub fn with_budget(mut self, b: u128) -> DerivedRequest {
        self.budget = b;
        self
    }

    fn directions(&self, width: usize) -> Vec<usize> {
        let n = self.height;
        let s = self.strategy.unwrap_or(if n >= 3 || n * width > model::MAX_POSITIONS {
            Strategy::IteratedHeight1
        } else {
            Strategy::DirectKn
        });
        match s {
            Strategy::DirectKn => vec![n],
            Strategy::IteratedHeight1 => vec![1; n],
        }
    }
}

enum Plan {
    Monomial(Shape),
    Image { weyl: bool, lambda: Partition },
    Generic(FunctorExpr),
}

/// Move `Param` nodes out of the way: F∘G_{k^r} = (F∘G)_{k^r} and (F_{k^s})_{k^r} = F_{k^{rs}}.
fn pull_param(e: &FunctorExpr) -> (FunctorExpr, usize) {
    match e {
        FunctorExpr::Param(f, r) => {
            let (g, s) = pull_param(f);
            (g, r * s)
        }
        FunctorExpr::Compose(f, g) => {
            let (g2, r) = pull_param(g);
            (FunctorExpr::compose((**f).clone(), g2), r)
        }
        _ => (e.clone(), 1),
    }
}

fn plan(e: &FunctorExpr, ring: Ring) -> (Plan, usize) {
    let Some(e) = e.without_duals() else { return (Plan::Generic(e.clone()), 1) };
    let (e, r) = pull_param(&e);
    let p = match e {
        FunctorExpr::Schur(ref l) if l.weight() > 1 => Plan::Image { weyl: false, lambda: l.clone() },
        FunctorExpr::Weyl(ref l) if l.weight() > 1 => Plan::Image { weyl: true, lambda: l.clone() },
        _ => match Shape::compile(&e, ring.characteristic()) {
            Ok(s) => Plan::Monomial(s),
            Err(_) => Plan::Generic(e),
        },
    };
    (p, r)
}

fn image_shapes(weyl: bool, lambda: &Partition) -> GeneratorMap {
    let conj = lambda.conjugate();
    let b = |k: BlockKind, parts: &[usize]| parts.iter().map(|&x| (k, x)).collect::<Vec<_>>();
    if weyl {
        GeneratorMap { src: b(BlockKind::Div, lambda.parts()), sigma: sigma_lambda(&conj), tgt: b(BlockKind::Wedge, conj.parts()) }
    } else {
        GeneratorMap { src: b(BlockKind::Wedge, conj.parts()), sigma: sigma_lambda(lambda), tgt: b(BlockKind::Sym, lambda.parts()) }
    }
}

/// Normalized complex of one color-content block.
fn block_complex(p: &Plan, ring: Ring, dirs: &[usize], colors: &[usize], budget: &mut Budget) -> Result<ChainComplexData> {
    let model = Model::new(dirs.to_vec(), colors.to_vec())?;
    match p {
        Plan::Monomial(s) => Ok(assemble(&model, s, ring, budget)?.complex),
        Plan::Image { weyl, lambda } => {
            let g = image_shapes(*weyl, lambda);
            let src = assemble(&model, &GeneratorMap::shape(&g.src), ring, budget)?;
            let tgt = assemble(&model, &GeneratorMap::shape(&g.tgt), ring, budget)?;
            image_complex(&src, &tgt, &g, ring)
        }
        Plan::Generic(_) => unreachable!(),
    }
}

fn width_of(p: &Plan) -> usize {
    match p {
        Plan::Monomial(s) => s.width(),
        Plan::Image { lambda, .. } => lambda.weight(),
        Plan::Generic(_) => 0,
    }
}

/// Color contents up to permutation of colors, with orbit sizes.
fn color_orbits(width: usize, m: usize) -> Vec<(Vec<usize>, u128)> {
    let mut out = Vec::new();
    for c in compositions(width, m) {
        if c.windows(2).any(|w| w[0] < w[1]) {
            continue;
        }
        let mut counts = std::collections::BTreeMap::new();
        for &x in &c {
            *counts.entry(x).or_insert(0usize) += 1;
        }
        let orbit = factorial(m) / counts.values().map(|&k| factorial(k)).product::<u128>();
        out.push((c, orbit));
    }
    out
}

pub fn direct_sum(ring: Ring, parts: &[ChainComplexData]) -> ChainComplexData {
    let mut out = ChainComplexData::new(ring);
    let degrees: std::collections::BTreeSet<i64> = parts.iter().flat_map(|c| c.ranks.keys().copied()).collect();
    for &q in &degrees {
        out.set_rank(q, parts.iter().map(|c| c.rank(q)).sum());
    }
    for &q in &degrees {
        if !degrees.contains(&(q - 1)) {
            continue;
        }
        let blocks: Vec<Matrix> = parts.iter().map(|c| c.differential(q)).collect();
        let refs: Vec<&Matrix> = blocks.iter().collect();
        out.set_differential(q, Matrix::block_diag(&refs, ring));
    }
    out
}

/// Adds `k` copies of `h` into `acc`.
pub fn accumulate(acc: &mut GradedModule, h: &GradedModule, k: u128) {
    for (&q, x) in &h.degrees {
        let cur = acc.get(q);
        let mut torsion = cur.torsion.clone();
        for _ in 0..k {
            torsion.extend(x.torsion.iter().cloned());
        }
        acc.set(q, cur.free_rank + x.free_rank * k as usize, torsion);
    }
}

fn effective_rank(req: &DerivedRequest, mult: usize) -> usize {
    req.rank * mult
}

/// The normalized chain complex whose homology is L_*F(k^m; n).
pub fn derived_complex(req: &DerivedRequest) -> Result<ChainComplexData> {
    req.functor.check_ring(req.ring)?;
    if req.height == 0 {
        return Err(Error::InvalidArguments("height must be at least 1".into()));
    }
    let (p, mult) = plan(&req.functor, req.ring);
    let m = effective_rank(req, mult);
    if let Plan::Generic(ref e) = p {
        return derived_complex_generic(e, req.ring, m, req.height, req.budget);
    }
    let dirs = req.directions(width_of(&p));
    let mut budget = Budget::new(req.budget);
    let mut parts = Vec::new();
    if width_of(&p) == 0 {
        parts.push(block_complex(&p, req.ring, &dirs, &vec![0; m.max(1)], &mut budget)?);
    } else {
        for c in compositions(width_of(&p), m) {
            parts.push(block_complex(&p, req.ring, &dirs, &c, &mut budget)?);
        }
    }
    Ok(direct_sum(req.ring, &parts))
}

/// L_*F(k^m; n) as a graded module.
pub fn derived_functors(req: &DerivedRequest) -> Result<GradedModule> {
    req.functor.check_ring(req.ring)?;
    if req.height == 0 {
        return Err(Error::InvalidArguments("height must be at least 1".into()));
    }
    let (p, mult) = plan(&req.functor, req.ring);
    let m = effective_rank(req, mult);
    if let Plan::Generic(ref e) = p {
        return Ok(derived_complex_generic(e, req.ring, m, req.height, req.budget)?.homology_all());
    }
    let w = width_of(&p);
    let dirs = req.directions(w);
    derived_on(&p, req.ring, m, &dirs, req.budget)
}

fn derived_on(p: &Plan, ring: Ring, m: usize, dirs: &[usize], budget: u128) -> Result<GradedModule> {
    let w = width_of(p);
    let mut budget = Budget::new(budget);
    let mut acc = GradedModule::new(ring);
    if w == 0 {
        let c = block_complex(p, ring, dirs, &vec![0; m.max(1)], &mut budget)?;
        return Ok(c.homology_all());
    }
    if m == 0 {
        return Ok(acc);
    }
    for (colors, orbit) in color_orbits(w, m) {
        let c = block_complex(p, ring, dirs, &colors, &mut budget)?;
        accumulate(&mut acc, &c.homology_all(), orbit);
    }
    Ok(acc)
}

/// Homology of the multisimplicial model with the given sphere dimensions (one per direction).
pub fn derived_with_directions(f: &FunctorExpr, ring: Ring, m: usize, dirs: &[usize], budget: u128) -> Result<GradedModule> {
    f.check_ring(ring)?;
    let (p, mult) = plan(f, ring);
    if let Plan::Generic(_) = p {
        return Err(Error::InvalidArguments(format!("{f} needs the generic engine, which has one direction")));
    }
    derived_on(&p, ring, m * mult, dirs, budget)
}

/// N(F(K(n) ⊗ k^m)) by levelwise evaluation and kernel intersection, truncated at n·deg F + 1.
pub fn derived_complex_generic(f: &FunctorExpr, ring: Ring, m: usize, n: usize, budget: u128) -> Result<ChainComplexData> {
    f.check_ring(ring)?;
    let d = f.degree(ring)?;
    let q_max = n * d + 1;
    let top = crate::combinatorics::binomial(q_max, n) as usize * m;
    let estimate = dimension(f, top, ring)? as u128 * q_max as u128;
    if estimate > budget {
        return Err(Error::BudgetExceeded { estimate, budget });
    }
    let x = apply_functor(f, &k_n(n, q_max, ring), m, q_max)?;
    let mut c = chains(&x, true)?;
    c.ranks.retain(|&q, _| q <= q_max as i64);
    Ok(c)
}

/// L_*F(k^m; n) from the generic engine.
pub fn derived_functors_generic(f: &FunctorExpr, ring: Ring, m: usize, n: usize, budget: u128) -> Result<GradedModule> {
    let c = derived_complex_generic(f, ring, m, n, budget)?;
    let top = (n * f.degree(ring)?) as i64;
    let mut h = c.homology_all();
    h.degrees.retain(|&q, _| q <= top);
    Ok(h)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{Homology, Int};

    fn fe(s: &str) -> FunctorExpr {
        s.parse().unwrap()
    }

    fn run(s: &str, ring: Ring, m: usize, n: usize) -> GradedModule {
        derived_functors(&DerivedRequest::new(fe(s), ring, m, n)).unwrap()
    }

    #[test]
    fn catalog_examples() {
        let z = Ring::Integers;
        let h = run("S[2]", z, 2, 1);
        assert_eq!(h.degrees.len(), 1);
        assert_eq!(h.get(2), Homology { free_rank: 1, torsion: vec![] });
        let h = run("G[2]", z, 1, 1);
        assert_eq!(h.degrees.len(), 1);
        assert_eq!(h.get(1), Homology { free_rank: 0, torsion: vec![Int::from(2)] });
        for n in 1..=2 {
            let h = run("T[2]", z, 2, n);
            assert_eq!(h.degrees.len(), 1);
            assert_eq!(h.get(2 * n as i64).free_rank, 4);
        }
    }

    #[test]
    fn fast_engine_matches_generic() {
        let z = Ring::Integers;
        for s in ["S[2]", "W[2]", "G[2]", "T[2]", "S[1] * W[1]", "Schur[2,1]", "Weyl[2,1]", "S[3]", "G[3]"] {
            for m in 1..=2 {
                for n in 1..=2 {
                    let e = fe(s);
                    if n == 2 && m == 2 && e.degree(z).unwrap() == 3 {
                        continue;
                    }
                    let fast = run(s, z, m, n);
                    let slow = derived_functors_generic(&e, z, m, n, u128::MAX).unwrap();
                    assert_eq!(fast, slow, "{s} m={m} n={n}");
                }
            }
        }
    }

    #[test]
    fn strategies_agree() {
        for s in ["S[2]", "G[2]", "W[2]", "S[3]", "Schur[2,1]"] {
            for n in 1..=2 {
                for m in 1..=2 {
                    let a = derived_functors(&DerivedRequest::new(fe(s), Ring::Integers, m, n).with_strategy(Strategy::DirectKn)).unwrap();
                    let b = derived_functors(&DerivedRequest::new(fe(s), Ring::Integers, m, n).with_strategy(Strategy::IteratedHeight1)).unwrap();
                    assert_eq!(a, b, "{s} n={n} m={m}");
                }
            }
        }
    }

    #[test]
    fn complex_and_orbit_sum_agree() {
        let req = DerivedRequest::new(fe("S[2] o W[2]"), Ring::Integers, 2, 1);
        let c = derived_complex(&req).unwrap();
        assert!(c.is_complex());
        assert_eq!(c.homology_all(), derived_functors(&req).unwrap());
    }

    #[test]
    fn twists_and_params() {
        let f3 = Ring::PrimeField(3);
        let h = run("Tw[1]", f3, 2, 2);
        assert_eq!(h.degrees.len(), 1);
        assert_eq!(h.get(2).free_rank, 2);
        let a = run("Param(S[2],2)", Ring::Integers, 1, 1);
        let b = run("S[2]", Ring::Integers, 2, 1);
        assert_eq!(a, b);
        let c = run("Dual(S[2])", Ring::Integers, 1, 1);
        assert_eq!(c, run("G[2]", Ring::Integers, 1, 1));
        let k = run("k", Ring::Integers, 2, 2);
        assert_eq!(k.degrees.len(), 1);
        assert_eq!(k.get(0).free_rank, 1);
    }

    #[test]
    fn budget_is_enforced() {
        let req = DerivedRequest::new(fe("S[3]"), Ring::Integers, 3, 2).with_budget(10);
        assert!(matches!(derived_functors(&req), Err(Error::BudgetExceeded { .. })));
    }
}
