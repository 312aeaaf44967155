//! Θⁿ on functors and the checks built on it.

use std::collections::BTreeMap;

use super::{coresolve, injective_coresolution, Class, LambdaComplex, ParamComplex};
use crate::derived::{derived_functors, Comparison, DerivedRequest};
use crate::error::{invalid, Error, Result};
use crate::functor::{dimension, FunctorExpr};
use crate::linalg::{GradedModule, Ring};

/// Θ applied once to a complex; Γ-class inputs are first replaced by injectives up to `length`.
pub fn theta_of(c: &ParamComplex, length: i64) -> Result<ParamComplex> {
    Ok(match c.class {
        Class::Injective => LambdaComplex::from_injective(c)?.complex,
        Class::Lambda => LambdaComplex::from_lambda(c)?.complex,
        Class::Gamma => LambdaComplex::from_injective(&coresolve(c, length)?)?.complex,
    })
}

/// A complex representing ΘⁿF, exact through degree n·d.
pub fn theta_complex(f: &FunctorExpr, n: usize, ring: Ring) -> Result<ParamComplex> {
    if n == 0 {
        return Err(invalid("Θ needs at least one iteration"));
    }
    let d = f.degree(ring)?;
    let length = (n * d + 1) as i64;
    let mut c = injective_coresolution(f, ring, length)?.complex.clone();
    for _ in 0..n {
        c = theta_of(&c, length)?;
    }
    Ok(c)
}

fn truncated(mut h: GradedModule, top: i64) -> GradedModule {
    h.degrees.retain(|&q, _| (0..=top).contains(&q));
    h
}

/// H^i(ΘⁿF)(k^m) for each requested m, in degrees 0 ≤ i ≤ n·d.
pub fn theta(f: &FunctorExpr, n: usize, ranks: &[usize], ring: Ring) -> Result<BTreeMap<usize, GradedModule>> {
    let c = theta_complex(f, n, ring)?;
    let top = (n * c.degree()) as i64;
    ranks.iter().map(|&m| Ok((m, truncated(c.cohomology(m)?, top)))).collect()
}

/// L_{nd−i}F(k^m; n) from the simplicial pipeline against H^i(ΘⁿF)(k^m) from coresolutions.
pub fn verify_main_theorem(f: &FunctorExpr, n: usize, ranks: &[usize], ring: Ring) -> Result<Vec<Comparison>> {
    let d = f.degree(ring)?;
    let top = (n * d) as i64;
    let rhs = theta(f, n, ranks, ring)?;
    ranks
        .iter()
        .map(|&m| {
            let lhs = derived_functors(&DerivedRequest::new(f.clone(), ring, m, n))?.regrade(|q| top - q);
            Ok(Comparison::new(
                format!("L_(nd-i) {f}(k^{m}; {n}) against H^i(Θ^{n} {f})(k^{m}) over {ring}"),
                format!("L_({top}-i)"),
                lhs,
                format!("H^i Θ^{n}"),
                rhs[&m].clone(),
            ))
        })
        .collect()
}

fn concentrated(ring: Ring, dim: usize) -> GradedModule {
    let mut g = GradedModule::new(ring);
    g.set(0, dim, Vec::new());
    g
}

/// (Θ(C^♯))^♯ applied to C = ΘF, against F in degree 0.
pub fn theta_inverse_check(f: &FunctorExpr, ranks: &[usize], ring: Ring) -> Result<Vec<Comparison>> {
    let c = theta_complex(f, 1, ring)?;
    let back = theta_of(&c.dual(), 0)?.dual();
    ranks
        .iter()
        .map(|&m| {
            Ok(Comparison::new(
                format!("Θ⁻¹Θ {f} at k^{m} over {ring}"),
                "H^i Θ⁻¹Θ F",
                back.cohomology(m)?,
                "F",
                concentrated(ring, dimension(f, m, ring)?),
            ))
        })
        .collect()
}

/// Θⁿ(F∘G) against Θ^{nd}(F)∘H⁰(ΘⁿG), d = deg G, after checking H^{>0}(ΘⁿG) = 0.
pub fn plethysm_check(f: &FunctorExpr, g: &FunctorExpr, n: usize, ranks: &[usize], ring: Ring) -> Result<Vec<Comparison>> {
    let d = g.degree(ring)?;
    let inner = theta(g, n, ranks, ring)?;
    let mut values = BTreeMap::new();
    for (&m, h) in &inner {
        let h0 = h.get(0);
        if h.degrees.keys().any(|&q| q != 0) || !h0.torsion.is_empty() {
            return Err(Error::HypothesisNotMet(format!("H^*(Θ^{n} {g})(k^{m}) is not a free module in degree 0: {h}")));
        }
        values.insert(m, h0.free_rank);
    }
    let lhs = theta(&FunctorExpr::compose(f.clone(), g.clone()), n, ranks, ring)?;
    let outer_ranks: Vec<usize> = values.values().copied().collect();
    let rhs = theta(f, n * d, &outer_ranks, ring)?;
    Ok(ranks
        .iter()
        .map(|&m| {
            Comparison::new(
                format!("Θ^{n}({f} o {g}) against Θ^{}({f}) o H⁰Θ^{n}({g}) at k^{m} over {ring}", n * d),
                "H^i Θⁿ(F∘G)",
                lhs[&m].clone(),
                format!("H^i Θ^{}F at k^{}", n * d, values[&m]),
                rhs[&values[&m]].clone(),
            )
        })
        .collect())
}

/// Θⁿ(F∘I^{(r)}) against ΘⁿF∘I^{(r)} shifted up by d·n·(p^r − 1).
pub fn frobenius_check(f: &FunctorExpr, r: u32, n: usize, ranks: &[usize], ring: Ring) -> Result<Vec<Comparison>> {
    let Ring::PrimeField(p) = ring else {
        return Err(Error::UnsupportedRing(format!("Frobenius twists need a prime field, got {ring}")));
    };
    let d = f.degree(ring)?;
    let shift = (d * n) as i64 * (p.pow(r) as i64 - 1);
    let lhs = theta(&FunctorExpr::compose(f.clone(), FunctorExpr::Twist(r)), n, ranks, ring)?;
    let rhs = theta(f, n, ranks, ring)?;
    Ok(ranks
        .iter()
        .map(|&m| {
            Comparison::new(
                format!("Θ^{n}({f} o I^({r})) at k^{m} over {ring}"),
                "H^i Θⁿ(F∘I^(r))",
                lhs[&m].clone(),
                format!("H^(i-{shift}) ΘⁿF"),
                rhs[&m].shift(shift),
            )
        })
        .collect())
}
