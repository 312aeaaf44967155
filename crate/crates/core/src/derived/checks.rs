use std::fmt;

use super::{derived_functors, derived_with_directions, DerivedRequest, DEFAULT_BUDGET};
use crate::combinatorics::Partition;
use crate::error::Result;
use crate::functor::{schur_dimension, FunctorExpr};
use crate::linalg::{GradedModule, Ring};

/// Two graded modules that should agree degree by degree.
#[derive(Clone, Debug, PartialEq)]
pub struct Comparison {
    pub title: String,
    pub lhs_name: String,
    pub rhs_name: String,
    pub lhs: GradedModule,
    pub rhs: GradedModule,
}

impl Comparison {
    pub fn new(title: impl Into<String>, lhs_name: impl Into<String>, lhs: GradedModule, rhs_name: impl Into<String>, rhs: GradedModule) -> Comparison {
        Comparison { title: title.into(), lhs_name: lhs_name.into(), rhs_name: rhs_name.into(), lhs, rhs }
    }

    pub fn matches(&self) -> bool {
        self.lhs.degrees == self.rhs.degrees
    }
}

impl fmt::Display for Comparison {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{} [{}]", self.title, if self.matches() { "match" } else { "MISMATCH" })?;
        let mut degrees: Vec<i64> = self.lhs.degrees.keys().chain(self.rhs.degrees.keys()).copied().collect();
        degrees.sort_unstable();
        degrees.dedup();
        writeln!(f, "  {:>4}  {:<24} {:<24}", "deg", self.lhs_name, self.rhs_name)?;
        for q in degrees {
            writeln!(f, "  {:>4}  {:<24} {:<24}", q, self.lhs.get(q).to_string(), self.rhs.get(q).to_string())?;
        }
        Ok(())
    }
}

/// L_i W_{λ'}(k^m; n) against L_{i+d} S_λ(k^m; n+1).
pub fn decalage_check(lambda: &Partition, n: usize, m: usize, ring: Ring) -> Result<Comparison> {
    let d = lambda.weight() as i64;
    let w = FunctorExpr::Weyl(lambda.conjugate());
    let s = FunctorExpr::Schur(lambda.clone());
    let lhs = derived_functors(&DerivedRequest::new(w.clone(), ring, m, n))?;
    let rhs = derived_functors(&DerivedRequest::new(s.clone(), ring, m, n + 1))?.shift(-d);
    Ok(Comparison::new(
        format!("décalage for λ = {lambda}, n = {n}, m = {m} over {ring}"),
        format!("L_i {w}(;{n})"),
        lhs,
        format!("L_(i+{d}) {s}(;{})", n + 1),
        rhs,
    ))
}

/// Over Q, L_*S_λ(k^m; n) is S_{λ'} (n odd) or S_λ (n even) placed in degree n·|λ|.
pub fn bott_check(lambda: &Partition, n: usize, m: usize) -> Result<Comparison> {
    let d = lambda.weight();
    let lhs = derived_functors(&DerivedRequest::new(FunctorExpr::Schur(lambda.clone()), Ring::Rationals, m, n))?;
    let target = if n % 2 == 1 { lambda.conjugate() } else { lambda.clone() };
    let mut rhs = GradedModule::new(Ring::Rationals);
    rhs.set((n * d) as i64, schur_dimension(&target, m), Vec::new());
    Ok(Comparison::new(format!("Bott pattern for λ = {lambda}, n = {n}, m = {m}"), "L_* S_λ", lhs, format!("S_{target} in degree {}", n * d), rhs))
}

/// L(L(F;n₁);n₂) from the bisimplicial model against L(F;n₁+n₂) from K(n₁+n₂).
pub fn iterate_check(f: &FunctorExpr, m: usize, n1: usize, n2: usize, ring: Ring) -> Result<Comparison> {
    let lhs = derived_with_directions(f, ring, m, &[n1, n2], DEFAULT_BUDGET)?;
    let rhs = derived_with_directions(f, ring, m, &[n1 + n2], DEFAULT_BUDGET)?;
    Ok(Comparison::new(
        format!("iteration for {f}, m = {m}, ({n1},{n2}) over {ring}"),
        format!("L(L(F;{n1});{n2})"),
        lhs,
        format!("L(F;{})", n1 + n2),
        rhs,
    ))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(v: &[usize]) -> Partition {
        Partition::new(v.to_vec()).unwrap()
    }

    #[test]
    fn decalage_small() {
        for l in [p(&[2]), p(&[1, 1]), p(&[2, 1])] {
            let c = decalage_check(&l, 1, 1, Ring::Integers).unwrap();
            assert!(c.matches(), "{c}");
        }
        let c = decalage_check(&p(&[2]), 1, 2, Ring::Integers).unwrap();
        assert_eq!(c.lhs.get(2).free_rank, 3);
    }

    #[test]
    fn bott_small() {
        for n in 1..=2 {
            let c = bott_check(&p(&[2, 1]), n, 2).unwrap();
            assert!(c.matches(), "{c}");
        }
    }

    #[test]
    fn iteration_small() {
        for s in ["S[2]", "G[2]", "T[2]"] {
            let c = iterate_check(&s.parse().unwrap(), 1, 1, 1, Ring::Integers).unwrap();
            assert!(c.matches(), "{c}");
        }
    }
}
