//! Ringel duality Θ = Rℋ(Λ^d, −) on complexes of parameterized standard objects.
//!
//! Every term is a finite sum of weight pieces X^μ(V) of X^d(k^N ⊗ V), X ∈ {S, Λ, Γ}, with
//! N ≥ d fixed by the degree. A component of a differential X^μ → X^ν is an element ψ of
//! 1_ν S(N,d) 1_μ acting on the parameter k^N; evaluating at V = k^m gives the coefficient
//! matrices of X^d(T ⊗ 1) restricted to the two pieces. ℋ(Λ^d, −) sends S^μ to Λ^μ and
//! Λ^μ to Γ^μ, keeping ψ, and [`lift`] recomputes ψ through the tensor covers.

mod coresolve;
mod lift;
mod param;
mod verify;

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use crate::error::{invalid, Result};
use crate::functor::FunctorExpr;
use crate::linalg::{ChainComplexData, GradedModule, Int, Matrix};
use crate::schur_algebra::{SchurAlgebraData, SchurModule};

pub use coresolve::{bar_complex, coresolve, injective_coresolution, InjectiveComplex};
pub use lift::{check_descent, internal_hom_lambda, LambdaComplex, Lift, Route};
pub use param::{algebra, param_eval, piece_module, ParamEval};
pub use verify::{
    frobenius_check, plethysm_check, theta, theta_complex, theta_inverse_check, theta_of, verify_main_theorem,
};

/// Which standard family the terms of a complex belong to.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Class {
    /// S^μ: the injectives.
    Injective,
    Lambda,
    Gamma,
}

impl Class {
    /// The unparameterized functor X^d.
    pub fn functor(self, d: usize) -> FunctorExpr {
        match self {
            Class::Injective => FunctorExpr::Sym(d),
            Class::Lambda => FunctorExpr::Wedge(d),
            Class::Gamma => FunctorExpr::Div(d),
        }
    }

    /// The class of the duals X^♯.
    pub fn dual(self) -> Class {
        match self {
            Class::Injective => Class::Gamma,
            Class::Lambda => Class::Lambda,
            Class::Gamma => Class::Injective,
        }
    }
}

impl fmt::Display for Class {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Class::Injective => "S",
            Class::Lambda => "Λ",
            Class::Gamma => "Γ",
        })
    }
}

/// The component ψ: X^{w(source)} → X^{w(target)} of a differential.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Entry {
    pub source: usize,
    pub target: usize,
    pub psi: Vec<(usize, Int)>,
}

/// A bounded cochain complex of parameterized standard objects of one class.
#[derive(Clone, Debug)]
pub struct ParamComplex {
    pub class: Class,
    pub algebra: Arc<SchurAlgebraData>,
    /// Weights of the summands of each term.
    pub terms: BTreeMap<i64, Vec<usize>>,
    /// `maps[i]` are the components of the differential from degree i to i + 1.
    pub maps: BTreeMap<i64, Vec<Entry>>,
}

impl ParamComplex {
    pub fn new(class: Class, algebra: Arc<SchurAlgebraData>) -> ParamComplex {
        ParamComplex { class, algebra, terms: BTreeMap::new(), maps: BTreeMap::new() }
    }

    pub fn degree(&self) -> usize {
        self.algebra.d()
    }

    pub fn support(&self) -> Option<(i64, i64)> {
        let mut it = self.terms.iter().filter(|(_, t)| !t.is_empty()).map(|(q, _)| *q);
        let lo = it.next()?;
        Some((lo, it.last().unwrap_or(lo)))
    }

    pub fn term(&self, i: i64) -> &[usize] {
        self.terms.get(&i).map(|t| t.as_slice()).unwrap_or(&[])
    }

    pub fn entries(&self, i: i64) -> &[Entry] {
        self.maps.get(&i).map(|t| t.as_slice()).unwrap_or(&[])
    }

    /// The same data read in another class.
    pub fn relabel(&self, class: Class) -> ParamComplex {
        ParamComplex { class, ..self.clone() }
    }

    fn offsets(&self, i: i64, eval: &ParamEval) -> Vec<usize> {
        let mut o = vec![0];
        for &w in self.term(i) {
            o.push(o.last().unwrap() + eval.pieces[w].len());
        }
        o
    }

    /// The differential from degree i to i + 1 evaluated at k^m.
    pub fn differential_at(&self, i: i64, m: usize) -> Result<Matrix> {
        let eval = param_eval(self.class, &self.algebra, m)?;
        Ok(self.assemble(i, &eval))
    }

    fn assemble(&self, i: i64, eval: &ParamEval) -> Matrix {
        let (src, tgt) = (self.offsets(i, eval), self.offsets(i + 1, eval));
        let mut trip = Vec::new();
        for e in self.entries(i) {
            let (ws, wt) = (self.term(i)[e.source], self.term(i + 1)[e.target]);
            let block = eval.map(&e.psi, ws, wt);
            for (c, col) in block.columns().into_iter().enumerate() {
                for (r, x) in col {
                    trip.push((tgt[e.target] + r, src[e.source] + c, x));
                }
            }
        }
        Matrix::from_triplets(self.algebra.ring(), *tgt.last().unwrap(), *src.last().unwrap(), trip)
    }

    /// The complex of k-modules at V = k^m, as a chain complex in degrees −i.
    pub fn evaluate(&self, m: usize) -> Result<ChainComplexData> {
        let eval = param_eval(self.class, &self.algebra, m)?;
        let ring = self.algebra.ring();
        let mut ranks = BTreeMap::new();
        let mut up = BTreeMap::new();
        for &i in self.terms.keys() {
            ranks.insert(i, *self.offsets(i, &eval).last().unwrap());
        }
        for &i in self.terms.keys() {
            if self.terms.contains_key(&(i + 1)) {
                up.insert(i, self.assemble(i, &eval));
            }
        }
        Ok(ChainComplexData::from_cochain(ring, &ranks, &up))
    }

    /// H^i at V = k^m, graded cohomologically.
    pub fn cohomology(&self, m: usize) -> Result<GradedModule> {
        Ok(self.evaluate(m)?.homology_all().regrade(|q| -q))
    }

    /// d² = 0 at V = k^m.
    pub fn is_complex_at(&self, m: usize) -> Result<bool> {
        Ok(self.evaluate(m)?.is_complex())
    }

    /// C^♯: terms dualized into degree −i, components ψ ↦ ψᵀ.
    pub fn dual(&self) -> ParamComplex {
        let alg = &self.algebra;
        let terms = self.terms.iter().map(|(i, t)| (-i, t.clone())).collect();
        let maps = self
            .maps
            .iter()
            .map(|(i, es)| {
                let es = es
                    .iter()
                    .map(|e| Entry {
                        source: e.target,
                        target: e.source,
                        psi: e.psi.iter().map(|(c, x)| (alg.transpose(*c), x.clone())).collect(),
                    })
                    .collect();
                (-i - 1, es)
            })
            .collect();
        ParamComplex { class: self.class.dual(), algebra: alg.clone(), terms, maps }
    }

    /// The term of degree i evaluated at V = k^N with its S(N,d)-action.
    pub fn module_term(&self, i: i64) -> Result<SchurModule> {
        let parts = self.term(i).iter().map(|&w| piece_module(self.class, &self.algebra, w)).collect::<Result<Vec<_>>>()?;
        let refs: Vec<&SchurModule> = parts.iter().map(|p| p.as_ref()).collect();
        Ok(SchurModule::direct_sum(&refs, &self.algebra))
    }

    pub(crate) fn require(&self, class: Class) -> Result<()> {
        if self.class == class {
            Ok(())
        } else {
            Err(invalid(format!("expected a complex of {class}-class terms, got {}", self.class)))
        }
    }
}
