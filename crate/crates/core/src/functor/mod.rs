//! Strict polynomial functors as evaluable expressions.

pub mod arith;
pub mod eval;
pub mod expr;
pub mod schur;

pub use arith::{Arith, GMat, Poly, Polys, Scalars};
pub use eval::{dimension, dual_eval, eval_generic, eval_identity, eval_map, evaluate, twist_eval, EvaluatedFunctor};
pub use expr::FunctorExpr;
pub use schur::{abw_presentation, generator_map, koszul_differential, schur_dimension, schur_generator, weyl_generator};
