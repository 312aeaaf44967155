//! Exact computations with strict polynomial functors.
//!
//! Two independent pipelines compute the same graded data: Dold–Puppe derived functors
//! through simplicial models ([`derived`]) and iterated Ringel duals through injective
//! coresolutions ([`ringel`]).

pub mod combinatorics;
pub mod derived;
pub mod error;
pub mod functor;
pub mod linalg;
pub mod ringel;
pub mod schur_algebra;
pub mod simplicial;

pub use error::{Error, Result};
pub use linalg::{ChainComplexData, GradedModule, Homology, Int, Matrix, Ring};
