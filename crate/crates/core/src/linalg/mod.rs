//! Exact linear algebra over Z, Q and F_p.

mod complex;
mod elim;
mod hermite;
mod matrix;
mod ring;
mod snf;

pub use complex::{factorize, homology, ChainComplexData, GradedModule, Homology};
pub use hermite::{image_basis, is_pure, kernel_basis, lattice_determinant, left_inverse, rank, smith_factors, solve, NoSolution, Solved};
pub use matrix::{density_threshold, set_density_threshold, Matrix};
pub use ring::{Int, Ring};
pub use snf::{smith_normal_form, Snf};
