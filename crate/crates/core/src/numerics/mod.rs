//! Numerical substrate: grids, sampled fields, finite differences,
//! trapezoidal quadrature, the error function and a symmetric tridiagonal
//! eigensolver.

pub mod calculus;
pub mod eigen;
pub mod field;
pub mod grid;
pub mod special;

pub use calculus::{differentiate, integrate, integrate_cumulative, DiffOrder};
pub use eigen::{lowest_eigenpairs, Eigenpair, TridiagonalOperator};
pub use field::ScalarField;
pub use grid::Grid1D;
pub use special::{erf, erfc, ln_erfc};
