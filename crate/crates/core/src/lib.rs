//! One-dimensional electrostatics and confluent second-order SUSY partner
//! potentials, as one verifiable numerical pipeline.
//!
//! A static field `E(x)` in a linear medium can be written as `E = -phi'`
//! with `phi = phi0 ln(w/A)` for a nodeless `w`. The reduced field
//! `eta = E/phi0` then satisfies the Bernoulli equation
//! `eta' = eta^2 + 2 beta eta` of a confluent second-order SUSY
//! transformation, and Gauss's law fixes `eta' = rho/(eps phi0)`. This
//! crate implements both directions of that correspondence:
//!
//! - charge density -> cumulative charge, the two field branches
//!   `E+ = Q/eps` and `E- = -phi0 rho/Q`, the superpotential data and the
//!   partner potentials `V∓`;
//! - solvable potential (seed solution) -> confluent kernel `(w, eta, gamma)`
//!   -> field profile and charge density.
//!
//! Every governing identity (Riccati, Bernoulli, the algebraic consistency
//! quadratic, partner offset, intertwining, factorization, spectral
//! deletion) is exposed as a named residual check in [`verify`].
//!
//! Numerical substrate: uniform grids, 2nd-order finite differences,
//! trapezoidal quadrature, an error function good to ~1e-15, and a Sturm
//! bisection tridiagonal eigensolver. All types are immutable after
//! construction and all operations are pure functions.

pub mod electrostatics;
pub mod error;
pub mod numerics;
pub mod scenarios;
pub mod susy;
pub mod verify;

pub use error::{Error, Result};
pub use numerics::field::ScalarField;
pub use numerics::grid::Grid1D;
