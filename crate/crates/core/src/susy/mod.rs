//! First-order and confluent second-order SUSY transformations.
//!
//! A seed solution `u` of `H^- u = eps u` defines a superpotential
//! `alpha = -u'/u` and first-order partners `V∓ = alpha^2 ∓ alpha' + eps`.
//! The confluent second-order transformation is driven instead by
//! `w = w0 - int u^2` and `eta = -w'/w = u^2/w`, with second-order
//! intertwiners `L2^- = d^2/dx^2 + eta d/dx + gamma`. Seeds are stored as
//! `ln u^2` plus a sign flag: every formula in scope uses only `u^2` or
//! its log-derivative, and the constant-density seed has `u^2 < 0` when
//! written literally, so logging the square keeps the whole pipeline real.

pub mod kernel;
pub mod pair;
pub mod seed;

pub use kernel::{apply_adjoint_intertwiner, apply_intertwiner, build_confluent_kernel, missing_state, ConfluentKernel};
pub use pair::{
    confluent_partners, first_order_partners, hamiltonian_matrix, map_eigenstate, SusyPair,
    TransformOrder,
};
pub use seed::{superpotential_from_seed, SeedData};
