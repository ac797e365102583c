//! The electrostatics side of the correspondence.
//!
//! For a 1-D field in a linear medium, Gauss's law and the Bernoulli
//! equation of the confluent transformation combine into one algebraic
//! statement: with `Q(x)` the cumulative charge,
//!
//! ```text
//! beta = (1/2) (rho/Q - Q/(eps phi0))
//! E+   = Q/eps              (Gauss branch, satisfies the Bernoulli ODE)
//! E-   = -phi0 rho/Q        (second root of the consistency quadratic)
//! ```
//!
//! Both reduced fields `eta± = E±/phi0` are roots of
//! `eta^2 + 2 beta eta = rho/(eps phi0)` identically in `rho` and `Q`; only
//! the `+` branch also satisfies `eta' = rho/(eps phi0)`. The partner
//! potentials follow from `beta` and its algebraic derivative, which keeps
//! quadrature as the only numerical error source even next to centrifugal
//! singularities.

pub mod model;
pub mod ops;

pub use model::{ChargeAnchor, DensityModel, PointCharge, SmoothDensity};
pub use ops::{
    beta_from_density, density_from_kernel, fields_from_density, potential_from_field,
    seed_sq_from_w, susy_potentials_from_density, w_from_potential, FieldSolutionPair,
    Q_RELATIVE_FLOOR,
};
