//! Error type shared by every module of the crate.

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    /// A transformation function that must stay single-signed changed sign.
    #[error("nodeless constraint violated near x = {location}: {detail}")]
    NodelessViolation { location: f64, detail: String },

    /// Cumulative charge vanishes identically; `E- = -phi0 rho/Q` and the
    /// superpotential data are undefined.
    #[error("degenerate charge density: {0}")]
    DegenerateDensity(String),

    /// Mapping an eigenstate at the factorization energy of a limit
    /// confluent transformation: that level is deleted from the partner.
    #[error("level E = {energy} coincides with the factorization energy and is deleted from the partner spectrum")]
    DeletedLevel { energy: f64 },

    /// Recovered seed density is too negative on too many nodes to define
    /// a monotone `w`.
    #[error("invalid confluent kernel: {0}")]
    InvalidKernel(String),

    #[error("numerical failure: {0}")]
    NumericalFailure(String),

    /// Fields defined on different grids were combined.
    #[error("grid mismatch: {0}")]
    GridMismatch(String),
}

impl Error {
    pub fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidArgument(msg.into())
    }
}
