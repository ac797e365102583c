//! Declarative charge-density models.

use crate::error::{Error, Result};
use crate::numerics::field::ScalarField;
use crate::numerics::grid::Grid1D;

/// A point charge carried symbolically: it enters cumulative integrals as
/// a step and is never sampled as a density value.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PointCharge {
    pub position: f64,
    pub charge: f64,
}

/// Smooth part of a density model.
#[derive(Debug, Clone, PartialEq)]
pub enum SmoothDensity {
    /// No smooth charge (point charges only).
    Zero,
    /// `rho0` inside `[-half_width, half_width]`, zero outside.
    Constant { rho0: f64, half_width: f64 },
    /// Gaussian-regularized sheet: `sigma` spread over a normal profile of
    /// standard deviation `width` centered at `center`.
    GaussianSheet { sigma: f64, width: f64, center: f64 },
    /// Samples linearly interpolated onto the run grid; zero outside the
    /// tabulated range. `xs` strictly increasing.
    Tabulated { xs: Vec<f64>, rhos: Vec<f64> },
}

/// Reference point for the cumulative charge `Q(x)`.
///
/// The left edge stands in for `-infinity`. `Origin` integrates outward
/// from `x = 0` (the per-region treatment of symmetric problems); the
/// right edge suits densities whose field vanishes on the right.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ChargeAnchor {
    LeftEdge,
    RightEdge,
    Origin,
}

/// Charge density + medium constants: everything the bridge needs.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityModel {
    pub smooth: SmoothDensity,
    pub point_charges: Vec<PointCharge>,
    pub epsilon: f64,
    pub phi0: f64,
    pub domain: (f64, f64),
    pub anchor: ChargeAnchor,
}

impl DensityModel {
    pub fn new(
        smooth: SmoothDensity,
        point_charges: Vec<PointCharge>,
        epsilon: f64,
        phi0: f64,
        domain: (f64, f64),
        anchor: ChargeAnchor,
    ) -> Result<Self> {
        if !(epsilon > 0.0) {
            return Err(Error::invalid("permittivity must be positive"));
        }
        if phi0 == 0.0 || !phi0.is_finite() {
            return Err(Error::invalid("phi0 must be finite and nonzero"));
        }
        if domain.0 >= domain.1 {
            return Err(Error::invalid("density domain must have positive width"));
        }
        for pc in &point_charges {
            if pc.position < domain.0 || pc.position > domain.1 {
                return Err(Error::invalid(format!(
                    "point charge at {} outside domain [{}, {}]",
                    pc.position, domain.0, domain.1
                )));
            }
        }
        if let SmoothDensity::Tabulated { xs, rhos } = &smooth {
            if xs.len() != rhos.len() || xs.len() < 3 {
                return Err(Error::invalid("tabulated density needs >= 3 (x, rho) rows"));
            }
            if xs.windows(2).any(|w| w[0] >= w[1]) {
                return Err(Error::invalid("tabulated x column must be strictly increasing"));
            }
            if xs.iter().chain(rhos.iter()).any(|v| !v.is_finite()) {
                return Err(Error::invalid("tabulated density contains non-finite entries"));
            }
        }
        Ok(DensityModel { smooth, point_charges, epsilon, phi0, domain, anchor })
    }

    /// Smooth density at a point.
    pub fn rho_at(&self, x: f64) -> f64 {
        match &self.smooth {
            SmoothDensity::Zero => 0.0,
            SmoothDensity::Constant { rho0, half_width } => {
                if x.abs() <= *half_width {
                    *rho0
                } else {
                    0.0
                }
            }
            SmoothDensity::GaussianSheet { sigma, width, center } => {
                let t = (x - center) / width;
                sigma / (width * (2.0 * std::f64::consts::PI).sqrt()) * (-0.5 * t * t).exp()
            }
            SmoothDensity::Tabulated { xs, rhos } => {
                if x < xs[0] || x > *xs.last().expect("non-empty") {
                    return 0.0;
                }
                let j = xs.partition_point(|&t| t <= x).min(xs.len() - 1).max(1) - 1;
                let t = (x - xs[j]) / (xs[j + 1] - xs[j]);
                rhos[j] + t * (rhos[j + 1] - rhos[j])
            }
        }
    }

    /// Smooth density sampled on a grid.
    pub fn sample(&self, grid: Grid1D) -> ScalarField {
        ScalarField::from_fn(grid, |x| self.rho_at(x))
    }

    /// Derivative of the smooth density on a grid: analytic where the model
    /// is analytic, finite differences for tabulated data.
    pub fn sample_derivative(&self, grid: Grid1D) -> ScalarField {
        match &self.smooth {
            SmoothDensity::Zero | SmoothDensity::Constant { .. } => ScalarField::zeros(grid),
            SmoothDensity::GaussianSheet { sigma, width, center } => {
                ScalarField::from_fn(grid, |x| {
                    let t = (x - center) / width;
                    -t / width * sigma / (width * (2.0 * std::f64::consts::PI).sqrt())
                        * (-0.5 * t * t).exp()
                })
            }
            SmoothDensity::Tabulated { .. } => {
                use crate::numerics::calculus::{differentiate, DiffOrder};
                differentiate(&self.sample(grid), DiffOrder::First)
            }
        }
    }

    /// Anchor coordinate for cumulative charge on a given grid.
    pub fn anchor_point(&self, grid: &Grid1D) -> f64 {
        match self.anchor {
            ChargeAnchor::LeftEdge => grid.span_start(),
            ChargeAnchor::RightEdge => grid.span_end(),
            ChargeAnchor::Origin => 0.0,
        }
    }

    /// Point charges as (position, magnitude) jumps.
    pub fn jumps(&self) -> Vec<(f64, f64)> {
        self.point_charges.iter().map(|pc| (pc.position, pc.charge)).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn constant_model_sampling() {
        let m = DensityModel::new(
            SmoothDensity::Constant { rho0: 2.0, half_width: 1.0 },
            vec![],
            1.0,
            1.0,
            (-2.0, 2.0),
            ChargeAnchor::Origin,
        )
        .unwrap();
        assert_eq!(m.rho_at(0.5), 2.0);
        assert_eq!(m.rho_at(1.5), 0.0);
    }

    #[test]
    fn tabulated_interpolation_and_range() {
        let m = DensityModel::new(
            SmoothDensity::Tabulated { xs: vec![0.0, 1.0, 2.0], rhos: vec![0.0, 1.0, 0.0] },
            vec![],
            1.0,
            1.0,
            (0.0, 2.0),
            ChargeAnchor::LeftEdge,
        )
        .unwrap();
        assert!((m.rho_at(0.5) - 0.5).abs() < 1e-12);
        assert!((m.rho_at(1.5) - 0.5).abs() < 1e-12);
        assert_eq!(m.rho_at(2.5), 0.0);
        assert_eq!(m.rho_at(-0.5), 0.0);
    }

    #[test]
    fn validation_errors() {
        assert!(DensityModel::new(
            SmoothDensity::Zero,
            vec![],
            0.0,
            1.0,
            (0.0, 1.0),
            ChargeAnchor::LeftEdge
        )
        .is_err());
        assert!(DensityModel::new(
            SmoothDensity::Zero,
            vec![],
            1.0,
            0.0,
            (0.0, 1.0),
            ChargeAnchor::LeftEdge
        )
        .is_err());
        assert!(DensityModel::new(
            SmoothDensity::Zero,
            vec![PointCharge { position: 5.0, charge: 1.0 }],
            1.0,
            1.0,
            (0.0, 1.0),
            ChargeAnchor::LeftEdge
        )
        .is_err());
        assert!(DensityModel::new(
            SmoothDensity::Tabulated { xs: vec![0.0, 0.0, 1.0], rhos: vec![1.0; 3] },
            vec![],
            1.0,
            1.0,
            (0.0, 1.0),
            ChargeAnchor::LeftEdge
        )
        .is_err());
    }
}
