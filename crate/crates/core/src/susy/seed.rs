//! Seed solutions stored as `ln u^2` with a sign flag.

use crate::error::{Error, Result};
use crate::numerics::calculus::{differentiate, DiffOrder};
use crate::numerics::field::ScalarField;

/// Seed solution of `H^- u = eps u` used to drive a transformation.
///
/// Only `u^2` and `u'/u` enter any formula in scope, so the seed keeps
/// `ln|u^2|` (finite wherever `u` does not vanish; nodes where it would
/// diverge are masked) and a global sign of `u^2`. A constant sign is the
/// nodeless requirement: a sign change inside the domain is not even
/// representable.
#[derive(Debug, Clone)]
pub struct SeedData {
    log_u2: ScalarField,
    sign_u2: f64,
    epsilon: f64,
    normalized: bool,
}

impl SeedData {
    /// `sign_u2` must be `+1` or `-1`; set `normalized` only when
    /// `int u^2 = 1` holds for the underlying closed form.
    pub fn new(log_u2: ScalarField, sign_u2: f64, epsilon: f64, normalized: bool) -> Result<Self> {
        if sign_u2 != 1.0 && sign_u2 != -1.0 {
            return Err(Error::invalid("sign_u2 must be +1 or -1"));
        }
        if !epsilon.is_finite() {
            return Err(Error::invalid("factorization energy must be finite"));
        }
        Ok(SeedData { log_u2, sign_u2, epsilon, normalized })
    }

    /// Seed from positive `u^2` samples; nodes with `u^2 <= floor` are masked.
    pub fn from_u_squared(u2: &ScalarField, epsilon: f64, normalized: bool) -> Result<Self> {
        let floor = 1e-300;
        let log = u2.masked_where(|_, v| v <= floor).map(f64::ln);
        SeedData::new(log, 1.0, epsilon, normalized)
    }

    pub fn log_u2(&self) -> &ScalarField {
        &self.log_u2
    }

    pub fn sign_u2(&self) -> f64 {
        self.sign_u2
    }

    pub fn epsilon(&self) -> f64 {
        self.epsilon
    }

    pub fn is_normalized(&self) -> bool {
        self.normalized
    }

    /// Signed `u^2 = sign * exp(ln|u^2|)`. A masked log node means `u^2`
    /// sits below the representable floor, so the square is 0 there and
    /// the output carries no mask.
    pub fn u_squared(&self) -> ScalarField {
        let s = self.sign_u2;
        let vals = (0..self.log_u2.len())
            .map(|k| {
                if self.log_u2.is_valid(k) {
                    s * self.log_u2.value(k).exp()
                } else {
                    0.0
                }
            })
            .collect();
        ScalarField::from_values(*self.log_u2.grid(), vals).expect("exp of finite log is finite")
    }

    /// `|u| = exp(ln|u^2| / 2)`, 0 at masked nodes.
    pub fn u_abs(&self) -> ScalarField {
        let vals = (0..self.log_u2.len())
            .map(|k| {
                if self.log_u2.is_valid(k) {
                    (0.5 * self.log_u2.value(k)).exp()
                } else {
                    0.0
                }
            })
            .collect();
        ScalarField::from_values(*self.log_u2.grid(), vals).expect("exp of finite log is finite")
    }

    /// Logarithmic derivative `beta = u'/u = (ln u^2)'/2` by finite
    /// differences.
    pub fn beta(&self) -> ScalarField {
        differentiate(&self.log_u2, DiffOrder::First).scale(0.5)
    }

    /// The seed has masked interior nodes (interpreted as zeros of `u`).
    pub fn has_interior_zeros(&self) -> bool {
        (1..self.log_u2.len().saturating_sub(1)).any(|k| !self.log_u2.is_valid(k))
    }
}

/// Superpotential `alpha = -u'/u` of the first-order transformation.
pub fn superpotential_from_seed(seed: &SeedData) -> ScalarField {
    seed.beta().scale(-1.0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::grid::Grid1D;
    use approx::assert_abs_diff_eq;

    #[test]
    fn gaussian_seed_superpotential_is_x() {
        // u = exp(-x^2/2)  =>  ln u^2 = -x^2, alpha = x
        let g = Grid1D::new(-4.0, 4.0, 801).unwrap();
        let log = ScalarField::from_fn(g, |x| -x * x);
        let seed = SeedData::new(log, 1.0, 0.0, true).unwrap();
        let alpha = superpotential_from_seed(&seed);
        for k in (0..g.len()).step_by(50) {
            assert_abs_diff_eq!(alpha.value(k), g.node(k), epsilon = 1e-10);
        }
    }

    #[test]
    fn exponential_seed_constant_superpotential() {
        // u = exp(-sigma x / (2 eps phi0)) with unit constants: alpha = 1/2
        let g = Grid1D::avoiding_origin(0.0, 10.0, 1001).unwrap();
        let log = ScalarField::from_fn(g, |x| -x);
        let seed = SeedData::new(log, 1.0, 0.0, true).unwrap();
        let alpha = superpotential_from_seed(&seed);
        for k in (0..g.len()).step_by(100) {
            assert_abs_diff_eq!(alpha.value(k), 0.5, epsilon = 1e-12);
        }
    }

    #[test]
    fn sqrt_x_gaussian_seed_superpotential() {
        // u = sqrt(x) e^{-omega x^2/4}, omega = -1: alpha = -1/(2x) - x/2,
        // oracle from differentiating ln u^2 = ln x - omega x^2/2 symbolically
        let g = Grid1D::avoiding_origin(0.0, 6.0, 4001).unwrap();
        let om = -1.0f64;
        let log = ScalarField::from_fn(g, |x| x.ln() - om * x * x / 2.0);
        let seed = SeedData::new(log, -1.0, 0.0, false).unwrap();
        let alpha = superpotential_from_seed(&seed);
        for k in (400..g.len()).step_by(300) {
            let x = g.node(k);
            let want = -1.0 / (2.0 * x) + om * x / 2.0;
            assert_abs_diff_eq!(alpha.value(k), want, epsilon = 1e-5);
        }
    }

    #[test]
    fn signed_square_and_magnitude() {
        let g = Grid1D::new(1.0, 2.0, 11).unwrap();
        let log = ScalarField::from_fn(g, |x| x.ln());
        let seed = SeedData::new(log, -1.0, 0.0, false).unwrap();
        assert_abs_diff_eq!(seed.u_squared().value(0), -1.0, epsilon = 1e-14);
        assert_abs_diff_eq!(seed.u_abs().value(0), 1.0, epsilon = 1e-14);
        assert!(SeedData::new(ScalarField::zeros(g), 0.5, 0.0, false).is_err());
    }
}
