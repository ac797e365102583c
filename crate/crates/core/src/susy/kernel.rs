//! The confluent kernel `(w, eta, gamma)` and second-order intertwiners.

use crate::error::{Error, Result};
use crate::numerics::calculus::{differentiate, integrate_cumulative, DiffOrder};
use crate::numerics::field::ScalarField;
use crate::susy::seed::SeedData;

/// Data of a confluent second-order transformation.
///
/// `w = w0 - int_{x0}^{x} u^2` must stay single-signed; `eta = -w'/w`
/// solves the Bernoulli equation `eta' = eta^2 + 2 beta eta` and plays the
/// role of the reduced electric field `E/phi0`. `gamma` is the zeroth-order
/// coefficient of the intertwiner `L2^- = d^2/dx^2 + eta d/dx + gamma`.
#[derive(Debug, Clone)]
pub struct ConfluentKernel {
    w: ScalarField,
    eta: ScalarField,
    gamma: ScalarField,
    w0: f64,
    x0: f64,
}

impl ConfluentKernel {
    /// Assemble from precomputed fields. `w` must be nodeless; `eta` and
    /// `gamma` are trusted as given (scenario constructors pass closed
    /// forms here).
    pub fn from_fields(
        w: ScalarField,
        eta: ScalarField,
        gamma: ScalarField,
        w0: f64,
        x0: f64,
    ) -> Result<Self> {
        w.check_same_grid(&eta)?;
        w.check_same_grid(&gamma)?;
        check_nodeless(&w)?;
        Ok(ConfluentKernel { w, eta, gamma, w0, x0 })
    }

    pub fn w(&self) -> &ScalarField {
        &self.w
    }

    pub fn eta(&self) -> &ScalarField {
        &self.eta
    }

    pub fn gamma(&self) -> &ScalarField {
        &self.gamma
    }

    pub fn w0(&self) -> f64 {
        self.w0
    }

    pub fn x0(&self) -> f64 {
        self.x0
    }

    /// `eta'` by finite differences.
    pub fn eta_prime(&self) -> ScalarField {
        differentiate(&self.eta, DiffOrder::First)
    }
}

fn check_nodeless(w: &ScalarField) -> Result<()> {
    let mut sign = 0.0f64;
    for k in 0..w.len() {
        if !w.is_valid(k) {
            continue;
        }
        let v = w.value(k);
        if v == 0.0 {
            return Err(Error::NodelessViolation {
                location: w.x(k),
                detail: "w vanishes on a grid node".into(),
            });
        }
        if sign == 0.0 {
            sign = v.signum();
        } else if v.signum() != sign {
            return Err(Error::NodelessViolation {
                location: w.x(k),
                detail: "w changes sign".into(),
            });
        }
    }
    Ok(())
}

/// Build the kernel from a seed: `w = w0 - int_{x0}^{x} u^2 dy`,
/// `eta = u^2/w` (the identity `w' = -u^2` holds by construction, so the
/// quotient form avoids re-differentiating the quadrature), and `gamma`
/// from its closed expression in `eta`,
/// `gamma = (eta/2)^2 + eta'/2 + (eta'/2eta)^2 - eta''/2eta`.
///
/// A normalized seed integrated from the left edge admits no `w0` in the
/// open interval `(0, 1)`: `w` would cross zero inside the domain.
pub fn build_confluent_kernel(seed: &SeedData, w0: f64, x0: f64) -> Result<ConfluentKernel> {
    let u2 = seed.u_squared();
    let grid = *u2.grid();
    let x0 = if x0 == f64::NEG_INFINITY { grid.span_start() } else { x0 };
    if seed.is_normalized() && w0 > 0.0 && w0 < 1.0 && x0 <= grid.span_start() + grid.spacing() {
        return Err(Error::invalid(format!(
            "w0 = {w0} lies in (0, 1): w = w0 - int u^2 of a normalized seed would cross zero"
        )));
    }
    let accumulated = integrate_cumulative(&u2, x0, &[])?;
    let w = accumulated.map(|a| w0 - a);
    check_nodeless(&w)?;
    let eta = u2.div_masked(&w, 0.0)?;
    let gamma = gamma_from_eta(&eta);
    Ok(ConfluentKernel { w, eta, gamma, w0, x0 })
}

/// `gamma = (eta/2)^2 + eta'/2 + (eta'/2eta)^2 - eta''/2eta`.
///
/// The two `eta`-quotient terms are rewritten through the logarithmic
/// derivatives `l1 = (ln|eta|)'` and `l2 = (ln|eta|)''` as
/// `gamma = eta^2/4 + eta'/2 - l1^2/4 - l2/2`: `eta'/eta = l1` and
/// `eta''/eta = l2 + l1^2` exactly, and `ln|eta|` stays well conditioned
/// where `eta` itself decays by hundreds of orders of magnitude (a nodeless
/// `eta` never changes sign). An identically zero `eta` is the empty
/// transformation, `gamma = 0`; isolated exact zeros (underflow) are masked.
pub fn gamma_from_eta(eta: &ScalarField) -> ScalarField {
    if eta.max_abs() == 0.0 {
        return ScalarField::zeros(*eta.grid()).with_mask_of(eta);
    }
    let ep = differentiate(eta, DiffOrder::First);
    let ln_eta = eta.masked_where(|_, v| v == 0.0).map(|v| v.abs().ln());
    let l1 = differentiate(&ln_eta, DiffOrder::First);
    let l2 = differentiate(&ln_eta, DiffOrder::Second);
    let mut vals = Vec::with_capacity(eta.len());
    let mut valid = Vec::with_capacity(eta.len());
    for k in 0..eta.len() {
        let ok = eta.is_valid(k) && ep.is_valid(k) && l1.is_valid(k) && l2.is_valid(k);
        valid.push(ok);
        if !ok {
            vals.push(0.0);
            continue;
        }
        let e = eta.value(k);
        let a = l1.value(k);
        vals.push(0.25 * e * e + 0.5 * ep.value(k) - 0.25 * a * a - 0.5 * l2.value(k));
    }
    ScalarField::from_masked_values(*eta.grid(), vals, valid).expect("lengths match")
}

/// Apply `L2^- = d^2/dx^2 + eta d/dx + gamma` with the module stencils.
pub fn apply_intertwiner(kernel: &ConfluentKernel, f: &ScalarField) -> Result<ScalarField> {
    f.check_same_grid(kernel.eta())?;
    let fpp = differentiate(f, DiffOrder::Second);
    let fp = differentiate(f, DiffOrder::First);
    fpp.add(&kernel.eta.mul(&fp)?)?.add(&kernel.gamma.mul(f)?)
}

/// Apply the formal adjoint `L2^+ = d^2/dx^2 - eta d/dx + (gamma - eta')`.
pub fn apply_adjoint_intertwiner(kernel: &ConfluentKernel, f: &ScalarField) -> Result<ScalarField> {
    f.check_same_grid(kernel.eta())?;
    let fpp = differentiate(f, DiffOrder::Second);
    let fp = differentiate(f, DiffOrder::First);
    let zero_order = kernel.gamma.sub(&kernel.eta_prime())?;
    fpp.sub(&kernel.eta.mul(&fp)?)?.add(&zero_order.mul(f)?)
}

/// Partner-level state `psi_eps^+ ∝ u/w`, unnormalized; generically not
/// square-integrable (the limit confluent case deletes `eps` from the
/// partner spectrum).
pub fn missing_state(kernel: &ConfluentKernel, seed: &SeedData) -> Result<ScalarField> {
    seed.u_abs().div_masked(kernel.w(), 0.0)
}
