//! Density -> fields -> potentials, and the way back from a kernel.

use crate::error::{Error, Result};
use crate::numerics::calculus::{differentiate, integrate_cumulative, DiffOrder};
use crate::numerics::field::ScalarField;
use crate::numerics::grid::Grid1D;
use crate::susy::kernel::ConfluentKernel;

use super::model::DensityModel;

/// Nodes where `|Q|` falls below this fraction of `max |Q|` are masked in
/// `beta` and `E-`: both divide by the cumulative charge.
pub const Q_RELATIVE_FLOOR: f64 = 1e-12;

/// Exponent guard for `w = A exp(phi/phi0)`.
const EXP_ARG_LIMIT: f64 = 700.0;

/// The two field branches with their shared ingredients.
#[derive(Debug, Clone)]
pub struct FieldSolutionPair {
    pub e_plus: ScalarField,
    pub e_minus: ScalarField,
    pub q: ScalarField,
    pub beta: ScalarField,
}

/// Cumulative charge on the grid, anchored per the model, point charges
/// entering as steps.
pub fn cumulative_charge(model: &DensityModel, grid: Grid1D) -> Result<ScalarField> {
    let rho = model.sample(grid);
    integrate_cumulative(&rho, model.anchor_point(&grid), &model.jumps())
}

/// `beta = (1/2)(rho/Q - Q/(eps phi0))` with the `Q`-floor mask; returns
/// `(beta, Q)`.
pub fn beta_from_density(model: &DensityModel, grid: Grid1D) -> Result<(ScalarField, ScalarField)> {
    let rho = model.sample(grid);
    let q = cumulative_charge(model, grid)?;
    let q_max = q.max_abs();
    if q_max == 0.0 {
        return Err(Error::DegenerateDensity(
            "cumulative charge vanishes identically".into(),
        ));
    }
    let floor = Q_RELATIVE_FLOOR * q_max;
    let inv_scale = 1.0 / (model.epsilon * model.phi0);
    let rho_over_q = rho.div_masked(&q, floor)?;
    let beta = rho_over_q.zip_map(&q, |rq, qv| 0.5 * (rq - qv * inv_scale))?;
    Ok((beta, q))
}

/// Both field branches: `E+ = Q/eps` (Gauss), `E- = -phi0 rho/Q` (the
/// second root of the consistency quadratic).
pub fn fields_from_density(model: &DensityModel, grid: Grid1D) -> Result<FieldSolutionPair> {
    let (beta, q) = beta_from_density(model, grid)?;
    let rho = model.sample(grid);
    let e_plus = q.scale(1.0 / model.epsilon);
    let floor = Q_RELATIVE_FLOOR * q.max_abs();
    let e_minus = rho.div_masked(&q, floor)?.scale(-model.phi0);
    Ok(FieldSolutionPair { e_plus, e_minus, q, beta })
}

/// Partner potentials along the algebraic route:
///
/// ```text
/// beta' = (1/2) [ (rho' Q - rho^2)/Q^2 - rho/(eps phi0) ]
/// V-    = beta' + beta^2 + eps_energy
/// V+    = V- + 2 rho/(eps phi0)
/// ```
///
/// `beta'` follows from differentiating `beta(rho, Q)` with `Q' = rho`
/// exactly, so no finite difference ever touches the `1/Q` singularity;
/// quadrature of `rho` is the only numerical step. Returns
/// `(v_minus, v_plus, beta, beta_prime)`.
pub fn susy_potentials_from_density(
    model: &DensityModel,
    grid: Grid1D,
    eps_energy: f64,
) -> Result<(ScalarField, ScalarField, ScalarField, ScalarField)> {
    let (beta, q) = beta_from_density(model, grid)?;
    let rho = model.sample(grid);
    let rho_prime = model.sample_derivative(grid);
    let inv_scale = 1.0 / (model.epsilon * model.phi0);
    let floor = Q_RELATIVE_FLOOR * q.max_abs();
    let q_masked = q.masked_where(|_, v| v.abs() <= floor);
    let mut vals = Vec::with_capacity(grid.len());
    let mut valid = Vec::with_capacity(grid.len());
    for k in 0..grid.len() {
        let ok = q_masked.is_valid(k) && rho_prime.is_valid(k);
        valid.push(ok);
        if !ok {
            vals.push(0.0);
            continue;
        }
        let qv = q.value(k);
        let r = rho.value(k);
        let rp = rho_prime.value(k);
        vals.push(0.5 * ((rp * qv - r * r) / (qv * qv) - r * inv_scale));
    }
    let beta_prime = ScalarField::from_masked_values(grid, vals, valid)?;
    let v_minus = beta_prime.add(&beta.mul(&beta)?)?.offset(eps_energy);
    let v_plus = v_minus.add(&rho.scale(2.0 * inv_scale))?;
    Ok((v_minus, v_plus, beta, beta_prime))
}

/// Electrostatic potential `phi(x) = -int_{x_ref}^{x} E dy`, `phi(x_ref) = 0`.
pub fn potential_from_field(e_field: &ScalarField, x_ref: f64) -> Result<ScalarField> {
    Ok(integrate_cumulative(e_field, x_ref, &[])?.scale(-1.0))
}

/// `w = A exp(phi/phi0)`: nodeless by construction; nodes with overflowing
/// exponent are masked.
pub fn w_from_potential(phi: &ScalarField, phi0: f64, a: f64) -> Result<ScalarField> {
    if a == 0.0 {
        return Err(Error::invalid("w scale A must be nonzero"));
    }
    if phi0 == 0.0 {
        return Err(Error::invalid("phi0 must be nonzero"));
    }
    Ok(phi
        .masked_where(|_, v| (v / phi0).abs() > EXP_ARG_LIMIT)
        .map(|v| a * (v / phi0).exp()))
}

/// Recover the seed density from `w`: `u^2 = -w'`.
///
/// A valid kernel has monotone `w` (non-increasing for `u^2 > 0`); nodes
/// where the recovered square is negative beyond `-1e-8 max|u^2|` are
/// flagged (masked), and the construction is rejected when more than 1% of
/// nodes are flagged.
pub fn seed_sq_from_w(w: &ScalarField) -> Result<ScalarField> {
    let u2 = differentiate(w, DiffOrder::First).scale(-1.0);
    let scale = u2.max_abs();
    let tol = 1e-8 * scale;
    let flagged = u2.masked_where(|_, v| v < -tol);
    let bad = flagged.len() - flagged.valid_count();
    if 100 * bad > flagged.len() {
        return Err(Error::InvalidKernel(format!(
            "{bad} of {} nodes have negative recovered u^2: w is not monotone",
            flagged.len()
        )));
    }
    Ok(flagged)
}

/// Charge density and field of a kernel: `rho = eps phi0 eta'`,
/// `E = phi0 eta`. Returns `(rho, e_field)`.
pub fn density_from_kernel(
    kernel: &ConfluentKernel,
    epsilon: f64,
    phi0: f64,
) -> (ScalarField, ScalarField) {
    let rho = kernel.eta_prime().scale(epsilon * phi0);
    let e_field = kernel.eta().scale(phi0);
    (rho, e_field)
}
