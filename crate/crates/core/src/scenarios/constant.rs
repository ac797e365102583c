//! Constant charge density `rho0` filling a dielectric slab `[-d, d]`,
//! worked per region on the half line `(0, d]`.
//!
//! With `omega = rho0/(eps phi0)` the bridge gives `beta = (1/x - omega x)/2`
//! and an isotonic partner potential. The closed-form `V-` used as oracle is
//! the one `beta' + beta^2` actually produces,
//! `(omega^2/4) x^2 - 1/(4 x^2) - omega`; the harmonic coefficient is
//! `omega^2/4`, not `omega^2` (see the result note).

use std::collections::BTreeMap;

use crate::electrostatics::{
    fields_from_density, susy_potentials_from_density, ChargeAnchor, DensityModel, SmoothDensity,
};
use crate::error::{Error, Result};
use crate::numerics::field::ScalarField;
use crate::numerics::grid::Grid1D;
use crate::susy::kernel::ConfluentKernel;
use crate::susy::pair::{SusyPair, TransformOrder};
use crate::susy::seed::SeedData;

use super::{OracleKey, ScenarioResult};

/// Slab of constant density on the half line. The grid must avoid the
/// origin (the partner potential carries a centrifugal `-1/(4x^2)` term)
/// and must stay inside the box: `x_max <= d`.
pub fn constant_density_scenario(
    rho0: f64,
    epsilon: f64,
    phi0: f64,
    d: f64,
    grid: Grid1D,
) -> Result<ScenarioResult> {
    if !(rho0 > 0.0) {
        return Err(Error::invalid("slab density rho0 must be positive"));
    }
    if !(d > 0.0) {
        return Err(Error::invalid("slab half-width d must be positive"));
    }
    if !grid.origin_shifted() || grid.span_start() != 0.0 {
        return Err(Error::invalid(
            "constant-density scenario needs an origin-avoiding half-line grid starting at 0",
        ));
    }
    if grid.span_end() > d * (1.0 + 1e-12) {
        return Err(Error::invalid(format!(
            "grid extends to {} beyond the slab half-width {d}",
            grid.span_end()
        )));
    }
    let omega = rho0 / (epsilon * phi0);
    let model = DensityModel::new(
        SmoothDensity::Constant { rho0, half_width: d },
        vec![],
        epsilon,
        phi0,
        (0.0, grid.span_end()),
        ChargeAnchor::Origin,
    )?;
    let fields = fields_from_density(&model, grid)?;
    let (v_minus, v_plus, beta, _) = susy_potentials_from_density(&model, grid, 0.0)?;

    // literal seed square omega x e^{-omega x^2/2} is negative for the
    // slab's omega < 0 branch; the sign flag carries that
    let log_u2 = ScalarField::from_fn(grid, |x| (omega.abs() * x).ln() - omega * x * x / 2.0);
    let seed = SeedData::new(log_u2, omega.signum(), 0.0, false)?;

    let w = ScalarField::from_fn(grid, |x| (-omega * x * x / 2.0).exp());
    let eta = ScalarField::from_fn(grid, |x| omega * x);
    // gamma = eps - V- - beta eta with eps = 0
    let gamma = v_minus.scale(-1.0).sub(&beta.mul(&eta)?)?;
    let kernel = ConfluentKernel::from_fields(w, eta, gamma, 1.0, 0.0)?;
    let pair = SusyPair::from_parts(
        v_minus,
        v_plus,
        TransformOrder::Two,
        seed,
        Some(kernel.clone()),
        0.0,
    )?;

    let mut oracles = BTreeMap::new();
    oracles.insert(OracleKey::Rho, ScalarField::constant(grid, rho0));
    oracles.insert(
        OracleKey::EPlus,
        ScalarField::from_fn(grid, |x| rho0 * x / epsilon),
    );
    oracles.insert(OracleKey::EMinus, ScalarField::from_fn(grid, |x| -phi0 / x));
    oracles.insert(
        OracleKey::VMinus,
        ScalarField::from_fn(grid, |x| {
            omega * omega / 4.0 * x * x - 1.0 / (4.0 * x * x) - omega
        }),
    );
    oracles.insert(
        OracleKey::VPlus,
        ScalarField::from_fn(grid, |x| {
            omega * omega / 4.0 * x * x - 1.0 / (4.0 * x * x) + omega
        }),
    );
    oracles.insert(
        OracleKey::U2,
        ScalarField::from_fn(grid, |x| omega * x * (-omega * x * x / 2.0).exp()),
    );
    oracles.insert(
        OracleKey::W,
        ScalarField::from_fn(grid, |x| (-omega * x * x / 2.0).exp()),
    );
    oracles.insert(OracleKey::Eta, ScalarField::from_fn(grid, |x| omega * x));

    let mut params = BTreeMap::new();
    params.insert("rho0".into(), rho0);
    params.insert("epsilon".into(), epsilon);
    params.insert("phi0".into(), phi0);
    params.insert("d".into(), d);
    params.insert("omega".into(), omega);

    Ok(ScenarioResult {
        id: "constant".into(),
        model,
        fields,
        pair,
        kernel,
        oracles,
        params,
        notes: vec![
            "v_minus oracle is the symbolic beta' + beta^2 with beta = (1/x - omega x)/2: \
             the harmonic term is (omega^2/4) x^2"
                .into(),
            "e_minus = -phi0/x is the second root of the consistency quadratic; it does not \
             satisfy Gauss's law for this density and is stored without physical endorsement"
                .into(),
        ],
    })
}

/// `phi0` fixed by field continuity at the slab surface: `-rho0 d^2 / eps`.
pub fn continuity_phi0(rho0: f64, epsilon: f64, d: f64) -> f64 {
    -rho0 * d * d / epsilon
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn fig_params() -> ScenarioResult {
        // rho0 = eps = 1, phi0 = -1 (omega = -1)
        let g = Grid1D::avoiding_origin(0.0, 10.0, 2001).unwrap();
        constant_density_scenario(1.0, 1.0, -1.0, 10.0, g).unwrap()
    }

    #[test]
    fn field_values_inside_the_slab() {
        let r = fig_params();
        let k2 = r.grid().nearest_node(2.0);
        assert_abs_diff_eq!(r.fields.e_plus.value(k2), r.grid().node(k2), epsilon = 1e-10);
        assert_abs_diff_eq!(
            r.fields.e_minus.value(k2),
            1.0 / r.grid().node(k2),
            epsilon = 1e-10
        );
        assert_eq!(r.params["omega"], -1.0);
    }

    #[test]
    fn pipeline_potentials_match_derived_oracle() {
        let r = fig_params();
        let oracle = &r.oracles[&OracleKey::VMinus];
        let vm = r.pair.v_minus();
        let mut worst = 0.0f64;
        for k in 0..r.grid().len() {
            worst = worst.max((vm.value(k) - oracle.value(k)).abs() / oracle.value(k).abs().max(1.0));
        }
        assert!(worst <= 1e-6, "V- vs oracle relative {worst}");
    }

    #[test]
    fn centrifugal_term_near_origin() {
        let r = fig_params();
        let x0 = r.grid().node(0);
        let v0 = r.pair.v_minus().value(0);
        assert!(
            (v0 * x0 * x0 + 0.25).abs() <= 0.01 * 0.25,
            "V(x) x^2 -> -1/4: got {}",
            v0 * x0 * x0
        );
    }

    #[test]
    fn grid_requirements() {
        let plain = Grid1D::new(0.0, 10.0, 101).unwrap();
        assert!(constant_density_scenario(1.0, 1.0, -1.0, 10.0, plain).is_err());
        let beyond = Grid1D::avoiding_origin(0.0, 12.0, 101).unwrap();
        assert!(constant_density_scenario(1.0, 1.0, -1.0, 10.0, beyond).is_err());
    }

    #[test]
    fn continuity_convention() {
        assert_eq!(continuity_phi0(1.0, 1.0, 1.0), -1.0);
        assert_eq!(continuity_phi0(2.0, 1.0, 3.0), -18.0);
    }
}
