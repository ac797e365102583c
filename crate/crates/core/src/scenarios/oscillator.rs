//! Shifted harmonic oscillator `V- = omega^2 x^2 - omega`: the solvable
//! potential whose confluent transformation is inverted into a charge
//! density.
//!
//! Seed: the normalized ground state, `u^2 = sqrt(omega/pi) e^{-omega x^2}`.
//! Then `w = -(1/2) erfc(-sqrt(omega) x)` (the complement form never
//! cancels in the left tail, where `1 + erf` loses all digits) and
//!
//! ```text
//! q(x)   = sqrt(omega/pi) e^{-omega x^2} / erfc(-sqrt(omega) x)
//! eta    = -2 q
//! rho    = 4 eps phi0 q (omega x + q)
//! ```
//!
//! `rho -> 2 omega eps phi0` on the left and `-> 0` on the right; the total
//! charge diverges, so the cumulative charge is anchored at the right edge
//! where the field vanishes.

use std::collections::BTreeMap;

use crate::electrostatics::{fields_from_density, ChargeAnchor, DensityModel, SmoothDensity};
use crate::error::{Error, Result};
use crate::numerics::field::ScalarField;
use crate::numerics::grid::Grid1D;
use crate::numerics::special::{erfc, ln_erfc};
use crate::susy::kernel::ConfluentKernel;
use crate::susy::pair::confluent_partners;
use crate::susy::seed::SeedData;

use super::{OracleKey, ScenarioResult};

/// `q(x)` evaluated through logarithms: stable wherever the result itself
/// is representable, even when numerator and denominator both underflow.
fn log_q(x: f64, omega: f64) -> f64 {
    0.5 * (omega / std::f64::consts::PI).ln() - omega * x * x - ln_erfc(-omega.sqrt() * x)
}

/// Closed-form charge density of the oscillator transformation.
pub fn oscillator_rho_closed(x: f64, omega: f64, epsilon: f64, phi0: f64) -> f64 {
    let q = log_q(x, omega).exp();
    4.0 * epsilon * phi0 * q * (omega * x + q)
}

pub fn oscillator_scenario(
    omega: f64,
    epsilon: f64,
    phi0: f64,
    grid: Grid1D,
) -> Result<ScenarioResult> {
    if !(omega > 0.0) {
        return Err(Error::invalid("oscillator frequency omega must be positive"));
    }
    let pi = std::f64::consts::PI;
    let sq = omega.sqrt();

    // density model: closed-form samples, field anchored where it vanishes
    let rho = ScalarField::from_fn(grid, |x| oscillator_rho_closed(x, omega, epsilon, phi0));
    let model = DensityModel::new(
        SmoothDensity::Tabulated {
            xs: grid.nodes().collect(),
            rhos: rho.values().to_vec(),
        },
        vec![],
        epsilon,
        phi0,
        (grid.span_start(), grid.span_end()),
        ChargeAnchor::RightEdge,
    )?;
    let fields = fields_from_density(&model, grid)?;

    let log_u2 = ScalarField::from_fn(grid, |x| 0.5 * (omega / pi).ln() - omega * x * x);
    let seed = SeedData::new(log_u2, 1.0, 0.0, true)?;

    // w0 = 0 with x0 at -infinity; on the grid, w = -erfc(-sqrt(omega) x)/2.
    // Masked where erfc itself underflows (only on very wide grids).
    let w = ScalarField::from_fn(grid, |x| -0.5 * erfc(-sq * x)).masked_where(|_, v| v == 0.0);
    let eta = ScalarField::from_fn(grid, |x| -2.0 * log_q(x, omega).exp());
    // gamma = eps - V- - beta eta, with beta = -omega x and eps = 0
    let gamma = eta.zip_map(
        &ScalarField::from_fn(grid, |x| x),
        |e, x| omega - omega * omega * x * x + omega * x * e,
    )?;
    let kernel = ConfluentKernel::from_fields(w, eta, gamma, 0.0, f64::NEG_INFINITY)?;
    let pair = confluent_partners(&seed, &kernel)?;

    let mut oracles = BTreeMap::new();
    oracles.insert(OracleKey::Rho, rho.clone());
    oracles.insert(
        OracleKey::EPlus,
        ScalarField::from_fn(grid, |x| -2.0 * phi0 * log_q(x, omega).exp()),
    );
    oracles.insert(
        OracleKey::VMinus,
        ScalarField::from_fn(grid, |x| omega * omega * x * x - omega),
    );
    oracles.insert(
        OracleKey::VPlus,
        ScalarField::from_fn(grid, |x| {
            omega * omega * x * x - omega
                + 2.0 * oscillator_rho_closed(x, omega, epsilon, phi0) / (epsilon * phi0)
        }),
    );
    oracles.insert(
        OracleKey::U2,
        ScalarField::from_fn(grid, |x| (omega / pi).sqrt() * (-omega * x * x).exp()),
    );
    oracles.insert(
        OracleKey::W,
        ScalarField::from_fn(grid, |x| -0.5 * erfc(-sq * x)),
    );
    oracles.insert(
        OracleKey::Eta,
        ScalarField::from_fn(grid, |x| -2.0 * log_q(x, omega).exp()),
    );

    let mut params = BTreeMap::new();
    params.insert("omega".into(), omega);
    params.insert("epsilon".into(), epsilon);
    params.insert("phi0".into(), phi0);

    Ok(ScenarioResult {
        id: "oscillator".into(),
        model,
        fields,
        pair,
        kernel,
        oracles,
        params,
        notes: vec![
            "total charge diverges on the left; the cumulative charge is anchored at the \
             right edge, where the field vanishes"
                .into(),
        ],
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use std::f64::consts::PI;

    fn unit_scenario() -> ScenarioResult {
        let g = Grid1D::new(-8.0, 8.0, 2001).unwrap();
        oscillator_scenario(1.0, 1.0, 1.0, g).unwrap()
    }

    #[test]
    fn closed_form_reference_values() {
        // mpmath at 50 digits
        assert_abs_diff_eq!(
            oscillator_rho_closed(0.0, 1.0, 1.0, 1.0),
            4.0 / PI,
            epsilon = 1e-12
        );
        assert_abs_diff_eq!(
            oscillator_rho_closed(-8.0, 1.0, 1.0, 1.0),
            1.9850632640545383,
            epsilon = 1e-10
        );
        assert!(oscillator_rho_closed(8.0, 1.0, 1.0, 1.0).abs() < 1e-20);
        // the left-tail limit is 2 omega eps phi0; at x = -40 the gap is
        // below 1e-3 (mpmath: 1.999376168833084547)
        assert_abs_diff_eq!(
            oscillator_rho_closed(-40.0, 1.0, 1.0, 1.0),
            1.999376168833084547,
            epsilon = 1e-9
        );
    }

    #[test]
    fn kernel_values_at_origin() {
        let r = unit_scenario();
        assert_abs_diff_eq!(r.kernel.w().value_near(0.0), -0.5, epsilon = 1e-15);
        assert_abs_diff_eq!(
            r.kernel.eta().value_near(0.0),
            -2.0 / PI.sqrt(),
            epsilon = 1e-13
        );
        assert_abs_diff_eq!(r.kernel.eta().value(0), -16.123119060068893, epsilon = 1e-9);
    }

    #[test]
    fn partner_potentials() {
        let r = unit_scenario();
        let mid = r.grid().nearest_node(0.0);
        assert_abs_diff_eq!(r.pair.v_minus().value(mid), -1.0, epsilon = 1e-9);
        assert_abs_diff_eq!(
            r.pair.v_plus().value(mid),
            -1.0 + 8.0 / PI,
            epsilon = 1e-4
        );
    }

    #[test]
    fn pipeline_field_matches_eta() {
        // right-anchored Q/eps against phi0 * eta closed form
        let r = unit_scenario();
        let oracle = &r.oracles[&OracleKey::EPlus];
        let max = oracle.max_abs();
        let mut worst = 0.0f64;
        for k in 0..r.grid().len() {
            worst = worst.max((r.fields.e_plus.value(k) - oracle.value(k)).abs());
        }
        assert!(worst / max <= 1e-6, "E+ relative deviation {}", worst / max);
    }

    #[test]
    fn rejects_nonpositive_omega() {
        let g = Grid1D::new(-8.0, 8.0, 101).unwrap();
        assert!(oscillator_scenario(0.0, 1.0, 1.0, g).is_err());
        assert!(oscillator_scenario(-1.0, 1.0, 1.0, g).is_err());
    }
}
