//! Partner potentials and eigenstate mapping.

use crate::error::{Error, Result};
use crate::numerics::calculus::{differentiate, DiffOrder};
use crate::numerics::eigen::TridiagonalOperator;
use crate::numerics::field::ScalarField;
use crate::susy::kernel::{apply_intertwiner, ConfluentKernel};
use crate::susy::seed::{superpotential_from_seed, SeedData};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TransformOrder {
    One,
    Two,
}

/// A complete transformation record: both partner potentials, the seed,
/// and (for second order) the confluent kernel.
#[derive(Debug, Clone)]
pub struct SusyPair {
    v_minus: ScalarField,
    v_plus: ScalarField,
    order: TransformOrder,
    seed: SeedData,
    kernel: Option<ConfluentKernel>,
    epsilon: f64,
}

impl SusyPair {
    /// Assemble from precomputed potentials (scenario constructors use
    /// closed-form routes that beat the finite-difference path near
    /// singular points).
    pub fn from_parts(
        v_minus: ScalarField,
        v_plus: ScalarField,
        order: TransformOrder,
        seed: SeedData,
        kernel: Option<ConfluentKernel>,
        epsilon: f64,
    ) -> Result<Self> {
        v_minus.check_same_grid(&v_plus)?;
        if order == TransformOrder::Two && kernel.is_none() {
            return Err(Error::invalid("second-order pair needs a confluent kernel"));
        }
        Ok(SusyPair { v_minus, v_plus, order, seed, kernel, epsilon })
    }

    pub fn v_minus(&self) -> &ScalarField {
        &self.v_minus
    }

    pub fn v_plus(&self) -> &ScalarField {
        &self.v_plus
    }

    pub fn order(&self) -> TransformOrder {
        self.order
    }

    pub fn seed(&self) -> &SeedData {
        &self.seed
    }

    pub fn kernel(&self) -> Option<&ConfluentKernel> {
        self.kernel.as_ref()
    }

    pub fn epsilon(&self) -> f64 {
        self.epsilon
    }
}

/// First-order partners `V∓ = alpha^2 ∓ alpha' + eps` from a nodeless seed.
pub fn first_order_partners(seed: &SeedData) -> Result<SusyPair> {
    if seed.has_interior_zeros() {
        return Err(Error::NodelessViolation {
            location: f64::NAN,
            detail: "seed u^2 vanishes inside the domain; first-order transformation needs a nodeless seed".into(),
        });
    }
    let alpha = superpotential_from_seed(seed);
    let alpha_prime = differentiate(&alpha, DiffOrder::First);
    let alpha_sq = alpha.mul(&alpha)?;
    let eps = seed.epsilon();
    let v_minus = alpha_sq.sub(&alpha_prime)?.offset(eps);
    let v_plus = alpha_sq.add(&alpha_prime)?.offset(eps);
    SusyPair::from_parts(v_minus, v_plus, TransformOrder::One, seed.clone(), None, eps)
}

/// Confluent partners `V^- = beta' + beta^2 + eps`, `V^+ = V^- + 2 eta'`.
pub fn confluent_partners(seed: &SeedData, kernel: &ConfluentKernel) -> Result<SusyPair> {
    seed.log_u2().check_same_grid(kernel.eta())?;
    let beta = seed.beta();
    let beta_prime = differentiate(&beta, DiffOrder::First);
    let eps = seed.epsilon();
    let v_minus = beta_prime.add(&beta.mul(&beta)?)?.offset(eps);
    let v_plus = v_minus.add(&kernel.eta_prime().scale(2.0))?;
    SusyPair::from_parts(
        v_minus,
        v_plus,
        TransformOrder::Two,
        seed.clone(),
        Some(kernel.clone()),
        eps,
    )
}

/// 3-point discretization of `-d^2/dx^2 + V` with Dirichlet ghost ends.
pub fn hamiltonian_matrix(potential: &ScalarField) -> Result<TridiagonalOperator> {
    TridiagonalOperator::schrodinger(potential)
}

/// Map an `H^-` eigenstate at energy `E` to the partner: apply the
/// intertwiner of the pair's order and renormalize to unit grid norm.
///
/// `E` at the factorization energy is refused: for a limit confluent
/// transformation the level is deleted from the partner spectrum (the
/// partner state at `eps` is `u/w`, see [`crate::susy::missing_state`]).
pub fn map_eigenstate(pair: &SusyPair, psi_minus: &ScalarField, energy: f64) -> Result<ScalarField> {
    let scale = energy.abs().max(pair.epsilon.abs()).max(1.0);
    if (energy - pair.epsilon).abs() <= 1e-9 * scale {
        return Err(Error::DeletedLevel { energy });
    }
    let mapped = match pair.order {
        TransformOrder::Two => {
            let kernel = pair
                .kernel
                .as_ref()
                .expect("second-order pair always carries a kernel");
            apply_intertwiner(kernel, psi_minus)?
        }
        TransformOrder::One => {
            // L1^- = d/dx + alpha
            let alpha = superpotential_from_seed(&pair.seed);
            differentiate(psi_minus, DiffOrder::First).add(&alpha.mul(psi_minus)?)?
        }
    };
    mapped.normalized()
}
