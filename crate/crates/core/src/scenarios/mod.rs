//! Worked configurations: infinite charged sheet, constant slab density,
//! and the shifted harmonic oscillator, each packaged as a full pipeline
//! result plus independent closed-form oracles for every intermediate
//! quantity. Oracles are evaluated directly from their analytic
//! expressions, never through the pipeline, so oracle-vs-pipeline
//! comparisons measure real numerical error.

pub mod constant;
pub mod oscillator;
pub mod sheet;

use std::collections::BTreeMap;
use std::fmt;

use crate::electrostatics::{DensityModel, FieldSolutionPair};
use crate::numerics::field::ScalarField;
use crate::numerics::grid::Grid1D;
use crate::susy::kernel::ConfluentKernel;
use crate::susy::pair::SusyPair;

pub use constant::constant_density_scenario;
pub use oscillator::{oscillator_rho_closed, oscillator_scenario};
pub use sheet::{sheet_scenario, SheetMode};

/// Fixed vocabulary of oracle quantities.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum OracleKey {
    Rho,
    EPlus,
    EMinus,
    VMinus,
    VPlus,
    U2,
    W,
    Eta,
}

impl OracleKey {
    pub const ALL: [OracleKey; 8] = [
        OracleKey::Rho,
        OracleKey::EPlus,
        OracleKey::EMinus,
        OracleKey::VMinus,
        OracleKey::VPlus,
        OracleKey::U2,
        OracleKey::W,
        OracleKey::Eta,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            OracleKey::Rho => "rho",
            OracleKey::EPlus => "e_plus",
            OracleKey::EMinus => "e_minus",
            OracleKey::VMinus => "v_minus",
            OracleKey::VPlus => "v_plus",
            OracleKey::U2 => "u2",
            OracleKey::W => "w",
            OracleKey::Eta => "eta",
        }
    }
}

impl fmt::Display for OracleKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Complete scenario output: the density model, both field branches, the
/// partner pair, the confluent kernel, closed-form oracles and the named
/// parameters that produced them.
#[derive(Debug, Clone)]
pub struct ScenarioResult {
    pub id: String,
    pub model: DensityModel,
    pub fields: FieldSolutionPair,
    pub pair: SusyPair,
    pub kernel: ConfluentKernel,
    pub oracles: BTreeMap<OracleKey, ScalarField>,
    pub params: BTreeMap<String, f64>,
    pub notes: Vec<String>,
}

impl ScenarioResult {
    pub fn grid(&self) -> &Grid1D {
        self.pair.v_minus().grid()
    }

    pub fn epsilon(&self) -> f64 {
        self.model.epsilon
    }

    pub fn phi0(&self) -> f64 {
        self.model.phi0
    }

    /// Pipeline value a given oracle is compared against.
    pub fn pipeline_quantity(&self, key: OracleKey) -> ScalarField {
        match key {
            OracleKey::Rho => self.model.sample(*self.grid()),
            OracleKey::EPlus => self.fields.e_plus.clone(),
            OracleKey::EMinus => self.fields.e_minus.clone(),
            OracleKey::VMinus => self.pair.v_minus().clone(),
            OracleKey::VPlus => self.pair.v_plus().clone(),
            OracleKey::U2 => self.pair.seed().u_squared(),
            OracleKey::W => self.kernel.w().clone(),
            OracleKey::Eta => self.kernel.eta().clone(),
        }
    }
}
