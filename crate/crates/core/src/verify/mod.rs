//! Norms, energy functionals, remainders of the truncated expansion and
//! convergence-rate estimation.

pub mod divergence;
pub mod energy;
pub mod fit;
pub mod norms;
pub mod remainder;

pub use divergence::{divergence_defect, divergence_scaling, DivergenceDefect, DivergenceScaling};
pub use energy::{
    energy_check, energy_identity, energy_terms, EnergyIdentity, EnergyReport, EnergyTerms,
};
pub use fit::{fit_slope, SlopeFit, MIN_FIT_POINTS};
pub use norms::{compute_norms, sample_norms, NormSet, StripNorms};
pub use remainder::{
    measurement_grid, refinement_check, remainder_norms, remainder_studies, remainder_study,
    MeasurementGrid, RefinementRecord, RemainderRecord, RemainderReport,
};

use serde::{Deserialize, Serialize};

use crate::data::{random_data, ProblemData, RandomDataOptions};
use crate::geometry::SlabGeometry;
use crate::grids::Discretization;
use crate::params::PhysicalParams;

/// Setup of the convergence and energy studies.
///
/// The porous strip is thick (`b = 2`) and the drag large (`κ = 4`) so that the
/// layers, of width `√(ε/κ)`, are well separated from the cutoff transition at
/// `d = b/4` already at `ε = 10⁻²`; the layer terms times cutoff derivatives are
/// then of size `exp(-√κ b / (4√ε))`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StudyPreset {
    pub geometry: SlabGeometry,
    pub params: PhysicalParams,
    pub discretization: Discretization,
    pub seed: u64,
}

impl Default for StudyPreset {
    fn default() -> Self {
        StudyPreset {
            geometry: SlabGeometry::new(2.0 * std::f64::consts::PI, 1.0, 2.0, 1.0)
                .expect("valid geometry"),
            params: PhysicalParams {
                kappa: 4.0,
                ..Default::default()
            },
            discretization: Discretization::new(4, 32),
            seed: 7,
        }
    }
}

impl StudyPreset {
    /// Analytic random data of the preset.
    pub fn data(&self) -> ProblemData {
        random_data(
            self.seed,
            self.discretization.modes,
            RandomDataOptions::default(),
        )
    }
}

/// ε grid of the remainder studies.
pub const REMAINDER_EPS: [f64; 5] = [1e-1, 3e-2, 1e-2, 3e-3, 1e-3];
/// ε grid of the energy study.
pub const ENERGY_EPS: [f64; 4] = [1e-1, 1e-2, 1e-3, 1e-4];
