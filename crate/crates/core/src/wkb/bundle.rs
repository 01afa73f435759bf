use serde::{Deserialize, Serialize};

use crate::bl::{BLProfile, Cutoff, ProfileRole};
use crate::data::ProblemData;
use crate::field::SolutionPair;
use crate::fourier::ModeSet;
use crate::geometry::{Side, SlabGeometry};
use crate::grids::Discretization;
use crate::params::PhysicalParams;
use crate::C64;

/// Layer corrector of one order at one interface component:
/// `ṽ = T τ + N n`, pressure `p̃`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LayerTerm {
    pub tangential: BLProfile,
    pub normal: BLProfile,
    pub pressure: BLProfile,
}

impl LayerTerm {
    pub fn zero(side: Side, rate: f64) -> Self {
        LayerTerm {
            tangential: BLProfile::zero(side, ProfileRole::Tangential, rate),
            normal: BLProfile::zero(side, ProfileRole::Normal, rate),
            pressure: BLProfile::zero(side, ProfileRole::Pressure, rate),
        }
    }
}

/// Interface data of the outer problem of one order.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OuterInterfaceData {
    /// Normal-velocity jump per mode and side.
    pub h: Vec<[C64; 2]>,
    /// Stress datum per mode, side and component.
    pub l: Vec<[[C64; 2]; 2]>,
}

/// All terms of one order `j`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OrderTerm {
    pub order: usize,
    pub outer: SolutionPair,
    /// `[top, bottom]`.
    pub layers: [LayerTerm; 2],
    pub interface: OuterInterfaceData,
    /// Constant added to this order's outer pressure so that the normal-jump
    /// datum of order `j + 2` has zero mean.
    pub pressure_shift: C64,
}

impl OrderTerm {
    pub fn layer(&self, side: Side) -> &LayerTerm {
        &self.layers[side.index()]
    }
}

/// Truncated expansion together with the data it was built from.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExpansionBundle {
    pub geometry: SlabGeometry,
    pub params: PhysicalParams,
    pub discretization: Discretization,
    pub cutoff: Cutoff,
    pub data: ProblemData,
    pub orders: Vec<OrderTerm>,
}

impl ExpansionBundle {
    /// Highest order present.
    pub fn order(&self) -> usize {
        self.orders.len().saturating_sub(1)
    }

    pub fn modes(&self) -> ModeSet {
        self.discretization.modes
    }

    /// Degrees `(T, N, p̃)` of each order and side (`None` for structural zeros).
    #[allow(clippy::type_complexity)]
    pub fn degree_table(&self) -> Vec<[(Option<usize>, Option<usize>, Option<usize>); 2]> {
        self.orders
            .iter()
            .map(|o| {
                let d = |l: &LayerTerm| {
                    (
                        l.tangential.degree(),
                        l.normal.degree(),
                        l.pressure.degree(),
                    )
                };
                [d(&o.layers[0]), d(&o.layers[1])]
            })
            .collect()
    }
}
