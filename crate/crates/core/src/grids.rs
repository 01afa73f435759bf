//! Discretization settings and the per-strip collocation grids.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fourier::ModeSet;
use crate::geometry::{SlabGeometry, Subdomain};
use crate::params::PhysicalParams;
use crate::spectral::Grid1D;

/// Resolution settings shared by all solvers.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Discretization {
    pub modes: ModeSet,
    /// Collocation points per strip (the porous strip may receive more, see
    /// [`Discretization::porous_points`]).
    pub n_points: usize,
    /// Factor `c` in the porous point count `c·√A + 8`, where
    /// `A = (b/2)·√(κ/ε)` is the layer steepness on the reference interval.
    pub layer_factor: f64,
}

impl Default for Discretization {
    fn default() -> Self {
        Discretization {
            modes: ModeSet::new(8),
            n_points: 48,
            layer_factor: 9.0,
        }
    }
}

impl Discretization {
    pub fn new(n_modes: usize, n_points: usize) -> Self {
        Discretization {
            modes: ModeSet::new(n_modes),
            n_points,
            ..Default::default()
        }
    }

    /// Porous point count resolving layers of width `√(ε/κ)`; grows like `ε^{-1/4}`.
    pub fn porous_points(&self, geom: &SlabGeometry, params: &PhysicalParams, eps: f64) -> usize {
        let steep = 0.5 * geom.porous * (params.kappa / eps).sqrt();
        let layer = (self.layer_factor * steep.sqrt()).ceil() as usize + 8;
        self.n_points.max(layer)
    }

    /// Copy with the point count scaled by `factor` (used for refinement studies).
    pub fn refined(&self, factor: f64) -> Self {
        Discretization {
            n_points: ((self.n_points as f64) * factor).round() as usize,
            layer_factor: self.layer_factor * factor,
            ..*self
        }
    }
}

/// Collocation grids of the three strips.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SlabGrids {
    pub fluid_top: Grid1D,
    pub porous: Grid1D,
    pub fluid_bottom: Grid1D,
}

impl SlabGrids {
    pub fn new(geom: &SlabGeometry, n_fluid: usize, n_porous: usize) -> Result<Self> {
        let mk = |sub: Subdomain, n: usize| {
            let (lo, hi) = geom.interval(sub);
            Grid1D::new(lo, hi, n)
        };
        Ok(SlabGrids {
            fluid_top: mk(Subdomain::FluidTop, n_fluid)?,
            porous: mk(Subdomain::Porous, n_porous)?,
            fluid_bottom: mk(Subdomain::FluidBottom, n_fluid)?,
        })
    }

    /// Grids for the ε-independent problems.
    pub fn uniform(geom: &SlabGeometry, disc: &Discretization) -> Result<Self> {
        SlabGrids::new(geom, disc.n_points, disc.n_points)
    }

    /// Grids for the full problem at viscosity `eps`.
    pub fn for_eps(
        geom: &SlabGeometry,
        params: &PhysicalParams,
        disc: &Discretization,
        eps: f64,
    ) -> Result<Self> {
        SlabGrids::new(geom, disc.n_points, disc.porous_points(geom, params, eps))
    }

    pub fn get(&self, sub: Subdomain) -> &Grid1D {
        match sub {
            Subdomain::FluidTop => &self.fluid_top,
            Subdomain::Porous => &self.porous,
            Subdomain::FluidBottom => &self.fluid_bottom,
        }
    }

    /// Checks that the grids tile the slab of `geom`.
    pub fn check_geometry(&self, geom: &SlabGeometry) -> Result<()> {
        for sub in Subdomain::ALL {
            let (lo, hi) = geom.interval(sub);
            let g = self.get(sub);
            let tol = 1e-12 * (1.0 + lo.abs() + hi.abs());
            if (g.spec.lo - lo).abs() > tol || (g.spec.hi - hi).abs() > tol {
                return Err(Error::invalid(format!(
                    "grid for {sub:?} does not match the geometry"
                )));
            }
        }
        Ok(())
    }
}
