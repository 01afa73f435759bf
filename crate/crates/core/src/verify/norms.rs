//! Subdomain and interface norms via Parseval in `x` and quadrature in `y`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::{ProfileSamples, SolutionPair};
use crate::fourier::ModeSet;
use crate::geometry::{Side, Subdomain};
use crate::C64;

/// Squared norms of a velocity/pressure pair over one strip.
#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
pub struct StripNorms {
    /// `‖v‖²₀`.
    pub l2_sq: f64,
    /// `‖∇v‖²₀`.
    pub grad_sq: f64,
    /// `‖d(v)‖²₀` with `d(v)` the symmetric gradient.
    pub sym_grad_sq: f64,
    /// `‖p‖²₀`.
    pub pressure_sq: f64,
}

impl StripNorms {
    /// `‖v‖²₁ = ‖v‖²₀ + ‖∇v‖²₀`.
    pub fn h1_sq(&self) -> f64 {
        self.l2_sq + self.grad_sq
    }

    pub fn add(&self, o: &StripNorms) -> StripNorms {
        StripNorms {
            l2_sq: self.l2_sq + o.l2_sq,
            grad_sq: self.grad_sq + o.grad_sq,
            sym_grad_sq: self.sym_grad_sq + o.sym_grad_sq,
            pressure_sq: self.pressure_sq + o.pressure_sq,
        }
    }
}

/// All norms of a solution pair.
#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
pub struct NormSet {
    /// Indexed by [`Subdomain::index`].
    pub strips: [StripNorms; 3],
    /// `‖[v]‖²₀` per interface component (`[top, bottom]`).
    pub jump_sq: [f64; 2],
    /// `‖[v·n]‖²₀` per interface component.
    pub jump_normal_sq: [f64; 2],
    /// `‖{v·n}‖²₀` per interface component.
    pub avg_normal_sq: [f64; 2],
}

impl NormSet {
    pub fn strip(&self, sub: Subdomain) -> &StripNorms {
        &self.strips[sub.index()]
    }

    /// Both fluid strips together.
    pub fn fluid(&self) -> StripNorms {
        self.strip(Subdomain::FluidTop)
            .add(self.strip(Subdomain::FluidBottom))
    }

    pub fn porous(&self) -> StripNorms {
        *self.strip(Subdomain::Porous)
    }

    pub fn jump_sq_total(&self) -> f64 {
        self.jump_sq.iter().sum()
    }

    pub fn jump_normal_sq_total(&self) -> f64 {
        self.jump_normal_sq.iter().sum()
    }

    pub fn avg_normal_sq_total(&self) -> f64 {
        self.avg_normal_sq.iter().sum()
    }
}

/// Strip norms of per-mode samples at quadrature points with weights `weights`.
pub fn sample_norms(
    samples: &[ProfileSamples],
    weights: &[f64],
    modes: ModeSet,
    period: f64,
) -> Result<StripNorms> {
    if samples.len() != modes.len() {
        return Err(Error::invalid("one sample set per mode is required"));
    }
    let mut out = StripNorms::default();
    for (i, s) in samples.iter().enumerate() {
        if s.len() != weights.len() {
            return Err(Error::invalid(
                "samples and quadrature weights differ in length",
            ));
        }
        let ixi = C64::new(0.0, ModeSet::wavenumber(modes.mode(i), period));
        for (q, &w) in weights.iter().enumerate() {
            let (u, v) = (s.u[q], s.v[q]);
            let ux = ixi * u;
            let vx = ixi * v;
            let (uy, vy) = (s.du[q], s.dv[q]);
            out.l2_sq += w * (u.norm_sqr() + v.norm_sqr());
            out.grad_sq += w * (ux.norm_sqr() + uy.norm_sqr() + vx.norm_sqr() + vy.norm_sqr());
            out.sym_grad_sq += w * (ux.norm_sqr() + vy.norm_sqr() + 0.5 * (uy + vx).norm_sqr());
            out.pressure_sq += w * s.p[q].norm_sqr();
        }
    }
    out.l2_sq *= period;
    out.grad_sq *= period;
    out.sym_grad_sq *= period;
    out.pressure_sq *= period;
    Ok(out)
}

/// Norms of a discrete solution, using Clenshaw–Curtis weights on its own grids.
pub fn compute_norms(sol: &SolutionPair) -> Result<NormSet> {
    sol.validate()?;
    sol.grids.check_geometry(&sol.geometry)?;
    let period = sol.geometry.period;
    let mut out = NormSet::default();
    for sub in Subdomain::ALL {
        let g = sol.grids.get(sub);
        let samples = sol.sample(sub, &g.nodes)?;
        out.strips[sub.index()] = sample_norms(&samples, &g.weights, sol.modes, period)?;
    }
    for side in Side::BOTH {
        let k = side.index();
        let s = side.normal_sign();
        for i in 0..sol.modes.len() {
            let t = sol.interface_trace(i, side);
            let (du, dv) = (t.plus.u - t.minus.u, t.plus.v - t.minus.v);
            out.jump_sq[k] += period * (du.norm_sqr() + dv.norm_sqr());
            out.jump_normal_sq[k] += period * (s * dv).norm_sqr();
            out.avg_normal_sq[k] += period * (0.5 * s * (t.plus.v + t.minus.v)).norm_sqr();
        }
    }
    Ok(out)
}
