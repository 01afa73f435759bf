//! Porous divergence of the truncated expansion.
//!
//! The layer divergence chain telescopes the divergence of
//! `Σ_{j≤k} ε^{j/2} (v̄_j + ṽ_j(·, d/√ε))` to the single term
//! `ε^{k/2} (∇·ṽ_k)(·, d/√ε)`, where the divergence is taken at fixed `z`.
//! Both sides are evaluated independently here.

use serde::{Deserialize, Serialize};

use crate::bl::BLProfile;
use crate::error::{Error, Result};
use crate::fourier::ModeSet;
use crate::geometry::{Side, Subdomain};
use crate::params::check_eps;
use crate::wkb::{ExpansionBundle, ExpansionSampler};
use crate::C64;

use super::fit::{fit_slope, SlopeFit};
use super::remainder::{measurement_grid, PANEL_POINTS};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DivergenceDefect {
    pub eps: f64,
    pub k: usize,
    /// `‖∇·(truncated expansion)‖₀` over the porous strip, summed order by order.
    pub direct: f64,
    /// Same with the outer terms left out (their divergence vanishes exactly).
    pub direct_layer_only: f64,
    /// `‖ε^{k/2} ∇·ṽ_k(·, d/√ε)‖₀`.
    pub closed_form: f64,
}

impl DivergenceDefect {
    /// `|direct - closed_form| / closed_form`; zero when both vanish.
    pub fn relative_difference(&self) -> f64 {
        rel(self.direct, self.closed_form)
    }

    pub fn relative_difference_layer_only(&self) -> f64 {
        rel(self.direct_layer_only, self.closed_form)
    }
}

fn rel(a: f64, b: f64) -> f64 {
    if a == 0.0 && b == 0.0 {
        0.0
    } else {
        (a - b).abs() / b.abs().max(a.abs())
    }
}

fn squared_norm(vals: &[Vec<C64>], weights: &[f64], period: f64) -> f64 {
    period
        * vals
            .iter()
            .map(|m| {
                m.iter()
                    .zip(weights)
                    .map(|(v, w)| w * v.norm_sqr())
                    .sum::<f64>()
            })
            .sum::<f64>()
}

/// Evaluates both divergence paths at truncation order `k`.
pub fn divergence_defect(bundle: &ExpansionBundle, k: usize, eps: f64) -> Result<DivergenceDefect> {
    check_eps(eps)?;
    let modes = bundle.modes();
    let period = bundle.geometry.period;
    let grid = measurement_grid(bundle, eps, PANEL_POINTS)?;
    let q = grid.get(Subdomain::Porous);
    let xis: Vec<f64> = modes
        .modes()
        .map(|m| ModeSet::wavenumber(m, period))
        .collect();

    let mut sampler = ExpansionSampler::new(bundle, k, eps)?;
    let div_of = |sampler: &ExpansionSampler| -> Result<f64> {
        let s = sampler.sample(Subdomain::Porous, &q.points)?;
        let div: Vec<Vec<C64>> = s
            .iter()
            .zip(&xis)
            .map(|(m, &xi)| {
                m.u.iter()
                    .zip(&m.dv)
                    .map(|(u, dv)| C64::new(0.0, xi) * u + dv)
                    .collect()
            })
            .collect();
        Ok(squared_norm(&div, &q.weights, period).sqrt())
    };
    let direct = div_of(&sampler)?;
    sampler.include_outer = false;
    let direct_layer_only = div_of(&sampler)?;

    // Fixed-z divergence of (T, sN): ∂_x T - ∂_d N.
    let order = &bundle.orders[k];
    let mut closed = vec![vec![C64::new(0.0, 0.0); q.len()]; modes.len()];
    let scale = eps.powf(0.5 * k as f64);
    for side in Side::BOTH {
        let lay = order.layer(side);
        let dx_t = lay.tangential.map_coeffs(|c| c.dx(modes, period));
        let dd_n = lay.normal.map_coeffs(|c| c.dd());
        let div = dx_t.add(&dd_n.scale(C64::new(-1.0, 0.0)).with_role(dx_t.role))?;
        if div.is_structural_zero() {
            continue;
        }
        let jet = jet_len(&div);
        for (p, &y) in q.points.iter().enumerate() {
            let d = bundle.geometry.distance(side, y);
            if d >= bundle.cutoff.outer {
                continue;
            }
            let chi = bundle.cutoff.jet(d, jet);
            let z = d / eps.sqrt();
            for (i, row) in closed.iter_mut().enumerate() {
                row[p] += scale * div.eval_mode(i, &chi, z);
            }
        }
    }
    let closed_form = squared_norm(&closed, &q.weights, period).sqrt();
    if !(direct.is_finite() && closed_form.is_finite()) {
        return Err(Error::internal("non-finite divergence norm"));
    }
    Ok(DivergenceDefect {
        eps,
        k,
        direct,
        direct_layer_only,
        closed_form,
    })
}

fn jet_len(p: &BLProfile) -> usize {
    p.coeffs.iter().map(|c| c.jet_len()).max().unwrap_or(1)
}

/// Fitted ε-exponent of the closed-form divergence defect against the
/// layer-integral prediction `k/2 + 1/4`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DivergenceScaling {
    pub k: usize,
    pub defects: Vec<DivergenceDefect>,
    pub fit: SlopeFit,
    pub predicted: f64,
}

pub fn divergence_scaling(
    bundle: &ExpansionBundle,
    k: usize,
    eps_list: &[f64],
) -> Result<DivergenceScaling> {
    let defects: Vec<DivergenceDefect> = eps_list
        .iter()
        .map(|&e| divergence_defect(bundle, k, e))
        .collect::<Result<_>>()?;
    let eps: Vec<f64> = defects.iter().map(|d| d.eps).collect();
    let vals: Vec<f64> = defects.iter().map(|d| d.closed_form).collect();
    let fit = fit_slope(&eps, &vals, &vec![true; eps.len()])?;
    Ok(DivergenceScaling {
        k,
        defects,
        fit,
        predicted: 0.5 * k as f64 + 0.25,
    })
}
