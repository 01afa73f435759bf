//! Evaluation of the truncated expansion `Σ_{j≤k} ε^{j/2} (v̄_j + ṽ_j(·, d/√ε))`.

use crate::bl::{bl_dz, BLProfile};
use crate::error::{Error, Result};
use crate::field::ProfileSamples;
use crate::fourier::ModeSet;
use crate::geometry::{Side, Subdomain};
use crate::params::check_eps;
use crate::C64;

use super::bundle::ExpansionBundle;

/// Layer profiles of one order and side with the derivatives needed for sampling.
struct LayerPieces {
    side: Side,
    weight: f64,
    t: BLProfile,
    n: BLProfile,
    p: BLProfile,
    dd_t: BLProfile,
    dd_n: BLProfile,
    dz_t: BLProfile,
    dz_n: BLProfile,
}

/// Samples a truncated expansion at fixed `ε` and truncation order `k`.
pub struct ExpansionSampler<'a> {
    bundle: &'a ExpansionBundle,
    k: usize,
    eps: f64,
    layers: Vec<LayerPieces>,
    max_jet: usize,
    pub include_outer: bool,
    pub include_layer: bool,
}

impl<'a> ExpansionSampler<'a> {
    pub fn new(bundle: &'a ExpansionBundle, k: usize, eps: f64) -> Result<Self> {
        check_eps(eps)?;
        if k > bundle.order() || bundle.orders.is_empty() {
            return Err(Error::invalid(format!(
                "truncation order {k} exceeds the bundle order {}",
                bundle.order()
            )));
        }
        let mut layers = Vec::new();
        let mut max_jet = 1;
        for j in 0..=k {
            for side in Side::BOTH {
                let lay = bundle.orders[j].layer(side);
                let dd = |p: &BLProfile| p.map_coeffs(|c| c.dd());
                let pieces = LayerPieces {
                    side,
                    weight: eps.powf(0.5 * j as f64),
                    dd_t: dd(&lay.tangential),
                    dd_n: dd(&lay.normal),
                    dz_t: bl_dz(&lay.tangential),
                    dz_n: bl_dz(&lay.normal),
                    t: lay.tangential.clone(),
                    n: lay.normal.clone(),
                    p: lay.pressure.clone(),
                };
                for p in [&pieces.dd_t, &pieces.dd_n, &pieces.p] {
                    for c in &p.coeffs {
                        max_jet = max_jet.max(c.jet_len());
                    }
                }
                layers.push(pieces);
            }
        }
        Ok(ExpansionSampler {
            bundle,
            k,
            eps,
            layers,
            max_jet,
            include_outer: true,
            include_layer: true,
        })
    }

    /// Per-mode samples at the points `ys` of strip `sub`.
    pub fn sample(&self, sub: Subdomain, ys: &[f64]) -> Result<Vec<ProfileSamples>> {
        let b = self.bundle;
        let nm = b.modes().len();
        let mut out = vec![ProfileSamples::zeros(ys.len()); nm];
        if self.include_outer {
            for j in 0..=self.k {
                let w = self.eps.powf(0.5 * j as f64);
                let outer = &b.orders[j].outer;
                let g = outer.grids.get(sub);
                let interp = g.interpolation_matrix(ys)?;
                for (i, o) in out.iter_mut().enumerate() {
                    let s = outer.fields[i].strip(sub);
                    let du = interp.apply(&g.differentiate(&s.u));
                    let dv = interp.apply(&g.differentiate(&s.v));
                    for (dst, src) in [
                        (&mut o.u, interp.apply(&s.u)),
                        (&mut o.v, interp.apply(&s.v)),
                        (&mut o.p, interp.apply(&s.p)),
                        (&mut o.du, du),
                        (&mut o.dv, dv),
                    ] {
                        for (d, v) in dst.iter_mut().zip(src) {
                            *d += v * w;
                        }
                    }
                }
            }
        }
        if self.include_layer && sub == Subdomain::Porous {
            let geom = &b.geometry;
            let inv_sqrt = 1.0 / self.eps.sqrt();
            for (q, &y) in ys.iter().enumerate() {
                for side in Side::BOTH {
                    let d = geom.distance(side, y);
                    if d >= b.cutoff.outer {
                        continue;
                    }
                    let z = d * inv_sqrt;
                    let chi = b.cutoff.jet(d, self.max_jet);
                    let s = side.normal_sign();
                    for lp in self.layers.iter().filter(|lp| lp.side == side) {
                        for (i, o) in out.iter_mut().enumerate() {
                            let t = lp.t.eval_mode(i, &chi, z);
                            let n = lp.n.eval_mode(i, &chi, z);
                            let p = lp.p.eval_mode(i, &chi, z);
                            let dt = -s
                                * (lp.dd_t.eval_mode(i, &chi, z)
                                    + inv_sqrt * lp.dz_t.eval_mode(i, &chi, z));
                            let dn = -s
                                * (lp.dd_n.eval_mode(i, &chi, z)
                                    + inv_sqrt * lp.dz_n.eval_mode(i, &chi, z));
                            o.u[q] += lp.weight * t;
                            o.v[q] += lp.weight * s * n;
                            o.p[q] += lp.weight * p;
                            o.du[q] += lp.weight * dt;
                            o.dv[q] += lp.weight * s * dn;
                        }
                    }
                }
            }
        }
        Ok(out)
    }

    pub fn eps(&self) -> f64 {
        self.eps
    }
}

/// Velocity and pressure of the truncated expansion at `(x, y)`.
pub fn evaluate_expansion(
    bundle: &ExpansionBundle,
    k: usize,
    eps: f64,
    point: [f64; 2],
) -> Result<([C64; 2], C64)> {
    let [x, y] = point;
    let sub = bundle.geometry.locate(y)?;
    let sampler = ExpansionSampler::new(bundle, k, eps)?;
    let s = sampler.sample(sub, &[y])?;
    let modes = bundle.modes();
    let mut vel = [C64::new(0.0, 0.0); 2];
    let mut p = C64::new(0.0, 0.0);
    for (i, m) in s.iter().enumerate() {
        let e = C64::from_polar(
            1.0,
            ModeSet::wavenumber(modes.mode(i), bundle.geometry.period) * x,
        );
        vel[0] += m.u[0] * e;
        vel[1] += m.v[0] * e;
        p += m.p[0] * e;
    }
    Ok((vel, p))
}
