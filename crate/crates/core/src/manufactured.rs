//! Manufactured solutions: closed-form per-mode profiles from which consistent
//! data are derived, used to measure solver recovery errors.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::data::ProblemData;
use crate::error::{Error, Result};
use crate::field::SolutionPair;
use crate::fourier::{ExpPoly, ModeSet};
use crate::geometry::{Side, SlabGeometry, Subdomain};
use crate::params::PhysicalParams;
use crate::C64;

const Z: C64 = C64 { re: 0.0, im: 0.0 };

fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

/// `(u, v, p)` profiles of one strip.
pub type StripProfiles = [ExpPoly; 3];

/// Exact solution given by exponential-polynomial profiles per mode and strip.
#[derive(Debug, Clone, PartialEq)]
pub struct ManufacturedField {
    pub geometry: SlabGeometry,
    pub modes: ModeSet,
    /// `strips[m][subdomain]`.
    pub strips: Vec<[StripProfiles; 3]>,
}

/// Values and derivatives at an interface point.
#[derive(Debug, Clone, Copy)]
struct Point {
    u: C64,
    v: C64,
    du: C64,
    dv: C64,
    p: C64,
}

fn zero_strip() -> StripProfiles {
    [ExpPoly::zero(), ExpPoly::zero(), ExpPoly::zero()]
}

/// Velocity `(ψ', -iξψ)` of a stream function.
fn from_stream(psi: &ExpPoly, xi: f64) -> (ExpPoly, ExpPoly) {
    (psi.derivative(), psi.scale(c(0.0, -xi)))
}

impl ManufacturedField {
    fn empty(geometry: SlabGeometry, modes: ModeSet) -> Self {
        ManufacturedField {
            geometry,
            modes,
            strips: vec![[zero_strip(), zero_strip(), zero_strip()]; modes.len()],
        }
    }

    fn set_mode(&mut self, k: i64, strips: [StripProfiles; 3]) {
        let i = self.modes.index(k).unwrap();
        let j = self.modes.index(-k).unwrap();
        let conj = |s: &StripProfiles| [s[0].conj(), s[1].conj(), s[2].conj()];
        self.strips[j] = [conj(&strips[0]), conj(&strips[1]), conj(&strips[2])];
        self.strips[i] = strips;
    }

    fn fluid_stream(rng: &mut ChaCha8Rng, geom: &SlabGeometry, side: Side, amp: f64) -> ExpPoly {
        // ψ = c (y - y_w)^2 e^{λy} vanishes to second order at the wall y_w.
        let yw = match side {
            Side::Top => geom.fluid_top,
            Side::Bottom => -geom.porous - geom.fluid_bottom,
        };
        let coef = c(rng.gen_range(0.5..1.0), rng.gen_range(-0.5..0.5)) * amp;
        let rate = c(rng.gen_range(-0.8..0.8), 0.0);
        ExpPoly::poly_exp(&[coef * (yw * yw), coef * (-2.0 * yw), coef], rate)
    }

    fn pressure(rng: &mut ChaCha8Rng, amp: f64, real: bool) -> ExpPoly {
        let im = |rng: &mut ChaCha8Rng| if real { 0.0 } else { rng.gen_range(-0.5..0.5) };
        let a = c(rng.gen_range(-1.0..1.0), im(rng)) * amp;
        let b = c(rng.gen_range(-1.0..1.0), im(rng)) * amp;
        ExpPoly::term(a, 0, c(rng.gen_range(-0.7..0.7), 0.0)).add(&ExpPoly::term(b, 1, Z))
    }

    /// Divergence-free velocities from stream functions in all strips (no-slip at
    /// the walls) and smooth pressures, for the full problem.
    pub fn full_recipe(geometry: SlabGeometry, modes: ModeSet, active: usize, seed: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut f = ManufacturedField::empty(geometry, modes);
        for k in 0..=(active.min(modes.n_max) as i64) {
            let xi = ModeSet::wavenumber(k, geometry.period);
            let amp = 1.0 / (1.0 + (k * k) as f64);
            let real = k == 0;
            let mut strips = [zero_strip(), zero_strip(), zero_strip()];
            for (sub, side) in [
                (Subdomain::FluidTop, Side::Top),
                (Subdomain::FluidBottom, Side::Bottom),
            ] {
                let mut psi = Self::fluid_stream(&mut rng, &geometry, side, amp);
                if real {
                    psi = ExpPoly {
                        terms: psi
                            .terms
                            .iter()
                            .map(|t| crate::fourier::ExpTerm {
                                coef: c(t.coef.re, 0.0),
                                ..*t
                            })
                            .collect(),
                    };
                }
                let (u, v) = from_stream(&psi, xi);
                strips[sub.index()] = [u, v, Self::pressure(&mut rng, amp, real)];
            }
            let a = c(
                rng.gen_range(-1.0..1.0),
                if real { 0.0 } else { rng.gen_range(-1.0..1.0) },
            ) * amp;
            let b = c(
                rng.gen_range(-1.0..1.0),
                if real { 0.0 } else { rng.gen_range(-1.0..1.0) },
            ) * amp;
            let psi =
                ExpPoly::term(a, 0, c(rng.gen_range(-1.0..1.0), 0.0)).add(&ExpPoly::term(b, 2, Z));
            let (u, v) = from_stream(&psi, xi);
            strips[Subdomain::Porous.index()] = [u, v, Self::pressure(&mut rng, amp, real)];
            f.set_mode(k, strips);
        }
        f
    }

    /// Stream-function velocities in the fluid strips and gradients of harmonic
    /// potentials in the porous strip (including a constant normal velocity in
    /// mode 0), with zero-mean porous pressure; for the Stokes–Darcy problem.
    pub fn darcy_recipe(geometry: SlabGeometry, modes: ModeSet, active: usize, seed: u64) -> Self {
        let mut f = ManufacturedField::full_recipe(geometry, modes, active, seed);
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x5eed);
        for k in 0..=(active.min(modes.n_max) as i64) {
            let i = modes.index(k).unwrap();
            let xi = ModeSet::wavenumber(k, geometry.period);
            let amp = 1.0 / (1.0 + (k * k) as f64);
            let mut strips = f.strips[i].clone();
            let (u, v) = if k == 0 {
                (
                    ExpPoly::zero(),
                    ExpPoly::constant(c(rng.gen_range(-1.0..1.0), 0.0)),
                )
            } else {
                let a = c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)) * amp;
                let b = c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)) * amp;
                let q = xi.abs();
                let phi = ExpPoly::term(a, 0, c(q, 0.0)).add(&ExpPoly::term(b, 0, c(-q, 0.0)));
                (phi.scale(c(0.0, xi)), phi.derivative())
            };
            strips[Subdomain::Porous.index()][0] = u;
            strips[Subdomain::Porous.index()][1] = v;
            f.set_mode(k, strips);
        }
        let i0 = modes.index(0).unwrap();
        let (lo, hi) = geometry.interval(Subdomain::Porous);
        let q = crate::spectral::QuadGrid::from_breakpoints(&[lo, hi], 40).expect("valid interval");
        let pm = &f.strips[i0][Subdomain::Porous.index()][2];
        let mean: C64 = q
            .points
            .iter()
            .zip(&q.weights)
            .map(|(&y, &w)| pm.eval(y) * w)
            .sum::<C64>()
            / geometry.porous;
        for sub in Subdomain::ALL {
            let p = &mut f.strips[i0][sub.index()][2];
            *p = p.add(&ExpPoly::constant(-mean));
        }
        f
    }

    /// Stokes-type residual `-ν(w'' - ξ²w) + drag·w + ∇p` of one strip.
    fn momentum(&self, i: usize, sub: Subdomain, visc: f64, drag: f64) -> [ExpPoly; 2] {
        let xi = ModeSet::wavenumber(self.modes.mode(i), self.geometry.period);
        let [u, v, p] = &self.strips[i][sub.index()];
        let lap = |w: &ExpPoly| w.derivative().derivative().add(&w.scale(c(-xi * xi, 0.0)));
        let gx = lap(u)
            .scale(c(-visc, 0.0))
            .add(&u.scale(c(drag, 0.0)))
            .add(&p.scale(c(0.0, xi)));
        let gy = lap(v)
            .scale(c(-visc, 0.0))
            .add(&v.scale(c(drag, 0.0)))
            .add(&p.derivative());
        [gx, gy]
    }

    fn point(&self, i: usize, sub: Subdomain, y: f64) -> Point {
        let [u, v, p] = &self.strips[i][sub.index()];
        Point {
            u: u.eval(y),
            v: v.eval(y),
            du: u.derivative().eval(y),
            dv: v.derivative().eval(y),
            p: p.eval(y),
        }
    }

    fn sides(&self, i: usize, side: Side) -> (Point, Point, f64) {
        let y = self.geometry.interface_y(side);
        (
            self.point(i, Subdomain::fluid_side(side), y),
            self.point(i, Subdomain::Porous, y),
            side.normal_sign(),
        )
    }

    /// Data of the full problem at viscosity `eps` for which this field is the solution.
    pub fn full_data(&self, eps: f64, params: &PhysicalParams) -> ProblemData {
        let PhysicalParams {
            kappa,
            mu,
            alpha,
            beta,
        } = *params;
        let mut data = ProblemData::zero(self.modes);
        for i in 0..self.modes.len() {
            let xi = ModeSet::wavenumber(self.modes.mode(i), self.geometry.period);
            data.g_minus[i] = self.momentum(i, Subdomain::Porous, eps, kappa);
            data.g_plus[i] = [
                self.momentum(i, Subdomain::FluidTop, mu, 0.0),
                self.momentum(i, Subdomain::FluidBottom, mu, 0.0),
            ];
            for side in Side::BOTH {
                let (pl, mi, s) = self.sides(i, side);
                let tp = s * mu * (pl.du + c(0.0, xi) * pl.v);
                let tm = s * eps * (mi.du + c(0.0, xi) * mi.v);
                let lx = tp - tm;
                let ly = 2.0 * mu * s * pl.dv - s * pl.p - 2.0 * eps * s * mi.dv + s * mi.p
                    - 0.5 * beta * (pl.v + mi.v);
                let hx = -alpha * (pl.u - mi.u) + tp - 0.5 * lx;
                let jump = s * (pl.v - mi.v) / eps - (2.0 * mu * pl.dv - pl.p)
                    + 0.25 * beta * s * (pl.v + mi.v);
                let hy = -s * jump - 0.5 * ly;
                data.l[i][side.index()] = [lx, ly];
                data.h[i][side.index()] = [hx, hy];
            }
        }
        data
    }

    /// Fluid volume data `[top, bottom]` per mode.
    pub fn fluid_forces(&self, params: &PhysicalParams) -> Vec<[[ExpPoly; 2]; 2]> {
        (0..self.modes.len())
            .map(|i| {
                [
                    self.momentum(i, Subdomain::FluidTop, params.mu, 0.0),
                    self.momentum(i, Subdomain::FluidBottom, params.mu, 0.0),
                ]
            })
            .collect()
    }

    /// Data `(g⁻, h, l)` of the Stokes–Darcy problem (`g⁺` comes from
    /// [`ManufacturedField::fluid_forces`]); `h` is the normal-velocity jump.
    #[allow(clippy::type_complexity)]
    pub fn darcy_data(
        &self,
        params: &PhysicalParams,
    ) -> (Vec<[ExpPoly; 2]>, Vec<[C64; 2]>, Vec<[[C64; 2]; 2]>) {
        let PhysicalParams {
            kappa, mu, beta, ..
        } = *params;
        let mut gm = Vec::new();
        let mut h = Vec::new();
        let mut l = Vec::new();
        for i in 0..self.modes.len() {
            let xi = ModeSet::wavenumber(self.modes.mode(i), self.geometry.period);
            let [u, v, p] = &self.strips[i][Subdomain::Porous.index()];
            gm.push([
                u.scale(c(kappa, 0.0)).add(&p.scale(c(0.0, xi))),
                v.scale(c(kappa, 0.0)).add(&p.derivative()),
            ]);
            let mut hm = [Z; 2];
            let mut lm = [[Z; 2]; 2];
            for side in Side::BOTH {
                let (pl, mi, s) = self.sides(i, side);
                hm[side.index()] = s * (pl.v - mi.v);
                lm[side.index()] = [
                    s * mu * (pl.du + c(0.0, xi) * pl.v),
                    2.0 * mu * s * pl.dv - s * pl.p + s * mi.p - 0.5 * beta * (pl.v + mi.v),
                ];
            }
            h.push(hm);
            l.push(lm);
        }
        (gm, h, l)
    }

    /// Stress `σ(v⁺, p⁺) n` on both interface components, for the mixed problem.
    pub fn fluid_stress(&self, params: &PhysicalParams) -> Vec<[[C64; 2]; 2]> {
        (0..self.modes.len())
            .map(|i| {
                let xi = ModeSet::wavenumber(self.modes.mode(i), self.geometry.period);
                let mut g = [[Z; 2]; 2];
                for side in Side::BOTH {
                    let (pl, _, s) = self.sides(i, side);
                    g[side.index()] = [
                        s * params.mu * (pl.du + c(0.0, xi) * pl.v),
                        s * (2.0 * params.mu * pl.dv - pl.p),
                    ];
                }
                g
            })
            .collect()
    }

    /// Largest nodal error `[u, v, p]` on the chosen strips, summed over modes
    /// (an upper bound of the pointwise error in physical space).
    pub fn max_error(&self, sol: &SolutionPair, subs: &[Subdomain]) -> Result<[f64; 3]> {
        if sol.modes != self.modes {
            return Err(Error::invalid("mode sets differ"));
        }
        let mut err = [0.0; 3];
        for i in 0..self.modes.len() {
            let mut mode_err = [0.0f64; 3];
            for &sub in subs {
                let g = sol.grids.get(sub);
                let s = sol.fields[i].strip(sub);
                for (f, (num, exact)) in [
                    (&s.u, &self.strips[i][sub.index()][0]),
                    (&s.v, &self.strips[i][sub.index()][1]),
                    (&s.p, &self.strips[i][sub.index()][2]),
                ]
                .into_iter()
                .enumerate()
                {
                    for (z, &y) in num.iter().zip(&g.nodes) {
                        mode_err[f] = mode_err[f].max((z - exact.eval(y)).norm());
                    }
                }
            }
            for f in 0..3 {
                err[f] += mode_err[f];
            }
        }
        Ok(err)
    }
}
