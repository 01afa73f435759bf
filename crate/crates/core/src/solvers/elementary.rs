//! ε-independent Stokes–Darcy transmission problem, solved either monolithically or
//! by composing the Darcy Dirichlet-to-Neumann map with mixed Stokes solves.

use super::assembly::{
    fluid_stress, mean_mode_rows, re, stokes_interior_rows, wall_rows, Assembler, Lin, StokesBlock,
    ONE, ZERO,
};
use super::dtn::{build_dtn, dtn_pressure, DtnOperator};
use super::mixed::{solve_mixed_mode, MixedSpec};
use super::{for_modes, sample_volume};
use crate::error::{Error, Result};
use crate::field::{ModeField, PressureGauge, SolutionPair, StripField};
use crate::fourier::{ExpPoly, ModeSet};
use crate::geometry::{Side, SlabGeometry};
use crate::grids::SlabGrids;
use crate::params::PhysicalParams;
use crate::C64;

/// Relative tolerance of the mode-0 normal-jump compatibility check.
pub const COMPATIBILITY_TOL: f64 = 1e-12;

/// Data of the Stokes–Darcy problem sampled on its grids.
///
/// `h[m][side]` is the scalar normal-velocity jump `(v⁺ - v⁻)·n`; `l[m][side]`
/// the vector stress datum.
#[derive(Debug, Clone, PartialEq)]
pub struct ElementarySpec {
    pub geometry: SlabGeometry,
    pub modes: ModeSet,
    pub grids: SlabGrids,
    pub g_minus: Vec<[Vec<C64>; 2]>,
    pub g_plus_top: Vec<[Vec<C64>; 2]>,
    pub g_plus_bottom: Vec<[Vec<C64>; 2]>,
    pub h: Vec<[C64; 2]>,
    pub l: Vec<[[C64; 2]; 2]>,
}

impl ElementarySpec {
    pub fn zero(geometry: SlabGeometry, modes: ModeSet, grids: SlabGrids) -> Self {
        let n = modes.len();
        let z = |g: &crate::spectral::Grid1D| vec![[vec![ZERO; g.len()], vec![ZERO; g.len()]]; n];
        ElementarySpec {
            g_minus: z(&grids.porous),
            g_plus_top: z(&grids.fluid_top),
            g_plus_bottom: z(&grids.fluid_bottom),
            h: vec![[ZERO; 2]; n],
            l: vec![[[ZERO; 2]; 2]; n],
            geometry,
            modes,
            grids,
        }
    }

    /// Samples exponential-polynomial volume data onto the grids.
    pub fn from_profiles(
        geometry: SlabGeometry,
        modes: ModeSet,
        grids: SlabGrids,
        g_minus: &[[ExpPoly; 2]],
        g_plus: &[[[ExpPoly; 2]; 2]],
        h: Vec<[C64; 2]>,
        l: Vec<[[C64; 2]; 2]>,
    ) -> Result<Self> {
        if g_minus.len() != modes.len() || g_plus.len() != modes.len() {
            return Err(Error::invalid("volume data do not match the mode set"));
        }
        let mut spec = ElementarySpec::zero(geometry, modes, grids);
        for i in 0..modes.len() {
            spec.g_minus[i] = sample_volume(&g_minus[i], &spec.grids.porous);
            spec.g_plus_top[i] = sample_volume(&g_plus[i][0], &spec.grids.fluid_top);
            spec.g_plus_bottom[i] = sample_volume(&g_plus[i][1], &spec.grids.fluid_bottom);
        }
        spec.h = h;
        spec.l = l;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<()> {
        let n = self.modes.len();
        if [
            self.g_minus.len(),
            self.g_plus_top.len(),
            self.g_plus_bottom.len(),
            self.h.len(),
            self.l.len(),
        ]
        .iter()
        .any(|&m| m != n)
        {
            return Err(Error::invalid("data arrays do not match the mode set"));
        }
        self.grids.check_geometry(&self.geometry)?;
        for (field, g) in [
            (&self.g_minus, &self.grids.porous),
            (&self.g_plus_top, &self.grids.fluid_top),
            (&self.g_plus_bottom, &self.grids.fluid_bottom),
        ] {
            if field
                .iter()
                .any(|c| c[0].len() != g.len() || c[1].len() != g.len())
            {
                return Err(Error::invalid("volume samples do not match the grid"));
            }
        }
        Ok(())
    }

    pub(crate) fn wavenumber(&self, i: usize) -> f64 {
        ModeSet::wavenumber(self.modes.mode(i), self.geometry.period)
    }

    /// `div g⁻ = iξ g_x + ∂_y g_y` at the porous nodes.
    pub(crate) fn div_g_minus(&self, i: usize) -> Vec<C64> {
        let ixi = C64::new(0.0, self.wavenumber(i));
        let dy = self.grids.porous.differentiate(&self.g_minus[i][1]);
        self.g_minus[i][0]
            .iter()
            .zip(&dy)
            .map(|(&gx, &d)| ixi * gx + d)
            .collect()
    }

    pub(crate) fn is_conjugate_symmetric(&self) -> bool {
        let n = self.modes.len();
        (0..n).all(|i| {
            let j = self.modes.mirror(i);
            let vol = |f: &Vec<[Vec<C64>; 2]>| {
                (0..2).all(|c| f[i][c].iter().zip(&f[j][c]).all(|(a, b)| *a == b.conj()))
            };
            vol(&self.g_minus)
                && vol(&self.g_plus_top)
                && vol(&self.g_plus_bottom)
                && (0..2).all(|s| {
                    self.h[i][s] == self.h[j][s].conj()
                        && (0..2).all(|c| self.l[i][s][c] == self.l[j][s][c].conj())
                })
        })
    }

    /// Checks `∫_Σ h = 0`, the solvability condition of the problem.
    pub fn check_compatibility(&self) -> Result<()> {
        let i0 = self.modes.index(0).unwrap();
        let norm = self
            .h
            .iter()
            .flatten()
            .map(|z| z.norm_sqr())
            .sum::<f64>()
            .sqrt();
        let defect = (self.h[i0][0] + self.h[i0][1]).norm();
        if defect > COMPATIBILITY_TOL * norm {
            return Err(Error::Incompatible(format!(
                "normal-jump datum has nonzero mean over the interface: |h_top + h_bottom| = {defect:e}"
            )));
        }
        Ok(())
    }
}

/// Darcy traces at a porous node: `u⁻ = (g_x - iξp)/κ`, `v⁻ = (g_y - p')/κ`.
fn darcy_traces(
    offset: usize,
    grid: &crate::spectral::Grid1D,
    j: usize,
    xi: f64,
    kappa: f64,
    g: &[Vec<C64>; 2],
) -> (Lin, Lin, Lin) {
    let p = Lin::var(offset + j);
    let u = Lin::combine(&[
        (C64::new(0.0, -xi / kappa), &p),
        (ONE, &Lin::constant(g[0][j] / kappa)),
    ]);
    let v = Lin::combine(&[
        (re(-1.0 / kappa), &Lin::dot(offset, grid.d1.row(j))),
        (ONE, &Lin::constant(g[1][j] / kappa)),
    ]);
    (u, v, p)
}

fn solve_mode(spec: &ElementarySpec, params: &PhysicalParams, i: usize) -> Result<ModeField> {
    let grids = &spec.grids;
    let k = spec.modes.mode(i);
    let xi = spec.wavenumber(i);
    let (nt, np, nb) = (
        grids.fluid_top.len(),
        grids.porous.len(),
        grids.fluid_bottom.len(),
    );
    let top = StokesBlock { offset: 0, n: nt };
    let poff = StokesBlock::WIDTH * nt;
    let bottom = StokesBlock {
        offset: poff + np,
        n: nb,
    };
    let mean_mode = k == 0;
    let base = bottom.offset + StokesBlock::WIDTH * nb;
    let v_const = base;
    let mut asm = Assembler::new(base + usize::from(mean_mode));
    let kappa = params.kappa;
    let gm = &spec.g_minus[i];

    for (b, g, data, wall, iface) in [
        (top, &grids.fluid_top, &spec.g_plus_top[i], nt - 1, 0),
        (
            bottom,
            &grids.fluid_bottom,
            &spec.g_plus_bottom[i],
            0,
            nb - 1,
        ),
    ] {
        if mean_mode {
            mean_mode_rows(&mut asm, &b, g, params.mu, 0.0, None, iface, data)?;
            asm.set(b.x_row(wall), &Lin::var(b.u(wall)), ZERO)?;
        } else {
            stokes_interior_rows(&mut asm, &b, g, xi, params.mu, 0.0, data)?;
            wall_rows(&mut asm, &b, wall)?;
        }
    }

    let pg = &grids.porous;
    if mean_mode {
        spec.check_compatibility()?;
        for j in 1..np {
            let mut f = Lin::dot(poff, pg.d1.row(j));
            f.terms.push((v_const, re(kappa)));
            asm.set(poff + j, &f, gm[1][j])?;
        }
        let gauge = Lin {
            terms: pg
                .weights
                .iter()
                .enumerate()
                .map(|(j, &w)| (poff + j, re(w)))
                .collect(),
            constant: ZERO,
        };
        asm.set(poff, &gauge, ZERO)?;
        asm.set(
            v_const,
            &Lin::var(v_const),
            0.5 * (spec.h[i][1] - spec.h[i][0]),
        )?;
    } else {
        let div = spec.div_g_minus(i);
        for j in 1..np - 1 {
            let mut f = Lin::dot(poff, pg.d2.row(j));
            f.terms.push((poff + j, re(-xi * xi)));
            asm.set(poff + j, &f, div[j])?;
        }
    }

    for side in Side::BOTH {
        let s = side.normal_sign();
        let (fb, fj, pj, fg) = match side {
            Side::Top => (top, 0, np - 1, &grids.fluid_top),
            Side::Bottom => (bottom, nb - 1, 0, &grids.fluid_bottom),
        };
        let plus = fb.traces(fg, fj);
        let (_, dv, dp) = darcy_traces(poff, pg, pj, xi, kappa, gm);
        let vminus = if mean_mode { Lin::var(v_const) } else { dv };
        let [sx, sy] = fluid_stress(&plus, s, params.mu, xi);
        let l = spec.l[i][side.index()];
        asm.set(fb.x_row(fj), &sx, l[0])?;
        let sy = Lin::combine(&[
            (ONE, &sy),
            (re(s), &dp),
            (re(-0.5 * params.beta), &plus.v),
            (re(-0.5 * params.beta), &vminus),
        ]);
        asm.set(fb.y_row(fj), &sy, l[1])?;
        if !mean_mode {
            let jump = Lin::combine(&[(re(s), &plus.v), (re(-s), &vminus)]);
            asm.set(poff + pj, &jump, spec.h[i][side.index()])?;
        }
    }

    let sol = asm.solve().map_err(|e| e.with_mode(k))?;
    let x = &sol.x;
    let strip = |b: &StokesBlock| {
        let (u, v, p) = b.extract(x);
        StripField { u, v, p }
    };
    let p = x[poff..poff + np].to_vec();
    let porous = darcy_velocity(pg, xi, kappa, gm, &p, mean_mode.then(|| x[v_const]));
    Ok(ModeField {
        strips: [strip(&top), porous, strip(&bottom)],
    })
}

/// Darcy velocity `(g - ∇p)/κ` for one mode; for mode 0 the normal component is the
/// supplied constant.
pub(crate) fn darcy_velocity(
    grid: &crate::spectral::Grid1D,
    xi: f64,
    kappa: f64,
    g: &[Vec<C64>; 2],
    p: &[C64],
    mean_v: Option<C64>,
) -> StripField {
    let dp = grid.differentiate(p);
    let ixi = C64::new(0.0, xi);
    let u = g[0]
        .iter()
        .zip(p)
        .map(|(&gx, &q)| (gx - ixi * q) / kappa)
        .collect();
    let v = match mean_v {
        Some(vc) => vec![vc; p.len()],
        None => g[1]
            .iter()
            .zip(&dp)
            .map(|(&gy, &d)| (gy - d) / kappa)
            .collect(),
    };
    StripField {
        u,
        v,
        p: p.to_vec(),
    }
}

/// Solves the Stokes–Darcy transmission problem monolithically.
///
/// The pressure is fixed by a zero mean of the porous pressure (one constant for
/// the whole slab). Mode-0 data with `∫_Σ h ≠ 0` are rejected.
pub fn solve_elementary(spec: &ElementarySpec, params: &PhysicalParams) -> Result<SolutionPair> {
    spec.validate()?;
    params.validate()?;
    spec.check_compatibility()?;
    let fields = for_modes(
        spec.modes,
        spec.is_conjugate_symmetric(),
        |i| solve_mode(spec, params, i),
        |f| f.conj(),
    )?;
    let mut sol = SolutionPair::zeros(spec.geometry, spec.modes, spec.grids.clone());
    sol.fields = fields;
    sol.gauge = PressureGauge::PorousMeanZero;
    Ok(sol)
}

/// Solves the same problem by reducing it to the interface: the Darcy pressure trace
/// is `T(v⁻·n)` with `v⁻·n = v⁺·n - h`, and the fluid solves a mixed problem with
/// stress `l - T(φ - h) n + (β/2)(2φ - h) n`, `φ = v⁺·n`. The affine map
/// `φ ↦ v⁺·n` is assembled from three mixed solves per mode and its fixed point
/// found directly.
pub fn solve_elementary_dtn(
    spec: &ElementarySpec,
    params: &PhysicalParams,
) -> Result<SolutionPair> {
    spec.validate()?;
    params.validate()?;
    spec.check_compatibility()?;
    let dtn = build_dtn(
        &spec.g_minus,
        &spec.grids.porous,
        spec.modes,
        &spec.geometry,
        params,
    )?;
    let fields = for_modes(
        spec.modes,
        spec.is_conjugate_symmetric(),
        |i| solve_mode_dtn(spec, params, &dtn, i),
        |f| f.conj(),
    )?;
    let mut sol = SolutionPair::zeros(spec.geometry, spec.modes, spec.grids.clone());
    sol.fields = fields;
    sol.gauge = PressureGauge::PorousMeanZero;
    Ok(sol)
}

fn solve_mode_dtn(
    spec: &ElementarySpec,
    params: &PhysicalParams,
    dtn: &DtnOperator,
    i: usize,
) -> Result<ModeField> {
    let xi = spec.wavenumber(i);
    let h = spec.h[i];
    let beta = params.beta;
    let mixed = MixedSpec {
        geometry: spec.geometry,
        modes: spec.modes,
        fluid_top: spec.grids.fluid_top.clone(),
        fluid_bottom: spec.grids.fluid_bottom.clone(),
        g_top: Vec::new(),
        g_bottom: Vec::new(),
        gamma: Vec::new(),
    };
    let stress = |phi: [C64; 2]| -> [[C64; 2]; 2] {
        let trace = dtn.apply_mode(i, [phi[0] - h[0], phi[1] - h[1]]).0;
        let mut g = [[ZERO; 2]; 2];
        for side in Side::BOTH {
            let si = side.index();
            let s = side.normal_sign();
            let l = spec.l[i][si];
            let normal = -trace[si] + 0.5 * beta * (2.0 * phi[si] - h[si]);
            g[si] = [l[0], l[1] + s * normal];
        }
        g
    };
    let normal_trace = |f: &[StripField; 2]| -> [C64; 2] {
        // top fluid: node 0, n_y = +1; bottom fluid: last node, n_y = -1
        [f[0].v[0], -f[1].v[f[1].len() - 1]]
    };
    let run = |phi: [C64; 2]| -> Result<[StripField; 2]> {
        solve_mixed_mode(
            &mixed,
            params,
            i,
            &spec.g_plus_top[i],
            &spec.g_plus_bottom[i],
            &stress(phi),
        )
    };
    let f0 = normal_trace(&run([ZERO; 2])?);
    let f1 = normal_trace(&run([ONE, ZERO])?);
    let f2 = normal_trace(&run([ZERO, ONE])?);
    // F(φ) = f0 + A φ; solve (I - A) φ = f0.
    let a = [
        [f1[0] - f0[0], f2[0] - f0[0]],
        [f1[1] - f0[1], f2[1] - f0[1]],
    ];
    let m = [[ONE - a[0][0], -a[0][1]], [-a[1][0], ONE - a[1][1]]];
    let det = m[0][0] * m[1][1] - m[0][1] * m[1][0];
    if det.norm() < 1e-13 {
        return Err(Error::Singular {
            mode: Some(spec.modes.mode(i)),
            pivot: 0,
            size: 2,
        });
    }
    let phi = [
        (m[1][1] * f0[0] - m[0][1] * f0[1]) / det,
        (m[0][0] * f0[1] - m[1][0] * f0[0]) / det,
    ];
    let [ft, fb] = run(phi)?;
    let p = dtn_pressure(
        dtn,
        &spec.g_minus[i],
        &spec.grids.porous,
        i,
        [phi[0] - h[0], phi[1] - h[1]],
    )?;
    let mean_v = (spec.modes.mode(i) == 0).then(|| (phi[0] - h[0] - (phi[1] - h[1])) * 0.5);
    let porous = darcy_velocity(
        &spec.grids.porous,
        xi,
        params.kappa,
        &spec.g_minus[i],
        &p,
        mean_v,
    );
    Ok(ModeField {
        strips: [ft, porous, fb],
    })
}
