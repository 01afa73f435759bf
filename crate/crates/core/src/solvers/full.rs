//! Full Brinkman–Stokes transmission problem at viscosity `ε`.

use serde::{Deserialize, Serialize};

use super::assembly::{
    fluid_stress, mean_mode_rows, re, stokes_interior_rows, wall_rows, Assembler, Lin, StokesBlock,
    TraceForms, ONE,
};
use super::{for_modes, sample_volume, MIRROR_TOL};
use crate::data::ProblemData;
use crate::error::{Error, Result};
use crate::field::{ModeField, PressureGauge, SolutionPair, StripField};
use crate::fourier::ModeSet;
use crate::geometry::{Side, SlabGeometry, Subdomain};
use crate::grids::{Discretization, SlabGrids};
use crate::params::{check_eps, PhysicalParams};
use crate::C64;

/// Diagnostics of a full solve.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FullSolveReport {
    pub eps: f64,
    pub porous_points: usize,
    /// Largest condition estimate over the modes.
    pub max_condition: f64,
    /// Largest relative residual over the modes.
    pub max_residual: f64,
    /// Largest trailing Chebyshev coefficient ratio of the porous velocity.
    pub porous_tail: f64,
    /// Set when the porous tail exceeds [`UNRESOLVED_TAIL`].
    pub unresolved: bool,
}

/// Porous spectral tail above which a layer is reported as unresolved.
pub const UNRESOLVED_TAIL: f64 = 1e-6;

/// The four interface rows of the full problem at one interface component.
///
/// Returns `[(form, rhs)]` for the normal-stress balance (x and y components),
/// the tangential slip law and the normal jump law.
#[allow(clippy::too_many_arguments)]
pub(crate) fn full_interface_rows(
    s: f64,
    xi: f64,
    params: &PhysicalParams,
    eps: f64,
    plus: &TraceForms,
    minus: &TraceForms,
    h: [C64; 2],
    l: [C64; 2],
) -> [(Lin, C64); 4] {
    let PhysicalParams {
        mu, alpha, beta, ..
    } = *params;
    let [sp_x, sp_y] = fluid_stress(plus, s, mu, xi);
    let [sm_x, sm_y] = fluid_stress(minus, s, eps, xi);
    let stress_x = sp_x.clone().plus(&sm_x.scaled(re(-1.0)));
    let avg_n = Lin::combine(&[(ONE, &plus.v), (ONE, &minus.v)]);
    let stress_y = sp_y
        .clone()
        .plus(&sm_y.scaled(re(-1.0)))
        .plus(&avg_n.scaled(re(-0.5 * beta)));
    let slip = Lin::combine(&[
        (re(alpha), &plus.u),
        (re(-alpha), &minus.u),
        (re(-1.0), &sp_x),
    ]);
    let jump = Lin::combine(&[
        (re(s / eps + 0.25 * beta * s), &plus.v),
        (re(-s / eps + 0.25 * beta * s), &minus.v),
        (re(-1.0), &sp_y.scaled(re(s))),
    ]);
    // sp_y · s = 2μ v' - p
    [
        (stress_x, l[0]),
        (stress_y, l[1]),
        (slip, -(h[0] + 0.5 * l[0])),
        (jump, -s * (h[1] + 0.5 * l[1])),
    ]
}

struct Layout {
    top: StokesBlock,
    porous: StokesBlock,
    bottom: StokesBlock,
    size: usize,
}

impl Layout {
    fn new(grids: &SlabGrids) -> Self {
        let (nt, np, nb) = (
            grids.fluid_top.len(),
            grids.porous.len(),
            grids.fluid_bottom.len(),
        );
        let top = StokesBlock { offset: 0, n: nt };
        let porous = StokesBlock {
            offset: StokesBlock::WIDTH * nt,
            n: np,
        };
        let bottom = StokesBlock {
            offset: StokesBlock::WIDTH * (nt + np),
            n: nb,
        };
        Layout {
            top,
            porous,
            bottom,
            size: StokesBlock::WIDTH * (nt + np + nb),
        }
    }

    /// (fluid block, fluid node, porous node) at an interface component.
    fn interface(&self, side: Side) -> (StokesBlock, usize, usize) {
        match side {
            Side::Top => (self.top, 0, self.porous.n - 1),
            Side::Bottom => (self.bottom, self.bottom.n - 1, 0),
        }
    }
}

struct ModeInput<'a> {
    xi: f64,
    g: [[Vec<C64>; 2]; 3],
    h: &'a [[C64; 2]; 2],
    l: &'a [[C64; 2]; 2],
}

fn solve_mode(
    grids: &SlabGrids,
    params: &PhysicalParams,
    eps: f64,
    k: i64,
    input: &ModeInput,
) -> Result<(ModeField, f64, f64)> {
    let lay = Layout::new(grids);
    let mean_mode = k == 0;
    let size = lay.size + usize::from(mean_mode);
    let v_const = lay.size;
    let mut asm = Assembler::new(size);
    let xi = input.xi;
    let blocks = [
        (
            lay.top,
            &grids.fluid_top,
            params.mu,
            0.0,
            Subdomain::FluidTop,
        ),
        (
            lay.porous,
            &grids.porous,
            eps,
            params.kappa,
            Subdomain::Porous,
        ),
        (
            lay.bottom,
            &grids.fluid_bottom,
            params.mu,
            0.0,
            Subdomain::FluidBottom,
        ),
    ];
    for (b, g, visc, drag, sub) in blocks {
        let data = &input.g[sub.index()];
        if mean_mode {
            let (vc, skip) = match sub {
                Subdomain::FluidTop => (None, 0),
                Subdomain::Porous => (Some(v_const), 0),
                Subdomain::FluidBottom => (None, b.n - 1),
            };
            mean_mode_rows(&mut asm, &b, g, visc, drag, vc, skip, data)?;
        } else {
            stokes_interior_rows(&mut asm, &b, g, xi, visc, drag, data)?;
        }
    }
    let walls = [(lay.top, lay.top.n - 1), (lay.bottom, 0)];
    for (b, j) in walls {
        if mean_mode {
            asm.set(b.x_row(j), &Lin::var(b.u(j)), re(0.0))?;
        } else {
            wall_rows(&mut asm, &b, j)?;
        }
    }
    for side in Side::BOTH {
        let (fb, fj, pj) = lay.interface(side);
        let fgrid = grids.get(Subdomain::fluid_side(side));
        let plus = fb.traces(fgrid, fj);
        let minus = lay.porous.traces(&grids.porous, pj);
        let s = side.normal_sign();
        let [(sx, rx), (sy, ry), (sl, rl), (jn, rj)] = full_interface_rows(
            s,
            xi,
            params,
            eps,
            &plus,
            &minus,
            input.h[side.index()],
            input.l[side.index()],
        );
        asm.set(fb.x_row(fj), &sx, rx)?;
        asm.set(lay.porous.x_row(pj), &sl, rl)?;
        if mean_mode {
            match side {
                Side::Top => {
                    asm.set(fb.y_row(fj), &sy, ry)?;
                    asm.set(v_const, &jn, rj)?;
                }
                Side::Bottom => {
                    asm.set(fb.y_row(fj), &sy, ry)?;
                    asm.set(lay.porous.y_row(pj), &jn, rj)?;
                }
            }
        } else {
            asm.set(fb.y_row(fj), &sy, ry)?;
            asm.set(lay.porous.y_row(pj), &jn, rj)?;
        }
    }
    let sol = asm.solve().map_err(|e| e.with_mode(k))?;
    let strip = |b: &StokesBlock| {
        let (u, v, p) = b.extract(&sol.x);
        StripField { u, v, p }
    };
    Ok((
        ModeField {
            strips: [strip(&lay.top), strip(&lay.porous), strip(&lay.bottom)],
        },
        sol.condition_estimate,
        sol.relative_residual,
    ))
}

/// Solves the full transmission problem at viscosity `eps` on grids chosen by
/// `disc` (the porous strip receives extra points as `ε` decreases).
///
/// The pressure is determined by the equations (the normal-jump law fixes its
/// level), so no gauge is applied.
pub fn solve_full(
    data: &ProblemData,
    eps: f64,
    geom: &SlabGeometry,
    params: &PhysicalParams,
    disc: &Discretization,
) -> Result<(SolutionPair, FullSolveReport)> {
    let grids = SlabGrids::for_eps(geom, params, disc, eps)?;
    solve_full_on(data, eps, geom, params, disc.modes, grids)
}

/// [`solve_full`] on explicitly supplied grids.
pub fn solve_full_on(
    data: &ProblemData,
    eps: f64,
    geom: &SlabGeometry,
    params: &PhysicalParams,
    modes: ModeSet,
    grids: SlabGrids,
) -> Result<(SolutionPair, FullSolveReport)> {
    check_eps(eps)?;
    geom.validate()?;
    params.validate()?;
    data.validate()?;
    grids.check_geometry(geom)?;
    if data.modes != modes {
        return Err(Error::invalid(
            "data mode set differs from the discretization",
        ));
    }
    let mirror = data.conjugate_symmetry_defect(geom) <= MIRROR_TOL;
    let results = for_modes(
        modes,
        mirror,
        |i| {
            let k = modes.mode(i);
            let input = ModeInput {
                xi: ModeSet::wavenumber(k, geom.period),
                g: [
                    sample_volume(&data.g_plus[i][0], &grids.fluid_top),
                    sample_volume(&data.g_minus[i], &grids.porous),
                    sample_volume(&data.g_plus[i][1], &grids.fluid_bottom),
                ],
                h: &data.h[i],
                l: &data.l[i],
            };
            solve_mode(&grids, params, eps, k, &input)
        },
        |(f, c, r)| (f.conj(), *c, *r),
    )?;
    let mut sol = SolutionPair::zeros(*geom, modes, grids);
    let mut max_condition: f64 = 0.0;
    let mut max_residual: f64 = 0.0;
    let mut porous_tail: f64 = 0.0;
    for (i, (f, c, r)) in results.into_iter().enumerate() {
        max_condition = max_condition.max(c);
        max_residual = max_residual.max(r);
        let ps = f.strip(Subdomain::Porous);
        let scale =
            ps.u.iter()
                .chain(&ps.v)
                .map(|z| z.norm())
                .fold(0.0, f64::max);
        if scale > 1e-14 {
            porous_tail = porous_tail
                .max(sol.grids.porous.spectral_tail(&ps.u))
                .max(sol.grids.porous.spectral_tail(&ps.v));
        }
        sol.fields[i] = f;
    }
    sol.gauge = PressureGauge::Determined;
    let report = FullSolveReport {
        eps,
        porous_points: sol.grids.porous.len(),
        max_condition,
        max_residual,
        porous_tail,
        unresolved: porous_tail > UNRESOLVED_TAIL,
    };
    Ok((sol, report))
}
