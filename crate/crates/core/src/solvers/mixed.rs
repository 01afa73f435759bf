//! Stokes problem in the fluid strips with no-slip walls and prescribed normal
//! stress `σ(v⁺, p⁺) n = γ` on `Σ`.

use super::assembly::{
    fluid_stress, mean_mode_rows, stokes_interior_rows, wall_rows, Assembler, Lin, StokesBlock,
    ZERO,
};
use super::for_modes;
use crate::error::{Error, Result};
use crate::field::StripField;
use crate::fourier::ModeSet;
use crate::geometry::{Side, SlabGeometry};
use crate::params::PhysicalParams;
use crate::spectral::Grid1D;
use crate::C64;

/// Data of the mixed problem; `gamma[m][side]` is the prescribed stress vector.
#[derive(Debug, Clone, PartialEq)]
pub struct MixedSpec {
    pub geometry: SlabGeometry,
    pub modes: ModeSet,
    pub fluid_top: Grid1D,
    pub fluid_bottom: Grid1D,
    pub g_top: Vec<[Vec<C64>; 2]>,
    pub g_bottom: Vec<[Vec<C64>; 2]>,
    pub gamma: Vec<[[C64; 2]; 2]>,
}

/// Solution of the mixed problem: `[top strip, bottom strip]` per mode.
#[derive(Debug, Clone, PartialEq)]
pub struct MixedSolution {
    pub modes: ModeSet,
    pub fields: Vec<[StripField; 2]>,
}

fn solve_strip(
    grid: &Grid1D,
    side: Side,
    params: &PhysicalParams,
    k: i64,
    xi: f64,
    g: &[Vec<C64>; 2],
    gamma: [C64; 2],
) -> Result<StripField> {
    let n = grid.len();
    let b = StokesBlock { offset: 0, n };
    let (wall, iface) = match side {
        Side::Top => (n - 1, 0),
        Side::Bottom => (0, n - 1),
    };
    let mut asm = Assembler::new(StokesBlock::WIDTH * n);
    if k == 0 {
        mean_mode_rows(&mut asm, &b, grid, params.mu, 0.0, None, iface, g)?;
        asm.set(b.x_row(wall), &Lin::var(b.u(wall)), ZERO)?;
    } else {
        stokes_interior_rows(&mut asm, &b, grid, xi, params.mu, 0.0, g)?;
        wall_rows(&mut asm, &b, wall)?;
    }
    let t = b.traces(grid, iface);
    let [sx, sy] = fluid_stress(&t, side.normal_sign(), params.mu, xi);
    asm.set(b.x_row(iface), &sx, gamma[0])?;
    asm.set(b.y_row(iface), &sy, gamma[1])?;
    let sol = asm.solve().map_err(|e| e.with_mode(k))?;
    let (u, v, p) = b.extract(&sol.x);
    Ok(StripField { u, v, p })
}

/// Solves both strips of mode index `i` with explicit data.
pub(crate) fn solve_mixed_mode(
    spec: &MixedSpec,
    params: &PhysicalParams,
    i: usize,
    g_top: &[Vec<C64>; 2],
    g_bottom: &[Vec<C64>; 2],
    gamma: &[[C64; 2]; 2],
) -> Result<[StripField; 2]> {
    let k = spec.modes.mode(i);
    let xi = ModeSet::wavenumber(k, spec.geometry.period);
    Ok([
        solve_strip(&spec.fluid_top, Side::Top, params, k, xi, g_top, gamma[0])?,
        solve_strip(
            &spec.fluid_bottom,
            Side::Bottom,
            params,
            k,
            xi,
            g_bottom,
            gamma[1],
        )?,
    ])
}

/// Solves the mixed Stokes problem for all modes.
pub fn solve_mixed_stokes(spec: &MixedSpec, params: &PhysicalParams) -> Result<MixedSolution> {
    params.validate()?;
    let n = spec.modes.len();
    if spec.g_top.len() != n || spec.g_bottom.len() != n || spec.gamma.len() != n {
        return Err(Error::invalid("mixed data do not match the mode set"));
    }
    let fields = for_modes(
        spec.modes,
        false,
        |i| {
            solve_mixed_mode(
                spec,
                params,
                i,
                &spec.g_top[i],
                &spec.g_bottom[i],
                &spec.gamma[i],
            )
        },
        |f| f.clone(),
    )?;
    Ok(MixedSolution {
        modes: spec.modes,
        fields,
    })
}
