//! Dirichlet-to-Neumann map of the Darcy problem in the porous strip.
//!
//! For a normal velocity `φ` on `Σ` the pressure solves
//! `Δp = div g` with `∂_n p = g·n - κ φ`; the map returns the trace of `p`.
//! Mode 0 is solvable only when `φ_top + φ_bottom = 0`; other data are projected by
//! removing the constant `m = (φ_top + φ_bottom)/2` and the pressure is normalized
//! to zero mean.

use super::assembly::{re, ONE, ZERO};
use crate::error::{Error, Result};
use crate::fourier::ModeSet;
use crate::geometry::SlabGeometry;
use crate::params::PhysicalParams;
use crate::spectral::{Grid1D, LuFactors};
use crate::C64;

/// Affine interface operator `φ ↦ T_lin φ + T_aff` per mode, `[top, bottom]`.
#[derive(Debug, Clone)]
pub struct DtnOperator {
    pub modes: ModeSet,
    pub linear: Vec<[[C64; 2]; 2]>,
    pub affine: Vec<[C64; 2]>,
    factors: Vec<LuFactors>,
    wavenumbers: Vec<f64>,
    kappa: f64,
}

fn assemble(grid: &Grid1D, xi: f64, kappa: f64, mean_mode: bool) -> Result<LuFactors> {
    let n = grid.len();
    let size = n + usize::from(mean_mode);
    let mut a = vec![ZERO; size * size];
    for j in 1..n - 1 {
        for (c, &d) in grid.d2.row(j).iter().enumerate() {
            a[j * size + c] = re(d);
        }
        a[j * size + j] -= re(xi * xi);
    }
    for j in [0, n - 1] {
        for (c, &d) in grid.d1.row(j).iter().enumerate() {
            a[j * size + c] = re(d);
        }
    }
    if mean_mode {
        a[(n - 1) * size + n] = re(-kappa);
        a[n] = re(kappa);
        for (c, &w) in grid.weights.iter().enumerate() {
            a[n * size + c] = re(w);
        }
    }
    LuFactors::factor(size, &a)
}

fn rhs(
    grid: &Grid1D,
    xi: f64,
    kappa: f64,
    mean_mode: bool,
    g: Option<&[Vec<C64>; 2]>,
    phi: [C64; 2],
) -> Vec<C64> {
    let n = grid.len();
    let mut b = vec![ZERO; n + usize::from(mean_mode)];
    if let Some(g) = g {
        let dgy = grid.differentiate(&g[1]);
        let ixi = C64::new(0.0, xi);
        for j in 1..n - 1 {
            b[j] = ixi * g[0][j] + dgy[j];
        }
        b[n - 1] = g[1][n - 1];
        b[0] = g[1][0];
    }
    b[n - 1] -= kappa * phi[0];
    b[0] += kappa * phi[1];
    b
}

/// Builds the operator for porous data `g` (samples per mode on `grid`).
pub fn build_dtn(
    g: &[[Vec<C64>; 2]],
    grid: &Grid1D,
    modes: ModeSet,
    geom: &SlabGeometry,
    params: &PhysicalParams,
) -> Result<DtnOperator> {
    if g.len() != modes.len() {
        return Err(Error::invalid("porous data do not match the mode set"));
    }
    let n = grid.len();
    let kappa = params.kappa;
    let mut op = DtnOperator {
        modes,
        linear: Vec::with_capacity(modes.len()),
        affine: Vec::with_capacity(modes.len()),
        factors: Vec::with_capacity(modes.len()),
        wavenumbers: Vec::with_capacity(modes.len()),
        kappa,
    };
    for (i, k) in modes.modes().enumerate() {
        let xi = ModeSet::wavenumber(k, geom.period);
        let mean = k == 0;
        let lu = assemble(grid, xi, kappa, mean).map_err(|e| e.with_mode(k))?;
        let trace = |x: Vec<C64>| [x[n - 1], x[0]];
        let aff = trace(lu.solve(&rhs(grid, xi, kappa, mean, Some(&g[i]), [ZERO; 2])));
        let e1 = trace(lu.solve(&rhs(grid, xi, kappa, mean, None, [ONE, ZERO])));
        let e2 = trace(lu.solve(&rhs(grid, xi, kappa, mean, None, [ZERO, ONE])));
        op.linear.push([[e1[0], e2[0]], [e1[1], e2[1]]]);
        op.affine.push(aff);
        op.factors.push(lu);
        op.wavenumbers.push(xi);
    }
    Ok(op)
}

impl DtnOperator {
    /// Pressure trace `[top, bottom]` for mode index `i` and the size of the
    /// mode-0 projection correction.
    pub fn apply_mode(&self, i: usize, phi: [C64; 2]) -> ([C64; 2], f64) {
        let t = &self.linear[i];
        let a = self.affine[i];
        let out = [
            a[0] + t[0][0] * phi[0] + t[0][1] * phi[1],
            a[1] + t[1][0] * phi[0] + t[1][1] * phi[1],
        ];
        let correction = if self.modes.mode(i) == 0 {
            (0.5 * (phi[0] + phi[1])).norm()
        } else {
            0.0
        };
        (out, correction)
    }
}

/// Applies the operator to all modes; returns the traces and the mode-0
/// projection correction.
pub fn dtn_apply(op: &DtnOperator, phi: &[[C64; 2]]) -> Result<(Vec<[C64; 2]>, f64)> {
    if phi.len() != op.modes.len() {
        return Err(Error::invalid(
            "interface datum does not match the mode set",
        ));
    }
    let mut correction: f64 = 0.0;
    let traces = phi
        .iter()
        .enumerate()
        .map(|(i, &p)| {
            let (t, c) = op.apply_mode(i, p);
            correction = correction.max(c);
            t
        })
        .collect();
    Ok((traces, correction))
}

/// Full pressure profile of mode index `i` for Neumann datum `φ`.
pub fn dtn_pressure(
    op: &DtnOperator,
    g: &[Vec<C64>; 2],
    grid: &Grid1D,
    i: usize,
    phi: [C64; 2],
) -> Result<Vec<C64>> {
    let lu = &op.factors[i];
    let mean = op.modes.mode(i) == 0;
    if lu.dim() != grid.len() + usize::from(mean) {
        return Err(Error::invalid("grid does not match the operator"));
    }
    let mut x = lu.solve(&rhs(grid, op.wavenumbers[i], op.kappa, mean, Some(g), phi));
    x.truncate(grid.len());
    Ok(x)
}
