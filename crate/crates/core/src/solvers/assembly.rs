//! Row-by-row assembly of per-mode collocation systems from affine linear forms.

use crate::error::{Error, Result};
use crate::spectral::{solve_dense, DenseSolution, DenseSystem, Grid1D};
use crate::C64;

pub(crate) const ZERO: C64 = C64 { re: 0.0, im: 0.0 };
pub(crate) const ONE: C64 = C64 { re: 1.0, im: 0.0 };

pub(crate) fn re(x: f64) -> C64 {
    C64::new(x, 0.0)
}

/// Affine form `Σ c_i x_i + constant` in the unknowns of a system.
#[derive(Debug, Clone, Default)]
pub(crate) struct Lin {
    pub terms: Vec<(usize, C64)>,
    pub constant: C64,
}

impl Lin {
    pub fn zero() -> Self {
        Lin::default()
    }

    pub fn var(i: usize) -> Self {
        Lin {
            terms: vec![(i, ONE)],
            constant: ZERO,
        }
    }

    pub fn constant(c: C64) -> Self {
        Lin {
            terms: Vec::new(),
            constant: c,
        }
    }

    /// `Σ_j row[j] x_{offset+j}`.
    pub fn dot(offset: usize, row: &[f64]) -> Self {
        Lin {
            terms: row
                .iter()
                .enumerate()
                .map(|(j, &c)| (offset + j, re(c)))
                .collect(),
            constant: ZERO,
        }
    }

    pub fn scaled(&self, c: C64) -> Self {
        Lin {
            terms: self.terms.iter().map(|&(i, v)| (i, v * c)).collect(),
            constant: self.constant * c,
        }
    }

    pub fn plus(mut self, other: &Lin) -> Self {
        self.terms.extend_from_slice(&other.terms);
        self.constant += other.constant;
        self
    }

    /// `Σ c_k · form_k`.
    pub fn combine(parts: &[(C64, &Lin)]) -> Self {
        let mut out = Lin::zero();
        for (c, l) in parts {
            if *c != ZERO {
                out = out.plus(&l.scaled(*c));
            }
        }
        out
    }
}

/// Dense system filled one row at a time; every row must be set exactly once.
pub(crate) struct Assembler {
    sys: DenseSystem,
    filled: Vec<bool>,
}

impl Assembler {
    pub fn new(n: usize) -> Self {
        Assembler {
            sys: DenseSystem::zeros(n),
            filled: vec![false; n],
        }
    }

    /// Imposes `form = rhs` in row `row`.
    pub fn set(&mut self, row: usize, form: &Lin, rhs: C64) -> Result<()> {
        if self.filled[row] {
            return Err(Error::internal(format!("row {row} assigned twice")));
        }
        self.filled[row] = true;
        for &(j, c) in &form.terms {
            self.sys.add(row, j, c);
        }
        self.sys.b[row] = rhs - form.constant;
        Ok(())
    }

    pub fn solve(self) -> Result<DenseSolution> {
        if let Some(r) = self.filled.iter().position(|f| !f) {
            return Err(Error::internal(format!("row {r} left unassigned")));
        }
        solve_dense(&self.sys)
    }
}

/// Unknown layout of a velocity–pressure block: `u`, `v`, `p` at the grid nodes.
#[derive(Debug, Clone, Copy)]
pub(crate) struct StokesBlock {
    pub offset: usize,
    pub n: usize,
}

impl StokesBlock {
    pub const WIDTH: usize = 3;

    pub fn u(&self, j: usize) -> usize {
        self.offset + j
    }
    pub fn v(&self, j: usize) -> usize {
        self.offset + self.n + j
    }
    pub fn p(&self, j: usize) -> usize {
        self.offset + 2 * self.n + j
    }
    /// Rows: x-momentum slots share the `u` indices, y-momentum the `v`
    /// indices and continuity the `p` indices.
    pub fn x_row(&self, j: usize) -> usize {
        self.u(j)
    }
    pub fn y_row(&self, j: usize) -> usize {
        self.v(j)
    }
    pub fn c_row(&self, j: usize) -> usize {
        self.p(j)
    }

    pub fn traces(&self, grid: &Grid1D, j: usize) -> TraceForms {
        let d = grid.d1.row(j);
        TraceForms {
            u: Lin::var(self.u(j)),
            du: Lin::dot(self.u(0), d),
            v: Lin::var(self.v(j)),
            dv: Lin::dot(self.v(0), d),
            p: Lin::var(self.p(j)),
        }
    }

    pub fn extract(&self, x: &[C64]) -> (Vec<C64>, Vec<C64>, Vec<C64>) {
        let n = self.n;
        let o = self.offset;
        (
            x[o..o + n].to_vec(),
            x[o + n..o + 2 * n].to_vec(),
            x[o + 2 * n..o + 3 * n].to_vec(),
        )
    }
}

/// Affine forms for `u, u', v, v', p` at one node.
#[derive(Debug, Clone)]
pub(crate) struct TraceForms {
    pub u: Lin,
    pub du: Lin,
    pub v: Lin,
    pub dv: Lin,
    pub p: Lin,
}

/// Momentum rows `-ν(D² - ξ²)w + drag·w + ∇p = g` at interior nodes and continuity
/// `iξu + v' = 0` at all nodes of a block (`k ≠ 0`).
pub(crate) fn stokes_interior_rows(
    asm: &mut Assembler,
    b: &StokesBlock,
    grid: &Grid1D,
    xi: f64,
    visc: f64,
    drag: f64,
    g: &[Vec<C64>; 2],
) -> Result<()> {
    let n = b.n;
    let ixi = C64::new(0.0, xi);
    for j in 1..n - 1 {
        let d2 = grid.d2.row(j);
        let diag = re(visc * xi * xi + drag);
        let mut fx = Lin::dot(b.u(0), d2).scaled(re(-visc));
        fx.terms.push((b.u(j), diag));
        fx.terms.push((b.p(j), ixi));
        asm.set(b.x_row(j), &fx, g[0][j])?;
        let mut fy = Lin::dot(b.v(0), d2).scaled(re(-visc));
        fy.terms.push((b.v(j), diag));
        fy = fy.plus(&Lin::dot(b.p(0), grid.d1.row(j)));
        asm.set(b.y_row(j), &fy, g[1][j])?;
    }
    for j in 0..n {
        let mut c = Lin::dot(b.v(0), grid.d1.row(j));
        c.terms.push((b.u(j), ixi));
        asm.set(b.c_row(j), &c, ZERO)?;
    }
    Ok(())
}

/// Mode-0 rows of a block: `-ν u'' + drag·u = g_x` at interior nodes,
/// `v_j = v_const` at all nodes and `p' + drag·v_const = g_y` at all nodes except
/// `skip_p`. `v_const` is `None` for fluid blocks (zero) or the index of a shared
/// unknown.
#[allow(clippy::too_many_arguments)]
pub(crate) fn mean_mode_rows(
    asm: &mut Assembler,
    b: &StokesBlock,
    grid: &Grid1D,
    visc: f64,
    drag: f64,
    v_const: Option<usize>,
    skip_p: usize,
    g: &[Vec<C64>; 2],
) -> Result<()> {
    let n = b.n;
    for j in 1..n - 1 {
        let mut fx = Lin::dot(b.u(0), grid.d2.row(j)).scaled(re(-visc));
        fx.terms.push((b.u(j), re(drag)));
        asm.set(b.x_row(j), &fx, g[0][j])?;
    }
    for j in 0..n {
        let mut fv = Lin::var(b.v(j));
        if let Some(vc) = v_const {
            fv.terms.push((vc, -ONE));
        }
        asm.set(b.c_row(j), &fv, ZERO)?;
        if j != skip_p {
            let mut fp = Lin::dot(b.p(0), grid.d1.row(j));
            if let Some(vc) = v_const {
                fp.terms.push((vc, re(drag)));
            }
            asm.set(b.y_row(j), &fp, g[1][j])?;
        }
    }
    Ok(())
}

/// No-slip rows at a wall node.
pub(crate) fn wall_rows(asm: &mut Assembler, b: &StokesBlock, j: usize) -> Result<()> {
    asm.set(b.x_row(j), &Lin::var(b.u(j)), ZERO)?;
    asm.set(b.y_row(j), &Lin::var(b.v(j)), ZERO)
}

/// Fluid-side stress `σ⁺n = (sμ(u'+iξv), 2μ s v' - s p)` at an interface node.
pub(crate) fn fluid_stress(t: &TraceForms, s: f64, mu: f64, xi: f64) -> [Lin; 2] {
    let x = Lin::combine(&[(re(s * mu), &t.du), (C64::new(0.0, s * mu * xi), &t.v)]);
    let y = Lin::combine(&[(re(2.0 * mu * s), &t.dv), (re(-s), &t.p)]);
    [x, y]
}
