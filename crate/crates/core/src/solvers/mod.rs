//! Per-mode collocation solvers for the full ε-problem, the ε-independent
//! Stokes–Darcy problem, the Darcy Dirichlet-to-Neumann map and the mixed
//! Stokes problem.

mod assembly;
pub mod dtn;
pub mod elementary;
pub mod full;
pub mod mixed;

pub use dtn::{build_dtn, dtn_apply, dtn_pressure, DtnOperator};
pub use elementary::{solve_elementary, solve_elementary_dtn, ElementarySpec};
pub use full::{solve_full, FullSolveReport};
pub use mixed::{solve_mixed_stokes, MixedSolution, MixedSpec};

use rayon::prelude::*;

use crate::error::Result;
use crate::fourier::{ExpPoly, ModeSet};
use crate::spectral::Grid1D;
use crate::C64;

/// Samples a vector profile at the nodes of a grid.
pub fn sample_volume(profiles: &[ExpPoly; 2], grid: &Grid1D) -> [Vec<C64>; 2] {
    [
        profiles[0].sample(&grid.nodes),
        profiles[1].sample(&grid.nodes),
    ]
}

/// Runs `solve` for every mode index. When `mirror` is set the data are
/// conjugate-symmetric and modes `k < 0` are obtained by conjugating `k > 0`.
pub(crate) fn for_modes<T, F, C>(modes: ModeSet, mirror: bool, solve: F, conj: C) -> Result<Vec<T>>
where
    T: Send + Clone,
    F: Fn(usize) -> Result<T> + Sync,
    C: Fn(&T) -> T,
{
    let n = modes.len();
    let indices: Vec<usize> = if mirror {
        (modes.n_max..n).collect()
    } else {
        (0..n).collect()
    };
    let solved: Vec<Result<T>> = indices.par_iter().map(|&i| solve(i)).collect();
    let mut out: Vec<Option<T>> = vec![None; n];
    for (&i, r) in indices.iter().zip(solved) {
        out[i] = Some(r?);
    }
    if mirror {
        for i in 0..modes.n_max {
            let j = modes.mirror(i);
            out[i] = Some(conj(out[j].as_ref().unwrap()));
        }
    }
    Ok(out.into_iter().map(|o| o.unwrap()).collect())
}

/// Tolerance on conjugate symmetry below which mirrored solves are used.
pub(crate) const MIRROR_TOL: f64 = 0.0;
