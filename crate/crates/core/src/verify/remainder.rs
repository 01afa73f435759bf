//! Remainder of the truncated expansion against direct solves of the full problem.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::data::ProblemData;
use crate::error::{Error, Result};
use crate::field::SolutionPair;
use crate::geometry::{SlabGeometry, Subdomain};
use crate::grids::Discretization;
use crate::params::{check_eps, PhysicalParams};
use crate::solvers::solve_full;
use crate::spectral::QuadGrid;
use crate::wkb::{build_bundle, ExpansionBundle, ExpansionSampler};

use super::energy::{check_eps_list, POINCARE_CONSTANT};
use super::fit::{fit_slope, SlopeFit};
use super::norms::sample_norms;

/// Gauss–Legendre points per panel of the measurement grid.
pub const PANEL_POINTS: usize = 12;

/// Composite quadrature per strip, graded towards the interfaces in the porous strip.
#[derive(Debug, Clone, PartialEq)]
pub struct MeasurementGrid {
    pub strips: [QuadGrid; 3],
}

impl MeasurementGrid {
    pub fn get(&self, sub: Subdomain) -> &QuadGrid {
        &self.strips[sub.index()]
    }
}

/// Measurement grid resolving layers of width `√(ε/κ)` and the cutoff transitions.
pub fn measurement_grid(
    bundle: &ExpansionBundle,
    eps: f64,
    per_panel: usize,
) -> Result<MeasurementGrid> {
    let geom = &bundle.geometry;
    let width = (eps / bundle.params.kappa).sqrt();
    let strip = |sub: Subdomain| -> Result<QuadGrid> {
        let (lo, hi) = geom.interval(sub);
        if sub == Subdomain::Porous {
            let c = &bundle.cutoff;
            let extra = [hi - c.inner, hi - c.outer, lo + c.inner, lo + c.outer];
            QuadGrid::graded(lo, hi, 0.25 * width, true, true, &extra, per_panel)
        } else {
            QuadGrid::graded(lo, hi, 0.25 * (hi - lo), false, false, &[], per_panel)
        }
    };
    Ok(MeasurementGrid {
        strips: [
            strip(Subdomain::FluidTop)?,
            strip(Subdomain::Porous)?,
            strip(Subdomain::FluidBottom)?,
        ],
    })
}

/// Remainder norms for one `(ε, k)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RemainderRecord {
    pub eps: f64,
    pub k: usize,
    /// `‖r⁻‖₀`.
    pub porous_l2: f64,
    /// `‖∇r⁻‖₀`.
    pub porous_grad: f64,
    /// `‖r⁺‖₁` over both fluid strips.
    pub fluid_h1: f64,
    /// `ε‖∇r⁻‖² + (κ/4)‖r⁻‖² + (μC²/3)‖r⁺‖²₁`.
    pub combined: f64,
    /// Excluded from slope fits because the direct solve did not resolve the layer.
    pub flagged: bool,
    pub porous_points: usize,
}

impl RemainderRecord {
    /// The reported norms `[‖r⁻‖₀, ‖∇r⁻‖₀, ‖r⁺‖₁, combined]`.
    pub fn norms(&self) -> [f64; 4] {
        [
            self.porous_l2,
            self.porous_grad,
            self.fluid_h1,
            self.combined,
        ]
    }
}

/// Remainder norms of one truncation order across an ε list, with the fitted
/// slope of the combined squared norm.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RemainderReport {
    pub k: usize,
    pub records: Vec<RemainderRecord>,
    pub fit: Option<SlopeFit>,
    /// `(k - 2) / 2`.
    pub theory_slope: f64,
    /// Why no slope was fitted, if none was.
    pub fit_error: Option<String>,
}

impl RemainderReport {
    fn new(k: usize, records: Vec<RemainderRecord>) -> Self {
        let mut r = RemainderReport {
            k,
            records,
            fit: None,
            theory_slope: 0.5 * (k as f64 - 2.0),
            fit_error: None,
        };
        match r.fit_of(|x| x.combined) {
            Ok(f) => r.fit = Some(f),
            Err(e) => r.fit_error = Some(e.to_string()),
        }
        r
    }

    /// Slope of any per-record quantity over the non-flagged points.
    pub fn fit_of(&self, f: impl Fn(&RemainderRecord) -> f64) -> Result<SlopeFit> {
        let eps: Vec<f64> = self.records.iter().map(|r| r.eps).collect();
        let vals: Vec<f64> = self.records.iter().map(&f).collect();
        let used: Vec<bool> = self.records.iter().map(|r| !r.flagged).collect();
        fit_slope(&eps, &vals, &used)
    }

    /// Fitted slope at least `theory - tol`.
    pub fn meets_rate(&self, tol: f64) -> bool {
        self.fit.is_some_and(|f| f.slope >= self.theory_slope - tol)
    }
}

/// Remainder of a solution of the full problem against the expansion truncated at `k`.
pub fn remainder_norms(
    sol: &SolutionPair,
    bundle: &ExpansionBundle,
    k: usize,
    eps: f64,
) -> Result<RemainderRecord> {
    check_eps(eps)?;
    if sol.modes != bundle.modes() || sol.geometry != bundle.geometry {
        return Err(Error::invalid(
            "solution and expansion use different modes or geometry",
        ));
    }
    let grid = measurement_grid(bundle, eps, PANEL_POINTS)?;
    let sampler = ExpansionSampler::new(bundle, k, eps)?;
    let period = bundle.geometry.period;
    let mut norms = [Default::default(); 3];
    for sub in Subdomain::ALL {
        let q = grid.get(sub);
        let exact = sol.sample(sub, &q.points)?;
        let approx = sampler.sample(sub, &q.points)?;
        let diff: Vec<_> = exact
            .iter()
            .zip(&approx)
            .map(|(a, b)| a.sub(b))
            .collect::<Result<_>>()?;
        norms[sub.index()] = sample_norms(&diff, &q.weights, sol.modes, period)?;
    }
    let [top, porous, bottom] = norms;
    let fluid = top.add(&bottom);
    let p = &bundle.params;
    let c = POINCARE_CONSTANT;
    Ok(RemainderRecord {
        eps,
        k,
        porous_l2: porous.l2_sq.sqrt(),
        porous_grad: porous.grad_sq.sqrt(),
        fluid_h1: fluid.h1_sq().sqrt(),
        combined: eps * porous.grad_sq
            + 0.25 * p.kappa * porous.l2_sq
            + p.mu * c * c / 3.0 * fluid.h1_sq(),
        flagged: false,
        porous_points: sol.grids.porous.len(),
    })
}

/// Remainder studies for several truncation orders sharing one expansion and
/// one direct solve per ε.
pub fn remainder_studies(
    data: &ProblemData,
    geom: &SlabGeometry,
    params: &PhysicalParams,
    disc: &Discretization,
    ks: &[usize],
    eps_list: &[f64],
) -> Result<Vec<RemainderReport>> {
    check_eps_list(eps_list)?;
    let kmax = *ks
        .iter()
        .max()
        .ok_or_else(|| Error::invalid("no truncation order requested"))?;
    let bundle = build_bundle(data, geom, params, disc, kmax)?;
    let per_eps: Vec<Result<Vec<RemainderRecord>>> = eps_list
        .par_iter()
        .map(|&eps| {
            let (sol, rep) = solve_full(data, eps, geom, params, disc)?;
            ks.iter()
                .map(|&k| {
                    let mut r = remainder_norms(&sol, &bundle, k, eps)?;
                    r.flagged = rep.unresolved;
                    Ok(r)
                })
                .collect()
        })
        .collect();
    let per_eps: Vec<Vec<RemainderRecord>> = per_eps.into_iter().collect::<Result<_>>()?;
    Ok(ks
        .iter()
        .enumerate()
        .map(|(n, &k)| RemainderReport::new(k, per_eps.iter().map(|v| v[n]).collect()))
        .collect())
}

/// Remainder study for one truncation order.
pub fn remainder_study(
    data: &ProblemData,
    geom: &SlabGeometry,
    params: &PhysicalParams,
    disc: &Discretization,
    k: usize,
    eps_list: &[f64],
) -> Result<RemainderReport> {
    Ok(remainder_studies(data, geom, params, disc, &[k], eps_list)?.remove(0))
}

/// Change of the remainder norms when every point count is scaled by `factor`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RefinementRecord {
    pub eps: f64,
    pub k: usize,
    pub base: [f64; 4],
    pub refined: [f64; 4],
    /// Largest `|refined - base| / base` over the four norms.
    pub max_relative_change: f64,
    pub flagged: bool,
}

/// Repeats the remainder studies on a refined discretization and compares.
pub fn refinement_check(
    data: &ProblemData,
    geom: &SlabGeometry,
    params: &PhysicalParams,
    disc: &Discretization,
    ks: &[usize],
    eps_list: &[f64],
    factor: f64,
) -> Result<Vec<RefinementRecord>> {
    if !(factor > 1.0) {
        return Err(Error::invalid("the refinement factor must exceed 1"));
    }
    let base = remainder_studies(data, geom, params, disc, ks, eps_list)?;
    let fine = remainder_studies(data, geom, params, &disc.refined(factor), ks, eps_list)?;
    let mut out = Vec::new();
    for (b, f) in base.iter().zip(&fine) {
        for (rb, rf) in b.records.iter().zip(&f.records) {
            let (nb, nf) = (rb.norms(), rf.norms());
            let change = nb
                .iter()
                .zip(&nf)
                .map(|(x, y)| {
                    if *x == 0.0 && *y == 0.0 {
                        0.0
                    } else {
                        (y - x).abs() / x.abs().max(y.abs())
                    }
                })
                .fold(0.0, f64::max);
            out.push(RefinementRecord {
                eps: rb.eps,
                k: rb.k,
                base: nb,
                refined: nf,
                max_relative_change: change,
                flagged: rb.flagged || rf.flagged,
            });
        }
    }
    Ok(out)
}
