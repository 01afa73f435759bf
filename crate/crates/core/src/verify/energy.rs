//! Terms of the ε-uniform energy estimate and the discrete energy identity.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::data::ProblemData;
use crate::error::{Error, Result};
use crate::field::SolutionPair;
use crate::geometry::{Side, SlabGeometry, Subdomain};
use crate::grids::Discretization;
use crate::params::{check_eps, PhysicalParams};
use crate::solvers::{sample_volume, solve_full};
use crate::spectral::gauss_legendre;
use crate::C64;

use super::norms::{compute_norms, NormSet};

/// Coercivity constant multiplying the fluid `H¹` term. It is not computed;
/// the estimate is checked for ε-uniformity only.
pub const POINCARE_CONSTANT: f64 = 1.0;

/// Left-side terms of the energy estimate for one ε, the data norm and their ratio.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EnergyTerms {
    pub eps: f64,
    /// `ε‖d(v⁻)‖²`.
    pub porous_strain: f64,
    /// `(κ/4)‖v⁻‖²`.
    pub porous_l2: f64,
    /// `(μC²/3)‖v⁺‖²₁`.
    pub fluid_h1: f64,
    /// `(1/4ε)‖[v·n]‖²` on `Σ`.
    pub normal_jump: f64,
    /// `(α/4)‖[v]‖²` on `Σ`.
    pub jump: f64,
    /// `(β/4)‖{v·n}‖²` on `Σ`.
    pub normal_average: f64,
    /// `‖g‖² + ‖h‖² + ‖l‖²`.
    pub data_norm: f64,
    pub lhs: f64,
    /// `lhs / data_norm`; `None` for zero data.
    pub ratio: Option<f64>,
    pub unresolved: bool,
}

/// Energy terms across an ε list.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EnergyReport {
    pub records: Vec<EnergyTerms>,
    pub poincare_constant: f64,
    pub max_ratio: Option<f64>,
    pub median_ratio: Option<f64>,
    /// Ratio at the smallest ε.
    pub last_ratio: Option<f64>,
    /// Largest `(1/4ε)‖[v·n]‖² / data norm`.
    pub max_normal_jump_ratio: Option<f64>,
}

impl EnergyReport {
    fn from_records(records: Vec<EnergyTerms>) -> Self {
        let ratios: Vec<f64> = records.iter().filter_map(|r| r.ratio).collect();
        let max_ratio = ratios.iter().copied().reduce(f64::max);
        let median_ratio = median(&ratios);
        let last_ratio = records.last().and_then(|r| r.ratio);
        let max_normal_jump_ratio = records
            .iter()
            .filter(|r| r.data_norm > 0.0)
            .map(|r| r.normal_jump / r.data_norm)
            .reduce(f64::max);
        EnergyReport {
            records,
            poincare_constant: POINCARE_CONSTANT,
            max_ratio,
            median_ratio,
            last_ratio,
            max_normal_jump_ratio,
        }
    }

    /// Bounded ratios with the last one at most twice the median.
    pub fn is_uniform(&self) -> bool {
        match (self.last_ratio, self.median_ratio, self.max_ratio) {
            (Some(last), Some(med), Some(max)) => max.is_finite() && last <= 2.0 * med,
            _ => self.records.iter().all(|r| r.lhs == 0.0),
        }
    }
}

fn median(v: &[f64]) -> Option<f64> {
    if v.is_empty() {
        return None;
    }
    let mut s = v.to_vec();
    s.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let n = s.len();
    Some(if n % 2 == 1 {
        s[n / 2]
    } else {
        0.5 * (s[n / 2 - 1] + s[n / 2])
    })
}

/// Squared data norm with Gauss–Legendre quadrature in `y`.
pub fn data_norm(data: &ProblemData, geom: &SlabGeometry) -> f64 {
    let (t, w) = gauss_legendre(64);
    data.squared_norm(geom, &|sub: Subdomain| {
        let (lo, hi) = geom.interval(sub);
        let h = 0.5 * (hi - lo);
        (
            t.iter().map(|&x| lo + h * (x + 1.0)).collect(),
            w.iter().map(|&x| h * x).collect(),
        )
    })
}

/// Energy terms of a solution of the full problem.
pub fn energy_terms(
    sol: &SolutionPair,
    data: &ProblemData,
    params: &PhysicalParams,
    eps: f64,
) -> Result<EnergyTerms> {
    check_eps(eps)?;
    let n: NormSet = compute_norms(sol)?;
    let c = POINCARE_CONSTANT;
    let porous_strain = eps * n.porous().sym_grad_sq;
    let porous_l2 = 0.25 * params.kappa * n.porous().l2_sq;
    let fluid_h1 = params.mu * c * c / 3.0 * n.fluid().h1_sq();
    let normal_jump = n.jump_normal_sq_total() / (4.0 * eps);
    let jump = 0.25 * params.alpha * n.jump_sq_total();
    let normal_average = 0.25 * params.beta * n.avg_normal_sq_total();
    let lhs = porous_strain + porous_l2 + fluid_h1 + normal_jump + jump + normal_average;
    let dn = data_norm(data, &sol.geometry);
    Ok(EnergyTerms {
        eps,
        porous_strain,
        porous_l2,
        fluid_h1,
        normal_jump,
        jump,
        normal_average,
        data_norm: dn,
        lhs,
        ratio: (dn > 0.0).then(|| lhs / dn),
        unresolved: false,
    })
}

/// Solves the full problem for each ε and collects the energy terms.
pub fn energy_check(
    data: &ProblemData,
    geom: &SlabGeometry,
    params: &PhysicalParams,
    disc: &Discretization,
    eps_list: &[f64],
) -> Result<EnergyReport> {
    check_eps_list(eps_list)?;
    let records: Vec<Result<EnergyTerms>> = eps_list
        .par_iter()
        .map(|&eps| {
            let (sol, rep) = solve_full(data, eps, geom, params, disc)?;
            let mut t = energy_terms(&sol, data, params, eps)?;
            t.unresolved = rep.unresolved;
            Ok(t)
        })
        .collect();
    Ok(EnergyReport::from_records(
        records.into_iter().collect::<Result<_>>()?,
    ))
}

/// Nonempty, strictly decreasing, each ε in `(0, 1]`.
pub fn check_eps_list(eps_list: &[f64]) -> Result<()> {
    if eps_list.is_empty() {
        return Err(Error::invalid("the ε list is empty"));
    }
    for &e in eps_list {
        check_eps(e)?;
    }
    if eps_list.windows(2).any(|w| w[1] >= w[0]) {
        return Err(Error::invalid("the ε list must be strictly decreasing"));
    }
    Ok(())
}

/// Both sides of the discrete energy identity `a_ε(v, v) = work(v)`, where
/// `work` collects the volume and interface data paired with the solution.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EnergyIdentity {
    /// `2ε‖d(v⁻)‖² + κ‖v⁻‖² + 2μ‖d(v⁺)‖² + β‖{v·n}‖² + α‖[v_τ]‖² + ε⁻¹‖[v·n]‖²`.
    pub bilinear: f64,
    /// `∫ g·v`.
    pub volume_work: f64,
    /// `∫_Σ h·[v] + l·{v}`.
    pub interface_work: f64,
}

impl EnergyIdentity {
    /// `|bilinear - (volume_work - interface_work)|` relative to `bilinear`.
    pub fn defect(&self) -> f64 {
        (self.bilinear - (self.volume_work - self.interface_work)).abs()
            / self.bilinear.abs().max(f64::MIN_POSITIVE)
    }
}

/// Evaluates the energy identity for a solution of the full problem.
pub fn energy_identity(
    sol: &SolutionPair,
    data: &ProblemData,
    params: &PhysicalParams,
    eps: f64,
) -> Result<EnergyIdentity> {
    check_eps(eps)?;
    let n = compute_norms(sol)?;
    let period = sol.geometry.period;
    let mut tangential_jump = 0.0;
    let mut interface_work = 0.0;
    for side in Side::BOTH {
        let si = side.index();
        for i in 0..sol.modes.len() {
            let t = sol.interface_trace(i, side);
            tangential_jump += period * (t.plus.u - t.minus.u).norm_sqr();
            let jump = [t.plus.u - t.minus.u, t.plus.v - t.minus.v];
            let avg = [0.5 * (t.plus.u + t.minus.u), 0.5 * (t.plus.v + t.minus.v)];
            for c in 0..2 {
                interface_work += period
                    * (data.h[i][si][c] * jump[c].conj() + data.l[i][si][c] * avg[c].conj()).re;
            }
        }
    }
    let mut volume_work = 0.0;
    for sub in Subdomain::ALL {
        let g = sol.grids.get(sub);
        for i in 0..sol.modes.len() {
            let f = sample_volume(data.volume(sub, i), g);
            let s = sol.fields[i].strip(sub);
            let integrand: Vec<C64> = (0..g.len())
                .map(|q| f[0][q] * s.u[q].conj() + f[1][q] * s.v[q].conj())
                .collect();
            volume_work += period * g.integrate(&integrand).re;
        }
    }
    let bilinear = 2.0 * eps * n.porous().sym_grad_sq
        + params.kappa * n.porous().l2_sq
        + 2.0 * params.mu * n.fluid().sym_grad_sq
        + params.beta * n.avg_normal_sq_total()
        + params.alpha * tangential_jump
        + n.jump_normal_sq_total() / eps;
    Ok(EnergyIdentity {
        bilinear,
        volume_work,
        interface_work,
    })
}
