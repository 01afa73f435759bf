//! The subcommands; each returns the rendered artifact.

use bwkb::field::SolutionPair;
use bwkb::geometry::Subdomain;
use bwkb::grids::SlabGrids;
use bwkb::manufactured::ManufacturedField;
use bwkb::solvers::{
    sample_volume, solve_elementary, solve_full, solve_mixed_stokes, ElementarySpec,
    FullSolveReport, MixedSpec,
};
use bwkb::verify::{
    compute_norms, energy_check, energy_terms, refinement_check, remainder_studies, EnergyReport,
    EnergyTerms, NormSet, RefinementRecord, RemainderReport, MIN_FIT_POINTS,
};
use bwkb::wkb::{
    build_bundle, residual_summary, ExpansionBundle, OrderResiduals, MAX_EXPANSION_ORDER,
};
use serde::Serialize;

use crate::config::{DataKind, RunConfig};
use crate::error::{CliError, CliResult};
use crate::output::{csv_table, num, opt_num, to_json};
use crate::Format;

/// Largest recovery error accepted by `mms`.
pub const RECOVERY_TOL: f64 = 1e-8;

fn json_only(command: &str, format: Option<Format>) -> CliResult<()> {
    match format {
        Some(Format::Csv) => Err(CliError::Config(format!("`{command}` writes JSON only"))),
        _ => Ok(()),
    }
}

fn max3(e: [f64; 3]) -> f64 {
    e.into_iter().fold(0.0, f64::max)
}

#[derive(Serialize)]
struct SolveOutput<'a> {
    eps: f64,
    report: FullSolveReport,
    norms: NormSet,
    energy: EnergyTerms,
    /// Largest nodal error `(u, v, p)` against the manufactured field.
    recovery_error: Option<[f64; 3]>,
    solution: &'a SolutionPair,
}

pub fn solve(cfg: &RunConfig, format: Option<Format>) -> CliResult<String> {
    json_only("solve", format)?;
    let eps = cfg.study.eps;
    let geom = cfg.geometry()?;
    let params = cfg.params()?;
    let disc = cfg.discretization();
    let (data, exact) = match cfg.data.kind {
        DataKind::Manufactured => {
            let m = ManufacturedField::full_recipe(
                geom,
                disc.modes,
                cfg.data.active_modes,
                cfg.data.seed,
            );
            (m.full_data(eps, &params), Some(m))
        }
        _ => (cfg.fixed_data()?, None),
    };
    let (sol, report) = solve_full(&data, eps, &geom, &params, &disc)?;
    let recovery_error = exact
        .map(|m| m.max_error(&sol, &Subdomain::ALL))
        .transpose()?;
    let mut energy = energy_terms(&sol, &data, &params, eps)?;
    energy.unresolved = report.unresolved;
    to_json(&SolveOutput {
        eps,
        report,
        norms: compute_norms(&sol)?,
        energy,
        recovery_error,
        solution: &sol,
    })
}

#[derive(Serialize)]
struct ExpandOutput {
    bundle: ExpansionBundle,
    residuals: Vec<OrderResiduals>,
}

pub fn expand(cfg: &RunConfig, order: usize, format: Option<Format>) -> CliResult<String> {
    json_only("expand", format)?;
    if order > MAX_EXPANSION_ORDER {
        return Err(CliError::Config(format!(
            "expansion order {order} exceeds the maximum {MAX_EXPANSION_ORDER}"
        )));
    }
    let data = cfg.fixed_data()?;
    let bundle = build_bundle(
        &data,
        &cfg.geometry()?,
        &cfg.params()?,
        &cfg.discretization(),
        order,
    )?;
    let residuals = residual_summary(&bundle);
    to_json(&ExpandOutput { bundle, residuals })
}

#[derive(Serialize)]
struct ConvergeOutput {
    reports: Vec<RemainderReport>,
    energy: EnergyReport,
    refinement: Vec<RefinementRecord>,
}

pub fn converge(cfg: &RunConfig, orders: &[usize], format: Option<Format>) -> CliResult<String> {
    let eps_list = &cfg.study.eps_list;
    if eps_list.len() < MIN_FIT_POINTS {
        return Err(CliError::Config(format!(
            "the convergence study needs at least {MIN_FIT_POINTS} ε values, got {}",
            eps_list.len()
        )));
    }
    if orders.is_empty() {
        return Err(CliError::Config("no truncation order requested".into()));
    }
    if let Some(&k) = orders.iter().find(|&&k| k > MAX_EXPANSION_ORDER) {
        return Err(CliError::Config(format!(
            "truncation order {k} exceeds the maximum {MAX_EXPANSION_ORDER}"
        )));
    }
    let data = cfg.fixed_data()?;
    let (geom, params, disc) = (cfg.geometry()?, cfg.params()?, cfg.discretization());
    let reports = remainder_studies(&data, &geom, &params, &disc, orders, eps_list)?;
    if let Some(r) = reports.iter().find(|r| r.fit.is_none()) {
        return Err(CliError::Numerical(format!(
            "order {}: {}",
            r.k,
            r.fit_error.as_deref().unwrap_or("no slope fitted")
        )));
    }
    let energy = energy_check(&data, &geom, &params, &disc, eps_list)?;
    let refinement = if cfg.study.refine > 0.0 {
        refinement_check(
            &data,
            &geom,
            &params,
            &disc,
            orders,
            eps_list,
            cfg.study.refine,
        )?
    } else {
        Vec::new()
    };
    let out = ConvergeOutput {
        reports,
        energy,
        refinement,
    };
    match format.unwrap_or(Format::Csv) {
        Format::Json => to_json(&out),
        Format::Csv => converge_csv(&out),
    }
}

fn converge_csv(out: &ConvergeOutput) -> CliResult<String> {
    let header = [
        "eps",
        "k",
        "porous_l2",
        "porous_grad",
        "fluid_h1",
        "combined",
        "flagged",
        "fitted_slope",
        "theory_slope",
    ];
    let mut rows = Vec::new();
    let mut summary = Vec::new();
    for rep in &out.reports {
        let slope = rep.fit.map(|f| f.slope);
        for r in &rep.records {
            rows.push(vec![
                num(r.eps),
                r.k.to_string(),
                num(r.porous_l2),
                num(r.porous_grad),
                num(r.fluid_h1),
                num(r.combined),
                r.flagged.to_string(),
                opt_num(slope),
                num(rep.theory_slope),
            ]);
        }
        summary.push(format!(
            "k={} fitted_slope={} theory_slope={} points={} meets_rate={}",
            rep.k,
            opt_num(slope),
            num(rep.theory_slope),
            rep.fit.map_or(0, |f| f.points),
            rep.meets_rate(0.2)
        ));
    }
    let e = &out.energy;
    summary.push(format!(
        "energy max_ratio={} median_ratio={} last_ratio={} max_normal_jump_ratio={} uniform={}",
        opt_num(e.max_ratio),
        opt_num(e.median_ratio),
        opt_num(e.last_ratio),
        opt_num(e.max_normal_jump_ratio),
        e.is_uniform()
    ));
    if !out.refinement.is_empty() {
        let worst = out
            .refinement
            .iter()
            .filter(|r| !r.flagged)
            .map(|r| r.max_relative_change)
            .fold(0.0, f64::max);
        summary.push(format!("refinement max_relative_change={}", num(worst)));
    }
    csv_table(&header, &rows, &summary)
}

pub fn energy(cfg: &RunConfig, format: Option<Format>) -> CliResult<String> {
    let data = cfg.fixed_data()?;
    let report = energy_check(
        &data,
        &cfg.geometry()?,
        &cfg.params()?,
        &cfg.discretization(),
        &cfg.study.eps_list,
    )?;
    match format.unwrap_or(Format::Csv) {
        Format::Json => to_json(&report),
        Format::Csv => {
            let header = [
                "eps",
                "porous_strain",
                "porous_l2",
                "fluid_h1",
                "normal_jump",
                "jump",
                "normal_average",
                "data_norm",
                "lhs",
                "ratio",
                "unresolved",
            ];
            let rows: Vec<Vec<String>> = report
                .records
                .iter()
                .map(|r| {
                    vec![
                        num(r.eps),
                        num(r.porous_strain),
                        num(r.porous_l2),
                        num(r.fluid_h1),
                        num(r.normal_jump),
                        num(r.jump),
                        num(r.normal_average),
                        num(r.data_norm),
                        num(r.lhs),
                        opt_num(r.ratio),
                        r.unresolved.to_string(),
                    ]
                })
                .collect();
            let summary = [format!(
                "poincare_constant={} max_ratio={} median_ratio={} last_ratio={} max_normal_jump_ratio={} uniform={}",
                num(report.poincare_constant),
                opt_num(report.max_ratio),
                opt_num(report.median_ratio),
                opt_num(report.last_ratio),
                opt_num(report.max_normal_jump_ratio),
                report.is_uniform()
            )];
            csv_table(&header, &rows, &summary)
        }
    }
}

#[derive(Serialize)]
struct MmsOutput {
    eps: f64,
    tolerance: f64,
    /// Largest nodal `(u, v, p)` error of the full problem at `eps`.
    full: [f64; 3],
    /// Same for the elementary Darcy / Stokes problem.
    elementary: [f64; 3],
    /// Same for the mixed Stokes problem on the fluid strips.
    mixed: [f64; 3],
}

/// Runs the three recoveries; returns the artifact and the largest error.
pub fn mms(cfg: &RunConfig, format: Option<Format>) -> CliResult<(String, f64)> {
    json_only("mms", format)?;
    let eps = cfg.study.eps;
    let geom = cfg.geometry()?;
    let params = cfg.params()?;
    let disc = cfg.discretization();
    let (active, seed) = (cfg.data.active_modes, cfg.data.seed);

    let exact = ManufacturedField::full_recipe(geom, disc.modes, active, seed);
    let (sol, _) = solve_full(&exact.full_data(eps, &params), eps, &geom, &params, &disc)?;
    let full = exact.max_error(&sol, &Subdomain::ALL)?;

    let darcy = ManufacturedField::darcy_recipe(geom, disc.modes, active, seed.wrapping_add(1));
    let (gm, h, l) = darcy.darcy_data(&params);
    let grids = SlabGrids::uniform(&geom, &disc)?;
    let spec = ElementarySpec::from_profiles(
        geom,
        disc.modes,
        grids.clone(),
        &gm,
        &darcy.fluid_forces(&params),
        h,
        l,
    )?;
    let elementary = darcy.max_error(&solve_elementary(&spec, &params)?, &Subdomain::ALL)?;

    let stokes = ManufacturedField::full_recipe(geom, disc.modes, active, seed.wrapping_add(2));
    let gp = stokes.fluid_forces(&params);
    let mspec = MixedSpec {
        geometry: geom,
        modes: disc.modes,
        g_top: gp
            .iter()
            .map(|g| sample_volume(&g[0], &grids.fluid_top))
            .collect(),
        g_bottom: gp
            .iter()
            .map(|g| sample_volume(&g[1], &grids.fluid_bottom))
            .collect(),
        gamma: stokes.fluid_stress(&params),
        fluid_top: grids.fluid_top.clone(),
        fluid_bottom: grids.fluid_bottom.clone(),
    };
    let msol = solve_mixed_stokes(&mspec, &params)?;
    let mut mixed = [0.0f64; 3];
    for (i, f) in msol.fields.iter().enumerate() {
        for (strip, sub) in f.iter().zip([Subdomain::FluidTop, Subdomain::FluidBottom]) {
            let [u, v, p] = &stokes.strips[i][sub.index()];
            for (j, &y) in grids.get(sub).nodes.iter().enumerate() {
                mixed[0] = mixed[0].max((strip.u[j] - u.eval(y)).norm());
                mixed[1] = mixed[1].max((strip.v[j] - v.eval(y)).norm());
                mixed[2] = mixed[2].max((strip.p[j] - p.eval(y)).norm());
            }
        }
    }

    let worst = max3(full).max(max3(elementary)).max(max3(mixed));
    let text = to_json(&MmsOutput {
        eps,
        tolerance: RECOVERY_TOL,
        full,
        elementary,
        mixed,
    })?;
    Ok((text, worst))
}

pub fn check_recovery(worst: f64) -> CliResult<()> {
    if worst <= RECOVERY_TOL {
        Ok(())
    } else {
        Err(CliError::Numerical(format!(
            "manufactured recovery error {worst:.3e} exceeds {RECOVERY_TOL:.0e}"
        )))
    }
}
