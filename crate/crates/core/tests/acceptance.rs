//! Acceptance run: every criterion at its stated tolerance, one line each.

mod common;

use std::process::ExitCode;
use std::time::Instant;

use bwkb::bl::lemma::{dz, eval, ode_particular, tail};
use bwkb::data::{random_data, RandomDataOptions};
use bwkb::field::SolutionPair;
use bwkb::geometry::{Side, SlabGeometry, Subdomain};
use bwkb::grids::{Discretization, SlabGrids};
use bwkb::manufactured::ManufacturedField;
use bwkb::params::PhysicalParams;
use bwkb::solvers::{
    sample_volume, solve_elementary, solve_elementary_dtn, solve_full, solve_mixed_stokes,
    ElementarySpec, MixedSpec,
};
use bwkb::verify::{
    divergence_defect, divergence_scaling, energy_check, refinement_check, remainder_studies,
    StudyPreset, ENERGY_EPS, REMAINDER_EPS,
};
use bwkb::wkb::build_bundle;
use bwkb::C64;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn check(cond: bool, detail: String) -> Outcome {
    if cond {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn lemma_suite() -> Outcome {
    let mut worst_tail: f64 = 0.0;
    for kappa in [0.5, 1.0, 3.0] {
        let r = f64::sqrt(kappa);
        for l in 0..=5 {
            let mut c = vec![0.0; l + 1];
            c[l] = 1.0;
            let mixed: Vec<f64> = (0..=l).map(|i| 1.0 - 0.3 * i as f64).collect();
            for coeffs in [&c, &mixed] {
                let cc: Vec<C64> = coeffs.iter().map(|&x| C64::new(x, 0.0)).collect();
                for z in [0.0, 0.5, 1.3, 3.0, 6.0] {
                    let closed = eval(&tail(&cc, r), r, z).re;
                    let quad = common::tail_by_quadrature(coeffs, r, z);
                    worst_tail = worst_tail.max((closed - quad).abs() / quad.abs().max(1.0));
                }
            }
        }
    }
    let mut worst_ode: f64 = 0.0;
    for kappa in [0.5, 1.0, 3.0] {
        let r = f64::sqrt(kappa);
        for k in 0..=4 {
            let gamma: Vec<C64> = (0..=k)
                .map(|i| C64::new(1.0 + i as f64, 0.5 - 0.2 * i as f64))
                .collect();
            let mut f = vec![C64::new(0.0, 0.0)];
            f.extend(ode_particular(&gamma, r));
            let fzz = dz(&dz(&f, r), r);
            let scale = gamma.iter().map(|g| g.norm()).fold(0.0, f64::max);
            for (l, (a, b)) in fzz.iter().zip(&f).enumerate() {
                let target = gamma.get(l).copied().unwrap_or_default();
                worst_ode = worst_ode.max((-a + b * kappa - target).norm() / scale);
            }
        }
    }
    check(
        worst_tail <= 1e-10 && worst_ode <= 1e-12,
        format!("tail-integral error {worst_tail:.1e} (≤ 1e-10), ODE residual {worst_ode:.1e} (≤ 1e-12)"),
    )
}

fn manufactured_recovery() -> Outcome {
    let geom = SlabGeometry::default();
    let params = PhysicalParams::default();
    let disc = Discretization::new(8, 48);
    let eps = 0.1;

    let exact = ManufacturedField::full_recipe(geom, disc.modes, 3, 11);
    let (sol, _) = solve_full(&exact.full_data(eps, &params), eps, &geom, &params, &disc)
        .map_err(|e| e.to_string())?;
    let full = max3(
        exact
            .max_error(&sol, &Subdomain::ALL)
            .map_err(|e| e.to_string())?,
    );

    let darcy = ManufacturedField::darcy_recipe(geom, disc.modes, 3, 5);
    let (gm, h, l) = darcy.darcy_data(&params);
    let grids = SlabGrids::uniform(&geom, &disc).map_err(|e| e.to_string())?;
    let spec = ElementarySpec::from_profiles(
        geom,
        disc.modes,
        grids.clone(),
        &gm,
        &darcy.fluid_forces(&params),
        h,
        l,
    )
    .map_err(|e| e.to_string())?;
    let sol = solve_elementary(&spec, &params).map_err(|e| e.to_string())?;
    let elementary = max3(
        darcy
            .max_error(&sol, &Subdomain::ALL)
            .map_err(|e| e.to_string())?,
    );

    let stokes = ManufacturedField::full_recipe(geom, disc.modes, 3, 2);
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
    let msol = solve_mixed_stokes(&mspec, &params).map_err(|e| e.to_string())?;
    let mut mixed: f64 = 0.0;
    for (i, f) in msol.fields.iter().enumerate() {
        for (strip, sub) in f.iter().zip([Subdomain::FluidTop, Subdomain::FluidBottom]) {
            let [u, v, p] = &stokes.strips[i][sub.index()];
            for (j, &y) in grids.get(sub).nodes.iter().enumerate() {
                mixed = mixed
                    .max((strip.u[j] - u.eval(y)).norm())
                    .max((strip.v[j] - v.eval(y)).norm())
                    .max((strip.p[j] - p.eval(y)).norm());
            }
        }
    }
    check(
        full <= 1e-8 && elementary <= 1e-8 && mixed <= 1e-8,
        format!(
            "max errors: full {full:.1e}, elementary {elementary:.1e}, mixed {mixed:.1e} (≤ 1e-8)"
        ),
    )
}

fn max3(e: [f64; 3]) -> f64 {
    e.into_iter().fold(0.0, f64::max)
}

fn field_distance(a: &SolutionPair, b: &SolutionPair) -> f64 {
    let mut diff: f64 = 0.0;
    let mut size: f64 = 0.0;
    for (fa, fb) in a.fields.iter().zip(&b.fields) {
        for (sa, sb) in fa.strips.iter().zip(&fb.strips) {
            for (x, y) in [(&sa.u, &sb.u), (&sa.v, &sb.v), (&sa.p, &sb.p)] {
                for (p, q) in x.iter().zip(y) {
                    diff = diff.max((p - q).norm());
                    size = size.max(p.norm());
                }
            }
        }
    }
    diff / size.max(1.0)
}

fn dtn_equivalence() -> Outcome {
    let geom = SlabGeometry::default();
    let params = PhysicalParams::default();
    let disc = Discretization::new(8, 48);
    let grids = SlabGrids::uniform(&geom, &disc).map_err(|e| e.to_string())?;
    let mut worst: f64 = 0.0;
    for seed in 0..5 {
        let data = random_data(100 + seed, disc.modes, RandomDataOptions::default());
        let mut h: Vec<[C64; 2]> = data.h.iter().map(|m| [m[0][1], m[1][1]]).collect();
        let i0 = disc.modes.index(0).unwrap();
        h[i0][1] = -h[i0][0];
        let spec = ElementarySpec::from_profiles(
            geom,
            disc.modes,
            grids.clone(),
            &data.g_minus,
            &data.g_plus,
            h,
            data.l.clone(),
        )
        .map_err(|e| e.to_string())?;
        let mono = solve_elementary(&spec, &params).map_err(|e| e.to_string())?;
        let comp = solve_elementary_dtn(&spec, &params).map_err(|e| e.to_string())?;
        worst = worst.max(field_distance(&mono, &comp));
    }
    check(
        worst <= 1e-8,
        format!("largest relative difference over 5 data sets {worst:.1e} (≤ 1e-8)"),
    )
}

fn structural_zeros() -> Outcome {
    let p = StudyPreset::default();
    for seed in [p.seed, 21] {
        let data = random_data(seed, p.discretization.modes, RandomDataOptions::default());
        let b = build_bundle(&data, &p.geometry, &p.params, &p.discretization, 4)
            .map_err(|e| e.to_string())?;
        for side in Side::BOTH {
            let structural = b.orders[0].layer(side).pressure.is_structural_zero()
                && b.orders[1].layer(side).pressure.is_structural_zero()
                && b.orders[0].layer(side).normal.is_structural_zero();
            if !structural {
                return Err(format!(
                    "seed {seed}: order-0/1 layer terms are not structural zeros"
                ));
            }
        }
        for (j, row) in b.degree_table().iter().enumerate() {
            let j = j as isize;
            let ok = |d: Option<usize>, bound: isize| d.is_none_or(|d| d as isize <= bound);
            for &(t, n, q) in row {
                if !(ok(t, j) && ok(n, j - 1) && ok(q, j - 2)) {
                    return Err(format!(
                        "seed {seed}: order {j} degrees {row:?} exceed the bounds"
                    ));
                }
            }
        }
    }
    Ok("p̃₀ = p̃₁ = 0 and ṽ₀·n = 0 structurally; degrees within bounds for J ≤ 4".into())
}

fn energy_uniformity() -> Outcome {
    let p = StudyPreset::default();
    let r = energy_check(
        &p.data(),
        &p.geometry,
        &p.params,
        &p.discretization,
        &ENERGY_EPS,
    )
    .map_err(|e| e.to_string())?;
    let (last, med, max) = (
        r.last_ratio.unwrap(),
        r.median_ratio.unwrap(),
        r.max_ratio.unwrap(),
    );
    let jump: Vec<f64> = r
        .records
        .iter()
        .map(|t| t.normal_jump / t.data_norm)
        .collect();
    let mut sorted = jump.clone();
    sorted.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let jump_med = 0.5 * (sorted[1] + sorted[2]);
    let jump_last = *jump.last().unwrap();
    check(
        max.is_finite() && last <= 2.0 * med && jump_last <= 2.0 * jump_med,
        format!(
            "ratios {:?}; last {last:.3e} ≤ 2×median {med:.3e}; jump term last {jump_last:.1e} ≤ 2×median {jump_med:.1e}",
            r.records.iter().map(|t| format!("{:.3e}", t.ratio.unwrap())).collect::<Vec<_>>()
        ),
    )
}

fn convergence_rates() -> Outcome {
    let p = StudyPreset::default();
    let reports = remainder_studies(
        &p.data(),
        &p.geometry,
        &p.params,
        &p.discretization,
        &[0, 2, 3, 4],
        &REMAINDER_EPS,
    )
    .map_err(|e| e.to_string())?;
    let mut parts = Vec::new();
    let mut ok = true;
    for r in &reports[1..] {
        let slope = r.fit.map_or(f64::NAN, |f| f.slope);
        ok &= r.meets_rate(0.2);
        parts.push(format!(
            "k={} slope {slope:.2} (≥ {:.1})",
            r.k,
            r.theory_slope - 0.2
        ));
    }
    let leading = reports[0]
        .fit_of(|x| x.porous_l2)
        .map_err(|e| e.to_string())?;
    ok &= leading.slope >= 0.25;
    parts.push(format!(
        "‖v_ε − v₀ − BL‖₀(Ω₋) slope {:.2} (≥ 0.25)",
        leading.slope
    ));
    check(ok, parts.join(", "))
}

fn divergence_identity() -> Outcome {
    let p = StudyPreset::default();
    let k = 2;
    let b = build_bundle(&p.data(), &p.geometry, &p.params, &p.discretization, k)
        .map_err(|e| e.to_string())?;
    let mut worst: f64 = 0.0;
    for &eps in &REMAINDER_EPS {
        let d = divergence_defect(&b, k, eps).map_err(|e| e.to_string())?;
        worst = worst.max(d.relative_difference());
    }
    let s = divergence_scaling(&b, k, &REMAINDER_EPS).map_err(|e| e.to_string())?;
    check(
        worst <= 1e-8 && (s.fit.slope - s.predicted).abs() <= 0.1,
        format!(
            "k={k}: relative agreement {worst:.1e} (≤ 1e-8), exponent {:.3} vs {:.2} (±0.1)",
            s.fit.slope, s.predicted
        ),
    )
}

fn grid_independence() -> Outcome {
    let p = StudyPreset::default();
    let recs = refinement_check(
        &p.data(),
        &p.geometry,
        &p.params,
        &p.discretization,
        &[2, 3, 4],
        &REMAINDER_EPS,
        1.5,
    )
    .map_err(|e| e.to_string())?;
    let worst = recs
        .iter()
        .filter(|r| !r.flagged)
        .map(|r| r.max_relative_change)
        .fold(0.0, f64::max);
    let flagged = recs.iter().filter(|r| r.flagged).count();
    check(
        worst < 0.01,
        format!(
            "largest relative change under N → 3N/2: {worst:.1e} (< 1%), {flagged} flagged points"
        ),
    )
}

fn main() -> ExitCode {
    let criteria: [Criterion; 8] = [
        ("1 closed-form lemma suite", lemma_suite),
        ("2 manufactured-solution recovery", manufactured_recovery),
        ("3 DtN equivalence", dtn_equivalence),
        ("4 structural zeros and degree bounds", structural_zeros),
        ("5 energy uniformity", energy_uniformity),
        ("6 convergence rates", convergence_rates),
        ("7 divergence-defect identity", divergence_identity),
        ("8 grid independence", grid_independence),
    ];
    let mut failed = 0;
    for (name, run) in criteria {
        let t = Instant::now();
        let outcome = std::panic::catch_unwind(run).unwrap_or_else(|_| Err("panicked".into()));
        let secs = t.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("PASS criterion {name}: {detail} [{secs:.1}s]"),
            Err(detail) => {
                failed += 1;
                println!("FAIL criterion {name}: {detail} [{secs:.1}s]");
            }
        }
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
