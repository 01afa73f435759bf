//! Norms, energy terms and remainder machinery.

use bwkb::data::{random_data, ProblemData, RandomDataOptions};
use bwkb::field::SolutionPair;
use bwkb::fourier::ModeSet;
use bwkb::geometry::{SlabGeometry, Subdomain};
use bwkb::grids::{Discretization, SlabGrids};
use bwkb::params::PhysicalParams;
use bwkb::solvers::solve_full;
use bwkb::spectral::gauss_legendre;
use bwkb::verify::{
    compute_norms, divergence_defect, energy_check, energy_identity, energy_terms, fit_slope,
    remainder_study, StudyPreset,
};
use bwkb::wkb::build_bundle;
use bwkb::C64;

fn zero_solution(n_modes: usize) -> SolutionPair {
    let geom = SlabGeometry::default();
    let grids = SlabGrids::new(&geom, 16, 16).unwrap();
    SolutionPair::zeros(geom, ModeSet::new(n_modes), grids)
}

#[test]
fn zero_solution_has_zero_norms() {
    let n = compute_norms(&zero_solution(2)).unwrap();
    assert_eq!(n, Default::default());
}

#[test]
fn single_sine_mode_follows_parseval() {
    // u = sin(x) φ(y) on the top strip with φ(y) = 1 + y², so ‖u‖² = π ∫₀¹ φ² = π·28/15.
    let mut sol = zero_solution(1);
    let nodes = sol.grids.fluid_top.nodes.clone();
    let modes = sol.modes;
    for k in [-1i64, 1] {
        let i = modes.index(k).unwrap();
        let c = C64::new(0.0, -0.5 * k as f64);
        sol.fields[i].strip_mut(Subdomain::FluidTop).u =
            nodes.iter().map(|&y| c * (1.0 + y * y)).collect();
    }
    let n = compute_norms(&sol).unwrap();
    let expected = std::f64::consts::PI * 28.0 / 15.0;
    assert!((n.strip(Subdomain::FluidTop).l2_sq - expected).abs() < 1e-10);
}

#[test]
fn constant_porous_field_has_area_norm() {
    let mut sol = zero_solution(2);
    let i0 = sol.modes.index(0).unwrap();
    let np = sol.grids.porous.len();
    let c = C64::new(0.6, 0.0);
    sol.fields[i0].strip_mut(Subdomain::Porous).v = vec![c; np];
    let n = compute_norms(&sol).unwrap();
    let g = sol.geometry;
    assert!((n.porous().l2_sq - c.norm_sqr() * g.period * g.porous).abs() < 1e-12);
    assert!(n.porous().grad_sq.abs() < 1e-20);
}

/// Direct tensor quadrature: trapezoid in `x` (exact for the band-limited
/// integrand) times Gauss–Legendre in `y`, summing the Fourier series pointwise.
fn direct_l2_sq(sol: &SolutionPair, sub: Subdomain) -> f64 {
    let (lo, hi) = sol.geometry.interval(sub);
    let (t, w) = gauss_legendre(40);
    let nx = 4 * sol.modes.n_max + 4;
    let hx = sol.geometry.period / nx as f64;
    let mut total = 0.0;
    for (ti, wi) in t.iter().zip(&w) {
        let y = lo + 0.5 * (hi - lo) * (ti + 1.0);
        for m in 0..nx {
            let (vel, _) = sol.evaluate([m as f64 * hx, y]).unwrap();
            total += 0.5 * (hi - lo) * wi * hx * (vel[0].norm_sqr() + vel[1].norm_sqr());
        }
    }
    total
}

#[test]
fn parseval_norms_match_direct_quadrature() {
    let geom = SlabGeometry::default();
    let params = PhysicalParams::default();
    let disc = Discretization::new(3, 24);
    for seed in [1, 2, 3] {
        let data = random_data(seed, disc.modes, RandomDataOptions::default());
        let (sol, _) = solve_full(&data, 0.1, &geom, &params, &disc).unwrap();
        let n = compute_norms(&sol).unwrap();
        for sub in Subdomain::ALL {
            let direct = direct_l2_sq(&sol, sub);
            let parseval = n.strip(sub).l2_sq;
            assert!(
                (direct - parseval).abs() <= 1e-10 * parseval.max(1.0),
                "{sub:?}: {direct} vs {parseval}"
            );
        }
    }
}

#[test]
fn solutions_satisfy_the_energy_identity() {
    let p = StudyPreset::default();
    let data = p.data();
    for eps in [1e-1, 1e-2, 1e-3] {
        let (sol, _) = solve_full(&data, eps, &p.geometry, &p.params, &p.discretization).unwrap();
        let id = energy_identity(&sol, &data, &p.params, eps).unwrap();
        assert!(id.defect() < 1e-10, "ε = {eps}: {id:?}");
        let t = energy_terms(&sol, &data, &p.params, eps).unwrap();
        for v in [
            t.porous_strain,
            t.porous_l2,
            t.fluid_h1,
            t.normal_jump,
            t.jump,
            t.normal_average,
        ] {
            assert!(v >= 0.0);
        }
    }
}

#[test]
fn zero_data_energy_ratio_is_not_applicable() {
    let p = StudyPreset::default();
    let data = ProblemData::zero(p.discretization.modes);
    let r = energy_check(
        &data,
        &p.geometry,
        &p.params,
        &p.discretization,
        &[1e-1, 1e-2],
    )
    .unwrap();
    assert!(r.records.iter().all(|t| t.ratio.is_none() && t.lhs == 0.0));
    assert!(r.max_ratio.is_none());
}

#[test]
fn ascending_eps_lists_are_rejected() {
    let p = StudyPreset::default();
    let err = energy_check(
        &p.data(),
        &p.geometry,
        &p.params,
        &p.discretization,
        &[1e-3, 1e-2],
    )
    .unwrap_err();
    assert!(err.is_input_error());
}

#[test]
fn zero_layer_term_gives_zero_divergence_defect() {
    let p = StudyPreset::default();
    let data = ProblemData::zero(p.discretization.modes);
    let b = build_bundle(&data, &p.geometry, &p.params, &p.discretization, 2).unwrap();
    let d = divergence_defect(&b, 2, 1e-2).unwrap();
    assert_eq!((d.direct_layer_only, d.closed_form), (0.0, 0.0));
    assert!(d.direct < 1e-12);
}

#[test]
fn remainder_study_needs_four_points_for_a_fit() {
    let p = StudyPreset::default();
    let r = remainder_study(
        &p.data(),
        &p.geometry,
        &p.params,
        &p.discretization,
        2,
        &[1e-1, 1e-2, 1e-3],
    )
    .unwrap();
    assert!(r.fit.is_none() && r.fit_error.is_some());
    assert_eq!(r.records.len(), 3);
    assert!(
        fit_slope(
            &[1e-1, 1e-2, 1e-3, 1e-4],
            &[1.0, 0.1, 0.01, 0.001],
            &[true; 4]
        )
        .unwrap()
        .slope
            > 0.99
    );
}
