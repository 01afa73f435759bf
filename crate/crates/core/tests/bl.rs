//! Closed-form layer algebra against independent evaluations.

use bwkb::bl::lemma::{dz, eval, ode_particular, tail};
use bwkb::bl::{bl_dz, bl_ode_solve, bl_tail_integral, BLProfile, CoeffField, Cutoff, ProfileRole};
use bwkb::geometry::Side;
use bwkb::C64;
use proptest::prelude::*;

mod common;
use common::tail_by_quadrature;

fn cplx(v: &[f64]) -> Vec<C64> {
    v.iter().map(|&x| C64::new(x, 0.0)).collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn tail_integral_matches_quadrature(
        kappa in prop::sample::select(vec![0.5, 1.0, 3.0]),
        c in prop::collection::vec(-2.0f64..2.0, 1..=6),
        z in 0.0f64..4.0,
    ) {
        let r = f64::sqrt(kappa);
        let closed = eval(&tail(&cplx(&c), r), r, z).re;
        let quad = tail_by_quadrature(&c, r, z);
        let scale = 1.0f64.max(quad.abs());
        prop_assert!((closed - quad).abs() <= 1e-10 * scale, "closed {closed} quadrature {quad}");
    }

    #[test]
    fn ode_solution_has_zero_symbolic_residual(
        kappa in prop::sample::select(vec![0.5, 1.0, 3.0]),
        g in prop::collection::vec((-2.0f64..2.0, -2.0f64..2.0), 1..=5),
    ) {
        let r = f64::sqrt(kappa);
        let gamma: Vec<C64> = g.iter().map(|&(a, b)| C64::new(a, b)).collect();
        let mut f = vec![C64::new(0.0, 0.0)];
        f.extend(ode_particular(&gamma, r));
        let fzz = dz(&dz(&f, r), r);
        let scale = gamma.iter().map(|v| v.norm()).fold(1.0, f64::max);
        for (l, (a, b)) in fzz.iter().zip(&f).enumerate() {
            let target = gamma.get(l).copied().unwrap_or_default();
            let res = (-a + b * kappa - target).norm();
            prop_assert!(res <= 1e-12 * scale, "coefficient {l}: residual {res}");
        }
    }

    #[test]
    fn derivative_undoes_tail_integral(
        r in 0.3f64..3.0,
        c in prop::collection::vec(-2.0f64..2.0, 1..=6),
    ) {
        let c = cplx(&c);
        let t = tail(&c, r);
        let scale = t.iter().map(|v| v.norm()).fold(1.0, f64::max) * (c.len() as f64 + r);
        for (a, b) in dz(&t, r).iter().zip(&c) {
            prop_assert!((a + b).norm() <= 1e-13 * scale);
        }
    }

    #[test]
    fn derivative_matches_finite_difference(
        r in 0.3f64..3.0,
        c in prop::collection::vec(-2.0f64..2.0, 1..=6),
        z in 0.1f64..4.0,
    ) {
        let c = cplx(&c);
        let h = 1e-5;
        let fd = (eval(&c, r, z + h) - eval(&c, r, z - h)) / (2.0 * h);
        let exact = eval(&dz(&c, r), r, z);
        prop_assert!((fd - exact).norm() <= 1e-6 * (1.0 + exact.norm()));
    }
}

fn profile(values: &[&[f64]], rate: f64) -> BLProfile {
    BLProfile {
        side: Side::Top,
        role: ProfileRole::Pressure,
        rate,
        coeffs: values
            .iter()
            .map(|v| CoeffField::extension(&cplx(v)))
            .collect(),
    }
}

#[test]
fn profile_ode_solve_satisfies_equation_pointwise() {
    let rate = 1.7;
    let rhs = profile(&[&[1.0, -0.5], &[0.25, 2.0], &[0.0, 1.0]], rate);
    let f0 = CoeffField::extension(&cplx(&[0.3, -1.2]));
    let f = bl_ode_solve(&rhs, &f0, ProfileRole::Tangential).unwrap();
    assert_eq!(f.degree(), Some(3));
    let fzz = bl_dz(&bl_dz(&f));
    let chi = [1.0];
    for m in 0..2 {
        assert_eq!(f.eval_mode(m, &chi, 0.0), f0.jets[m][0]);
        for z in [0.0, 0.3, 1.0, 2.5] {
            let res = -fzz.eval_mode(m, &chi, z) + f.eval_mode(m, &chi, z) * (rate * rate)
                - rhs.eval_mode(m, &chi, z);
            assert!(res.norm() < 1e-12, "mode {m} z {z}: {res}");
        }
    }
}

#[test]
fn profile_tail_integral_is_antiderivative() {
    let p = profile(&[&[1.0, 2.0], &[-3.0, 0.5]], 0.8);
    let t = bl_tail_integral(&p);
    let back = bl_dz(&t);
    let chi = [1.0];
    for m in 0..2 {
        for z in [0.0, 0.7, 3.0] {
            assert!((back.eval_mode(m, &chi, z) + p.eval_mode(m, &chi, z)).norm() < 1e-13);
        }
    }
}

#[test]
fn cutoff_extension_is_constant_inside_the_plateau() {
    let c = Cutoff::for_thickness(2.0);
    let f = CoeffField::extension(&cplx(&[2.0]));
    let dd = f.dd();
    for d in [0.0, 0.2, 0.49] {
        let jet = c.jet(d, 3);
        assert_eq!(f.eval_mode(0, &jet), C64::new(2.0, 0.0));
        assert_eq!(dd.eval_mode(0, &jet), C64::new(0.0, 0.0));
    }
    assert_eq!(f.eval_mode(0, &c.jet(0.8, 3)), C64::new(0.0, 0.0));
}
