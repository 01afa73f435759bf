//! Shared oracles of the integration tests.

use bwkb::spectral::gauss_legendre;

/// Adaptive Gauss–Legendre: splits a panel until its 10- and 20-point rules agree to `tol`.
pub fn adaptive(f: &dyn Fn(f64) -> f64, a: f64, b: f64, tol: f64, depth: usize) -> f64 {
    let rule = |n: usize| {
        let (t, w) = gauss_legendre(n);
        let h = 0.5 * (b - a);
        t.iter()
            .zip(&w)
            .map(|(&x, &wi)| wi * h * f(a + h * (x + 1.0)))
            .sum::<f64>()
    };
    let (coarse, fine) = (rule(10), rule(20));
    if (coarse - fine).abs() <= tol || depth == 0 {
        return fine;
    }
    let m = 0.5 * (a + b);
    adaptive(f, a, m, tol, depth - 1) + adaptive(f, m, b, tol, depth - 1)
}

/// `∫_z^∞ f` by adaptive quadrature on `[z, z + 80/r]`, beyond which the integrand is below `e^{-80}`.
pub fn tail_by_quadrature(c: &[f64], r: f64, z: f64) -> f64 {
    let f = |s: f64| {
        let mut p = 0.0;
        for &cl in c.iter().rev() {
            p = p * s + cl;
        }
        p * (-r * s).exp()
    };
    adaptive(&f, z, z + 80.0 / r, 1e-14, 14)
}
