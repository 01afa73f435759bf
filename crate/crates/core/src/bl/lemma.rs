//! Closed-form operations on coefficient sequences `c_0..c_L` representing
//! `f(z) = Σ_l c_l z^l e^{-r z}`.

use crate::C64;

/// Coefficients of `∂_z f`: `c'_l = (l+1) c_{l+1} - r c_l`.
pub fn dz(c: &[C64], r: f64) -> Vec<C64> {
    let n = c.len();
    (0..n)
        .map(|l| {
            let next = if l + 1 < n {
                c[l + 1] * (l + 1) as f64
            } else {
                C64::new(0.0, 0.0)
            };
            next - c[l] * r
        })
        .collect()
}

/// Coefficients of `∫_z^∞ f`, using
/// `∫_z^∞ ξ^l e^{-rξ} dξ = Σ_{j≤l} (l!/j!) r^{-(l-j+1)} z^j e^{-rz}`.
pub fn tail(c: &[C64], r: f64) -> Vec<C64> {
    let n = c.len();
    (0..n)
        .map(|j| {
            let mut s = C64::new(0.0, 0.0);
            // factor = l!/j! · r^{-(l-j+1)}
            let mut factor = 1.0 / r;
            for (l, &cl) in c.iter().enumerate().skip(j) {
                if l > j {
                    factor *= l as f64 / r;
                }
                s += cl * factor;
            }
            s
        })
        .collect()
}

/// Solves `-f'' + r² f = Σ_{i≤K} γ_i z^i e^{-rz}` for `f = Σ_{i=1}^{K+1} β_i z^i e^{-rz}`
/// by back-substitution in the upper bidiagonal system
/// `2 i r β_i - i(i+1) β_{i+1} = γ_{i-1}`. Returns `[β_1, …, β_{K+1}]`.
pub fn ode_particular(gamma: &[C64], r: f64) -> Vec<C64> {
    let k = gamma.len();
    let mut beta = vec![C64::new(0.0, 0.0); k];
    for i in (1..=k).rev() {
        let next = if i < k {
            beta[i] * (i * (i + 1)) as f64
        } else {
            C64::new(0.0, 0.0)
        };
        beta[i - 1] = (gamma[i - 1] + next) / (2.0 * i as f64 * r);
    }
    beta
}

/// `f(z)`.
pub fn eval(c: &[C64], r: f64, z: f64) -> C64 {
    let mut acc = C64::new(0.0, 0.0);
    for &cl in c.iter().rev() {
        acc = acc * z + cl;
    }
    acc * (-r * z).exp()
}
