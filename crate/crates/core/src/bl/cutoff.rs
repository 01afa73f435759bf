//! Smooth cutoff `χ(d)`: equal to one for `d ≤ b/4`, zero for `d ≥ 3b/8`, with a
//! `C^∞` transition built from `e^{-1/t}`. Derivatives come from truncated Taylor
//! series arithmetic.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Cutoff with plateau `[0, inner]` and support `[0, outer)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Cutoff {
    pub inner: f64,
    pub outer: f64,
}

/// Highest derivative order available.
pub const MAX_ORDER: usize = 24;

impl Cutoff {
    /// Cutoff for a porous strip of thickness `b`.
    pub fn for_thickness(b: f64) -> Self {
        Cutoff {
            inner: 0.25 * b,
            outer: 0.375 * b,
        }
    }

    pub fn new(inner: f64, outer: f64) -> Result<Self> {
        if !(inner > 0.0 && outer > inner) {
            return Err(Error::invalid(format!(
                "invalid cutoff transition [{inner}, {outer}]"
            )));
        }
        Ok(Cutoff { inner, outer })
    }

    /// `[χ(d), χ'(d), …, χ^{(order)}(d)]`.
    pub fn jet(&self, d: f64, order: usize) -> Vec<f64> {
        let order = order.min(MAX_ORDER);
        let mut out = vec![0.0; order + 1];
        if d <= self.inner {
            out[0] = 1.0;
            return out;
        }
        if d >= self.outer {
            return out;
        }
        let w = self.outer - self.inner;
        let t0 = (self.outer - d) / w;
        let s = smooth_step_series(t0, order);
        // χ(d) = S((outer - d)/w), so χ^{(r)} = S^{(r)} (-1/w)^r = r! s_r (-1/w)^r.
        let mut fact = 1.0;
        let mut scale = 1.0;
        for (r, o) in out.iter_mut().enumerate() {
            if r > 0 {
                fact *= r as f64;
                scale *= -1.0 / w;
            }
            *o = s[r] * fact * scale;
        }
        out
    }

    pub fn value(&self, d: f64) -> f64 {
        self.jet(d, 0)[0]
    }
}

/// Taylor coefficients of `exp(-1/(t0 + s·h))` in `h`.
fn bump_series(t0: f64, sign: f64, n: usize) -> Vec<f64> {
    let base = (-1.0 / t0).exp();
    if base < 1e-250 {
        return vec![0.0; n + 1];
    }
    // a(h) = -1/(t0 + s h) = Σ -(-s)^k h^k / t0^{k+1}
    let a: Vec<f64> = (0..=n)
        .map(|k| -(-sign).powi(k as i32) / t0.powi(k as i32 + 1))
        .collect();
    let mut b = vec![0.0; n + 1];
    b[0] = base;
    for m in 1..=n {
        let mut s = 0.0;
        for k in 1..=m {
            s += k as f64 * a[k] * b[m - k];
        }
        b[m] = s / m as f64;
    }
    b
}

/// Taylor coefficients at `t0 ∈ (0, 1)` of `S(t) = f(t) / (f(t) + f(1-t))`.
fn smooth_step_series(t0: f64, n: usize) -> Vec<f64> {
    let f = bump_series(t0, 1.0, n);
    let g = bump_series(1.0 - t0, -1.0, n);
    let den: Vec<f64> = f.iter().zip(&g).map(|(a, b)| a + b).collect();
    let mut q = vec![0.0; n + 1];
    for m in 0..=n {
        let mut s = f[m];
        for k in 1..=m {
            s -= den[k] * q[m - k];
        }
        q[m] = s / den[0];
    }
    q
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn plateau_and_support() {
        let c = Cutoff::for_thickness(1.0);
        assert_eq!(c.value(0.0), 1.0);
        assert_eq!(c.value(0.25), 1.0);
        assert_eq!(c.value(0.375), 0.0);
        assert_eq!(c.value(0.9), 0.0);
        let mid = c.value(0.3125);
        assert!((mid - 0.5).abs() < 1e-14);
        assert!(c.jet(0.1, 5)[1..].iter().all(|&v| v == 0.0));
    }

    #[test]
    fn derivatives_match_finite_differences() {
        let c = Cutoff::for_thickness(1.0);
        let h = 1e-4;
        for d in [0.26, 0.29, 0.31, 0.34] {
            let j = c.jet(d, 4);
            let at = |s: f64| c.jet(d + s * h, 4);
            let (p1, p2, m1, m2) = (at(1.0), at(2.0), at(-1.0), at(-2.0));
            for r in 0..4 {
                let fd = (8.0 * (p1[r] - m1[r]) - (p2[r] - m2[r])) / (12.0 * h);
                let scale = j[r + 1].abs().max(1.0);
                assert!(
                    (fd - j[r + 1]).abs() < 1e-5 * scale,
                    "d={d} r={r}: {fd} vs {}",
                    j[r + 1]
                );
            }
        }
    }

    #[test]
    fn jet_reproduces_nearby_values_by_taylor_sum() {
        let c = Cutoff::for_thickness(1.0);
        for d in [0.27, 0.3125, 0.36, 0.37] {
            let j = c.jet(d, 20);
            let h = 0.1 * (c.outer - d).min(d - c.inner);
            let mut sum = 0.0;
            let mut fact = 1.0;
            for (r, v) in j.iter().enumerate() {
                if r > 0 {
                    fact *= r as f64;
                }
                sum += v * h.powi(r as i32) / fact;
            }
            let exact = c.value(d + h);
            assert!(
                (sum - exact).abs() < 1e-12 * exact.abs().max(1e-3),
                "d={d}: {sum} vs {exact}"
            );
        }
    }

    #[test]
    fn monotone_transition() {
        let c = Cutoff::for_thickness(2.0);
        let mut prev = 1.0;
        for i in 0..=100 {
            let d = 0.5 + 0.25 * i as f64 / 100.0;
            let v = c.value(d);
            assert!(v <= prev + 1e-15 && (0.0..=1.0).contains(&v));
            prev = v;
        }
    }
}
