use std::f64::consts::PI;

use crate::error::{Error, Result};

/// Gauss–Legendre nodes and weights on `[-1, 1]`.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut x = vec![0.0; n];
    let mut w = vec![0.0; n];
    for i in 0..n.div_ceil(2) {
        let mut z = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, z);
            for k in 2..=n {
                let p2 = ((2 * k - 1) as f64 * z * p1 - (k - 1) as f64 * p0) / k as f64;
                p0 = p1;
                p1 = p2;
            }
            // p1 = P_n(z), p0 = P_{n-1}(z)
            dp = n as f64 * (z * p1 - p0) / (z * z - 1.0);
            let dz = p1 / dp;
            z -= dz;
            if dz.abs() <= 1e-15 {
                break;
            }
        }
        x[i] = -z;
        x[n - 1 - i] = z;
        let wi = 2.0 / ((1.0 - z * z) * dp * dp);
        w[i] = wi;
        w[n - 1 - i] = wi;
    }
    (x, w)
}

/// Composite Gauss–Legendre rule on a union of panels.
#[derive(Debug, Clone, PartialEq)]
pub struct QuadGrid {
    pub points: Vec<f64>,
    pub weights: Vec<f64>,
}

impl QuadGrid {
    /// Builds the rule from sorted panel breakpoints with `per_panel` points each.
    pub fn from_breakpoints(breaks: &[f64], per_panel: usize) -> Result<Self> {
        if breaks.len() < 2 || per_panel == 0 {
            return Err(Error::invalid("quadrature needs at least one panel"));
        }
        let (x, w) = gauss_legendre(per_panel);
        let mut points = Vec::new();
        let mut weights = Vec::new();
        for pair in breaks.windows(2) {
            let (a, b) = (pair[0], pair[1]);
            if !(b > a) {
                return Err(Error::invalid("quadrature breakpoints must increase"));
            }
            let h = 0.5 * (b - a);
            for (xi, wi) in x.iter().zip(&w) {
                points.push(a + h * (xi + 1.0));
                weights.push(h * wi);
            }
        }
        Ok(QuadGrid { points, weights })
    }

    /// Breakpoints on `[lo, hi]` graded geometrically from the ends listed in
    /// `graded_ends` (`true` for `lo`, `hi`), with smallest panel `h0`, plus
    /// any extra breakpoints.
    pub fn graded(
        lo: f64,
        hi: f64,
        h0: f64,
        grade_lo: bool,
        grade_hi: bool,
        extra: &[f64],
        per_panel: usize,
    ) -> Result<Self> {
        let len = hi - lo;
        let mut breaks = vec![lo, hi];
        let mut push_graded = |from: f64, dir: f64| {
            let mut h = h0.min(0.25 * len);
            while h < 0.5 * len {
                breaks.push(from + dir * h);
                h *= 2.0;
            }
        };
        if grade_lo {
            push_graded(lo, 1.0);
        }
        if grade_hi {
            push_graded(hi, -1.0);
        }
        breaks.extend(extra.iter().copied().filter(|&e| e > lo && e < hi));
        let uniform = 4;
        for i in 1..uniform {
            breaks.push(lo + len * i as f64 / uniform as f64);
        }
        breaks.sort_by(|a, b| a.partial_cmp(b).unwrap());
        breaks.dedup_by(|a, b| (*a - *b).abs() < 1e-12 * len);
        QuadGrid::from_breakpoints(&breaks, per_panel)
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gauss_legendre_is_exact_to_degree_2n_minus_1() {
        for n in [1, 2, 5, 12, 16] {
            let (x, w) = gauss_legendre(n);
            for p in 0..(2 * n) as i32 {
                let s: f64 = x.iter().zip(&w).map(|(x, w)| w * x.powi(p)).sum();
                let exact = if p % 2 == 0 {
                    2.0 / (p + 1) as f64
                } else {
                    0.0
                };
                assert!((s - exact).abs() < 1e-13, "n={n} p={p}");
            }
        }
    }

    #[test]
    fn graded_rule_integrates_boundary_layer() {
        let delta = 1e-3;
        let q = QuadGrid::graded(-1.0, 0.0, delta, false, true, &[], 16).unwrap();
        let s: f64 = q
            .points
            .iter()
            .zip(&q.weights)
            .map(|(y, w)| w * (y / delta).exp())
            .sum();
        let exact = delta * (1.0 - (-1.0 / delta).exp());
        assert!((s - exact).abs() < 1e-12 * exact);
    }
}
