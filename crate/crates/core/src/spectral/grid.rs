use std::f64::consts::PI;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::C64;

/// Smallest admissible number of collocation points per strip.
pub const MIN_POINTS: usize = 8;

/// Dense real row-major matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct RealMatrix {
    pub rows: usize,
    pub cols: usize,
    pub data: Vec<f64>,
}

impl RealMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        RealMatrix {
            rows,
            cols,
            data: vec![0.0; rows * cols],
        }
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.cols + j]
    }

    #[inline]
    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn matmul(&self, other: &RealMatrix) -> RealMatrix {
        assert_eq!(self.cols, other.rows);
        let mut out = RealMatrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a == 0.0 {
                    continue;
                }
                let orow = other.row(k);
                let dst = &mut out.data[i * other.cols..(i + 1) * other.cols];
                for (d, &b) in dst.iter_mut().zip(orow) {
                    *d += a * b;
                }
            }
        }
        out
    }

    /// `M · v` for a complex vector.
    pub fn apply(&self, v: &[C64]) -> Vec<C64> {
        assert_eq!(v.len(), self.cols);
        (0..self.rows)
            .map(|i| self.row(i).iter().zip(v).map(|(&a, &x)| x * a).sum())
            .collect()
    }

    pub fn apply_real(&self, v: &[f64]) -> Vec<f64> {
        assert_eq!(v.len(), self.cols);
        (0..self.rows)
            .map(|i| self.row(i).iter().zip(v).map(|(&a, &x)| a * x).sum())
            .collect()
    }
}

/// Interval and point count that determine a grid.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GridSpec {
    pub lo: f64,
    pub hi: f64,
    pub n: usize,
}

/// Chebyshev–Gauss–Lobatto grid on `[lo, hi]` with nodes in ascending order,
/// first and second derivative matrices, Clenshaw–Curtis weights and
/// barycentric interpolation weights.
#[derive(Debug, Clone)]
pub struct Grid1D {
    pub spec: GridSpec,
    pub nodes: Vec<f64>,
    /// Nodes on the reference interval `[-1, 1]`.
    pub reference: Vec<f64>,
    pub d1: RealMatrix,
    pub d2: RealMatrix,
    pub weights: Vec<f64>,
    bary: Vec<f64>,
}

impl PartialEq for Grid1D {
    fn eq(&self, other: &Self) -> bool {
        self.spec == other.spec
    }
}

impl Serialize for Grid1D {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.spec.serialize(s)
    }
}

impl<'de> Deserialize<'de> for Grid1D {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let spec = GridSpec::deserialize(d)?;
        Grid1D::new(spec.lo, spec.hi, spec.n).map_err(serde::de::Error::custom)
    }
}

impl Grid1D {
    pub fn new(lo: f64, hi: f64, n: usize) -> Result<Self> {
        if n < MIN_POINTS {
            return Err(Error::invalid(format!(
                "grid needs at least {MIN_POINTS} points, got {n}"
            )));
        }
        if !(lo.is_finite() && hi.is_finite() && hi > lo) {
            return Err(Error::invalid(format!(
                "degenerate grid interval [{lo}, {hi}]"
            )));
        }
        let m = (n - 1) as f64;
        // t_j = -cos(jπ/m), written with sines for exact symmetry.
        let reference: Vec<f64> = (0..n)
            .map(|j| (PI * (2.0 * j as f64 - m) / (2.0 * m)).sin())
            .collect();
        let half = 0.5 * (hi - lo);
        let nodes: Vec<f64> = reference
            .iter()
            .enumerate()
            .map(|(j, &t)| {
                if j == 0 {
                    lo
                } else if j == n - 1 {
                    hi
                } else {
                    lo + half * (t + 1.0)
                }
            })
            .collect();
        let bary: Vec<f64> = (0..n)
            .map(|j| {
                let s = if j % 2 == 0 { 1.0 } else { -1.0 };
                if j == 0 || j == n - 1 {
                    0.5 * s
                } else {
                    s
                }
            })
            .collect();

        let theta = |j: usize| PI * j as f64 / m;
        let mut d1 = RealMatrix::zeros(n, n);
        for i in 0..n {
            let mut diag = 0.0;
            for j in 0..n {
                if i == j {
                    continue;
                }
                // t_i - t_j = 2 sin((θi+θj)/2) sin((θi-θj)/2)
                let diff =
                    2.0 * (0.5 * (theta(i) + theta(j))).sin() * (0.5 * (theta(i) - theta(j))).sin();
                let v = (bary[j] / bary[i]) / diff;
                d1.data[i * n + j] = v;
                diag -= v;
            }
            d1.data[i * n + i] = diag;
        }
        let scale = 1.0 / half;
        for v in d1.data.iter_mut() {
            *v *= scale;
        }
        let d2 = d1.matmul(&d1);
        let weights = clenshaw_curtis(n).into_iter().map(|w| w * half).collect();
        Ok(Grid1D {
            spec: GridSpec { lo, hi, n },
            nodes,
            reference,
            d1,
            d2,
            weights,
            bary,
        })
    }

    pub fn from_spec(spec: GridSpec) -> Result<Self> {
        Grid1D::new(spec.lo, spec.hi, spec.n)
    }

    pub fn len(&self) -> usize {
        self.spec.n
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn differentiate(&self, v: &[C64]) -> Vec<C64> {
        self.d1.apply(v)
    }

    pub fn differentiate2(&self, v: &[C64]) -> Vec<C64> {
        self.d2.apply(v)
    }

    pub fn integrate(&self, v: &[C64]) -> C64 {
        v.iter().zip(&self.weights).map(|(&x, &w)| x * w).sum()
    }

    pub fn integrate_real(&self, v: &[f64]) -> f64 {
        v.iter().zip(&self.weights).map(|(&x, &w)| x * w).sum()
    }

    /// Barycentric interpolation matrix from the grid values to the points `ys`.
    pub fn interpolation_matrix(&self, ys: &[f64]) -> Result<RealMatrix> {
        let n = self.len();
        let tol = 1e-12 * (self.spec.hi - self.spec.lo);
        let mut m = RealMatrix::zeros(ys.len(), n);
        for (r, &y) in ys.iter().enumerate() {
            if y < self.spec.lo - tol || y > self.spec.hi + tol {
                return Err(Error::invalid(format!(
                    "interpolation point {y} outside [{}, {}]",
                    self.spec.lo, self.spec.hi
                )));
            }
            let row = &mut m.data[r * n..(r + 1) * n];
            if let Some(j) = self.nodes.iter().position(|&x| x == y) {
                row[j] = 1.0;
                continue;
            }
            let mut denom = 0.0;
            for j in 0..n {
                let c = self.bary[j] / (y - self.nodes[j]);
                row[j] = c;
                denom += c;
            }
            for v in row.iter_mut() {
                *v /= denom;
            }
        }
        Ok(m)
    }

    pub fn interpolate(&self, v: &[C64], y: f64) -> Result<C64> {
        let m = self.interpolation_matrix(&[y])?;
        Ok(m.apply(v)[0])
    }

    /// Chebyshev coefficients of the interpolant through the grid values.
    pub fn chebyshev_coefficients(&self, v: &[C64]) -> Vec<C64> {
        let n = self.len();
        let m = (n - 1) as f64;
        (0..n)
            .map(|k| {
                let mut s = C64::new(0.0, 0.0);
                for (j, &f) in v.iter().enumerate() {
                    // reference node t_j = cos(π (m - j)/m)
                    let t_k = (PI * k as f64 * (m - j as f64) / m).cos();
                    let w = if j == 0 || j == n - 1 { 0.5 } else { 1.0 };
                    s += f * (w * t_k);
                }
                let c = if k == 0 || k == n - 1 {
                    1.0 / m
                } else {
                    2.0 / m
                };
                s * c
            })
            .collect()
    }

    /// Ratio of the largest of the last four Chebyshev coefficients to the largest one.
    pub fn spectral_tail(&self, v: &[C64]) -> f64 {
        let c = self.chebyshev_coefficients(v);
        let max = c.iter().map(|x| x.norm()).fold(0.0, f64::max);
        if max == 0.0 {
            return 0.0;
        }
        let tail = c.iter().rev().take(4).map(|x| x.norm()).fold(0.0, f64::max);
        tail / max
    }
}

/// Clenshaw–Curtis weights on `[-1, 1]` for the Chebyshev–Gauss–Lobatto nodes.
fn clenshaw_curtis(n: usize) -> Vec<f64> {
    let m = n - 1;
    let mf = m as f64;
    let mut w = vec![0.0; n];
    let interior: Vec<usize> = (1..m).collect();
    if m.is_multiple_of(2) {
        w[0] = 1.0 / (mf * mf - 1.0);
        w[m] = w[0];
        for &i in &interior {
            let th = PI * i as f64 / mf;
            let mut v = 1.0;
            for k in 1..m / 2 {
                v -= 2.0 * (2.0 * k as f64 * th).cos() / (4.0 * (k * k) as f64 - 1.0);
            }
            v -= (mf * th).cos() / (mf * mf - 1.0);
            w[i] = 2.0 * v / mf;
        }
    } else {
        w[0] = 1.0 / (mf * mf);
        w[m] = w[0];
        for &i in &interior {
            let th = PI * i as f64 / mf;
            let mut v = 1.0;
            for k in 1..=(m - 1) / 2 {
                v -= 2.0 * (2.0 * k as f64 * th).cos() / (4.0 * (k * k) as f64 - 1.0);
            }
            w[i] = 2.0 * v / mf;
        }
    }
    w
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(x: f64) -> C64 {
        C64::new(x, 0.0)
    }

    #[test]
    fn derivative_of_smooth_function_is_spectrally_accurate() {
        let g = Grid1D::new(-1.0, 0.5, 32).unwrap();
        let f: Vec<C64> = g
            .nodes
            .iter()
            .map(|&y| c((2.0 * y).sin() * y.exp()))
            .collect();
        let df = g.differentiate(&f);
        let d2f = g.differentiate2(&f);
        for (j, &y) in g.nodes.iter().enumerate() {
            let exact = (2.0 * (2.0 * y).cos() + (2.0 * y).sin()) * y.exp();
            let exact2 = (4.0 * (2.0 * y).cos() - 3.0 * (2.0 * y).sin()) * y.exp();
            assert!((df[j].re - exact).abs() < 1e-11, "d1 at {y}");
            assert!((d2f[j].re - exact2).abs() < 1e-8, "d2 at {y}");
        }
    }

    #[test]
    fn quadrature_integrates_polynomials_exactly() {
        for n in [8, 9, 16, 17] {
            let g = Grid1D::new(0.0, 2.0, n).unwrap();
            for p in 0..n as i32 {
                let v: Vec<f64> = g.nodes.iter().map(|&y| y.powi(p)).collect();
                let exact = 2f64.powi(p + 1) / (p + 1) as f64;
                assert!(
                    (g.integrate_real(&v) - exact).abs() < 1e-12 * exact.max(1.0),
                    "n={n} p={p}"
                );
            }
        }
    }

    #[test]
    fn interpolation_reproduces_polynomials() {
        let g = Grid1D::new(-2.0, -1.0, 12).unwrap();
        let v: Vec<C64> = g.nodes.iter().map(|&y| c(y.powi(7) - 3.0 * y)).collect();
        for y in [-2.0, -1.7, -1.3333, -1.0] {
            let iv = g.interpolate(&v, y).unwrap();
            assert!((iv.re - (y.powi(7) - 3.0 * y)).abs() < 1e-12);
        }
        assert!(g.interpolate(&v, 0.5).is_err());
    }

    #[test]
    fn chebyshev_tail_detects_resolution() {
        let g = Grid1D::new(-1.0, 1.0, 24).unwrap();
        let smooth: Vec<C64> = g.nodes.iter().map(|&y| c(y.cos())).collect();
        let steep: Vec<C64> = g
            .nodes
            .iter()
            .map(|&y| c((-200.0 * (y + 1.0)).exp()))
            .collect();
        assert!(g.spectral_tail(&smooth) < 1e-12);
        assert!(g.spectral_tail(&steep) > 1e-6);
    }

    #[test]
    fn rejects_too_few_points() {
        assert!(Grid1D::new(0.0, 1.0, 7).is_err());
    }
}
