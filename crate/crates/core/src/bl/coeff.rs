//! Coefficient fields `c(x, d) = Σ_k e^{iξ_k x} Σ_r a_{k,r} χ^{(r)}(d)`.
//!
//! Tangential derivatives act on the Fourier index, `(∇d·∇)` shifts the jet index
//! (`∂_d χ^{(r)} = χ^{(r+1)}`), and on `Σ` only `a_{k,0}` survives because the cutoff
//! is identically one near the interface.

use serde::{Deserialize, Serialize};

use crate::fourier::ModeSet;
use crate::C64;

/// Coefficient field; `jets[m][r]` multiplies `e^{iξ_m x} χ^{(r)}(d)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CoeffField {
    pub jets: Vec<Vec<C64>>,
}

impl CoeffField {
    pub fn zeros(n_modes: usize, jet_len: usize) -> Self {
        CoeffField {
            jets: vec![vec![C64::new(0.0, 0.0); jet_len]; n_modes],
        }
    }

    /// `χ(d) · Σ_k v_k e^{iξ_k x}`: the cutoff extension of interface values.
    pub fn extension(values: &[C64]) -> Self {
        CoeffField {
            jets: values.iter().map(|&v| vec![v]).collect(),
        }
    }

    pub fn n_modes(&self) -> usize {
        self.jets.len()
    }

    pub fn jet_len(&self) -> usize {
        self.jets.first().map_or(0, |j| j.len())
    }

    fn padded(&self, len: usize) -> Self {
        CoeffField {
            jets: self
                .jets
                .iter()
                .map(|j| {
                    let mut j = j.clone();
                    j.resize(len, C64::new(0.0, 0.0));
                    j
                })
                .collect(),
        }
    }

    pub fn add(&self, other: &CoeffField) -> Self {
        let len = self.jet_len().max(other.jet_len());
        let mut out = self.padded(len);
        for (a, b) in out.jets.iter_mut().zip(&other.jets) {
            for (x, y) in a.iter_mut().zip(b) {
                *x += y;
            }
        }
        out
    }

    pub fn scale(&self, s: C64) -> Self {
        CoeffField {
            jets: self
                .jets
                .iter()
                .map(|j| j.iter().map(|v| v * s).collect())
                .collect(),
        }
    }

    /// `∂_x`: multiplies mode `k` by `iξ_k`.
    pub fn dx(&self, modes: ModeSet, period: f64) -> Self {
        CoeffField {
            jets: self
                .jets
                .iter()
                .enumerate()
                .map(|(m, j)| {
                    let f = C64::new(0.0, ModeSet::wavenumber(modes.mode(m), period));
                    j.iter().map(|v| v * f).collect()
                })
                .collect(),
        }
    }

    /// `∂_d`: shifts every jet by one order.
    pub fn dd(&self) -> Self {
        CoeffField {
            jets: self
                .jets
                .iter()
                .map(|j| {
                    let mut out = Vec::with_capacity(j.len() + 1);
                    out.push(C64::new(0.0, 0.0));
                    out.extend_from_slice(j);
                    out
                })
                .collect(),
        }
    }

    /// Flat-slab Laplacian `∂_xx + ∂_dd`.
    pub fn lap(&self, modes: ModeSet, period: f64) -> Self {
        let mut out = self.dd().dd();
        for (m, j) in self.jets.iter().enumerate() {
            let xi = ModeSet::wavenumber(modes.mode(m), period);
            for (r, v) in j.iter().enumerate() {
                out.jets[m][r] -= v * (xi * xi);
            }
        }
        out
    }

    /// Fourier coefficients of the trace on `Σ` (`d = 0`).
    pub fn trace(&self) -> Vec<C64> {
        self.jets
            .iter()
            .map(|j| j.first().copied().unwrap_or_default())
            .collect()
    }

    /// Value of mode `m` given the cutoff jet `[χ(d), χ'(d), …]` at the point.
    pub fn eval_mode(&self, m: usize, chi: &[f64]) -> C64 {
        self.jets[m].iter().zip(chi).map(|(a, &c)| a * c).sum()
    }

    pub fn max_abs(&self) -> f64 {
        self.jets
            .iter()
            .flatten()
            .map(|v| v.norm())
            .fold(0.0, f64::max)
    }
}

/// Geometric operators built from the distance function `d`.
pub trait DistanceHooks: Sync {
    /// `(∇d·∇) c`.
    fn grad_d_dot_grad(&self, c: &CoeffField) -> CoeffField;
    /// `Δd · c`, or `None` when `Δd ≡ 0`.
    fn lap_d_times(&self, c: &CoeffField) -> Option<CoeffField>;
}

/// Flat interfaces: `(∇d·∇) = ∂_d`, `Δd = 0`.
#[derive(Debug, Clone, Copy, Default)]
pub struct FlatHooks;

impl DistanceHooks for FlatHooks {
    fn grad_d_dot_grad(&self, c: &CoeffField) -> CoeffField {
        c.dd()
    }
    fn lap_d_times(&self, _c: &CoeffField) -> Option<CoeffField> {
        None
    }
}

/// Flat `∇d` with an injected constant `Δd`, used to exercise curvature terms.
#[derive(Debug, Clone, Copy)]
pub struct SyntheticCurvature {
    pub lap_d: f64,
}

impl DistanceHooks for SyntheticCurvature {
    fn grad_d_dot_grad(&self, c: &CoeffField) -> CoeffField {
        c.dd()
    }
    fn lap_d_times(&self, c: &CoeffField) -> Option<CoeffField> {
        Some(c.scale(C64::new(self.lap_d, 0.0)))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn laplacian_of_extension() {
        let modes = ModeSet::new(1);
        let c =
            CoeffField::extension(&[C64::new(1.0, 0.0), C64::new(2.0, 0.0), C64::new(3.0, 0.0)]);
        let l = c.lap(modes, 2.0 * std::f64::consts::PI);
        assert_eq!(l.jet_len(), 3);
        assert_eq!(l.jets[0][0], C64::new(-1.0, 0.0));
        assert_eq!(l.jets[1][0], C64::new(0.0, 0.0));
        assert_eq!(l.jets[2][2], C64::new(3.0, 0.0));
        assert_eq!(l.trace()[2], C64::new(-3.0, 0.0));
    }
}
