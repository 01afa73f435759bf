//! Boundary-layer profiles with coefficient-field coefficients.

use serde::{Deserialize, Serialize};

use super::coeff::CoeffField;
use super::lemma;
use crate::error::{Error, Result};
use crate::geometry::Side;
use crate::C64;

/// Role of a profile in the layer corrector.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ProfileRole {
    /// Tangential velocity component (vector, along `τ = (1, 0)`).
    Tangential,
    /// Normal velocity component (vector, along the outward normal).
    Normal,
    /// Pressure (scalar).
    Pressure,
}

/// `Σ_{l=0}^{L} c_l(x, d) z^l e^{-r z}` attached to one interface component.
///
/// An empty coefficient list is a structural zero; the degree is tracked exactly.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BLProfile {
    pub side: Side,
    pub role: ProfileRole,
    pub rate: f64,
    pub coeffs: Vec<CoeffField>,
}

impl BLProfile {
    pub fn zero(side: Side, role: ProfileRole, rate: f64) -> Self {
        BLProfile {
            side,
            role,
            rate,
            coeffs: Vec::new(),
        }
    }

    pub fn is_structural_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Polynomial degree in `z`; `None` for a structural zero.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    /// Drops trailing coefficients that are exactly zero, so that an
    /// identically vanishing profile becomes a structural zero.
    pub fn pruned(mut self) -> Self {
        while self.coeffs.last().is_some_and(|c| c.max_abs() == 0.0) {
            self.coeffs.pop();
        }
        self
    }

    pub fn with_role(mut self, role: ProfileRole) -> Self {
        self.role = role;
        self
    }

    fn check_compatible(&self, other: &BLProfile) -> Result<()> {
        if self.side != other.side || self.rate != other.rate {
            return Err(Error::invalid(
                "profiles belong to different interface components or rates",
            ));
        }
        Ok(())
    }

    pub fn add(&self, other: &BLProfile) -> Result<Self> {
        self.check_compatible(other)?;
        let n = self.coeffs.len().max(other.coeffs.len());
        let coeffs = (0..n)
            .map(|l| match (self.coeffs.get(l), other.coeffs.get(l)) {
                (Some(a), Some(b)) => a.add(b),
                (Some(a), None) => a.clone(),
                (None, Some(b)) => b.clone(),
                (None, None) => unreachable!(),
            })
            .collect();
        Ok(BLProfile {
            coeffs,
            ..self.clone()
        })
    }

    pub fn scale(&self, s: C64) -> Self {
        BLProfile {
            coeffs: self.coeffs.iter().map(|c| c.scale(s)).collect(),
            ..self.clone()
        }
    }

    /// Applies a linear coefficient operator to every coefficient.
    pub fn map_coeffs(&self, f: impl Fn(&CoeffField) -> CoeffField) -> Self {
        BLProfile {
            coeffs: self.coeffs.iter().map(f).collect(),
            ..self.clone()
        }
    }

    /// Applies a sequence operation to every `(mode, jet)` entry independently.
    fn map_sequences(&self, out_len: usize, f: impl Fn(&[C64]) -> Vec<C64>) -> Self {
        if self.coeffs.is_empty() {
            return self.clone();
        }
        let n_modes = self.coeffs[0].n_modes();
        let jet = self.coeffs.iter().map(|c| c.jet_len()).max().unwrap_or(0);
        let mut coeffs = vec![CoeffField::zeros(n_modes, jet); out_len];
        let mut seq = vec![C64::new(0.0, 0.0); self.coeffs.len()];
        for m in 0..n_modes {
            for r in 0..jet {
                for (l, c) in self.coeffs.iter().enumerate() {
                    seq[l] = c.jets[m].get(r).copied().unwrap_or_default();
                }
                for (l, v) in f(&seq).into_iter().enumerate() {
                    coeffs[l].jets[m][r] = v;
                }
            }
        }
        BLProfile {
            coeffs,
            ..self.clone()
        }
    }

    /// Coefficient field of the trace at `z = 0`.
    pub fn trace_z0(&self, n_modes: usize) -> CoeffField {
        self.coeffs
            .first()
            .cloned()
            .unwrap_or_else(|| CoeffField::zeros(n_modes, 1))
    }

    /// Value of mode `m` at cutoff jet `chi` and layer variable `z`.
    pub fn eval_mode(&self, m: usize, chi: &[f64], z: f64) -> C64 {
        let seq: Vec<C64> = self.coeffs.iter().map(|c| c.eval_mode(m, chi)).collect();
        lemma::eval(&seq, self.rate, z)
    }

    pub fn max_coeff(&self) -> f64 {
        self.coeffs.iter().map(|c| c.max_abs()).fold(0.0, f64::max)
    }
}

/// `∂_z` of a profile; degree is preserved.
pub fn bl_dz(p: &BLProfile) -> BLProfile {
    let r = p.rate;
    p.map_sequences(p.coeffs.len(), |c| lemma::dz(c, r))
}

/// `∫_z^∞` of a profile; degree is preserved.
pub fn bl_tail_integral(p: &BLProfile) -> BLProfile {
    let r = p.rate;
    p.map_sequences(p.coeffs.len(), |c| lemma::tail(c, r))
}

/// Relative tolerance of the residual check in [`bl_ode_solve`].
pub const ODE_RESIDUAL_TOL: f64 = 1e-10;

/// Solves `-∂_zz f + κ f = rhs` with `f(0) = f0` and decay at infinity.
///
/// The result has degree `deg(rhs) + 1` (degree 0 for a zero right-hand side) and
/// is verified by substituting it back into the equation.
pub fn bl_ode_solve(rhs: &BLProfile, f0: &CoeffField, role: ProfileRole) -> Result<BLProfile> {
    let r = rhs.rate;
    let mut out = if rhs.is_structural_zero() {
        BLProfile::zero(rhs.side, role, r)
    } else {
        rhs.map_sequences(rhs.coeffs.len() + 1, |g| {
            let mut v = vec![C64::new(0.0, 0.0)];
            v.extend(lemma::ode_particular(g, r));
            v
        })
        .with_role(role)
    };
    if out.coeffs.is_empty() {
        out.coeffs.push(f0.clone());
    } else {
        out.coeffs[0] = out.coeffs[0].add(f0);
    }
    if !rhs.is_structural_zero() {
        let d2 = bl_dz(&bl_dz(&out));
        let residual = d2
            .scale(C64::new(-1.0, 0.0))
            .add(&out.scale(C64::new(r * r, 0.0)))?
            .add(&rhs.scale(C64::new(-1.0, 0.0)))?;
        let scale = rhs
            .max_coeff()
            .max(out.max_coeff() * r * r)
            .max(f64::MIN_POSITIVE);
        let res = residual.max_coeff();
        if res > ODE_RESIDUAL_TOL * scale {
            return Err(Error::internal(format!(
                "layer ODE residual {res:e} exceeds tolerance"
            )));
        }
    }
    Ok(out)
}
