//! Physical parameters.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Physical constants of the transmission problem.
///
/// `kappa` is the inverse permeability, `mu` the fluid viscosity, `alpha` the
/// tangential slip coefficient and `beta` the normal-average coefficient.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PhysicalParams {
    pub kappa: f64,
    pub mu: f64,
    pub alpha: f64,
    pub beta: f64,
}

impl Default for PhysicalParams {
    fn default() -> Self {
        PhysicalParams {
            kappa: 1.0,
            mu: 1.0,
            alpha: 1.0,
            beta: 1.0,
        }
    }
}

impl PhysicalParams {
    pub fn new(kappa: f64, mu: f64, alpha: f64, beta: f64) -> Result<Self> {
        let p = PhysicalParams {
            kappa,
            mu,
            alpha,
            beta,
        };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        for (name, v) in [
            ("kappa", self.kappa),
            ("mu", self.mu),
            ("alpha", self.alpha),
            ("beta", self.beta),
        ] {
            if !(v.is_finite() && v > 0.0) {
                return Err(Error::invalid(format!(
                    "parameter {name} must be positive, got {v}"
                )));
            }
        }
        Ok(())
    }

    /// Decay rate `√κ` of the boundary-layer profiles.
    pub fn decay_rate(&self) -> f64 {
        self.kappa.sqrt()
    }
}

/// Validates a viscosity parameter `ε ∈ (0, 1]`.
pub fn check_eps(eps: f64) -> Result<()> {
    if !(eps.is_finite() && eps > 0.0 && eps <= 1.0) {
        return Err(Error::invalid(format!("eps must lie in (0, 1], got {eps}")));
    }
    Ok(())
}
