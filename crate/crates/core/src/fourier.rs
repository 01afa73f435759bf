//! Fourier mode bookkeeping and exponential-polynomial `y`-profiles.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::C64;

/// Symmetric set of Fourier modes `k = -n, ..., n`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ModeSet {
    pub n_max: usize,
}

impl ModeSet {
    pub fn new(n_max: usize) -> Self {
        ModeSet { n_max }
    }

    pub fn len(&self) -> usize {
        2 * self.n_max + 1
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn index(&self, k: i64) -> Option<usize> {
        let n = self.n_max as i64;
        (k.abs() <= n).then(|| (k + n) as usize)
    }

    pub fn mode(&self, index: usize) -> i64 {
        index as i64 - self.n_max as i64
    }

    pub fn modes(&self) -> impl Iterator<Item = i64> {
        let n = self.n_max as i64;
        -n..=n
    }

    /// Index of the mode `-k`.
    pub fn mirror(&self, index: usize) -> usize {
        self.len() - 1 - index
    }

    /// Wavenumber `2πk/L`.
    pub fn wavenumber(k: i64, period: f64) -> f64 {
        2.0 * std::f64::consts::PI * k as f64 / period
    }
}

/// One term `c · y^m · e^{λ y}`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ExpTerm {
    pub coef: C64,
    pub power: u32,
    pub rate: C64,
}

/// Finite sum of exponential-polynomial terms; closed under differentiation and products.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct ExpPoly {
    pub terms: Vec<ExpTerm>,
}

impl ExpPoly {
    pub fn zero() -> Self {
        ExpPoly::default()
    }

    pub fn term(coef: C64, power: u32, rate: C64) -> Self {
        ExpPoly {
            terms: vec![ExpTerm { coef, power, rate }],
        }
    }

    pub fn constant(c: C64) -> Self {
        ExpPoly::term(c, 0, C64::new(0.0, 0.0))
    }

    /// `Σ_m poly[m] y^m · e^{rate·y}`.
    pub fn poly_exp(poly: &[C64], rate: C64) -> Self {
        ExpPoly {
            terms: poly
                .iter()
                .enumerate()
                .map(|(m, &coef)| ExpTerm {
                    coef,
                    power: m as u32,
                    rate,
                })
                .collect(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.iter().all(|t| t.coef == C64::new(0.0, 0.0))
    }

    pub fn eval(&self, y: f64) -> C64 {
        self.terms
            .iter()
            .map(|t| t.coef * y.powi(t.power as i32) * (t.rate * y).exp())
            .sum()
    }

    pub fn derivative(&self) -> Self {
        let mut out = Vec::with_capacity(2 * self.terms.len());
        for t in &self.terms {
            if t.power > 0 {
                out.push(ExpTerm {
                    coef: t.coef * t.power as f64,
                    power: t.power - 1,
                    rate: t.rate,
                });
            }
            if t.rate != C64::new(0.0, 0.0) {
                out.push(ExpTerm {
                    coef: t.coef * t.rate,
                    power: t.power,
                    rate: t.rate,
                });
            }
        }
        ExpPoly { terms: out }.simplified()
    }

    pub fn scale(&self, s: C64) -> Self {
        ExpPoly {
            terms: self
                .terms
                .iter()
                .map(|t| ExpTerm {
                    coef: t.coef * s,
                    ..*t
                })
                .collect(),
        }
    }

    pub fn add(&self, other: &ExpPoly) -> Self {
        let mut terms = self.terms.clone();
        terms.extend_from_slice(&other.terms);
        ExpPoly { terms }.simplified()
    }

    pub fn sub(&self, other: &ExpPoly) -> Self {
        self.add(&other.scale(C64::new(-1.0, 0.0)))
    }

    pub fn mul(&self, other: &ExpPoly) -> Self {
        let mut terms = Vec::with_capacity(self.terms.len() * other.terms.len());
        for a in &self.terms {
            for b in &other.terms {
                terms.push(ExpTerm {
                    coef: a.coef * b.coef,
                    power: a.power + b.power,
                    rate: a.rate + b.rate,
                });
            }
        }
        ExpPoly { terms }.simplified()
    }

    /// Complex conjugate profile (conjugated coefficients and rates).
    pub fn conj(&self) -> Self {
        ExpPoly {
            terms: self
                .terms
                .iter()
                .map(|t| ExpTerm {
                    coef: t.coef.conj(),
                    power: t.power,
                    rate: t.rate.conj(),
                })
                .collect(),
        }
    }

    /// Merges terms with equal power and rate and drops exact zeros.
    pub fn simplified(mut self) -> Self {
        let mut out: Vec<ExpTerm> = Vec::with_capacity(self.terms.len());
        for t in self.terms.drain(..) {
            if let Some(e) = out
                .iter_mut()
                .find(|e| e.power == t.power && e.rate == t.rate)
            {
                e.coef += t.coef;
            } else {
                out.push(t);
            }
        }
        out.retain(|t| t.coef != C64::new(0.0, 0.0));
        ExpPoly { terms: out }
    }

    pub fn sample(&self, ys: &[f64]) -> Vec<C64> {
        ys.iter().map(|&y| self.eval(y)).collect()
    }

    pub fn validate(&self) -> Result<()> {
        for t in &self.terms {
            if !(t.coef.re.is_finite()
                && t.coef.im.is_finite()
                && t.rate.re.is_finite()
                && t.rate.im.is_finite())
            {
                return Err(Error::invalid("non-finite exponential-polynomial term"));
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn mode_indexing_round_trips() {
        let m = ModeSet::new(3);
        assert_eq!(m.len(), 7);
        for k in m.modes() {
            let i = m.index(k).unwrap();
            assert_eq!(m.mode(i), k);
            assert_eq!(m.mode(m.mirror(i)), -k);
        }
        assert!(m.index(4).is_none());
    }

    #[test]
    fn derivative_matches_finite_difference() {
        let p = ExpPoly::poly_exp(
            &[C64::new(1.0, 0.5), C64::new(-2.0, 0.0), C64::new(0.3, 0.1)],
            C64::new(0.7, 0.2),
        );
        let dp = p.derivative();
        let y = 0.37;
        let h = 1e-6;
        let fd = (p.eval(y + h) - p.eval(y - h)) / (2.0 * h);
        assert!((fd - dp.eval(y)).norm() < 1e-8);
    }

    #[test]
    fn product_evaluates_pointwise() {
        let a = ExpPoly::poly_exp(
            &[C64::new(1.0, 0.0), C64::new(2.0, 0.0)],
            C64::new(0.5, 0.0),
        );
        let b = ExpPoly::term(C64::new(0.0, 1.0), 2, C64::new(-1.0, 0.3));
        let y = -0.8;
        assert!((a.mul(&b).eval(y) - a.eval(y) * b.eval(y)).norm() < 1e-14);
    }
}
