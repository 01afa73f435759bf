//! Least-squares slope of `log(value)` against `log(ε)`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Fewest usable points for a slope fit.
pub const MIN_FIT_POINTS: usize = 4;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SlopeFit {
    pub slope: f64,
    pub intercept: f64,
    pub points: usize,
}

/// Fits `log v = slope · log ε + intercept` over the points with `use_point`
/// set and a positive finite value.
pub fn fit_slope(eps: &[f64], values: &[f64], use_point: &[bool]) -> Result<SlopeFit> {
    if eps.len() != values.len() || eps.len() != use_point.len() {
        return Err(Error::invalid("slope fit inputs have different lengths"));
    }
    let pts: Vec<(f64, f64)> = eps
        .iter()
        .zip(values)
        .zip(use_point)
        .filter(|((e, v), u)| **u && **e > 0.0 && **v > 0.0 && v.is_finite())
        .map(|((e, v), _)| (e.ln(), v.ln()))
        .collect();
    if pts.len() < MIN_FIT_POINTS {
        return Err(Error::invalid(format!(
            "slope fit needs at least {MIN_FIT_POINTS} usable points, got {}",
            pts.len()
        )));
    }
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    if sxx == 0.0 {
        return Err(Error::invalid("slope fit needs distinct ε values"));
    }
    let slope = sxy / sxx;
    Ok(SlopeFit {
        slope,
        intercept: my - slope * mx,
        points: pts.len(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exact_power_law() {
        let eps = [1e-1, 1e-2, 1e-3, 1e-4];
        let v: Vec<f64> = eps.iter().map(|e: &f64| 3.0 * e.powf(0.75)).collect();
        let f = fit_slope(&eps, &v, &[true; 4]).unwrap();
        assert!((f.slope - 0.75).abs() < 1e-12);
        assert!((f.intercept - 3f64.ln()).abs() < 1e-12);
    }

    #[test]
    fn too_few_points() {
        let eps = [1e-1, 1e-2, 1e-3, 1e-4];
        assert!(fit_slope(&eps, &[1.0; 4], &[true, true, true, false]).is_err());
    }
}
