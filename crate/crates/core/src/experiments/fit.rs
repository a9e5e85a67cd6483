//! Least-squares helpers for the scaling and band-edge fits.

use serde::Serialize;

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LinearFit {
    pub slope: f64,
    pub intercept: f64,
    /// `y - (slope·x + intercept)`.
    pub residuals: Vec<f64>,
}

/// Ordinary least squares `y ≈ a x + b`.
pub fn linear_fit(x: &[f64], y: &[f64]) -> Result<LinearFit> {
    if x.len() != y.len() {
        return Err(Error::Fit(format!("{} abscissae but {} ordinates", x.len(), y.len())));
    }
    if x.len() < 2 {
        return Err(Error::Fit("need at least two points".into()));
    }
    if x.iter().chain(y).any(|v| !v.is_finite()) {
        return Err(Error::Fit("non-finite data".into()));
    }
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let sxx: f64 = x.iter().map(|a| (a - mx).powi(2)).sum();
    if sxx == 0.0 {
        return Err(Error::Fit("all abscissae coincide".into()));
    }
    let sxy: f64 = x.iter().zip(y).map(|(a, b)| (a - mx) * (b - my)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let residuals = x.iter().zip(y).map(|(a, b)| b - (slope * a + intercept)).collect();
    Ok(LinearFit {
        slope,
        intercept,
        residuals,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PowerLawFit {
    pub exponent: f64,
    pub prefactor: f64,
    /// Residuals of `ln y` against the fitted line.
    pub log_residuals: Vec<f64>,
}

/// `y ≈ A x^α` by regressing `ln y` on `ln x`. Needs three or more strictly
/// positive points.
pub fn power_law_fit(x: &[f64], y: &[f64]) -> Result<PowerLawFit> {
    if x.len() < 3 {
        return Err(Error::Fit(format!("power law needs >= 3 points, got {}", x.len())));
    }
    if let Some(v) = x.iter().chain(y).find(|v| !(**v > 0.0)) {
        return Err(Error::Fit(format!("power law needs positive data, got {v}")));
    }
    let lx: Vec<f64> = x.iter().map(|v| v.ln()).collect();
    let ly: Vec<f64> = y.iter().map(|v| v.ln()).collect();
    let f = linear_fit(&lx, &ly)?;
    Ok(PowerLawFit {
        exponent: f.slope,
        prefactor: f.intercept.exp(),
        log_residuals: f.residuals,
    })
}

/// Least-squares `c` in `y ≈ c x²`: `c = Σ x² y / Σ x⁴`.
pub fn quadratic_coefficient(x: &[f64], y: &[f64]) -> Result<f64> {
    if x.len() != y.len() || x.is_empty() {
        return Err(Error::Fit("need matching, nonempty data".into()));
    }
    let num: f64 = x.iter().zip(y).map(|(a, b)| a * a * b).sum();
    let den: f64 = x.iter().map(|a| a.powi(4)).sum();
    if den == 0.0 || !num.is_finite() {
        return Err(Error::Fit("degenerate quadratic fit".into()));
    }
    Ok(num / den)
}
