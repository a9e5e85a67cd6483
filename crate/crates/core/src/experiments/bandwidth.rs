use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::fit::quadratic_coefficient;
use super::EtaSampling;
use crate::error::{invalid, Error, Result};
use crate::models::{aah_hamiltonian, AahParams, BAND_EDGE_VALIDITY, DEFAULT_FIB_INDEX};
use crate::spectral::eigenvalues;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BandwidthFitConfig {
    pub fib_index: u32,
    pub j: f64,
    /// Amplitudes `Δ` in `(0, 4J]`.
    pub delta: Vec<f64>,
    pub eta: EtaSampling,
}

impl Default for BandwidthFitConfig {
    fn default() -> Self {
        Self {
            fib_index: DEFAULT_FIB_INDEX,
            j: 1.0,
            delta: (1..=16).map(|k| 0.25 * k as f64).collect(),
            eta: EtaSampling::Random {
                samples: 10,
                seed: 0,
            },
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FitResult {
    /// `c` in `max|E| - 2J ≈ cΔ²/J`.
    pub coefficient: f64,
    /// Largest `|fit - data| / data` over the grid.
    pub residual_max: f64,
    pub delta_grid: Vec<f64>,
    /// Measured excess `max|E| - 2J`, maximized over η.
    pub excess: Vec<f64>,
    pub relative_residuals: Vec<f64>,
    pub eta_samples: usize,
    pub seed: Option<u64>,
}

/// Fits the growth of the band edge beyond `2J` with `cΔ²/J`.
pub fn bandwidth_fit(cfg: &BandwidthFitConfig) -> Result<FitResult> {
    if cfg.delta.is_empty() {
        return Err(invalid("delta", "grid is empty"));
    }
    AahParams::new(cfg.fib_index, 0.0, cfg.j, 0.0)?;
    for &d in &cfg.delta {
        if !(d > 0.0 && d <= BAND_EDGE_VALIDITY * cfg.j) {
            return Err(invalid("delta", format!("{d} outside (0, 4J]")));
        }
    }
    let phases = cfg.eta.phases(cfg.fib_index)?;
    let tasks: Vec<(usize, f64)> = (0..cfg.delta.len())
        .flat_map(|k| phases.iter().map(move |&e| (k, e)))
        .collect();
    let edges = tasks
        .par_iter()
        .map(|&(k, eta)| {
            let p = AahParams::new(cfg.fib_index, cfg.delta[k], cfg.j, eta)?;
            let e = eigenvalues(&aah_hamiltonian(&p)?)?;
            Ok(e.iter().fold(0.0_f64, |m, x| m.max(x.abs())))
        })
        .collect::<Result<Vec<f64>>>()?;
    let mut excess = vec![f64::NEG_INFINITY; cfg.delta.len()];
    for (&(k, _), edge) in tasks.iter().zip(edges) {
        excess[k] = excess[k].max(edge - 2.0 * cfg.j);
    }

    // in units of J: y/J = c (Δ/J)²
    let x: Vec<f64> = cfg.delta.iter().map(|d| d / cfg.j).collect();
    let y: Vec<f64> = excess.iter().map(|e| e / cfg.j).collect();
    let coefficient = quadratic_coefficient(&x, &y)?;
    if !(coefficient > 0.0) {
        return Err(Error::Fit(format!("non-positive band-edge coefficient {coefficient}")));
    }
    let relative_residuals: Vec<f64> = x
        .iter()
        .zip(&y)
        .map(|(a, b)| (coefficient * a * a - b) / b)
        .collect();
    let residual_max = relative_residuals.iter().fold(0.0_f64, |m, r| m.max(r.abs()));
    Ok(FitResult {
        coefficient,
        residual_max,
        delta_grid: cfg.delta.clone(),
        excess,
        relative_residuals,
        eta_samples: phases.len(),
        seed: cfg.eta.seed(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn clean_band_edge_is_exactly_two_j() {
        let p = AahParams::new(10, 0.0, 1.0, 0.3).unwrap();
        let e = eigenvalues(&aah_hamiltonian(&p).unwrap()).unwrap();
        let edge = e.iter().fold(0.0_f64, |m, x| m.max(x.abs()));
        // N = 55 is odd, so only the k = 0 state reaches -2J exactly
        assert!((edge - 2.0).abs() < 1e-12);
    }

    #[test]
    fn small_lattice_fit_is_positive() {
        let cfg = BandwidthFitConfig {
            fib_index: 10,
            delta: vec![0.5, 1.0, 1.5],
            eta: EtaSampling::Random { samples: 3, seed: 1 },
            ..BandwidthFitConfig::default()
        };
        let f = bandwidth_fit(&cfg).unwrap();
        assert!(f.coefficient > 0.0);
        assert_eq!(f.excess.len(), 3);
        assert!(bandwidth_fit(&BandwidthFitConfig {
            delta: vec![],
            ..cfg
        })
        .is_err());
    }
}
