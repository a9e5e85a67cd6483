use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::fit::power_law_fit;
use super::{ground_index, EtaSampling, DEFAULT_DERIV_STEP, DEFAULT_ETA_SAMPLES, DEFAULT_SCALING_FIB};
use crate::error::{invalid, Result};
use crate::infotheory::entropy_of_work;
use crate::models::{aah_hamiltonian, fibonacci_pair, AahParams, QuenchDirection};
use crate::spectral::{diagonalize, SpectralDecomposition, UnitaryMatrix};
use crate::tpm::{default_cluster_tol, eigenstate_work_distribution};

/// Critical amplitude in units of `J`.
const CRITICAL: f64 = 2.0;
/// Largest relative slope change tolerated when the step is halved.
pub const RICHARDSON_RTOL: f64 = 0.01;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScalingConfig {
    pub fib_indices: Vec<u32>,
    pub j: f64,
    pub eta: EtaSampling,
    /// Central-difference half-width `δ` in units of `J`.
    pub deriv_step: f64,
    pub directions: Vec<QuenchDirection>,
    #[serde(default)]
    pub cluster_tol: Option<f64>,
}

impl Default for ScalingConfig {
    fn default() -> Self {
        Self {
            fib_indices: DEFAULT_SCALING_FIB.to_vec(),
            j: 1.0,
            eta: EtaSampling::Random {
                samples: DEFAULT_ETA_SAMPLES,
                seed: 0,
            },
            deriv_step: DEFAULT_DERIV_STEP,
            directions: vec![QuenchDirection::DeltaToZero, QuenchDirection::ZeroToDelta],
            cluster_tol: None,
        }
    }
}

impl ScalingConfig {
    pub fn validate(&self) -> Result<()> {
        if self.fib_indices.len() < 3 {
            return Err(invalid("fib_indices", "a power-law fit needs at least three sizes"));
        }
        if self.fib_indices.windows(2).any(|w| w[0] >= w[1]) {
            return Err(invalid("fib_indices", "must be strictly ascending"));
        }
        for &n in &self.fib_indices {
            AahParams::new(n, 0.0, self.j, 0.0)?;
        }
        if self.eta.samples() == 0 {
            return Err(invalid("eta", "need at least one sample"));
        }
        if let EtaSampling::Fixed { eta } = self.eta {
            AahParams::new(self.fib_indices[0], 0.0, self.j, eta)?;
        }
        if !(self.deriv_step > 0.0 && self.deriv_step < CRITICAL) {
            return Err(invalid("deriv_step", format!("must lie in (0, 2), got {}", self.deriv_step)));
        }
        if self.directions.is_empty() {
            return Err(invalid("directions", "empty"));
        }
        Ok(())
    }
}

/// `H_W'(2J)` per lattice size with its power-law fit.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScalingResult {
    pub direction: QuenchDirection,
    pub fib_indices: Vec<u32>,
    pub sizes: Vec<usize>,
    /// η-averaged central differences with step `δ`.
    pub slopes: Vec<f64>,
    /// The same with step `δ/2`.
    pub slopes_half_step: Vec<f64>,
    /// Whether halving the step changed the slope by less than 1%.
    pub richardson_ok: Vec<bool>,
    pub fit_exponent: f64,
    pub fit_prefactor: f64,
    pub log_residuals: Vec<f64>,
    pub eta_samples: usize,
    pub seed: Option<u64>,
    pub deriv_step: f64,
}

/// `H_W` at the four amplitudes `2 ± δ`, `2 ± δ/2`, for each direction.
fn entropies_at(
    cfg: &ScalingConfig,
    clean: &SpectralDecomposition,
    clean_ground: usize,
    p: AahParams,
) -> Result<Vec<[f64; 4]>> {
    let d = cfg.deriv_step * cfg.j;
    let c = CRITICAL * cfg.j;
    let amplitudes = [c + d, c - d, c + 0.5 * d, c - 0.5 * d];
    let id = UnitaryMatrix::identity(clean.dim());
    let mut out = vec![[0.0; 4]; cfg.directions.len()];
    for (a, &delta) in amplitudes.iter().enumerate() {
        let disordered = diagonalize(&aah_hamiltonian(&p.with_delta(delta))?)?;
        let tol = cfg
            .cluster_tol
            .unwrap_or_else(|| default_cluster_tol(clean, &disordered));
        for (slot, dir) in cfg.directions.iter().enumerate() {
            let w = match dir {
                QuenchDirection::ZeroToDelta => {
                    eigenstate_work_distribution(clean, clean_ground, &disordered, &id, tol)?
                }
                QuenchDirection::DeltaToZero => {
                    let g = ground_index(&disordered)?;
                    eigenstate_work_distribution(&disordered, g, clean, &id, tol)?
                }
            };
            out[slot][a] = entropy_of_work(&w)?;
        }
    }
    Ok(out)
}

/// Finite-size scaling of the entropy slope at the critical point.
pub fn scaling_derivative(cfg: &ScalingConfig) -> Result<Vec<ScalingResult>> {
    cfg.validate()?;
    let d = cfg.deriv_step * cfg.j;
    let mut tasks = Vec::new();
    let mut cleans = Vec::new();
    for (s, &n) in cfg.fib_indices.iter().enumerate() {
        let clean = diagonalize(&aah_hamiltonian(&AahParams::new(n, 0.0, cfg.j, 0.0)?)?)?;
        let g = ground_index(&clean)?;
        cleans.push((clean, g));
        for eta in cfg.eta.phases(n)? {
            tasks.push((s, AahParams::new(n, 0.0, cfg.j, eta)?));
        }
    }
    let values = tasks
        .par_iter()
        .map(|&(s, p)| entropies_at(cfg, &cleans[s].0, cleans[s].1, p))
        .collect::<Result<Vec<_>>>()?;

    let sizes: Vec<usize> = cfg
        .fib_indices
        .iter()
        .map(|&n| fibonacci_pair(n).map(|(_, f)| f as usize))
        .collect::<Result<_>>()?;
    let samples = cfg.eta.samples() as f64;
    cfg.directions
        .iter()
        .enumerate()
        .map(|(slot, &direction)| {
            let mut full = vec![0.0; sizes.len()];
            let mut half = vec![0.0; sizes.len()];
            for ((s, _), h) in tasks.iter().zip(&values) {
                let h = h[slot];
                full[*s] += (h[0] - h[1]) / (2.0 * d) / samples;
                half[*s] += (h[2] - h[3]) / d / samples;
            }
            let x: Vec<f64> = sizes.iter().map(|&n| n as f64).collect();
            let fit = power_law_fit(&x, &full)?;
            Ok(ScalingResult {
                direction,
                fib_indices: cfg.fib_indices.clone(),
                sizes: sizes.clone(),
                richardson_ok: full
                    .iter()
                    .zip(&half)
                    .map(|(a, b)| (a - b).abs() <= RICHARDSON_RTOL * a.abs())
                    .collect(),
                slopes: full,
                slopes_half_step: half,
                fit_exponent: fit.exponent,
                fit_prefactor: fit.prefactor,
                log_residuals: fit.log_residuals,
                eta_samples: cfg.eta.samples(),
                seed: cfg.eta.seed(),
                deriv_step: cfg.deriv_step,
            })
        })
        .collect()
}
