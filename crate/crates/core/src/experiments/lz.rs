use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{evaluate_sudden, SweepMeta, SweepResult, DEFAULT_LZ_GRID};
use crate::error::{invalid, Result};
use crate::models::{lz_hamiltonian, LzParams};
use crate::spectral::{diagonalize, gibbs_populations};

/// Thermal Landau-Zener sudden quench `ω_i → ω_f` over a grid of `ω_f`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LzSweepConfig {
    pub delta: f64,
    pub omega_i: f64,
    /// Inverse temperature of the initial Gibbs state.
    pub beta: f64,
    /// Final frequencies `ω_f`, absolute.
    pub omega_f: Vec<f64>,
    #[serde(default)]
    pub cluster_tol: Option<f64>,
}

impl Default for LzSweepConfig {
    fn default() -> Self {
        Self {
            delta: 1.0,
            omega_i: -20.0,
            beta: 0.1,
            omega_f: DEFAULT_LZ_GRID.values().expect("static grid"),
            cluster_tol: None,
        }
    }
}

impl LzSweepConfig {
    pub fn validate(&self) -> Result<()> {
        LzParams::new(self.delta, self.omega_i)?;
        if self.omega_f.is_empty() {
            return Err(invalid("omega_f", "grid is empty"));
        }
        if let Some(w) = self.omega_f.iter().find(|w| !w.is_finite()) {
            return Err(invalid("omega_f", format!("non-finite grid value {w}")));
        }
        if !(self.beta >= 0.0) {
            return Err(invalid("beta", format!("must be >= 0, got {}", self.beta)));
        }
        if let Some(t) = self.cluster_tol {
            if !(t >= 0.0 && t.is_finite()) {
                return Err(invalid("cluster_tol", format!("must be finite and >= 0, got {t}")));
            }
        }
        Ok(())
    }
}

/// Runs the sweep. Rows at `ω_f = ±ω_i` are flagged because the work values
/// become degenerate there. Moments are referenced to the quench ending at
/// `ω_f = Δ`.
pub fn lz_sweep(cfg: &LzSweepConfig) -> Result<SweepResult> {
    cfg.validate()?;
    let hi = lz_hamiltonian(&LzParams::new(cfg.delta, cfg.omega_i)?)?;
    let di = diagonalize(&hi)?;
    let pn = gibbs_populations(&di, cfg.beta)?;

    let point = |omega_f: f64| -> Result<super::SweepRow> {
        let hf = lz_hamiltonian(&LzParams::new(cfg.delta, omega_f)?)?;
        let df = diagonalize(&hf)?;
        let mut row = evaluate_sudden(omega_f, &di, &df, &hf, pn.clone(), cfg.cluster_tol)?.row;
        if (omega_f.abs() - cfg.omega_i.abs()).abs() <= 1e-12 * cfg.omega_i.abs().max(cfg.delta) {
            row.flagged = true;
        }
        Ok(row)
    };

    let rows = cfg
        .omega_f
        .par_iter()
        .map(|&w| point(w))
        .collect::<Result<Vec<_>>>()?;
    let reference = point(cfg.delta)?.moments;

    Ok(SweepResult {
        axis: cfg.omega_f.clone(),
        rows,
        moment_reference: Some(reference),
        meta: SweepMeta::new(
            "lz_sweep",
            serde_json::to_value(cfg)?,
            None,
            cfg.cluster_tol,
        ),
    })
}
