use ndarray::Array2;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{
    evaluate_quench, evaluate_sudden, ground_index, quench_tol, StateSpec, SweepMeta, SweepResult, SweepRow,
    DEFAULT_AAH_GRID,
};
use crate::error::{invalid, Error, Result};
use crate::infotheory::per_level_coherences;
use crate::models::{aah_hamiltonian, AahParams, QuenchDirection, DEFAULT_ETA, DEFAULT_FIB_INDEX};
use crate::spectral::{
    diagonalize, gibbs_populations, HermitianOperator, SpectralDecomposition, UnitaryMatrix,
};
use crate::tpm::{
    default_cluster_tol, eigenstate_work_distribution, transition_probabilities,
    UncollectedDistribution, WorkDistribution,
};

/// A sweep of AAH sudden quenches over the potential amplitude `Δ`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AahSweepConfig {
    pub fib_index: u32,
    pub j: f64,
    pub eta: f64,
    /// Amplitudes `Δ`, absolute (same units as `j`).
    pub delta: Vec<f64>,
    pub direction: QuenchDirection,
    #[serde(default)]
    pub cluster_tol: Option<f64>,
}

impl Default for AahSweepConfig {
    fn default() -> Self {
        Self {
            fib_index: DEFAULT_FIB_INDEX,
            j: 1.0,
            eta: DEFAULT_ETA,
            delta: DEFAULT_AAH_GRID.values().expect("static grid"),
            direction: QuenchDirection::DeltaToZero,
            cluster_tol: None,
        }
    }
}

impl AahSweepConfig {
    pub fn params(&self, delta: f64) -> Result<AahParams> {
        AahParams::new(self.fib_index, delta, self.j, self.eta)
    }

    pub fn validate(&self) -> Result<()> {
        self.params(0.0)?;
        if self.delta.is_empty() {
            return Err(invalid("delta", "grid is empty"));
        }
        for &d in &self.delta {
            if !(d > 0.0 && d <= 4.0 * self.j) {
                return Err(invalid("delta", format!("{d} outside (0, 4J]")));
            }
        }
        if let Some(t) = self.cluster_tol {
            if !(t >= 0.0 && t.is_finite()) {
                return Err(invalid("cluster_tol", format!("must be finite and >= 0, got {t}")));
            }
        }
        Ok(())
    }
}

/// The `Δ`-independent end of every quench in a sweep.
struct Fixed {
    h: HermitianOperator,
    d: SpectralDecomposition,
}

fn fixed_end(cfg: &AahSweepConfig) -> Result<Fixed> {
    let h = aah_hamiltonian(&cfg.params(0.0)?)?;
    let d = diagonalize(&h)?;
    Ok(Fixed { h, d })
}

/// Diagonalized `(H_i, H_f)` for one amplitude; `hf` is returned for the
/// trace formula.
fn quench_pair(
    cfg: &AahSweepConfig,
    fixed: &Fixed,
    delta: f64,
) -> Result<(SpectralDecomposition, SpectralDecomposition, HermitianOperator)> {
    let h = aah_hamiltonian(&cfg.params(delta)?)?;
    let d = diagonalize(&h)?;
    Ok(match cfg.direction {
        QuenchDirection::ZeroToDelta => (fixed.d.clone(), d, h),
        QuenchDirection::DeltaToZero => (d, fixed.d.clone(), fixed.h.clone()),
    })
}

/// Work distribution of a ground-state quench between `H(0)` and `H(Δ)`.
/// `cluster_tol = None` uses the per-quench default.
pub fn aah_work_histogram(
    p: &AahParams,
    direction: QuenchDirection,
    cluster_tol: Option<f64>,
) -> Result<WorkDistribution> {
    p.validate()?;
    let (a, b) = direction.amplitudes(p.delta);
    let di = diagonalize(&aah_hamiltonian(&p.with_delta(a))?)?;
    let df = diagonalize(&aah_hamiltonian(&p.with_delta(b))?)?;
    let k = ground_index(&di)?;
    let tol = cluster_tol.unwrap_or_else(|| default_cluster_tol(&di, &df));
    eigenstate_work_distribution(&di, k, &df, &UnitaryMatrix::identity(di.dim()), tol)
}

fn check_zero_mean(cfg: &AahSweepConfig, state: StateSpec, row: &SweepRow) -> Result<()> {
    if cfg.direction == QuenchDirection::ZeroToDelta && state == StateSpec::Ground {
        let mean = row.moments[0];
        if mean.abs() > 1e-10 * cfg.j {
            return Err(Error::Invariant {
                name: "zero mean work from the clean ground state",
                detail: format!("<W> = {mean:.3e} at delta = {}", row.param),
            });
        }
    }
    Ok(())
}

/// Full report for every amplitude in the grid. For `ZeroToDelta` from the
/// ground state the mean work must vanish; a nonzero mean is an error.
pub fn aah_transition_sweep(cfg: &AahSweepConfig, state: StateSpec) -> Result<SweepResult> {
    cfg.validate()?;
    let fixed = fixed_end(cfg)?;
    let rows = cfg
        .delta
        .par_iter()
        .map(|&delta| {
            let (di, df, hf) = quench_pair(cfg, &fixed, delta)?;
            let pn = state.populations(&di)?;
            let row = evaluate_sudden(delta, &di, &df, &hf, pn, cfg.cluster_tol)?.row;
            check_zero_mean(cfg, state, &row)?;
            Ok(row)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(SweepResult {
        axis: cfg.delta.clone(),
        rows,
        moment_reference: None,
        meta: SweepMeta::new(
            "aah_sweep",
            serde_json::json!({ "config": cfg, "state": state }),
            None,
            cfg.cluster_tol,
        ),
    })
}

/// One sweep per inverse temperature, sharing diagonalizations.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ThermalSweep {
    pub betas: Vec<f64>,
    pub sweeps: Vec<SweepResult>,
    /// Largest deviation of `C_max` at any `Δ` from its value at the first
    /// `β`; zero because the transition matrix does not depend on `β`.
    pub c_max_spread: f64,
}

pub fn thermal_sweep(cfg: &AahSweepConfig, betas: &[f64]) -> Result<ThermalSweep> {
    cfg.validate()?;
    if betas.is_empty() {
        return Err(invalid("betas", "empty"));
    }
    if let Some(b) = betas.iter().find(|b| !(**b >= 0.0)) {
        return Err(invalid("betas", format!("must be >= 0, got {b}")));
    }
    let fixed = fixed_end(cfg)?;
    // per amplitude: one row per β
    let per_delta = cfg
        .delta
        .par_iter()
        .map(|&delta| {
            let (di, df, hf) = quench_pair(cfg, &fixed, delta)?;
            let tol = quench_tol(&di, &df, cfg.cluster_tol);
            let first = gibbs_populations(&di, betas[0])?;
            let template = UncollectedDistribution::from_decompositions(
                &di,
                &df,
                &UnitaryMatrix::identity(di.dim()),
                first,
            )?;
            betas
                .iter()
                .map(|&beta| {
                    let u = template.with_populations(gibbs_populations(&di, beta)?)?;
                    Ok(evaluate_quench(delta, &di, &hf, &u, tol)?.row)
                })
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Vec<_>>>()?;

    let mut c_max_spread: f64 = 0.0;
    for rows in &per_delta {
        for r in rows {
            c_max_spread = c_max_spread.max((r.report.c_max - rows[0].report.c_max).abs());
        }
    }
    let sweeps = betas
        .iter()
        .enumerate()
        .map(|(b, &beta)| SweepResult {
            axis: cfg.delta.clone(),
            rows: per_delta.iter().map(|rows| rows[b].clone()).collect(),
            moment_reference: None,
            meta: SweepMeta::new(
                "thermal_sweep",
                serde_json::json!({ "config": cfg, "beta": beta }),
                None,
                cfg.cluster_tol,
            ),
        })
        .collect();
    Ok(ThermalSweep {
        betas: betas.to_vec(),
        sweeps,
        c_max_spread,
    })
}

/// `C(|n_i⟩⟨n_i|)` for every eigenstate of the clean chain, quenched to each
/// amplitude in the grid.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CoherenceMap {
    pub delta: Vec<f64>,
    /// Rows `n`, columns follow `delta`.
    pub values: Array2<f64>,
}

/// Always quenches `H(0) → H(Δ)`; `cfg.direction` is ignored.
pub fn eigenstate_coherence_map(cfg: &AahSweepConfig) -> Result<CoherenceMap> {
    cfg.validate()?;
    let cfg = AahSweepConfig {
        direction: QuenchDirection::ZeroToDelta,
        ..cfg.clone()
    };
    let fixed = fixed_end(&cfg)?;
    let columns = cfg
        .delta
        .par_iter()
        .map(|&delta| {
            let (di, df, _) = quench_pair(&cfg, &fixed, delta)?;
            let pmn = transition_probabilities(&di, &df, &UnitaryMatrix::identity(di.dim()))?;
            per_level_coherences(&pmn)
        })
        .collect::<Result<Vec<_>>>()?;
    let n = fixed.d.dim();
    let values = Array2::from_shape_fn((n, columns.len()), |(i, k)| columns[k][i]);
    Ok(CoherenceMap {
        delta: cfg.delta.clone(),
        values,
    })
}
