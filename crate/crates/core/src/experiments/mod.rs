//! Experiment drivers: parameter sweeps, AAH histograms, finite-size
//! scaling of the entropy slope, per-level coherence maps and the band-edge
//! fit.
//!
//! Sweep points are independent and evaluated on the rayon pool; results are
//! always assembled in axis order.

mod aah;
mod bandwidth;
pub mod fit;
mod lz;
mod scaling;

use std::f64::consts::TAU;
use std::time::{SystemTime, UNIX_EPOCH};

use ndarray::Array1;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};
use crate::infotheory::{bounds_report, BoundsReport};
use crate::spectral::{
    gibbs_populations, Eigenvectors, HermitianOperator, SpectralDecomposition, UnitaryMatrix,
};
use crate::tpm::{
    collect_work_distribution, default_cluster_tol, work_moments, UncollectedDistribution,
    WorkDistribution, OCCUPATION_FLOOR,
};

pub use aah::{
    aah_transition_sweep, aah_work_histogram, eigenstate_coherence_map, thermal_sweep,
    AahSweepConfig, CoherenceMap, ThermalSweep,
};
pub use bandwidth::{bandwidth_fit, BandwidthFitConfig, FitResult};
pub use lz::{lz_sweep, LzSweepConfig};
pub use scaling::{scaling_derivative, ScalingConfig, ScalingResult};

/// Number of raw moments stored per sweep row.
pub const MOMENT_ORDERS: usize = 4;

/// Default Landau-Zener grid: `ω_f/Δ ∈ [-25, 25]`, 501 points.
pub const DEFAULT_LZ_GRID: GridSpec = GridSpec {
    start: -25.0,
    stop: 25.0,
    points: 501,
};
/// Default AAH grid: `Δ/J ∈ [0.05, 4]`, 80 points.
pub const DEFAULT_AAH_GRID: GridSpec = GridSpec {
    start: 0.05,
    stop: 4.0,
    points: 80,
};
pub const DEFAULT_ETA_SAMPLES: usize = 50;
pub const DEFAULT_DERIV_STEP: f64 = 0.01;
pub const DEFAULT_SCALING_FIB: [u32; 7] = [10, 11, 12, 13, 14, 15, 16];

/// Evenly spaced inclusive grid.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridSpec {
    pub start: f64,
    pub stop: f64,
    pub points: usize,
}

impl GridSpec {
    pub fn values(&self) -> Result<Vec<f64>> {
        if self.points == 0 {
            return Err(invalid("grid.points", "must be >= 1"));
        }
        if !(self.start.is_finite() && self.stop.is_finite()) {
            return Err(invalid("grid", "bounds must be finite"));
        }
        if self.points == 1 {
            return Ok(vec![self.start]);
        }
        let step = (self.stop - self.start) / (self.points - 1) as f64;
        Ok((0..self.points)
            .map(|k| {
                if k + 1 == self.points {
                    self.stop
                } else {
                    self.start + step * k as f64
                }
            })
            .collect())
    }
}

impl std::str::FromStr for GridSpec {
    type Err = crate::Error;

    /// `start:stop:points`.
    fn from_str(s: &str) -> Result<Self> {
        let parts: Vec<&str> = s.split(':').collect();
        let bad = || invalid("grid", format!("`{s}` is not start:stop:points"));
        if parts.len() != 3 {
            return Err(bad());
        }
        Ok(Self {
            start: parts[0].trim().parse().map_err(|_| bad())?,
            stop: parts[1].trim().parse().map_err(|_| bad())?,
            points: parts[2].trim().parse().map_err(|_| bad())?,
        })
    }
}

/// Initial state of a quench, defined relative to the initial Hamiltonian.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum StateSpec {
    Ground,
    Eigenstate { level: usize },
    Thermal { beta: f64 },
}

impl StateSpec {
    /// `p_n` in the eigenbasis of the initial Hamiltonian.
    pub fn populations(&self, di: &SpectralDecomposition) -> Result<Array1<f64>> {
        match *self {
            StateSpec::Ground => gibbs_populations(di, f64::INFINITY),
            StateSpec::Eigenstate { level } => {
                di.eigenvector(level)?;
                let mut p = Array1::zeros(di.dim());
                p[level] = 1.0;
                Ok(p)
            }
            StateSpec::Thermal { beta } => gibbs_populations(di, beta),
        }
    }

    pub fn label(&self) -> String {
        match self {
            StateSpec::Ground => "ground".into(),
            StateSpec::Eigenstate { level } => format!("eigenstate{level}"),
            StateSpec::Thermal { beta } => format!("thermal_beta{beta}"),
        }
    }
}

/// How the AAH phase `η` is chosen.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum EtaSampling {
    Fixed { eta: f64 },
    /// `samples` i.i.d. uniform draws on `[0, 2π)`.
    Random { samples: usize, seed: u64 },
}

impl EtaSampling {
    /// Phases for one lattice size. Each Fibonacci index reads its own
    /// ChaCha stream, so draws are independent across sizes and do not depend
    /// on which other sizes are requested.
    pub fn phases(&self, fib_index: u32) -> Result<Vec<f64>> {
        match *self {
            EtaSampling::Fixed { eta } => Ok(vec![eta]),
            EtaSampling::Random { samples, seed } => {
                if samples == 0 {
                    return Err(invalid("eta_samples", "must be >= 1"));
                }
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                rng.set_stream(fib_index as u64);
                Ok((0..samples).map(|_| rng.random_range(0.0..TAU)).collect())
            }
        }
    }

    pub fn samples(&self) -> usize {
        match self {
            EtaSampling::Fixed { .. } => 1,
            EtaSampling::Random { samples, .. } => *samples,
        }
    }

    pub fn seed(&self) -> Option<u64> {
        match self {
            EtaSampling::Fixed { .. } => None,
            EtaSampling::Random { seed, .. } => Some(*seed),
        }
    }
}

/// One evaluated quench along a sweep axis.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepRow {
    pub param: f64,
    /// `⟨W^k⟩`, `k = 1..=4`.
    pub moments: Vec<f64>,
    pub variance: f64,
    /// `tr[(H_f - H_i) ρ]` from the Hamiltonians directly.
    pub mean_direct: f64,
    pub support_len: usize,
    pub min_work: f64,
    pub max_work: f64,
    /// Set when `γ_max > 1` or the support is resolution-marginal.
    pub flagged: bool,
    pub report: BoundsReport,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepMeta {
    pub experiment: String,
    pub params: serde_json::Value,
    pub seed: Option<u64>,
    /// Absolute override; `None` means the per-quench default was used.
    pub cluster_tol: Option<f64>,
    pub cluster_rtol: f64,
    pub timestamp: u64,
}

impl SweepMeta {
    pub(crate) fn new(
        experiment: &str,
        params: serde_json::Value,
        seed: Option<u64>,
        cluster_tol: Option<f64>,
    ) -> Self {
        Self {
            experiment: experiment.into(),
            params,
            seed,
            cluster_tol,
            cluster_rtol: crate::tpm::DEFAULT_CLUSTER_RTOL,
            timestamp: SystemTime::now()
                .duration_since(UNIX_EPOCH)
                .map(|d| d.as_secs())
                .unwrap_or(0),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepResult {
    pub axis: Vec<f64>,
    pub rows: Vec<SweepRow>,
    /// Moments at the normalization point, when the experiment defines one.
    pub moment_reference: Option<Vec<f64>>,
    pub meta: SweepMeta,
}

impl SweepResult {
    /// Raw moments divided by `moment_reference`.
    pub fn normalized_moments(&self, row: &SweepRow) -> Option<Vec<f64>> {
        self.moment_reference
            .as_ref()
            .map(|r| row.moments.iter().zip(r).map(|(m, r)| m / r).collect())
    }

    pub fn column(&self, f: impl Fn(&SweepRow) -> f64) -> Vec<f64> {
        self.rows.iter().map(f).collect()
    }
}

/// `Σ_n p_n (⟨n_i|H_f|n_i⟩ - E_n^i)`: the trace formula for a state diagonal
/// in the initial eigenbasis, with no reference to the final eigenbasis.
pub(crate) fn mean_work_trace(
    di: &SpectralDecomposition,
    hf: &HermitianOperator,
    pn: &Array1<f64>,
) -> Result<f64> {
    let occupied: Vec<usize> = (0..pn.len()).filter(|&n| pn[n] > OCCUPATION_FLOOR).collect();
    let expectations: Vec<f64> = match (di.vectors(), hf.real_entries()) {
        (Eigenvectors::Real(v), Some(h)) if occupied.len() > 4 => {
            let hv = h.dot(v);
            occupied
                .iter()
                .map(|&n| v.column(n).dot(&hv.column(n)))
                .collect()
        }
        _ => occupied
            .iter()
            .map(|&n| {
                let v = di.eigenvector(n)?;
                let hv = hf.entries().dot(&v);
                Ok(v.iter().zip(hv.iter()).map(|(a, b)| (a.conj() * b).re).sum())
            })
            .collect::<Result<_>>()?,
    };
    Ok(occupied
        .iter()
        .zip(expectations)
        .map(|(&n, e)| pn[n] * (e - di.eigenvalues()[n]))
        .sum())
}

/// Index of the nondegenerate ground level; a degenerate ground is an error.
pub(crate) fn ground_index(d: &SpectralDecomposition) -> Result<usize> {
    gibbs_populations(d, f64::INFINITY)?;
    Ok(0)
}

pub(crate) fn quench_tol(
    di: &SpectralDecomposition,
    df: &SpectralDecomposition,
    cluster_tol: Option<f64>,
) -> f64 {
    cluster_tol.unwrap_or_else(|| default_cluster_tol(di, df))
}

pub(crate) struct Evaluated {
    pub row: SweepRow,
    pub distribution: WorkDistribution,
}

/// Collects, bounds-checks and summarizes one quench whose joint table `u`
/// was built from `di` and the final Hamiltonian `hf`.
pub(crate) fn evaluate_quench(
    param: f64,
    di: &SpectralDecomposition,
    hf: &HermitianOperator,
    u: &UncollectedDistribution,
    tol: f64,
) -> Result<Evaluated> {
    let mean_direct = mean_work_trace(di, hf, u.initial_populations())?;
    let w = collect_work_distribution(u, tol)?;
    let report = bounds_report(u, &w)?;
    let moments = work_moments(&w, MOMENT_ORDERS)?;
    let row = SweepRow {
        param,
        moments: moments.raw,
        variance: moments.variance,
        mean_direct,
        support_len: w.len(),
        min_work: w.min_work(),
        max_work: w.max_work(),
        flagged: report.gamma_max > 1 || w.diagnostics().resolution_marginal,
        report,
    };
    Ok(Evaluated {
        row,
        distribution: w,
    })
}

/// Builds the joint table for a sudden quench `di → df` and evaluates it.
pub(crate) fn evaluate_sudden(
    param: f64,
    di: &SpectralDecomposition,
    df: &SpectralDecomposition,
    hf: &HermitianOperator,
    pn: Array1<f64>,
    cluster_tol: Option<f64>,
) -> Result<Evaluated> {
    let u = UncollectedDistribution::from_decompositions(
        di,
        df,
        &UnitaryMatrix::identity(di.dim()),
        pn,
    )?;
    evaluate_quench(param, di, hf, &u, quench_tol(di, df, cluster_tol))
}
