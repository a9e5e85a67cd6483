//! Run configuration: a TOML file with one optional section per experiment.
//! Every key has a default; unknown keys are rejected.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::experiments::{
    AahSweepConfig, BandwidthFitConfig, EtaSampling, GridSpec, LzSweepConfig, ScalingConfig,
    StateSpec, DEFAULT_AAH_GRID, DEFAULT_DERIV_STEP, DEFAULT_ETA_SAMPLES, DEFAULT_LZ_GRID,
    DEFAULT_SCALING_FIB,
};
use crate::models::{AahParams, QuenchDirection, DEFAULT_ETA, DEFAULT_FIB_INDEX};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Subcommand {
    LzSweep,
    AahHist,
    AahSweep,
    AahScaling,
    ThermalSweep,
    CoherenceMap,
    BandwidthFit,
    SingleQuench,
}

impl Subcommand {
    pub fn name(&self) -> &'static str {
        match self {
            Subcommand::LzSweep => "lz-sweep",
            Subcommand::AahHist => "aah-hist",
            Subcommand::AahSweep => "aah-sweep",
            Subcommand::AahScaling => "aah-scaling",
            Subcommand::ThermalSweep => "thermal-sweep",
            Subcommand::CoherenceMap => "coherence-map",
            Subcommand::BandwidthFit => "bandwidth-fit",
            Subcommand::SingleQuench => "single-quench",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct LzSection {
    pub delta: f64,
    pub omega_i: f64,
    pub beta: f64,
    /// `ω_f` grid in units of `Δ`.
    pub grid: GridSpec,
}

impl Default for LzSection {
    fn default() -> Self {
        Self {
            delta: 1.0,
            omega_i: -20.0,
            beta: 0.1,
            grid: DEFAULT_LZ_GRID,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct AahSection {
    pub fib_index: u32,
    pub j: f64,
    pub eta: f64,
    /// `Δ` grid in units of `J`.
    pub grid: GridSpec,
    pub directions: Vec<QuenchDirection>,
    pub state: StateSpec,
    /// Amplitudes (units of `J`) for `aah-hist`.
    pub histogram_deltas: Vec<f64>,
    /// `Jβ` values for `thermal-sweep`.
    pub betas: Vec<f64>,
}

impl Default for AahSection {
    fn default() -> Self {
        Self {
            fib_index: DEFAULT_FIB_INDEX,
            j: 1.0,
            eta: DEFAULT_ETA,
            grid: DEFAULT_AAH_GRID,
            directions: vec![QuenchDirection::DeltaToZero, QuenchDirection::ZeroToDelta],
            state: StateSpec::Ground,
            histogram_deltas: vec![1.5, 2.0, 2.5, 3.0],
            betas: vec![1e-2, 1.0, 1e2, 1e4],
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ScalingSection {
    pub fib_indices: Vec<u32>,
    pub eta_samples: usize,
    /// When set, every size uses this single phase and `eta_samples` is ignored.
    pub fixed_eta: Option<f64>,
    pub deriv_step: f64,
}

impl Default for ScalingSection {
    fn default() -> Self {
        Self {
            fib_indices: DEFAULT_SCALING_FIB.to_vec(),
            eta_samples: DEFAULT_ETA_SAMPLES,
            fixed_eta: None,
            deriv_step: DEFAULT_DERIV_STEP,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct BandwidthSection {
    pub fib_index: u32,
    pub grid: GridSpec,
    pub eta_samples: usize,
}

impl Default for BandwidthSection {
    fn default() -> Self {
        Self {
            fib_index: DEFAULT_FIB_INDEX,
            grid: GridSpec {
                start: 0.25,
                stop: 4.0,
                points: 16,
            },
            eta_samples: 10,
        }
    }
}

/// An arbitrary quench given by explicit matrices. `U = 1` unless a drive
/// Hamiltonian and duration are given, in which case `U = exp(-i H_d t)`.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SingleSection {
    pub initial: Option<Vec<Vec<f64>>>,
    pub initial_imag: Option<Vec<Vec<f64>>>,
    #[serde(rename = "final")]
    pub final_: Option<Vec<Vec<f64>>>,
    pub final_imag: Option<Vec<Vec<f64>>>,
    pub drive: Option<Vec<Vec<f64>>>,
    pub duration: Option<f64>,
    pub state: Option<StateSpec>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub subcommand: Option<Subcommand>,
    pub seed: u64,
    pub out: PathBuf,
    pub threads: Option<usize>,
    /// Absolute clustering tolerance; per-quench default when absent.
    pub cluster_tol: Option<f64>,
    pub lz: LzSection,
    pub aah: AahSection,
    pub scaling: ScalingSection,
    pub bandwidth: BandwidthSection,
    pub single: SingleSection,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            subcommand: None,
            seed: 0,
            out: PathBuf::from("out"),
            threads: None,
            cluster_tol: None,
            lz: LzSection::default(),
            aah: AahSection::default(),
            scaling: ScalingSection::default(),
            bandwidth: BandwidthSection::default(),
            single: SingleSection::default(),
        }
    }
}

fn positive(name: &'static str, v: f64) -> Result<()> {
    if !(v > 0.0 && v.is_finite()) {
        return Err(invalid(name, format!("must be finite and > 0, got {v}")));
    }
    Ok(())
}

impl RunConfig {
    pub fn parse(text: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| Error::Config(e.to_string()))
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Config(format!("{}: {e}", path.display())))?;
        Self::parse(&text).map_err(|e| Error::Config(format!("{}: {e}", path.display())))
    }

    pub fn to_toml(&self) -> Result<String> {
        toml::to_string(self).map_err(|e| Error::Config(e.to_string()))
    }

    pub fn subcommand(&self) -> Result<Subcommand> {
        self.subcommand
            .ok_or_else(|| Error::Config("missing key `subcommand`".into()))
    }

    /// Checks every range the selected subcommand depends on, before any
    /// computation starts.
    pub fn validate(&self) -> Result<()> {
        if let Some(t) = self.threads {
            if t == 0 {
                return Err(invalid("threads", "must be >= 1"));
            }
        }
        if let Some(t) = self.cluster_tol {
            if !(t >= 0.0 && t.is_finite()) {
                return Err(invalid("cluster_tol", format!("must be finite and >= 0, got {t}")));
            }
        }
        match self.subcommand()? {
            Subcommand::LzSweep => self.lz_config()?.validate(),
            Subcommand::AahHist => {
                if self.aah.histogram_deltas.is_empty() {
                    return Err(invalid("aah.histogram_deltas", "empty"));
                }
                self.aah_directions()?;
                for &d in &self.aah.histogram_deltas {
                    if !(d > 0.0 && d <= 4.0) {
                        return Err(invalid("aah.histogram_deltas", format!("{d} outside (0, 4]")));
                    }
                    AahParams::new(self.aah.fib_index, d * self.aah.j, self.aah.j, self.aah.eta)?;
                }
                Ok(())
            }
            Subcommand::AahSweep | Subcommand::CoherenceMap => {
                self.aah_directions()?;
                self.aah_config(QuenchDirection::ZeroToDelta)?.validate()
            }
            Subcommand::ThermalSweep => {
                self.aah_directions()?;
                if self.aah.betas.is_empty() {
                    return Err(invalid("aah.betas", "empty"));
                }
                if let Some(b) = self.aah.betas.iter().find(|b| !(**b >= 0.0 && b.is_finite())) {
                    return Err(invalid("aah.betas", format!("must be finite and >= 0, got {b}")));
                }
                self.aah_config(QuenchDirection::ZeroToDelta)?.validate()
            }
            Subcommand::AahScaling => self.scaling_config()?.validate(),
            Subcommand::BandwidthFit => {
                let c = self.bandwidth_config()?;
                if c.delta.iter().any(|d| !(*d > 0.0 && *d <= 4.0)) {
                    return Err(invalid("bandwidth.grid", "must lie in (0, 4]"));
                }
                AahParams::new(c.fib_index, 0.0, c.j, 0.0).map(|_| ())
            }
            Subcommand::SingleQuench => {
                if self.single.initial.is_none() {
                    return Err(Error::Config("missing key `single.initial`".into()));
                }
                if self.single.final_.is_none() {
                    return Err(Error::Config("missing key `single.final`".into()));
                }
                if self.single.drive.is_some() != self.single.duration.is_some() {
                    return Err(Error::Config(
                        "`single.drive` and `single.duration` must be given together".into(),
                    ));
                }
                Ok(())
            }
        }
    }

    fn aah_directions(&self) -> Result<()> {
        if self.aah.directions.is_empty() {
            return Err(invalid("aah.directions", "empty"));
        }
        Ok(())
    }

    pub fn lz_config(&self) -> Result<LzSweepConfig> {
        let s = &self.lz;
        positive("lz.delta", s.delta)?;
        Ok(LzSweepConfig {
            delta: s.delta,
            omega_i: s.omega_i * s.delta,
            beta: s.beta / s.delta,
            omega_f: s.grid.values()?.into_iter().map(|w| w * s.delta).collect(),
            cluster_tol: self.cluster_tol,
        })
    }

    pub fn aah_config(&self, direction: QuenchDirection) -> Result<AahSweepConfig> {
        let s = &self.aah;
        positive("aah.j", s.j)?;
        Ok(AahSweepConfig {
            fib_index: s.fib_index,
            j: s.j,
            eta: s.eta,
            delta: s.grid.values()?.into_iter().map(|d| d * s.j).collect(),
            direction,
            cluster_tol: self.cluster_tol,
        })
    }

    /// `β` values in absolute units.
    pub fn thermal_betas(&self) -> Vec<f64> {
        self.aah.betas.iter().map(|b| b / self.aah.j).collect()
    }

    pub fn scaling_config(&self) -> Result<ScalingConfig> {
        let s = &self.scaling;
        Ok(ScalingConfig {
            fib_indices: s.fib_indices.clone(),
            j: self.aah.j,
            eta: match s.fixed_eta {
                Some(eta) => EtaSampling::Fixed { eta },
                None => EtaSampling::Random {
                    samples: s.eta_samples,
                    seed: self.seed,
                },
            },
            deriv_step: s.deriv_step,
            directions: self.aah.directions.clone(),
            cluster_tol: self.cluster_tol,
        })
    }

    pub fn bandwidth_config(&self) -> Result<BandwidthFitConfig> {
        let s = &self.bandwidth;
        Ok(BandwidthFitConfig {
            fib_index: s.fib_index,
            j: self.aah.j,
            delta: s.grid.values()?.into_iter().map(|d| d * self.aah.j).collect(),
            eta: EtaSampling::Random {
                samples: s.eta_samples,
                seed: self.seed,
            },
        })
    }

    /// Replaces the primary grid of the selected subcommand.
    pub fn override_grid(&mut self, grid: GridSpec) -> Result<()> {
        match self.subcommand()? {
            Subcommand::LzSweep => self.lz.grid = grid,
            Subcommand::AahSweep | Subcommand::ThermalSweep | Subcommand::CoherenceMap => {
                self.aah.grid = grid
            }
            Subcommand::AahHist => self.aah.histogram_deltas = grid.values()?,
            Subcommand::BandwidthFit => self.bandwidth.grid = grid,
            other @ (Subcommand::AahScaling | Subcommand::SingleQuench) => {
                return Err(invalid("grid", format!("`{}` has no grid", other.name())))
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_reproduce_the_figure_parameters() {
        let mut c = RunConfig::parse("subcommand = \"aah-sweep\"").unwrap();
        c.validate().unwrap();
        let a = c.aah_config(QuenchDirection::ZeroToDelta).unwrap();
        assert_eq!(a.fib_index, 16);
        assert_eq!(a.eta, 1.2);
        assert_eq!(a.delta.len(), 80);
        assert_eq!(a.delta[0], 0.05);
        assert_eq!(*a.delta.last().unwrap(), 4.0);
        c.override_grid("1:2:3".parse().unwrap()).unwrap();
        assert_eq!(c.aah_config(QuenchDirection::ZeroToDelta).unwrap().delta, vec![1.0, 1.5, 2.0]);
    }

    #[test]
    fn unknown_key_lists_valid_keys() {
        let e = RunConfig::parse("subcommand = \"lz-sweep\"\n[lz]\nomega = 3").unwrap_err();
        let msg = e.to_string();
        assert!(msg.contains("omega"), "{msg}");
        assert!(msg.contains("omega_i"), "{msg}");
    }

    #[test]
    fn out_of_range_values_name_the_bound() {
        let c = RunConfig::parse("subcommand = \"aah-sweep\"\n[aah]\ngrid = { start = 0.0, stop = 4.0, points = 5 }").unwrap();
        let msg = c.validate().unwrap_err().to_string();
        assert!(msg.contains("(0, 4J]"), "{msg}");
        let c = RunConfig::parse("subcommand = \"single-quench\"").unwrap();
        assert!(c.validate().unwrap_err().to_string().contains("single.initial"));
        assert!(RunConfig::default().validate().unwrap_err().to_string().contains("subcommand"));
    }

    #[test]
    fn toml_echo_round_trips() {
        let mut c = RunConfig::default();
        c.subcommand = Some(Subcommand::ThermalSweep);
        c.cluster_tol = Some(1e-8);
        c.single.initial = Some(vec![vec![0.0, 1.0], vec![1.0, 0.0]]);
        let back = RunConfig::parse(&c.to_toml().unwrap()).unwrap();
        assert_eq!(back, c);
    }
}
