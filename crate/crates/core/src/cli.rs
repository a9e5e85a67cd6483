//! Command-line front end. Configuration comes from an optional TOML file;
//! flags override file values. A manifest is written on every run, including
//! failed ones.

use std::f64::consts::LN_2;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, ValueEnum};
use ndarray::Array2;
use serde::Serialize;
use serde_json::{json, Value};

use crate::config::{RunConfig, SingleSection, Subcommand};
use crate::error::{invalid, Error, Result};
use crate::experiments::{
    aah_transition_sweep, aah_work_histogram, bandwidth_fit, eigenstate_coherence_map,
    evaluate_quench, lz_sweep, scaling_derivative, thermal_sweep, GridSpec, StateSpec,
    SweepResult,
};
use crate::infotheory::entropy_of_work;
use crate::models::QuenchDirection;
use crate::output::{
    atomic_write, bandwidth_csv, bounds_report_csv, coherence_map_csv, csv_path, scaling_csv,
    sweep_bounds_csv, sweep_moments_csv, work_distribution_csv, write_json,
};
use crate::spectral::{diagonalize, DensityMatrix, HermitianOperator, UnitaryMatrix};
use crate::tpm::{default_cluster_tol, mean_work_direct, QuenchSetup, UncollectedDistribution};
use crate::C64;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Command {
    LzSweep,
    AahHist,
    AahSweep,
    AahScaling,
    ThermalSweep,
    CoherenceMap,
    BandwidthFit,
    SingleQuench,
}

impl From<Command> for Subcommand {
    fn from(c: Command) -> Self {
        match c {
            Command::LzSweep => Subcommand::LzSweep,
            Command::AahHist => Subcommand::AahHist,
            Command::AahSweep => Subcommand::AahSweep,
            Command::AahScaling => Subcommand::AahScaling,
            Command::ThermalSweep => Subcommand::ThermalSweep,
            Command::CoherenceMap => Subcommand::CoherenceMap,
            Command::BandwidthFit => Subcommand::BandwidthFit,
            Command::SingleQuench => Subcommand::SingleQuench,
        }
    }
}

/// Work statistics and entropy bounds for quenched Landau-Zener and
/// Aubry-André-Harper models.
#[derive(Debug, Parser)]
#[command(name = "work-entropy", version)]
pub struct Cli {
    /// Experiment to run; may instead be given as `subcommand` in the config.
    pub command: Option<Command>,
    /// TOML run configuration.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Output directory.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long)]
    pub seed: Option<u64>,
    /// Worker threads (default: all logical cores).
    #[arg(long)]
    pub threads: Option<usize>,
    /// Absolute work-value clustering tolerance.
    #[arg(long)]
    pub cluster_tol: Option<f64>,
    /// Report entropies in bits on stdout (files always use nats).
    #[arg(long)]
    pub bits: bool,
    /// Replace the primary grid: `start:stop:points`.
    #[arg(long)]
    pub grid: Option<GridSpec>,
}

/// Merges file and flags; flags win.
pub fn resolve(cli: &Cli) -> Result<RunConfig> {
    let mut cfg = match &cli.config {
        Some(p) => RunConfig::load(p)?,
        None => RunConfig::default(),
    };
    if let Some(c) = cli.command {
        cfg.subcommand = Some(c.into());
    }
    if let Some(o) = &cli.out {
        cfg.out = o.clone();
    }
    if let Some(s) = cli.seed {
        cfg.seed = s;
    }
    if let Some(t) = cli.threads {
        cfg.threads = Some(t);
    }
    if let Some(t) = cli.cluster_tol {
        cfg.cluster_tol = Some(t);
    }
    if let Some(g) = cli.grid {
        cfg.override_grid(g)?;
    }
    cfg.validate()?;
    Ok(cfg)
}

#[derive(Debug, Serialize)]
struct Manifest<'a> {
    tool: &'static str,
    version: &'static str,
    linear_algebra: &'static str,
    subcommand: Option<&'static str>,
    config: Option<&'a RunConfig>,
    seed: Option<u64>,
    cluster_tol: Option<f64>,
    cluster_rtol: f64,
    bound_slack: f64,
    threads: usize,
    outputs: Vec<String>,
    wall_time_s: f64,
    status: &'static str,
    error: Option<String>,
}

/// Files written so far, relative to the output directory.
struct Outputs {
    dir: PathBuf,
    written: Vec<String>,
}

impl Outputs {
    fn csv(&mut self, experiment: &str, panel: &str, bytes: Vec<u8>) -> Result<()> {
        let path = csv_path(&self.dir, experiment, panel);
        atomic_write(&path, &bytes)?;
        self.record(&path);
        Ok(())
    }

    fn json<T: Serialize>(&mut self, name: &str, value: &T) -> Result<()> {
        let path = self.dir.join(format!("{name}.json"));
        write_json(&path, value)?;
        self.record(&path);
        Ok(())
    }

    fn sweep(&mut self, experiment: &str, panel: &str, r: &SweepResult) -> Result<()> {
        self.csv(experiment, &format!("{panel}_moments"), sweep_moments_csv(r)?)?;
        self.csv(experiment, &format!("{panel}_bounds"), sweep_bounds_csv(r)?)?;
        self.json(&format!("{experiment}_{panel}"), r)
    }

    fn record(&mut self, path: &Path) {
        let name = path
            .strip_prefix(&self.dir)
            .unwrap_or(path)
            .display()
            .to_string();
        eprintln!("wrote {}", path.display());
        self.written.push(name);
    }
}

/// Parses flags, runs, and maps the outcome to an exit status.
pub fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(summary) => {
            println!("{summary}");
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}

/// Runs one experiment and writes its outputs plus `manifest.json`. Returns
/// the stdout summary.
pub fn run(cli: &Cli) -> Result<Value> {
    let start = Instant::now();
    let resolved = resolve(cli);
    let out_dir = match &resolved {
        Ok(c) => c.out.clone(),
        Err(_) => cli.out.clone().unwrap_or_else(|| PathBuf::from("out")),
    };
    let mut outputs = Outputs {
        dir: out_dir.clone(),
        written: Vec::new(),
    };
    let (config, threads, result) = match resolved {
        Ok(cfg) => {
            let threads = cfg.threads.unwrap_or_else(|| {
                std::thread::available_parallelism().map_or(1, |n| n.get())
            });
            let result = rayon::ThreadPoolBuilder::new()
                .num_threads(threads)
                .build()
                .map_err(|e| Error::Config(e.to_string()))
                .and_then(|pool| {
                    if threads > 1 {
                        single_threaded_blas();
                    }
                    pool.install(|| execute(&cfg, &mut outputs, cli.bits))
                });
            (Some(cfg), threads, result)
        }
        Err(e) => (None, 0, Err(e)),
    };
    let manifest = Manifest {
        tool: env!("CARGO_PKG_NAME"),
        version: env!("CARGO_PKG_VERSION"),
        linear_algebra: "LAPACK dsyevd/zheevd via system OpenBLAS",
        subcommand: config.as_ref().and_then(|c| c.subcommand).map(|s| s.name()),
        config: config.as_ref(),
        seed: config.as_ref().map(|c| c.seed),
        cluster_tol: config.as_ref().and_then(|c| c.cluster_tol),
        cluster_rtol: crate::tpm::DEFAULT_CLUSTER_RTOL,
        bound_slack: crate::infotheory::BOUND_SLACK,
        threads,
        outputs: outputs.written.clone(),
        wall_time_s: start.elapsed().as_secs_f64(),
        status: if result.is_ok() { "ok" } else { "error" },
        error: result.as_ref().err().map(|e| e.to_string()),
    };
    let manifest_result = write_json(&out_dir.join("manifest.json"), &manifest);
    if let Some(cfg) = &config {
        if result.is_ok() {
            atomic_write(&out_dir.join("resolved_config.toml"), cfg.to_toml()?.as_bytes())?;
        }
    }
    let summary = result?;
    manifest_result?;
    Ok(summary)
}

extern "C" {
    fn openblas_set_num_threads(n: std::os::raw::c_int);
}

/// Parallelism lives in the rayon pool; nested BLAS threads would only
/// oversubscribe the cores.
fn single_threaded_blas() {
    // SAFETY: plain setter exported by the linked OpenBLAS.
    unsafe { openblas_set_num_threads(1) }
}

fn entropy_unit(bits: bool) -> (f64, &'static str) {
    if bits {
        (1.0 / LN_2, "bits")
    } else {
        (1.0, "nats")
    }
}

fn max_entropy(r: &SweepResult) -> f64 {
    r.rows.iter().map(|row| row.report.h_w).fold(f64::NEG_INFINITY, f64::max)
}

fn execute(cfg: &RunConfig, out: &mut Outputs, bits: bool) -> Result<Value> {
    let (scale, unit) = entropy_unit(bits);
    let sub = cfg.subcommand()?;
    eprintln!("running {}", sub.name());
    let details = match sub {
        Subcommand::LzSweep => {
            let r = lz_sweep(&cfg.lz_config()?)?;
            out.sweep("lz_sweep", "thermal", &r)?;
            let peak = r
                .rows
                .iter()
                .max_by(|a, b| a.report.h_w.total_cmp(&b.report.h_w))
                .map(|row| row.param);
            json!({ "points": r.rows.len(), "max_h_w": max_entropy(&r) * scale, "argmax_omega_f": peak })
        }
        Subcommand::AahHist => {
            let mut entries = Vec::new();
            for &dir in &cfg.aah.directions {
                for &d in &cfg.aah.histogram_deltas {
                    let p = cfg.aah_config(dir)?.params(d * cfg.aah.j)?;
                    let w = aah_work_histogram(&p, dir, cfg.cluster_tol)?;
                    let panel = format!("{}_delta{d}", dir.label());
                    out.csv("aah_hist", &panel, work_distribution_csv(&w)?)?;
                    out.json(&format!("aah_hist_{panel}"), &w)?;
                    entries.push(json!({
                        "direction": dir.label(), "delta": d,
                        "min_work": w.min_work(), "max_work": w.max_work(),
                        "h_w": entropy_of_work(&w)? * scale,
                    }));
                }
            }
            json!({ "histograms": entries })
        }
        Subcommand::AahSweep => {
            let mut entries = Vec::new();
            for &dir in &cfg.aah.directions {
                let r = aah_transition_sweep(&cfg.aah_config(dir)?, cfg.aah.state)?;
                let panel = format!("{}_{}", dir.label(), cfg.aah.state.label());
                out.sweep("aah_sweep", &panel, &r)?;
                entries.push(json!({ "direction": dir.label(), "max_h_w": max_entropy(&r) * scale }));
            }
            json!({ "sweeps": entries })
        }
        Subcommand::ThermalSweep => {
            let mut entries = Vec::new();
            for &dir in &cfg.aah.directions {
                let t = thermal_sweep(&cfg.aah_config(dir)?, &cfg.thermal_betas())?;
                for (jb, r) in cfg.aah.betas.iter().zip(&t.sweeps) {
                    out.sweep("thermal_sweep", &format!("{}_jbeta{jb}", dir.label()), r)?;
                }
                entries.push(json!({ "direction": dir.label(), "c_max_spread": t.c_max_spread }));
            }
            json!({ "sweeps": entries })
        }
        Subcommand::CoherenceMap => {
            let m = eigenstate_coherence_map(&cfg.aah_config(QuenchDirection::ZeroToDelta)?)?;
            out.csv("coherence_map", "levels", coherence_map_csv(&m)?)?;
            json!({ "levels": m.values.nrows(), "deltas": m.delta.len() })
        }
        Subcommand::AahScaling => {
            let results = scaling_derivative(&cfg.scaling_config()?)?;
            for r in &results {
                out.csv("aah_scaling", r.direction.label(), scaling_csv(r)?)?;
            }
            out.json("aah_scaling", &results)?;
            let fits: Vec<Value> = results
                .iter()
                .map(|r| json!({ "direction": r.direction.label(), "fit_exponent": r.fit_exponent, "fit_prefactor": r.fit_prefactor }))
                .collect();
            json!({ "fits": fits })
        }
        Subcommand::BandwidthFit => {
            let f = bandwidth_fit(&cfg.bandwidth_config()?)?;
            out.csv("bandwidth_fit", "excess", bandwidth_csv(&f)?)?;
            out.json("bandwidth_fit", &f)?;
            json!({ "coefficient": f.coefficient, "residual_max": f.residual_max })
        }
        Subcommand::SingleQuench => single_quench(cfg, &cfg.single, out, scale)?,
    };
    Ok(json!({
        "subcommand": sub.name(),
        "entropy_unit": unit,
        "result": details,
    }))
}

fn matrix(name: &'static str, re: &[Vec<f64>], im: Option<&Vec<Vec<f64>>>) -> Result<HermitianOperator> {
    let n = re.len();
    if n == 0 {
        return Err(invalid(name, "empty matrix"));
    }
    if let Some(row) = re.iter().chain(im.into_iter().flatten()).find(|r| r.len() != n) {
        return Err(Error::NotSquare {
            rows: n,
            cols: row.len(),
        });
    }
    if let Some(im) = im {
        if im.len() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: im.len(),
            });
        }
    }
    let entries = Array2::from_shape_fn((n, n), |(i, j)| {
        C64::new(re[i][j], im.map_or(0.0, |m| m[i][j]))
    });
    HermitianOperator::new(entries)
}

fn single_quench(cfg: &RunConfig, s: &SingleSection, out: &mut Outputs, scale: f64) -> Result<Value> {
    let missing = |k: &str| Error::Config(format!("missing key `single.{k}`"));
    let hi = matrix("single.initial", s.initial.as_ref().ok_or_else(|| missing("initial"))?, s.initial_imag.as_ref())?;
    let hf = matrix("single.final", s.final_.as_ref().ok_or_else(|| missing("final"))?, s.final_imag.as_ref())?;
    let u = match (&s.drive, s.duration) {
        (Some(d), Some(t)) => UnitaryMatrix::evolution(&diagonalize(&matrix("single.drive", d, None)?)?, t),
        _ => UnitaryMatrix::identity(hi.dim()),
    };
    let di = diagonalize(&hi)?;
    let df = diagonalize(&hf)?;
    let pn = s.state.unwrap_or(StateSpec::Ground).populations(&di)?;
    let rho = DensityMatrix::from_trusted(di.synthesize(&pn.to_vec()));
    let setup = QuenchSetup::new(hi, hf.clone(), u.clone(), rho)?;
    let table = UncollectedDistribution::from_decompositions(&di, &df, &u, pn)?;
    let tol = cfg.cluster_tol.unwrap_or_else(|| default_cluster_tol(&di, &df));
    let mut evaluated = evaluate_quench(0.0, &di, &hf, &table, tol)?;
    evaluated.row.mean_direct = mean_work_direct(&setup)?;
    let w = &evaluated.distribution;
    out.csv("single_quench", "work", work_distribution_csv(w)?)?;
    out.csv("single_quench", "bounds", bounds_report_csv(&evaluated.row.report)?)?;
    out.json(
        "single_quench",
        &json!({ "distribution": w, "row": evaluated.row }),
    )?;
    Ok(json!({
        "support_len": w.len(),
        "h_w": evaluated.row.report.h_w * scale,
        "h_u": evaluated.row.report.h_u * scale,
        "mean_work": evaluated.row.moments[0],
        "mean_work_direct": evaluated.row.mean_direct,
    }))
}
