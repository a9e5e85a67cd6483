//! CSV and JSON writers. Numbers are written with 17 significant digits in
//! scientific notation so every `f64` round-trips; files are written to a
//! temporary sibling and renamed into place.

use std::io::Write;
use std::path::{Path, PathBuf};

use serde::Serialize;

use crate::error::Result;
use crate::experiments::{CoherenceMap, FitResult, ScalingResult, SweepResult};
use crate::infotheory::BoundsReport;
use crate::tpm::WorkDistribution;

/// `x` with 17 significant digits, independent of locale.
pub fn fmt_f64(x: f64) -> String {
    format!("{x:.16e}")
}

/// Writes `bytes` to `path` through a temporary file in the same directory.
pub fn atomic_write(path: &Path, bytes: &[u8]) -> Result<()> {
    let dir = match path.parent() {
        Some(d) if !d.as_os_str().is_empty() => d,
        _ => Path::new("."),
    };
    std::fs::create_dir_all(dir)?;
    let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
    tmp.write_all(bytes)?;
    tmp.as_file().sync_all()?;
    tmp.persist(path).map_err(|e| e.error)?;
    Ok(())
}

pub fn write_json<T: Serialize + ?Sized>(path: &Path, value: &T) -> Result<()> {
    let mut bytes = serde_json::to_vec_pretty(value)?;
    bytes.push(b'\n');
    atomic_write(path, &bytes)
}

/// `<experiment>_<panel>.csv` inside `dir`.
pub fn csv_path(dir: &Path, experiment: &str, panel: &str) -> PathBuf {
    dir.join(format!("{experiment}_{panel}.csv"))
}

struct Table {
    w: csv::Writer<Vec<u8>>,
}

impl Table {
    fn new<S: AsRef<str>>(header: &[S]) -> Result<Self> {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(header.iter().map(|s| s.as_ref()))?;
        Ok(Self { w })
    }

    fn row(&mut self, fields: Vec<String>) -> Result<()> {
        self.w.write_record(&fields)?;
        Ok(())
    }

    fn finish(self) -> Result<Vec<u8>> {
        self.w
            .into_inner()
            .map_err(|e| crate::Error::Io(e.into_error()))
    }
}

fn floats(xs: impl IntoIterator<Item = f64>) -> Vec<String> {
    xs.into_iter().map(fmt_f64).collect()
}

/// Columns `W, P, multiplicity`.
pub fn work_distribution_csv(w: &WorkDistribution) -> Result<Vec<u8>> {
    let mut t = Table::new(&["W", "P", "multiplicity"])?;
    for ((&x, &p), &m) in w.support().iter().zip(w.probs()).zip(w.multiplicity()) {
        t.row(vec![fmt_f64(x), fmt_f64(p), m.to_string()])?;
    }
    t.finish()
}

/// One row of scalar bound-chain terms.
pub fn bounds_report_csv(r: &BoundsReport) -> Result<Vec<u8>> {
    let mut t = Table::new(&BoundsReport::CSV_HEADER)?;
    t.row(floats(r.csv_row()))?;
    t.finish()
}

/// Raw moments, moments normalized by the reference point (when the sweep
/// has one), variance and the trace-formula mean.
pub fn sweep_moments_csv(r: &SweepResult) -> Result<Vec<u8>> {
    let k = r.rows.first().map_or(0, |row| row.moments.len());
    let normalized = r.moment_reference.is_some();
    let mut header = vec!["param".to_string()];
    header.extend((1..=k).map(|i| format!("moment{i}")));
    if normalized {
        header.extend((1..=k).map(|i| format!("moment{i}_normalized")));
    }
    header.extend(["variance", "mean_direct"].map(String::from));
    let mut t = Table::new(&header)?;
    for row in &r.rows {
        let mut fields = vec![row.param];
        fields.extend(&row.moments);
        if let Some(n) = r.normalized_moments(row) {
            fields.extend(n);
        }
        fields.extend([row.variance, row.mean_direct]);
        t.row(floats(fields))?;
    }
    t.finish()
}

/// Support summary and every scalar bound-chain term per sweep point.
pub fn sweep_bounds_csv(r: &SweepResult) -> Result<Vec<u8>> {
    let mut header = vec!["param", "support_len", "min_work", "max_work", "flagged"];
    header.extend(BoundsReport::CSV_HEADER);
    let mut t = Table::new(&header)?;
    for row in &r.rows {
        let mut fields = vec![
            fmt_f64(row.param),
            row.support_len.to_string(),
            fmt_f64(row.min_work),
            fmt_f64(row.max_work),
            (row.flagged as u8).to_string(),
        ];
        fields.extend(floats(row.report.csv_row()));
        t.row(fields)?;
    }
    t.finish()
}

pub fn scaling_csv(r: &ScalingResult) -> Result<Vec<u8>> {
    let mut t = Table::new(&[
        "fib_index",
        "N",
        "slope",
        "slope_half_step",
        "richardson_ok",
        "log_residual",
    ])?;
    for i in 0..r.sizes.len() {
        t.row(vec![
            r.fib_indices[i].to_string(),
            r.sizes[i].to_string(),
            fmt_f64(r.slopes[i]),
            fmt_f64(r.slopes_half_step[i]),
            (r.richardson_ok[i] as u8).to_string(),
            fmt_f64(r.log_residuals[i]),
        ])?;
    }
    t.finish()
}

/// Long format: `level, delta, coherence`.
pub fn coherence_map_csv(m: &CoherenceMap) -> Result<Vec<u8>> {
    let mut t = Table::new(&["level", "delta", "coherence"])?;
    for ((n, k), &c) in m.values.indexed_iter() {
        t.row(vec![n.to_string(), fmt_f64(m.delta[k]), fmt_f64(c)])?;
    }
    t.finish()
}

pub fn bandwidth_csv(f: &FitResult) -> Result<Vec<u8>> {
    let mut t = Table::new(&["delta", "excess", "fit", "relative_residual"])?;
    for (i, &d) in f.delta_grid.iter().enumerate() {
        t.row(floats([
            d,
            f.excess[i],
            f.excess[i] * (1.0 + f.relative_residuals[i]),
            f.relative_residuals[i],
        ]))?;
    }
    t.finish()
}
