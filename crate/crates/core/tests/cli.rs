use std::path::Path;
use std::process::Command;

use serde_json::Value;

const BIN: &str = env!("CARGO_BIN_EXE_work-entropy");

fn run(args: &[&str]) -> std::process::Output {
    Command::new(BIN).args(args).output().expect("spawn binary")
}

fn csv_files(dir: &Path) -> Vec<(String, Vec<u8>)> {
    let mut files: Vec<_> = std::fs::read_dir(dir)
        .unwrap()
        .map(|e| e.unwrap().path())
        .filter(|p| p.extension().is_some_and(|x| x == "csv"))
        .map(|p| {
            (
                p.file_name().unwrap().to_string_lossy().into_owned(),
                std::fs::read(&p).unwrap(),
            )
        })
        .collect();
    files.sort();
    files
}

fn manifest(dir: &Path) -> Value {
    serde_json::from_slice(&std::fs::read(dir.join("manifest.json")).unwrap()).unwrap()
}

#[test]
fn repeated_runs_write_identical_csv() {
    let tmp = tempfile::tempdir().unwrap();
    let config = tmp.path().join("run.toml");
    std::fs::write(
        &config,
        "subcommand = \"aah-scaling\"\nseed = 11\n\n[scaling]\nfib_indices = [6, 7, 8]\neta_samples = 3\n",
    )
    .unwrap();
    let mut outputs = Vec::new();
    for name in ["a", "b"] {
        let out = tmp.path().join(name);
        let o = run(&["--config", config.to_str().unwrap(), "--out", out.to_str().unwrap()]);
        assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
        outputs.push(csv_files(&out));
    }
    assert_eq!(outputs[0].len(), 2);
    assert_eq!(outputs[0], outputs[1]);
}

#[test]
fn flags_override_file_values() {
    let tmp = tempfile::tempdir().unwrap();
    let config = tmp.path().join("run.toml");
    std::fs::write(
        &config,
        "subcommand = \"bandwidth-fit\"\nseed = 1\nout = \"ignored\"\n\n[lz]\ngrid = { start = -1.0, stop = 1.0, points = 3 }\n",
    )
    .unwrap();
    let out = tmp.path().join("out");
    let o = run(&[
        "lz-sweep",
        "--config",
        config.to_str().unwrap(),
        "--out",
        out.to_str().unwrap(),
        "--seed",
        "5",
        "--grid=-2:2:5",
    ]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let m = manifest(&out);
    assert_eq!(m["subcommand"], "lz-sweep");
    assert_eq!(m["seed"], 5);
    assert_eq!(m["status"], "ok");
    let moments = std::fs::read_to_string(out.join("lz_sweep_thermal_moments.csv")).unwrap();
    assert_eq!(moments.lines().count(), 1 + 5);
    let resolved = std::fs::read_to_string(out.join("resolved_config.toml")).unwrap();
    assert!(resolved.contains("seed = 5"));
    assert!(!tmp.path().join("ignored").exists());
}

#[test]
fn identity_quench_has_a_single_zero_work_value() {
    let tmp = tempfile::tempdir().unwrap();
    let config = tmp.path().join("q.toml");
    std::fs::write(
        &config,
        "subcommand = \"single-quench\"\n\n[single]\ninitial = [[0.0, 1.0], [1.0, 0.0]]\nfinal = [[0.0, 1.0], [1.0, 0.0]]\n",
    )
    .unwrap();
    let out = tmp.path().join("out");
    let o = run(&["--config", config.to_str().unwrap(), "--out", out.to_str().unwrap()]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let work = std::fs::read_to_string(out.join("single_quench_work.csv")).unwrap();
    let rows: Vec<&str> = work.lines().collect();
    assert_eq!(rows[0], "W,P,multiplicity");
    assert_eq!(rows.len(), 2);
    let fields: Vec<&str> = rows[1].split(',').collect();
    assert!(fields[0].parse::<f64>().unwrap().abs() <= 1e-12);
    assert_eq!(fields[2], "1");
    assert!((fields[1].parse::<f64>().unwrap() - 1.0).abs() <= 1e-12);
    let summary: Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(summary["subcommand"], "single-quench");
}

#[test]
fn invalid_input_fails_with_manifest() {
    let tmp = tempfile::tempdir().unwrap();
    let out = tmp.path().join("out");
    let o = run(&["lz-sweep", "--out", out.to_str().unwrap(), "--grid", "1:0:0"]);
    assert!(!o.status.success());
    assert!(!o.stderr.is_empty());
    let m = manifest(&out);
    assert_eq!(m["status"], "error");
    assert!(m["error"].as_str().unwrap().contains("grid") || m["error"].as_str().unwrap().contains("points"));
    assert!(!out.join("resolved_config.toml").exists());
}

#[test]
fn unknown_config_key_is_rejected() {
    let tmp = tempfile::tempdir().unwrap();
    let config = tmp.path().join("bad.toml");
    std::fs::write(&config, "subcommand = \"lz-sweep\"\n[lz]\nomega = 3.0\n").unwrap();
    let out = tmp.path().join("out");
    let o = run(&["--config", config.to_str().unwrap(), "--out", out.to_str().unwrap()]);
    assert!(!o.status.success());
    let err = String::from_utf8_lossy(&o.stderr);
    assert!(err.contains("omega"), "{err}");
}
