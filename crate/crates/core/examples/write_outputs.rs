//! Writing results in the same CSV/JSON formats the command-line tool uses.

use work_entropy::experiments::{aah_transition_sweep, AahSweepConfig, StateSpec};
use work_entropy::models::QuenchDirection;
use work_entropy::output::{atomic_write, csv_path, sweep_bounds_csv, sweep_moments_csv, write_json};

fn main() -> work_entropy::Result<()> {
    let dir = std::env::temp_dir().join("work-entropy-example");
    let cfg = AahSweepConfig {
        fib_index: 12,
        delta: vec![1.0, 2.0, 3.0],
        direction: QuenchDirection::ZeroToDelta,
        ..AahSweepConfig::default()
    };
    let r = aah_transition_sweep(&cfg, StateSpec::Ground)?;
    let moments = csv_path(&dir, "aah_sweep", "zero_to_delta_ground_moments");
    atomic_write(&moments, &sweep_moments_csv(&r)?)?;
    atomic_write(&csv_path(&dir, "aah_sweep", "zero_to_delta_ground_bounds"), &sweep_bounds_csv(&r)?)?;
    write_json(&dir.join("aah_sweep_zero_to_delta_ground.json"), &r)?;
    print!("{}", std::fs::read_to_string(&moments)?);
    println!("written to {}", dir.display());
    Ok(())
}
