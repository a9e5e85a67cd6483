//! Coherence generated in every eigenstate of the clean chain when the
//! quasiperiodic potential is switched on. All levels jump together at
//! Delta = 2J.

use work_entropy::experiments::{eigenstate_coherence_map, AahSweepConfig};

fn main() -> work_entropy::Result<()> {
    let cfg = AahSweepConfig {
        fib_index: 13,
        delta: vec![0.5, 1.0, 1.5, 1.9, 2.1, 2.5, 3.0],
        ..AahSweepConfig::default()
    };
    let m = eigenstate_coherence_map(&cfg)?;
    print!("{:>6}", "level");
    for d in &m.delta {
        print!(" {d:>7.2}");
    }
    println!();
    for n in (0..m.values.nrows()).step_by(20) {
        print!("{n:>6}");
        for c in m.values.row(n) {
            print!(" {c:>7.3}");
        }
        println!();
    }
    Ok(())
}
