//! H_W(Delta) for thermal initial states; one diagonalization per amplitude
//! serves every temperature.

use work_entropy::experiments::{thermal_sweep, AahSweepConfig};
use work_entropy::models::QuenchDirection;

fn main() -> work_entropy::Result<()> {
    let cfg = AahSweepConfig {
        delta: vec![0.5, 1.0, 1.5, 2.0, 2.5, 3.0, 3.5, 4.0],
        direction: QuenchDirection::ZeroToDelta,
        ..AahSweepConfig::default()
    };
    let betas = [1e-2, 1.0, 1e2, 1e4];
    let t = thermal_sweep(&cfg, &betas)?;
    print!("{:>6}", "delta");
    for b in betas {
        print!(" {:>10}", format!("Jb={b:e}"));
    }
    println!();
    for (i, d) in cfg.delta.iter().enumerate() {
        print!("{d:>6.2}");
        for s in &t.sweeps {
            print!(" {:>10.4}", s.rows[i].report.h_w);
        }
        println!();
    }
    println!("C_max spread across temperatures: {}", t.c_max_spread);
    Ok(())
}
