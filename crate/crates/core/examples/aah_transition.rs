//! H_W across the localization transition for both quench directions,
//! with the degeneracy sandwich H_u - ln(gamma_max) <= H_W <= H_u.

use work_entropy::experiments::{aah_transition_sweep, AahSweepConfig, StateSpec};
use work_entropy::models::QuenchDirection;

fn main() -> work_entropy::Result<()> {
    let grid: Vec<f64> = (1..=16).map(|k| 0.25 * k as f64).collect();
    for direction in [QuenchDirection::DeltaToZero, QuenchDirection::ZeroToDelta] {
        let cfg = AahSweepConfig {
            delta: grid.clone(),
            direction,
            ..AahSweepConfig::default()
        };
        let r = aah_transition_sweep(&cfg, StateSpec::Ground)?;
        println!("{}", direction.label());
        println!("{:>6} {:>9} {:>9} {:>9} {:>6} {:>11}", "delta", "H_u-lnG", "H_W", "H_u", "gamma", "<W>");
        for row in &r.rows {
            println!(
                "{:>6.2} {:>9.4} {:>9.4} {:>9.4} {:>6} {:>11.3e}",
                row.param,
                row.report.lower_sandwich(),
                row.report.h_w,
                row.report.h_u,
                row.report.gamma_max,
                row.moments[0]
            );
        }
    }
    Ok(())
}
