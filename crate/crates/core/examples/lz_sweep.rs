//! Thermal Landau-Zener sweep over the final frequency. The moments are
//! featureless near the avoided crossing while H_W peaks there.

use work_entropy::experiments::{lz_sweep, LzSweepConfig};

fn main() -> work_entropy::Result<()> {
    let r = lz_sweep(&LzSweepConfig::default())?;
    let peak = r
        .rows
        .iter()
        .max_by(|a, b| a.report.h_w.total_cmp(&b.report.h_w))
        .expect("nonempty grid");
    println!("H_W peaks at omega_f = {:+.2} with {:.4} nats", peak.param, peak.report.h_w);

    println!("{:>8} {:>10} {:>10} {:>10} {:>10}", "omega_f", "<W>/ref", "<W^2>/ref", "H_W", "gap(7)");
    for row in r.rows.iter().step_by(25) {
        let m = r.normalized_moments(row).expect("lz sweeps carry a reference");
        println!(
            "{:>8.2} {:>10.4} {:>10.4} {:>10.4} {:>10.2e}",
            row.param, m[0], m[1], row.report.h_w, row.report.concavity_gap()
        );
    }
    let flagged: Vec<f64> = r.rows.iter().filter(|x| x.flagged).map(|x| x.param).collect();
    println!("degenerate points: {flagged:?}");
    Ok(())
}
