//! Growth of the AAH band edge beyond 2J, fitted with c Delta^2 / J.

use work_entropy::experiments::{bandwidth_fit, BandwidthFitConfig};
use work_entropy::models::BAND_EDGE_COEFFICIENT;

fn main() -> work_entropy::Result<()> {
    let f = bandwidth_fit(&BandwidthFitConfig::default())?;
    println!(
        "c = {:.6} (reference {BAND_EDGE_COEFFICIENT}, {:+.2}%)",
        f.coefficient,
        100.0 * (f.coefficient / BAND_EDGE_COEFFICIENT - 1.0)
    );
    for ((d, e), r) in f.delta_grid.iter().zip(&f.excess).zip(&f.relative_residuals) {
        println!("delta={d:>5.2}  excess={e:>8.5}  residual={r:+.4}");
    }
    Ok(())
}
