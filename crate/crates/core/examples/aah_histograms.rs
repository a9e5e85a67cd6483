//! Ground-state AAH work distributions for turning the quasiperiodic
//! potential off and on, with the predicted support window.

use work_entropy::experiments::aah_work_histogram;
use work_entropy::infotheory::entropy_of_work;
use work_entropy::models::{predicted_work_window, AahParams, BandwidthModel, QuenchDirection};

fn main() -> work_entropy::Result<()> {
    let model = BandwidthModel::default();
    for dir in [QuenchDirection::DeltaToZero, QuenchDirection::ZeroToDelta] {
        for delta in [1.5, 2.0, 2.5, 3.0] {
            let p = AahParams::default().with_delta(delta);
            let w = aah_work_histogram(&p, dir, None)?;
            let (lo, hi) = predicted_work_window(&p, &model, dir);
            // weight within 0.5J of the minimum work value
            let near_min: f64 = w
                .support()
                .iter()
                .zip(w.probs())
                .filter(|(x, _)| **x < w.min_work() + 0.5)
                .map(|(_, p)| p)
                .sum();
            println!(
                "{:<14} delta={delta:.1}  W in [{:+.4}, {:.4}]  predicted [{lo:+.4}, {hi:.4}]  H_W={:.3}  P(near min)={near_min:.3}",
                dir.label(),
                w.min_work(),
                w.max_work(),
                entropy_of_work(&w)?,
            );
        }
    }
    Ok(())
}
