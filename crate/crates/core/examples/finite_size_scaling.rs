//! Slope of H_W at the critical point against lattice size, averaged over
//! random phases, with a power-law fit.
//!
//! Runs the small profile by default; pass `full` for F_10..F_16 with 50
//! phases. Pass a step as the second argument to change the finite
//! difference (the fitted exponent depends on it).

use work_entropy::experiments::{scaling_derivative, EtaSampling, ScalingConfig};

fn main() -> work_entropy::Result<()> {
    let args: Vec<String> = std::env::args().collect();
    let mut cfg = if args.get(1).map(String::as_str) == Some("full") {
        ScalingConfig::default()
    } else {
        ScalingConfig {
            fib_indices: vec![8, 9, 10, 11, 12],
            eta: EtaSampling::Random { samples: 10, seed: 0 },
            ..ScalingConfig::default()
        }
    };
    if let Some(step) = args.get(2) {
        cfg.deriv_step = step.parse().expect("step must be a number");
    }
    for r in scaling_derivative(&cfg)? {
        println!(
            "{}: H_W'(2) ~ {:.3} N^{:.3}  (step {})",
            r.direction.label(),
            r.fit_prefactor,
            r.fit_exponent,
            r.deriv_step
        );
        for i in 0..r.sizes.len() {
            println!(
                "  N={:>4}  slope={:>9.3}  half-step={:>9.3}  richardson_ok={}",
                r.sizes[i], r.slopes[i], r.slopes_half_step[i], r.richardson_ok[i]
            );
        }
    }
    Ok(())
}
