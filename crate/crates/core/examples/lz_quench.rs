//! One thermal Landau-Zener sudden quench: the four work values, their
//! entropy, and every term of the bound chain.

use work_entropy::infotheory::{bounds_report, entropy_of_work};
use work_entropy::models::{lz_hamiltonian, LzParams};
use work_entropy::spectral::thermal_state;
use work_entropy::spectral::diagonalize;
use work_entropy::tpm::{
    collect_work_distribution, default_cluster_tol, uncollected_distribution, QuenchSetup,
};

fn main() -> work_entropy::Result<()> {
    let hi = lz_hamiltonian(&LzParams::new(1.0, -20.0)?)?;
    let hf = lz_hamiltonian(&LzParams::new(1.0, 0.5)?)?;
    let di = diagonalize(&hi)?;
    let df = diagonalize(&hf)?;
    let rho = thermal_state(&di, 0.1)?;

    let setup = QuenchSetup::sudden(hi, hf, rho)?;
    let u = uncollected_distribution(&setup)?;
    let w = collect_work_distribution(&u, default_cluster_tol(&di, &df))?;

    println!("{:>12} {:>12}", "W", "P(W)");
    for (x, p) in w.support().iter().zip(w.probs()) {
        println!("{x:>12.6} {p:>12.6e}");
    }
    let r = bounds_report(&u, &w)?;
    println!("H_W = {:.6} nats (direct {:.6})", r.h_w, entropy_of_work(&w)?);
    println!("H_u = {:.6}  S(rho_bar) = {:.6}  avg coherence = {:.6}", r.h_u, r.s_diag, r.avg_coherence);
    println!("upper bounds: 2S + C(rho_bar) = {:.6}, S + C_max = {:.6}", r.concavity_bound(), r.temperature_bound());
    Ok(())
}
