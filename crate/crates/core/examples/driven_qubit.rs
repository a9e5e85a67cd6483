//! A non-sudden protocol: a mixed qubit state that does not commute with
//! H_i, driven by U = exp(-i H_d t). The bound chain holds regardless.
//!
//! The first energy measurement removes the coherences of ρ, so the mean
//! of P(W) matches the trace formula evaluated on the dephased state ρ̄,
//! not on ρ itself.

use ndarray::array;
use work_entropy::infotheory::bounds_report;
use work_entropy::spectral::{dephase, diagonalize, DensityMatrix, HermitianOperator, UnitaryMatrix};
use work_entropy::tpm::{
    collect_work_distribution, mean_work_direct, uncollected_distribution, work_moments,
    QuenchSetup,
};
use work_entropy::C64;

fn main() -> work_entropy::Result<()> {
    let c = |re: f64, im: f64| C64::new(re, im);
    let hi = HermitianOperator::new(array![[c(1.0, 0.0), c(0.3, 0.0)], [c(0.3, 0.0), c(-1.0, 0.0)]])?;
    let hf = HermitianOperator::new(array![[c(-0.5, 0.0), c(0.0, 0.8)], [c(0.0, -0.8), c(0.5, 0.0)]])?;
    let drive = HermitianOperator::new(array![[c(0.0, 0.0), c(1.0, 0.0)], [c(1.0, 0.0), c(0.0, 0.0)]])?;
    let u = UnitaryMatrix::evolution(&diagonalize(&drive)?, 0.7);
    let rho = DensityMatrix::new(array![[c(0.7, 0.0), c(0.1, 0.2)], [c(0.1, -0.2), c(0.3, 0.0)]])?;

    let rho_bar = dephase(&rho, &diagonalize(&hi)?)?;
    let dephased = QuenchSetup::new(hi.clone(), hf.clone(), u.clone(), rho_bar)?;
    let setup = QuenchSetup::new(hi, hf, u, rho)?;
    let table = uncollected_distribution(&setup)?;
    let w = collect_work_distribution(&table, 1e-9)?;
    let r = bounds_report(&table, &w)?;
    println!("<W> from P(W) = {:.12}", work_moments(&w, 1)?.mean());
    println!("tr[(U'H_f U - H_i) rho_bar] = {:.12}", mean_work_direct(&dephased)?);
    println!("tr[(U'H_f U - H_i) rho]     = {:.12}", mean_work_direct(&setup)?);
    println!("H_u - ln gamma = {:.6} <= H_W = {:.6} <= H_u = {:.6}", r.lower_sandwich(), r.h_w, r.h_u);
    println!("H_u = {:.6} <= 2S + C(rho_bar) = {:.6}", r.h_u, r.concavity_bound());
    println!("H_W = {:.6} <= S + C_max = {:.6}", r.h_w, r.temperature_bound());
    Ok(())
}
