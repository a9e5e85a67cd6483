//! Entropies of work, the relative entropy of coherence, and the bound chain
//!
//! ```text
//! H_u - ln γ_max <= H_W <= H_u = S(ρ̄) + Σ_n p_n C(|n_i⟩⟨n_i|) <= 2 S(ρ̄) + C(ρ̄)
//! H_W <= S(ρ̄) + max_n C(|n_i⟩⟨n_i|)
//! ```
//!
//! All entropies are in nats.

use ndarray::Array2;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::spectral::{dephase, von_neumann_entropy, DensityMatrix, SpectralDecomposition};
use crate::tpm::{max_degeneracy, UncollectedDistribution, WorkDistribution};

/// Slack allowed on every inequality and identity of the bound chain.
pub const BOUND_SLACK: f64 = 1e-10;

const NEGATIVE_TOL: f64 = 1e-12;
const NORMALIZATION_REJECT: f64 = 1e-6;
const PURE_TOL: f64 = 1e-12;

fn clipped_total(p: &[f64]) -> Result<f64> {
    let mut total = 0.0;
    for (index, &value) in p.iter().enumerate() {
        if value < -NEGATIVE_TOL || value.is_nan() {
            return Err(Error::NegativeProbability { index, value });
        }
        total += value.max(0.0);
    }
    let deviation = (total - 1.0).abs();
    if deviation > NORMALIZATION_REJECT {
        return Err(Error::Unnormalized { deviation });
    }
    Ok(total)
}

/// `-Σ p ln p` with `0 ln 0 = 0`. Tiny negative entries are clipped and the
/// vector renormalized before evaluation.
pub fn shannon_entropy(p: &[f64]) -> Result<f64> {
    let total = clipped_total(p)?;
    let s: f64 = p
        .iter()
        .map(|&x| x.max(0.0) / total)
        .filter(|&q| q > 0.0)
        .map(|q| q * q.ln())
        .sum();
    // `0.0 - s` rather than `-s`, so a deterministic distribution gives +0
    Ok(0.0 - s)
}

/// `H_W`, including the entropy carried by clusters dropped from the
/// support.
pub fn entropy_of_work(w: &WorkDistribution) -> Result<f64> {
    let d = w.diagnostics();
    let mut total = d.dropped_mass;
    for (index, &value) in w.probs().iter().enumerate() {
        if value < 0.0 || value.is_nan() {
            return Err(Error::NegativeProbability { index, value });
        }
        total += value;
    }
    let deviation = (total - 1.0).abs();
    if deviation > NORMALIZATION_REJECT {
        return Err(Error::Unnormalized { deviation });
    }
    let h: f64 = w.probs().iter().map(|&p| -p * p.ln()).sum();
    Ok(h + d.dropped_entropy)
}

/// `H_u`, the Shannon entropy of the flattened joint table.
pub fn uncollected_entropy(u: &UncollectedDistribution) -> Result<f64> {
    shannon_entropy(&u.joint())
}

/// `C(σ) = S(D(σ)) - S(σ)` in the given basis.
pub fn relative_entropy_of_coherence(
    sigma: &DensityMatrix,
    basis: &SpectralDecomposition,
) -> Result<f64> {
    let dephased = dephase(sigma, basis)?;
    Ok(von_neumann_entropy(&dephased)? - von_neumann_entropy(sigma)?)
}

/// `C(|n_i⟩⟨n_i|)` for every initial level: the Shannon entropy of each
/// column `p_{·|n}`.
pub fn per_level_coherences(pmn: &Array2<f64>) -> Result<Vec<f64>> {
    pmn.columns()
        .into_iter()
        .map(|col| shannon_entropy(&col.to_vec()))
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EffectiveDimension {
    /// `I = Σ_m p_{m|n}^2`, the inverse effective dimension.
    pub ipr: f64,
    /// `-ln I`, the Rényi-2 entropy of the column.
    pub renyi2: f64,
}

pub fn effective_dimension(pmn: &Array2<f64>, n: usize) -> Result<EffectiveDimension> {
    if n >= pmn.ncols() {
        return Err(Error::IndexOutOfRange {
            index: n,
            dim: pmn.ncols(),
        });
    }
    let ipr: f64 = pmn.column(n).iter().map(|p| p * p).sum();
    Ok(EffectiveDimension {
        ipr,
        renyi2: -ipr.ln(),
    })
}

/// Every term of the bound chain for one quench.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BoundsReport {
    pub h_w: f64,
    pub h_u: f64,
    pub gamma_max: usize,
    pub ln_gamma_max: f64,
    /// `S(ρ̄)`, entropy of the diagonal ensemble.
    pub s_diag: f64,
    /// `Σ_n p_n C(|n_i⟩⟨n_i|)`.
    pub avg_coherence: f64,
    /// `C(ρ̄)` in the basis `U^dag |m_f⟩`.
    pub rec_rho_bar: f64,
    pub c_max: f64,
    /// Level whose column enters the effective dimension (the most occupied).
    pub eff_dim_level: usize,
    pub ipr: f64,
    pub renyi2: f64,
    pub per_level_coherence: Vec<f64>,
}

impl BoundsReport {
    /// Column names of the scalar part, in `csv_row` order.
    pub const CSV_HEADER: [&'static str; 15] = [
        "h_w",
        "h_u",
        "gamma_max",
        "ln_gamma_max",
        "s_diag",
        "avg_coherence",
        "rec_rho_bar",
        "c_max",
        "eff_dim_level",
        "ipr",
        "renyi2",
        "lower_sandwich",
        "concavity_bound",
        "temperature_bound",
        "concavity_gap",
    ];

    pub fn csv_row(&self) -> [f64; 15] {
        [
            self.h_w,
            self.h_u,
            self.gamma_max as f64,
            self.ln_gamma_max,
            self.s_diag,
            self.avg_coherence,
            self.rec_rho_bar,
            self.c_max,
            self.eff_dim_level as f64,
            self.ipr,
            self.renyi2,
            self.lower_sandwich(),
            self.concavity_bound(),
            self.temperature_bound(),
            self.concavity_gap(),
        ]
    }

    /// `H_u - ln γ_max`.
    pub fn lower_sandwich(&self) -> f64 {
        self.h_u - self.ln_gamma_max
    }

    /// `2 S(ρ̄) + C(ρ̄)`.
    pub fn concavity_bound(&self) -> f64 {
        2.0 * self.s_diag + self.rec_rho_bar
    }

    /// `S(ρ̄) + C_max`.
    pub fn temperature_bound(&self) -> f64 {
        self.s_diag + self.c_max
    }

    pub fn concavity_gap(&self) -> f64 {
        self.concavity_bound() - self.h_u
    }

    fn is_pure_level(&self, pn_max: f64) -> bool {
        pn_max >= 1.0 - PURE_TOL
    }

    fn check(&self, pn_max: f64) -> Result<()> {
        let violation = |bound: &'static str, excess: f64| -> Result<()> {
            if excess > BOUND_SLACK || excess.is_nan() {
                Err(Error::BoundViolation {
                    bound,
                    excess,
                    slack: BOUND_SLACK,
                })
            } else {
                Ok(())
            }
        };
        violation("H_W <= H_u", self.h_w - self.h_u)?;
        violation("H_u - ln γ_max <= H_W", self.lower_sandwich() - self.h_w)?;
        violation(
            "H_u = S(ρ̄) + Σ p_n C_n",
            (self.h_u - self.s_diag - self.avg_coherence).abs(),
        )?;
        violation("H_u <= 2 S(ρ̄) + C(ρ̄)", -self.concavity_gap())?;
        violation("H_W <= S(ρ̄) + C_max", self.h_w - self.temperature_bound())?;
        if self.is_pure_level(pn_max) {
            violation("H_u >= -ln I", self.renyi2 - self.h_u)?;
        }
        Ok(())
    }
}

/// Evaluates and checks the bound chain. Every inequality is unconditional,
/// so a violation beyond `BOUND_SLACK` is returned as an error.
pub fn bounds_report(u: &UncollectedDistribution, w: &WorkDistribution) -> Result<BoundsReport> {
    let pn = u.initial_populations();
    let pmn = u.transitions();
    let h_w = entropy_of_work(w)?;
    let h_u = uncollected_entropy(u)?;
    let gamma_max = max_degeneracy(w);
    let s_diag = shannon_entropy(pn.as_slice().expect("contiguous"))?;
    let per_level_coherence = per_level_coherences(pmn)?;
    let avg_coherence = pn
        .iter()
        .zip(&per_level_coherence)
        .map(|(p, c)| p * c)
        .sum();
    // ρ̄ is diagonal in the initial basis, so its dephasing in the final
    // basis has populations Σ_n p_{m|n} p_n.
    let dephased = pmn.dot(pn);
    let rec_rho_bar = shannon_entropy(dephased.as_slice().expect("contiguous"))? - s_diag;
    let c_max = per_level_coherence.iter().copied().fold(0.0, f64::max);
    let (eff_dim_level, pn_max) = pn
        .iter()
        .copied()
        .enumerate()
        .fold((0, f64::MIN), |best, (k, p)| if p > best.1 { (k, p) } else { best });
    let eff = effective_dimension(pmn, eff_dim_level)?;
    let report = BoundsReport {
        h_w,
        h_u,
        gamma_max,
        ln_gamma_max: (gamma_max as f64).ln(),
        s_diag,
        avg_coherence,
        rec_rho_bar,
        c_max,
        eff_dim_level,
        ipr: eff.ipr,
        renyi2: eff.renyi2,
        per_level_coherence,
    };
    report.check(pn_max)?;
    Ok(report)
}
