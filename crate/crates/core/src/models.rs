//! Model Hamiltonians: the Landau-Zener qubit and the Aubry-André-Harper
//! ring on Fibonacci lattices, with the empirical band-edge predictor.
//!
//! Landau-Zener energies are in units of the gap frequency Δ; AAH energies
//! in units of the hopping J (ħ = 1 throughout).

use std::f64::consts::PI;

use ndarray::Array2;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::spectral::HermitianOperator;
use crate::C64;

/// Phase used for single-realization AAH runs.
pub const DEFAULT_ETA: f64 = 1.2;
/// `N = F_16 = 987`.
pub const DEFAULT_FIB_INDEX: u32 = 16;
/// Coefficient `c` of the band-edge excess `f(Δ) = cΔ²`.
pub const BAND_EDGE_COEFFICIENT: f64 = 0.146939;
/// The quadratic band-edge law is only trusted up to `Δ = 4J`.
pub const BAND_EDGE_VALIDITY: f64 = 4.0;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LzParams {
    /// Minimal gap frequency, `Δ > 0`.
    pub delta: f64,
    /// Detuning `ω`, any sign.
    pub omega: f64,
}

impl LzParams {
    pub fn new(delta: f64, omega: f64) -> Result<Self> {
        let p = Self { delta, omega };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.delta > 0.0 && self.delta.is_finite()) {
            return Err(invalid("delta", format!("must be > 0, got {}", self.delta)));
        }
        if !self.omega.is_finite() {
            return Err(invalid("omega", "must be finite"));
        }
        Ok(())
    }
}

/// `Δσ_x + ωσ_z`.
pub fn lz_hamiltonian(p: &LzParams) -> Result<HermitianOperator> {
    p.validate()?;
    HermitianOperator::from_real(ndarray::array![[p.omega, p.delta], [p.delta, -p.omega]])
}

/// `(F_{n-1}, F_n)` with `F_1 = F_2 = 1`.
pub fn fibonacci_pair(n: u32) -> Result<(u64, u64)> {
    if n < 3 {
        return Err(invalid("fib_index", format!("must be >= 3, got {n}")));
    }
    let (mut prev, mut cur) = (1u64, 1u64);
    for _ in 2..n {
        let next = prev
            .checked_add(cur)
            .ok_or_else(|| invalid("fib_index", format!("F_{n} overflows u64")))?;
        prev = cur;
        cur = next;
    }
    Ok((prev, cur))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AahParams {
    /// Lattice size is `N = F_fib_index`.
    pub fib_index: u32,
    /// Potential amplitude in units of J.
    pub delta: f64,
    pub j: f64,
    /// Potential phase in `[0, 2π)`.
    pub eta: f64,
}

impl Default for AahParams {
    fn default() -> Self {
        Self {
            fib_index: DEFAULT_FIB_INDEX,
            delta: 0.0,
            j: 1.0,
            eta: DEFAULT_ETA,
        }
    }
}

impl AahParams {
    pub fn new(fib_index: u32, delta: f64, j: f64, eta: f64) -> Result<Self> {
        let p = Self {
            fib_index,
            delta,
            j,
            eta,
        };
        p.validate()?;
        Ok(p)
    }

    pub fn with_delta(self, delta: f64) -> Self {
        Self { delta, ..self }
    }

    pub fn with_eta(self, eta: f64) -> Self {
        Self { eta, ..self }
    }

    pub fn validate(&self) -> Result<()> {
        fibonacci_pair(self.fib_index)?;
        if usize::try_from(fibonacci_pair(self.fib_index)?.1).is_err() {
            return Err(invalid("fib_index", "lattice size exceeds usize"));
        }
        if !(self.delta >= 0.0 && self.delta.is_finite()) {
            return Err(invalid("delta", format!("must be >= 0, got {}", self.delta)));
        }
        if !(self.j > 0.0 && self.j.is_finite()) {
            return Err(invalid("j", format!("must be > 0, got {}", self.j)));
        }
        if !(0.0..2.0 * PI).contains(&self.eta) {
            return Err(invalid("eta", format!("must lie in [0, 2π), got {}", self.eta)));
        }
        Ok(())
    }

    pub fn size(&self) -> Result<usize> {
        Ok(fibonacci_pair(self.fib_index)?.1 as usize)
    }

    /// `γ = F_{n-1}/F_n`.
    pub fn modulation(&self) -> Result<f64> {
        let (a, b) = fibonacci_pair(self.fib_index)?;
        Ok(a as f64 / b as f64)
    }

    /// On-site energies `Δ cos(2πγi + η)`, `i = 1..N`.
    pub fn onsite_potential(&self) -> Result<Vec<f64>> {
        let (num, n) = fibonacci_pair(self.fib_index)?;
        // reduce γ·i mod 1 exactly in integers before taking the cosine
        Ok((1..=n)
            .map(|i| {
                let frac = ((num as u128 * i as u128) % n as u128) as f64 / n as f64;
                self.delta * (2.0 * PI * frac + self.eta).cos()
            })
            .collect())
    }
}

/// Single-particle AAH Hamiltonian on a ring of `N = F_n` sites.
pub fn aah_hamiltonian(p: &AahParams) -> Result<HermitianOperator> {
    p.validate()?;
    let n = p.size()?;
    let mut h = Array2::<f64>::zeros((n, n));
    for (i, v) in p.onsite_potential()?.into_iter().enumerate() {
        h[[i, i]] = v;
    }
    for i in 0..n {
        let k = (i + 1) % n;
        h[[i, k]] -= p.j;
        h[[k, i]] -= p.j;
    }
    HermitianOperator::new(h.mapv(|x| C64::new(x, 0.0)))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BandwidthModel {
    pub coefficient: f64,
}

impl Default for BandwidthModel {
    fn default() -> Self {
        Self {
            coefficient: BAND_EDGE_COEFFICIENT,
        }
    }
}

impl BandwidthModel {
    pub fn new(coefficient: f64) -> Result<Self> {
        if !(coefficient > 0.0 && coefficient.is_finite()) {
            return Err(invalid("coefficient", "must be > 0"));
        }
        Ok(Self { coefficient })
    }

    /// Excess `f(Δ) = cΔ²/J` of the band edge beyond the clean `2J`.
    pub fn excess(&self, delta: f64, j: f64) -> f64 {
        self.coefficient * delta * delta / j
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BandEdge {
    pub value: f64,
    /// Set when `Δ > 4J`, outside the range the quadratic law was fitted on.
    pub extrapolated: bool,
}

/// Predicted `max |E|`: `2J + f(Δ)`.
pub fn predicted_band_edge(p: &AahParams, model: &BandwidthModel) -> Result<BandEdge> {
    p.validate()?;
    Ok(BandEdge {
        value: 2.0 * p.j + model.excess(p.delta, p.j),
        extrapolated: p.delta > BAND_EDGE_VALIDITY * p.j,
    })
}

/// Which way the quasiperiodic potential is switched in an AAH quench.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum QuenchDirection {
    /// `H(Δ) → H(0)`.
    DeltaToZero,
    /// `H(0) → H(Δ)`.
    ZeroToDelta,
}

impl QuenchDirection {
    pub fn label(&self) -> &'static str {
        match self {
            QuenchDirection::DeltaToZero => "delta_to_zero",
            QuenchDirection::ZeroToDelta => "zero_to_delta",
        }
    }

    /// `(initial Δ, final Δ)` for a given amplitude.
    pub fn amplitudes(&self, delta: f64) -> (f64, f64) {
        match self {
            QuenchDirection::DeltaToZero => (delta, 0.0),
            QuenchDirection::ZeroToDelta => (0.0, delta),
        }
    }
}

impl std::str::FromStr for QuenchDirection {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "delta-to-zero" | "delta_to_zero" => Ok(Self::DeltaToZero),
            "zero-to-delta" | "zero_to_delta" => Ok(Self::ZeroToDelta),
            other => Err(invalid(
                "direction",
                format!("`{other}` (expected delta-to-zero or zero-to-delta)"),
            )),
        }
    }
}

/// Predicted `(min W, max W)` for a ground-state AAH quench.
pub fn predicted_work_window(
    p: &AahParams,
    model: &BandwidthModel,
    direction: QuenchDirection,
) -> (f64, f64) {
    let f = model.excess(p.delta, p.j);
    let max = 4.0 * p.j + f;
    match direction {
        QuenchDirection::DeltaToZero => (f, max),
        QuenchDirection::ZeroToDelta => (-f, max),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectral::diagonalize;

    #[test]
    fn lz_pure_sigma_x() {
        let h = lz_hamiltonian(&LzParams::new(1.0, 0.0).unwrap()).unwrap();
        assert_eq!(h.entries()[[0, 1]], C64::new(1.0, 0.0));
        assert_eq!(h.entries()[[0, 0]], C64::new(0.0, 0.0));
        let e = diagonalize(&h).unwrap();
        assert_eq!(e.eigenvalues().to_vec(), vec![-1.0, 1.0]);
    }

    #[test]
    fn lz_rejects_nonpositive_gap() {
        assert!(LzParams::new(0.0, 1.0).is_err());
        assert!(lz_hamiltonian(&LzParams {
            delta: -1.0,
            omega: 0.0
        })
        .is_err());
    }

    #[test]
    fn fibonacci_values() {
        assert_eq!(fibonacci_pair(3).unwrap(), (1, 2));
        assert_eq!(fibonacci_pair(16).unwrap(), (610, 987));
        assert!(fibonacci_pair(2).is_err());
        assert!(fibonacci_pair(93).is_ok());
        assert!(fibonacci_pair(94).is_err());
    }

    #[test]
    fn fibonacci_ratio_alternates_towards_golden_inverse() {
        let target = (5f64.sqrt() - 1.0) / 2.0;
        let errs: Vec<f64> = (3..30)
            .map(|n| {
                let (a, b) = fibonacci_pair(n).unwrap();
                a as f64 / b as f64 - target
            })
            .collect();
        for w in errs.windows(2) {
            assert!(w[0] * w[1] < 0.0, "signs must alternate");
            assert!(w[1].abs() < w[0].abs(), "error must shrink");
        }
    }

    #[test]
    fn aah_structure() {
        let p = AahParams::new(7, 0.7, 1.0, 0.3).unwrap();
        let h = aah_hamiltonian(&p).unwrap();
        assert!(h.is_real());
        let n = p.size().unwrap();
        assert_eq!(n, 13);
        for i in 0..n {
            let nz = h.entries().row(i).iter().filter(|z| z.norm() > 0.0).count();
            assert_eq!(nz, 3);
        }
        assert_eq!(h.entries()[[0, n - 1]], C64::new(-1.0, 0.0));
        let expected = 0.7 * (2.0 * PI * 8.0 / 13.0 + 0.3).cos();
        assert!((h.entries()[[0, 0]].re - expected).abs() < 1e-15);
    }

    #[test]
    fn aah_param_validation() {
        assert!(AahParams::new(2, 1.0, 1.0, 0.0).is_err());
        assert!(AahParams::new(5, -1.0, 1.0, 0.0).is_err());
        assert!(AahParams::new(5, 1.0, 0.0, 0.0).is_err());
        assert!(AahParams::new(5, 1.0, 1.0, 2.0 * PI).is_err());
    }

    #[test]
    fn band_edge_prediction() {
        let m = BandwidthModel::default();
        let p = AahParams::default();
        assert_eq!(predicted_band_edge(&p, &m).unwrap().value, 2.0);
        let e = predicted_band_edge(&p.with_delta(2.0), &m).unwrap();
        assert!((e.value - 2.587756).abs() < 1e-12);
        assert!(!e.extrapolated);
        assert!(predicted_band_edge(&p.with_delta(4.5), &m).unwrap().extrapolated);
        assert!(BandwidthModel::new(0.0).is_err());
    }

    #[test]
    fn direction_parsing() {
        assert_eq!(
            "zero-to-delta".parse::<QuenchDirection>().unwrap(),
            QuenchDirection::ZeroToDelta
        );
        assert!("sideways".parse::<QuenchDirection>().is_err());
    }
}
