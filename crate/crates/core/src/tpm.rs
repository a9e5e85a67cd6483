//! Two-point-measurement work statistics.
//!
//! A quench is measured in the eigenbasis of the initial Hamiltonian, driven
//! by `U`, and measured again in the eigenbasis of the final Hamiltonian.
//! The joint table `p_n p_{m|n}` over Bohr frequencies `E_m^f - E_n^i` is the
//! uncollected distribution; merging equal Bohr frequencies gives `P(W)`.

use ndarray::{Array1, Array2, ArrayView1, Axis};
use serde::Serialize;

use crate::error::{invalid, Error, Result};
use crate::spectral::{
    adjoint, diagonalize, populations_in_basis, DensityMatrix, Eigenvectors, HermitianOperator,
    SpectralDecomposition, UnitaryMatrix,
};
use crate::C64;

/// Relative clustering tolerance; multiplied by the sum of both spectral spans.
pub const DEFAULT_CLUSTER_RTOL: f64 = 1e-9;
/// Initial levels with `p_n` at or below this are unoccupied and take no part
/// in collection.
pub const OCCUPATION_FLOOR: f64 = 1e-20;
/// Inter-cluster gaps below this multiple of the tolerance raise a warning.
pub const PROXIMITY_FACTOR: f64 = 10.0;
/// Clusters lighter than this are removed from the support.
pub const DROP_THRESHOLD: f64 = 1e-15;

const STOCHASTIC_TOL: f64 = 1e-10;
const PROBABILITY_TOL: f64 = 1e-12;

/// Everything that defines a work protocol: `H_i`, `H_f`, `U` and `ρ`.
#[derive(Debug, Clone)]
pub struct QuenchSetup {
    hi: HermitianOperator,
    hf: HermitianOperator,
    u: UnitaryMatrix,
    rho: DensityMatrix,
}

impl QuenchSetup {
    pub fn new(
        hi: HermitianOperator,
        hf: HermitianOperator,
        u: UnitaryMatrix,
        rho: DensityMatrix,
    ) -> Result<Self> {
        let n = hi.dim();
        for found in [hf.dim(), u.dim(), rho.dim()] {
            if found != n {
                return Err(Error::DimensionMismatch { expected: n, found });
            }
        }
        Ok(Self { hi, hf, u, rho })
    }

    /// `U = 1`.
    pub fn sudden(hi: HermitianOperator, hf: HermitianOperator, rho: DensityMatrix) -> Result<Self> {
        let u = UnitaryMatrix::identity(hi.dim());
        Self::new(hi, hf, u, rho)
    }

    pub fn dim(&self) -> usize {
        self.hi.dim()
    }

    pub fn initial_hamiltonian(&self) -> &HermitianOperator {
        &self.hi
    }

    pub fn final_hamiltonian(&self) -> &HermitianOperator {
        &self.hf
    }

    pub fn unitary(&self) -> &UnitaryMatrix {
        &self.u
    }

    pub fn state(&self) -> &DensityMatrix {
        &self.rho
    }
}

/// `1e-9 × (span_i + span_f)`.
pub fn default_cluster_tol(di: &SpectralDecomposition, df: &SpectralDecomposition) -> f64 {
    DEFAULT_CLUSTER_RTOL * (di.spectral_span() + df.spectral_span())
}

fn check_dims(expected: usize, found: usize) -> Result<()> {
    if expected != found {
        return Err(Error::DimensionMismatch { expected, found });
    }
    Ok(())
}

/// Overlap matrix `M = V_f^dag U V_i` reduced to `|M[m][n]|^2`.
fn overlap_probabilities(
    di: &SpectralDecomposition,
    df: &SpectralDecomposition,
    u: &UnitaryMatrix,
) -> Array2<f64> {
    match (di.vectors(), df.vectors(), u.is_identity()) {
        (Eigenvectors::Real(vi), Eigenvectors::Real(vf), true) => {
            vf.t().dot(vi).mapv(|x| x * x)
        }
        _ => {
            let vi = di.vectors().to_complex();
            let vf = df.vectors().to_complex();
            let uvi = if u.is_identity() {
                vi
            } else {
                u.entries().dot(&vi)
            };
            adjoint(&vf).dot(&uvi).mapv(|z| z.norm_sqr())
        }
    }
}

/// `p_{m|n} = |⟨m_f|U|n_i⟩|^2`, rows indexed by `m`, columns by `n`.
///
/// The result is doubly stochastic; a residual above `1e-10` is reported as
/// an invariant error.
pub fn transition_probabilities(
    di: &SpectralDecomposition,
    df: &SpectralDecomposition,
    u: &UnitaryMatrix,
) -> Result<Array2<f64>> {
    check_dims(di.dim(), df.dim())?;
    check_dims(di.dim(), u.dim())?;
    let p = overlap_probabilities(di, df, u);
    let worst = p
        .sum_axis(Axis(0))
        .iter()
        .chain(p.sum_axis(Axis(1)).iter())
        .map(|s| (s - 1.0).abs())
        .fold(0.0, f64::max);
    if worst > STOCHASTIC_TOL {
        return Err(Error::Invariant {
            name: "doubly stochastic transition matrix",
            detail: format!("row/column sum off by {worst:.3e}"),
        });
    }
    Ok(p)
}

/// `p_n = ⟨n_i|ρ|n_i⟩`.
pub fn initial_populations(rho: &DensityMatrix, di: &SpectralDecomposition) -> Result<Array1<f64>> {
    populations_in_basis(rho, di)
}

/// The joint table `p_n p_{m|n}` with its Bohr frequencies.
#[derive(Debug, Clone, PartialEq)]
pub struct UncollectedDistribution {
    pn: Array1<f64>,
    pmn: Array2<f64>,
    bohr: Array2<f64>,
}

fn in_unit(p: f64) -> bool {
    (-PROBABILITY_TOL..=1.0 + PROBABILITY_TOL).contains(&p)
}

fn check_populations(pn: &Array1<f64>) -> Result<()> {
    if let Some((index, &value)) = pn.iter().enumerate().find(|(_, p)| !in_unit(**p)) {
        return Err(Error::NegativeProbability { index, value });
    }
    let dev = (pn.sum() - 1.0).abs();
    if dev > PROBABILITY_TOL {
        return Err(Error::Unnormalized { deviation: dev });
    }
    Ok(())
}

impl UncollectedDistribution {
    pub fn new(pn: Array1<f64>, pmn: Array2<f64>, bohr: Array2<f64>) -> Result<Self> {
        let n = pn.len();
        if n == 0 {
            return Err(invalid("pn", "empty"));
        }
        for shape in [pmn.dim(), bohr.dim()] {
            if shape != (n, n) {
                return Err(Error::DimensionMismatch {
                    expected: n,
                    found: shape.0.max(shape.1),
                });
            }
        }
        check_populations(&pn)?;
        if let Some((index, &value)) = pmn.iter().enumerate().find(|(_, p)| !in_unit(**p)) {
            return Err(Error::NegativeProbability { index, value });
        }
        let col_dev = pmn
            .sum_axis(Axis(0))
            .iter()
            .map(|s| (s - 1.0).abs())
            .fold(0.0, f64::max);
        if col_dev > STOCHASTIC_TOL {
            return Err(Error::Unnormalized { deviation: col_dev });
        }
        Ok(Self { pn, pmn, bohr })
    }

    /// Assembles the table from two precomputed eigenbases.
    pub fn from_decompositions(
        di: &SpectralDecomposition,
        df: &SpectralDecomposition,
        u: &UnitaryMatrix,
        pn: Array1<f64>,
    ) -> Result<Self> {
        check_dims(di.dim(), pn.len())?;
        let pmn = transition_probabilities(di, df, u)?;
        let ei = di.eigenvalues();
        let ef = df.eigenvalues();
        let bohr = Array2::from_shape_fn((df.dim(), di.dim()), |(m, n)| ef[m] - ei[n]);
        Self::new(pn, pmn, bohr)
    }

    /// Same transitions and Bohr frequencies with a different initial state.
    pub fn with_populations(&self, pn: Array1<f64>) -> Result<Self> {
        check_dims(self.dim(), pn.len())?;
        check_populations(&pn)?;
        Ok(Self {
            pn,
            pmn: self.pmn.clone(),
            bohr: self.bohr.clone(),
        })
    }

    pub fn dim(&self) -> usize {
        self.pn.len()
    }

    pub fn initial_populations(&self) -> &Array1<f64> {
        &self.pn
    }

    /// `p_{m|n}`, rows `m`, columns `n`.
    pub fn transitions(&self) -> &Array2<f64> {
        &self.pmn
    }

    /// `E_m^f - E_n^i`, rows `m`, columns `n`.
    pub fn bohr_frequencies(&self) -> &Array2<f64> {
        &self.bohr
    }

    /// Flattened `p_n p_{m|n}`, `n`-major.
    pub fn joint(&self) -> Vec<f64> {
        let n = self.dim();
        let mut out = Vec::with_capacity(n * n);
        for (col, &p) in self.pmn.columns().into_iter().zip(self.pn.iter()) {
            out.extend(col.iter().map(|&q| p * q));
        }
        out
    }
}

/// Diagonalizes both Hamiltonians and builds the joint table.
pub fn uncollected_distribution(s: &QuenchSetup) -> Result<UncollectedDistribution> {
    let di = diagonalize(s.initial_hamiltonian())?;
    let df = diagonalize(s.final_hamiltonian())?;
    let pn = initial_populations(s.state(), &di)?;
    UncollectedDistribution::from_decompositions(&di, &df, s.unitary(), pn)
}

/// Bookkeeping attached to a collected distribution.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CollectionDiagnostics {
    pub cluster_tol: f64,
    /// Smallest gap between consecutive support points, if there are two.
    pub min_gap: Option<f64>,
    /// Some inter-cluster gap is below `10 × cluster_tol`.
    pub resolution_marginal: bool,
    /// `(n, m)` pairs skipped because `p_n <= OCCUPATION_FLOOR`.
    pub unoccupied_pairs: usize,
    /// Clusters removed because their total probability is below
    /// `DROP_THRESHOLD`.
    pub dropped_clusters: usize,
    pub dropped_mass: f64,
    /// `-Σ p ln p` over the dropped clusters, so the entropy of the full
    /// collected distribution stays recoverable.
    pub dropped_entropy: f64,
    pub warnings: Vec<String>,
}

/// Degeneracy-collected `P(W)` on a strictly increasing support.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct WorkDistribution {
    support: Vec<f64>,
    probs: Vec<f64>,
    multiplicity: Vec<usize>,
    diagnostics: CollectionDiagnostics,
}

impl WorkDistribution {
    pub fn support(&self) -> &[f64] {
        &self.support
    }

    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    /// `|Γ_W|`: number of occupied `(n, m)` pairs merged into each point.
    pub fn multiplicity(&self) -> &[usize] {
        &self.multiplicity
    }

    pub fn diagnostics(&self) -> &CollectionDiagnostics {
        &self.diagnostics
    }

    pub fn len(&self) -> usize {
        self.support.len()
    }

    pub fn is_empty(&self) -> bool {
        self.support.is_empty()
    }

    pub fn min_work(&self) -> f64 {
        self.support[0]
    }

    pub fn max_work(&self) -> f64 {
        self.support[self.support.len() - 1]
    }

    /// Runs the clustering again over the support points.
    pub fn recollect(&self, cluster_tol: f64) -> Result<WorkDistribution> {
        let items = self
            .support
            .iter()
            .zip(&self.probs)
            .zip(&self.multiplicity)
            .map(|((&w, &p), &k)| Item { w, p, count: k })
            .collect();
        let d = &self.diagnostics;
        let carry = Dropped {
            unoccupied_pairs: d.unoccupied_pairs,
            clusters: d.dropped_clusters,
            mass: d.dropped_mass,
            entropy: d.dropped_entropy,
        };
        cluster(items, cluster_tol, carry)
    }
}

#[derive(Default)]
struct Dropped {
    unoccupied_pairs: usize,
    clusters: usize,
    mass: f64,
    entropy: f64,
}

struct Item {
    w: f64,
    p: f64,
    count: usize,
}

fn cluster(mut items: Vec<Item>, tol: f64, mut dropped: Dropped) -> Result<WorkDistribution> {
    if !(tol > 0.0 && tol.is_finite()) {
        return Err(invalid("cluster_tol", format!("must be > 0, got {tol}")));
    }
    if items.is_empty() {
        return Err(invalid("distribution", "no occupied initial level"));
    }
    items.sort_by(|a, b| a.w.total_cmp(&b.w));

    let mut support = Vec::new();
    let mut probs = Vec::new();
    let mut multiplicity = Vec::new();

    let mut start = 0;
    for end in 1..=items.len() {
        if end < items.len() && items[end].w - items[end - 1].w < tol {
            continue;
        }
        let members = &items[start..end];
        let mass: f64 = members.iter().map(|it| it.p).sum();
        let count: usize = members.iter().map(|it| it.count).sum();
        if mass >= DROP_THRESHOLD {
            let w = members.iter().map(|it| it.p * it.w).sum::<f64>() / mass;
            support.push(w);
            probs.push(mass);
            multiplicity.push(count);
        } else {
            dropped.clusters += 1;
            dropped.mass += mass;
            if mass > 0.0 {
                dropped.entropy -= mass * mass.ln();
            }
        }
        start = end;
    }

    let min_gap = support
        .windows(2)
        .map(|w| w[1] - w[0])
        .min_by(f64::total_cmp);
    let resolution_marginal = min_gap.is_some_and(|g| g < PROXIMITY_FACTOR * tol);
    let mut warnings = Vec::new();
    if resolution_marginal {
        warnings.push(format!(
            "support gap {:.3e} is within {PROXIMITY_FACTOR}x of cluster_tol {tol:.3e}",
            min_gap.unwrap_or_default()
        ));
    }
    if support.is_empty() {
        return Err(invalid("distribution", "all clusters below the drop threshold"));
    }
    let total = probs.iter().sum::<f64>() + dropped.mass;
    if (total - 1.0).abs() > PROBABILITY_TOL {
        return Err(Error::Unnormalized {
            deviation: (total - 1.0).abs(),
        });
    }

    Ok(WorkDistribution {
        support,
        probs,
        multiplicity,
        diagnostics: CollectionDiagnostics {
            cluster_tol: tol,
            min_gap,
            resolution_marginal,
            unoccupied_pairs: dropped.unoccupied_pairs,
            dropped_clusters: dropped.clusters,
            dropped_mass: dropped.mass,
            dropped_entropy: dropped.entropy,
            warnings,
        },
    })
}

/// Merges Bohr frequencies closer than `cluster_tol` (single linkage on the
/// sorted list). A cluster sits at the probability-weighted mean of its
/// members, so collection preserves `⟨W⟩`.
pub fn collect_work_distribution(
    u: &UncollectedDistribution,
    cluster_tol: f64,
) -> Result<WorkDistribution> {
    let n = u.dim();
    let mut items = Vec::new();
    let mut unoccupied = 0;
    for (col, &p) in u.pn.iter().enumerate() {
        if p <= OCCUPATION_FLOOR {
            unoccupied += n;
            continue;
        }
        for m in 0..n {
            items.push(Item {
                w: u.bohr[[m, col]],
                p: p * u.pmn[[m, col]],
                count: 1,
            });
        }
    }
    let carry = Dropped {
        unoccupied_pairs: unoccupied,
        ..Dropped::default()
    };
    cluster(items, cluster_tol, carry)
}

/// Transition probabilities out of the single initial level `k`.
pub fn transition_column(
    di: &SpectralDecomposition,
    k: usize,
    df: &SpectralDecomposition,
    u: &UnitaryMatrix,
) -> Result<Array1<f64>> {
    check_dims(di.dim(), df.dim())?;
    check_dims(di.dim(), u.dim())?;
    let psi = di.eigenvector(k)?;
    let out = match (di.vectors(), df.vectors(), u.is_identity()) {
        (Eigenvectors::Real(vi), Eigenvectors::Real(vf), true) => {
            vf.t().dot(&vi.column(k)).mapv(|x| x * x)
        }
        _ => {
            let psi = if u.is_identity() {
                psi
            } else {
                u.entries().dot(&psi)
            };
            adjoint(&df.vectors().to_complex())
                .dot(&psi)
                .mapv(|z: C64| z.norm_sqr())
        }
    };
    Ok(out)
}

/// `P(W)` for the pure initial eigenstate `|k_i⟩` without forming the full
/// transition matrix.
pub fn eigenstate_work_distribution(
    di: &SpectralDecomposition,
    k: usize,
    df: &SpectralDecomposition,
    u: &UnitaryMatrix,
    cluster_tol: f64,
) -> Result<WorkDistribution> {
    let column = transition_column(di, k, df, u)?;
    let e0 = di.eigenvalues()[k];
    let items = column
        .iter()
        .zip(df.eigenvalues())
        .map(|(&p, &e)| Item {
            w: e - e0,
            p,
            count: 1,
        })
        .collect();
    let n = di.dim();
    let carry = Dropped {
        unoccupied_pairs: n * n - n,
        ..Dropped::default()
    };
    cluster(items, cluster_tol, carry)
}

/// `γ_max`, the largest multiplicity.
pub fn max_degeneracy(w: &WorkDistribution) -> usize {
    w.multiplicity.iter().copied().max().unwrap_or(1)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct WorkMoments {
    /// `⟨W^k⟩` for `k = 1..=max_order`.
    pub raw: Vec<f64>,
    pub variance: f64,
}

impl WorkMoments {
    pub fn mean(&self) -> f64 {
        self.raw[0]
    }
}

pub fn work_moments(w: &WorkDistribution, max_order: usize) -> Result<WorkMoments> {
    if max_order == 0 {
        return Err(invalid("max_order", "must be >= 1"));
    }
    let mut raw = vec![0.0; max_order];
    for (&x, &p) in w.support.iter().zip(&w.probs) {
        let mut power = 1.0;
        for m in raw.iter_mut() {
            power *= x;
            *m += p * power;
        }
    }
    let mean = raw[0];
    let second: f64 = w
        .support
        .iter()
        .zip(&w.probs)
        .map(|(&x, &p)| p * (x - mean) * (x - mean))
        .sum();
    Ok(WorkMoments {
        raw,
        variance: second,
    })
}

/// `tr[(U^dag H_f U - H_i) ρ]`, evaluated without any diagonalization.
///
/// This is the mean of `P(W)` only when `ρ` commutes with `H_i`; otherwise
/// the first measurement dephases `ρ` and the mean is this trace on `ρ̄`.
pub fn mean_work_direct(s: &QuenchSetup) -> Result<f64> {
    let hf = if s.unitary().is_identity() {
        s.final_hamiltonian().entries().clone()
    } else {
        let u = s.unitary().entries();
        adjoint(u).dot(s.final_hamiltonian().entries()).dot(u)
    };
    let diff = hf - s.initial_hamiltonian().entries();
    let rho = s.state().entries();
    // tr(AB) = Σ_ij A_ij B_ji
    let tr: C64 = diff
        .indexed_iter()
        .map(|((i, j), a)| a * rho[[j, i]])
        .sum();
    Ok(tr.re)
}

/// `⟨ψ|H_f - H_i|ψ⟩` for a pure state under a sudden quench.
pub fn mean_work_pure(
    hi: &HermitianOperator,
    hf: &HermitianOperator,
    psi: ArrayView1<C64>,
) -> Result<f64> {
    check_dims(hi.dim(), hf.dim())?;
    check_dims(hi.dim(), psi.len())?;
    let diff = hf.entries() - hi.entries();
    let hpsi = diff.dot(&psi);
    let norm: f64 = psi.iter().map(|z| z.norm_sqr()).sum();
    Ok(psi
        .iter()
        .zip(hpsi.iter())
        .map(|(a, b)| (a.conj() * b).re)
        .sum::<f64>()
        / norm)
}
