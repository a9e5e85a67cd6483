//! Dense Hermitian linear algebra: operators, eigendecompositions, density
//! matrices, dephasing and von Neumann entropy.
//!
//! Energies are carried with ħ = 1 in units of whatever reference frequency
//! the caller's model uses. Real symmetric operators are diagonalized with
//! `dsyevd`, general Hermitian ones with `zheevd`; products go through BLAS.

mod lapack;

use std::ops::Range;

use ndarray::{Array1, Array2, ArrayView1, Axis};

use crate::error::{invalid, Error, Result};
use crate::C64;

/// Hermiticity tolerance, relative to the largest entry modulus.
pub const HERMITICITY_RTOL: f64 = 1e-12;
/// Eigenvalues of a density matrix below this are treated as exact zeros.
pub const ENTROPY_FLOOR: f64 = 1e-14;
/// Two eigenvalues closer than this fraction of the spectral span are
/// considered degenerate.
pub const DEGENERACY_RTOL: f64 = 1e-9;

const TRACE_TOL: f64 = 1e-12;
const MIN_EIGENVALUE: f64 = -1e-10;
const UNITARITY_TOL: f64 = 1e-10;
const PHASE_TIE_RTOL: f64 = 1e-10;

pub(crate) fn adjoint(a: &Array2<C64>) -> Array2<C64> {
    a.t().mapv(|z| z.conj())
}

pub(crate) fn complexify(a: &Array2<f64>) -> Array2<C64> {
    a.mapv(|x| C64::new(x, 0.0))
}

fn max_abs(a: &Array2<C64>) -> f64 {
    a.iter().fold(0.0f64, |m, z| m.max(z.norm()))
}

fn check_square(rows: usize, cols: usize) -> Result<usize> {
    if rows != cols || rows == 0 {
        return Err(Error::NotSquare { rows, cols });
    }
    Ok(rows)
}

fn check_hermitian(a: &Array2<C64>) -> Result<()> {
    let tol = HERMITICITY_RTOL * max_abs(a);
    let n = a.nrows();
    for i in 0..n {
        for j in i..n {
            let deviation = (a[[i, j]] - a[[j, i]].conj()).norm();
            if deviation > tol {
                return Err(Error::NotHermitian {
                    row: i,
                    col: j,
                    deviation,
                });
            }
        }
    }
    Ok(())
}

fn identity_residual(a: &Array2<C64>) -> f64 {
    let prod = adjoint(a).dot(a);
    prod.indexed_iter()
        .map(|((i, j), z)| {
            let target = if i == j { 1.0 } else { 0.0 };
            (z - C64::new(target, 0.0)).norm()
        })
        .fold(0.0, f64::max)
}

/// A finite-dimensional Hamiltonian or observable.
#[derive(Debug, Clone, PartialEq)]
pub struct HermitianOperator {
    entries: Array2<C64>,
    real: bool,
}

impl HermitianOperator {
    pub fn new(entries: Array2<C64>) -> Result<Self> {
        check_square(entries.nrows(), entries.ncols())?;
        check_hermitian(&entries)?;
        let real = entries.iter().all(|z| z.im == 0.0);
        Ok(Self { entries, real })
    }

    pub fn from_real(entries: Array2<f64>) -> Result<Self> {
        Self::new(complexify(&entries))
    }

    pub fn diagonal(values: &[f64]) -> Result<Self> {
        Self::from_real(Array2::from_diag(&Array1::from(values.to_vec())))
    }

    pub fn dim(&self) -> usize {
        self.entries.nrows()
    }

    pub fn entries(&self) -> &Array2<C64> {
        &self.entries
    }

    /// True when every imaginary part is exactly zero.
    pub fn is_real(&self) -> bool {
        self.real
    }

    pub fn real_entries(&self) -> Option<Array2<f64>> {
        self.real.then(|| self.entries.mapv(|z| z.re))
    }
}

/// Eigenvector storage. Real symmetric input keeps real vectors so that
/// overlaps between two real bases stay in double-precision real BLAS.
#[derive(Debug, Clone, PartialEq)]
pub enum Eigenvectors {
    Real(Array2<f64>),
    Complex(Array2<C64>),
}

impl Eigenvectors {
    pub fn dim(&self) -> usize {
        match self {
            Eigenvectors::Real(v) => v.nrows(),
            Eigenvectors::Complex(v) => v.nrows(),
        }
    }

    pub fn to_complex(&self) -> Array2<C64> {
        match self {
            Eigenvectors::Real(v) => complexify(v),
            Eigenvectors::Complex(v) => v.clone(),
        }
    }

    pub fn column(&self, k: usize) -> Array1<C64> {
        match self {
            Eigenvectors::Real(v) => v.column(k).mapv(|x| C64::new(x, 0.0)),
            Eigenvectors::Complex(v) => v.column(k).to_owned(),
        }
    }
}

/// Ascending eigenvalues with orthonormal eigenvectors stored column-wise.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralDecomposition {
    eigenvalues: Array1<f64>,
    vectors: Eigenvectors,
}

impl SpectralDecomposition {
    /// Builds a decomposition from a caller-supplied basis, checking
    /// ordering and orthonormality.
    pub fn from_parts(eigenvalues: Array1<f64>, vectors: Array2<C64>) -> Result<Self> {
        let n = check_square(vectors.nrows(), vectors.ncols())?;
        if eigenvalues.len() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: eigenvalues.len(),
            });
        }
        if eigenvalues.windows(2).into_iter().any(|w| w[1] < w[0]) {
            return Err(invalid("eigenvalues", "must be non-decreasing"));
        }
        let deviation = identity_residual(&vectors);
        if deviation > UNITARITY_TOL {
            return Err(Error::NotUnitary { deviation });
        }
        Ok(Self {
            eigenvalues,
            vectors: Eigenvectors::Complex(vectors),
        })
    }

    pub fn dim(&self) -> usize {
        self.eigenvalues.len()
    }

    pub fn eigenvalues(&self) -> &Array1<f64> {
        &self.eigenvalues
    }

    pub fn vectors(&self) -> &Eigenvectors {
        &self.vectors
    }

    pub fn eigenvector(&self, k: usize) -> Result<Array1<C64>> {
        if k >= self.dim() {
            return Err(Error::IndexOutOfRange {
                index: k,
                dim: self.dim(),
            });
        }
        Ok(self.vectors.column(k))
    }

    /// `E_max - E_min`, or 1 for a flat spectrum.
    pub fn spectral_span(&self) -> f64 {
        let span = self.eigenvalues[self.dim() - 1] - self.eigenvalues[0];
        if span > 0.0 {
            span
        } else {
            1.0
        }
    }

    pub fn degeneracy_tolerance(&self) -> f64 {
        DEGENERACY_RTOL * self.spectral_span()
    }

    /// Index ranges of eigenvalue clusters whose neighbours lie within `tol`.
    pub fn degenerate_levels(&self, tol: f64) -> Vec<Range<usize>> {
        let mut groups = Vec::new();
        let mut start = 0;
        for k in 1..=self.dim() {
            if k == self.dim() || self.eigenvalues[k] - self.eigenvalues[k - 1] >= tol {
                groups.push(start..k);
                start = k;
            }
        }
        groups
    }

    pub fn orthonormality_residual(&self) -> f64 {
        match &self.vectors {
            Eigenvectors::Real(v) => {
                let prod = v.t().dot(v);
                prod.indexed_iter()
                    .map(|((i, j), x)| (x - if i == j { 1.0 } else { 0.0 }).abs())
                    .fold(0.0, f64::max)
            }
            Eigenvectors::Complex(v) => identity_residual(v),
        }
    }

    /// Max entry of `|V diag(E) V^dag - H|`.
    pub fn reconstruction_residual(&self, h: &HermitianOperator) -> f64 {
        let v = self.vectors.to_complex();
        let scaled = &v * &self.eigenvalues.mapv(|e| C64::new(e, 0.0)).view().insert_axis(Axis(0));
        let rebuilt = scaled.dot(&adjoint(&v));
        (&rebuilt - h.entries())
            .iter()
            .fold(0.0, |m, z| m.max(z.norm()))
    }

    /// `V diag(weights) V^dag`.
    pub(crate) fn synthesize(&self, weights: &[f64]) -> Array2<C64> {
        match &self.vectors {
            Eigenvectors::Real(v) => {
                let w = ArrayView1::from(weights);
                let scaled = v * &w.insert_axis(Axis(0));
                complexify(&scaled.dot(&v.t()))
            }
            Eigenvectors::Complex(v) => {
                let w = Array1::from_iter(weights.iter().map(|&x| C64::new(x, 0.0)));
                let scaled = v * &w.view().insert_axis(Axis(0));
                scaled.dot(&adjoint(v))
            }
        }
    }
}

fn phase_fix_real(v: &mut Array2<f64>) {
    for mut col in v.columns_mut() {
        let peak = col.iter().fold(0.0f64, |m, x| m.max(x.abs()));
        let threshold = peak * (1.0 - PHASE_TIE_RTOL);
        if let Some(&pivot) = col.iter().find(|x| x.abs() >= threshold) {
            if pivot < 0.0 {
                col.mapv_inplace(|x| -x);
            }
        }
    }
}

fn phase_fix_complex(v: &mut Array2<C64>) {
    for mut col in v.columns_mut() {
        let peak = col.iter().fold(0.0f64, |m, z| m.max(z.norm()));
        let threshold = peak * (1.0 - PHASE_TIE_RTOL);
        if let Some(&pivot) = col.iter().find(|z| z.norm() >= threshold) {
            if pivot.norm() > 0.0 {
                let phase = pivot.conj() / pivot.norm();
                col.mapv_inplace(|z| z * phase);
            }
        }
    }
}

/// Full eigendecomposition. Each eigenvector is rotated so that its entry of
/// largest modulus (lowest index on ties) is real and positive.
pub fn diagonalize(h: &HermitianOperator) -> Result<SpectralDecomposition> {
    if let Some(re) = h.real_entries() {
        let (eigenvalues, vectors) = lapack::real_symmetric(&re, true)?;
        let mut v = vectors.expect("vectors requested");
        phase_fix_real(&mut v);
        Ok(SpectralDecomposition {
            eigenvalues,
            vectors: Eigenvectors::Real(v),
        })
    } else {
        let (eigenvalues, vectors) = lapack::hermitian(h.entries(), true)?;
        let mut v = vectors.expect("vectors requested");
        phase_fix_complex(&mut v);
        Ok(SpectralDecomposition {
            eigenvalues,
            vectors: Eigenvectors::Complex(v),
        })
    }
}

/// Ascending eigenvalues without eigenvectors.
pub fn eigenvalues(h: &HermitianOperator) -> Result<Array1<f64>> {
    match h.real_entries() {
        Some(re) => Ok(lapack::real_symmetric(&re, false)?.0),
        None => Ok(lapack::hermitian(h.entries(), false)?.0),
    }
}

/// A unitary drive `U`; the identity is the sudden quench.
#[derive(Debug, Clone, PartialEq)]
pub struct UnitaryMatrix {
    entries: Array2<C64>,
    identity: bool,
}

impl UnitaryMatrix {
    pub fn new(entries: Array2<C64>) -> Result<Self> {
        let n = check_square(entries.nrows(), entries.ncols())?;
        let deviation = identity_residual(&entries);
        if deviation > UNITARITY_TOL {
            return Err(Error::NotUnitary { deviation });
        }
        let identity = entries == Array2::eye(n);
        Ok(Self { entries, identity })
    }

    pub fn identity(dim: usize) -> Self {
        Self {
            entries: Array2::eye(dim),
            identity: true,
        }
    }

    /// `exp(-i H t)` for a time-independent generator.
    pub fn evolution(generator: &SpectralDecomposition, t: f64) -> Self {
        let v = generator.vectors.to_complex();
        let phases = generator
            .eigenvalues
            .mapv(|e| C64::from_polar(1.0, -e * t));
        let scaled = &v * &phases.view().insert_axis(Axis(0));
        let entries = scaled.dot(&adjoint(&v));
        let identity = entries == Array2::eye(generator.dim());
        Self { entries, identity }
    }

    pub fn dim(&self) -> usize {
        self.entries.nrows()
    }

    pub fn entries(&self) -> &Array2<C64> {
        &self.entries
    }

    pub fn is_identity(&self) -> bool {
        self.identity
    }
}

/// A quantum state `ρ`.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    entries: Array2<C64>,
}

impl DensityMatrix {
    /// Validates Hermiticity, unit trace and positivity.
    pub fn new(entries: Array2<C64>) -> Result<Self> {
        check_square(entries.nrows(), entries.ncols())?;
        check_hermitian(&entries).map_err(|e| Error::InvalidDensityMatrix(e.to_string()))?;
        let rho = Self { entries };
        rho.validate_spectrum(&rho.eigenvalues()?)?;
        Ok(rho)
    }

    pub(crate) fn from_trusted(entries: Array2<C64>) -> Self {
        Self { entries }
    }

    /// `|ψ⟩⟨ψ|` for a normalized copy of `psi`.
    pub fn pure(psi: ArrayView1<C64>) -> Result<Self> {
        let norm = psi.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if psi.is_empty() || norm == 0.0 {
            return Err(Error::InvalidDensityMatrix("zero state vector".into()));
        }
        let n = psi.len();
        let entries =
            Array2::from_shape_fn((n, n), |(i, j)| psi[i] * psi[j].conj() / (norm * norm));
        Ok(Self { entries })
    }

    pub fn maximally_mixed(dim: usize) -> Result<Self> {
        check_square(dim, dim)?;
        Ok(Self {
            entries: Array2::eye(dim) / C64::new(dim as f64, 0.0),
        })
    }

    pub fn dim(&self) -> usize {
        self.entries.nrows()
    }

    pub fn entries(&self) -> &Array2<C64> {
        &self.entries
    }

    pub fn trace(&self) -> C64 {
        self.entries.diag().sum()
    }

    pub fn purity(&self) -> f64 {
        self.entries.iter().map(|z| z.norm_sqr()).sum()
    }

    pub fn eigenvalues(&self) -> Result<Array1<f64>> {
        if self.entries.iter().all(|z| z.im == 0.0) {
            Ok(lapack::real_symmetric(&self.entries.mapv(|z| z.re), false)?.0)
        } else {
            Ok(lapack::hermitian(&self.entries, false)?.0)
        }
    }

    fn validate_spectrum(&self, eigenvalues: &Array1<f64>) -> Result<()> {
        let tr = self.trace();
        if (tr.re - 1.0).abs() > TRACE_TOL || tr.im.abs() > TRACE_TOL {
            return Err(Error::InvalidDensityMatrix(format!(
                "trace {tr} differs from 1"
            )));
        }
        if let Some(&min) = eigenvalues.iter().min_by(|a, b| a.total_cmp(b)) {
            if min < MIN_EIGENVALUE {
                return Err(Error::InvalidDensityMatrix(format!(
                    "negative eigenvalue {min:.3e}"
                )));
            }
        }
        Ok(())
    }
}

/// Boltzmann weights `e^{-β(E_n - E_0)}/Z`. `beta = +∞` selects the ground
/// level, which must then be non-degenerate.
pub fn gibbs_populations(d: &SpectralDecomposition, beta: f64) -> Result<Array1<f64>> {
    if beta.is_nan() || beta < 0.0 {
        return Err(invalid("beta", format!("must be >= 0, got {beta}")));
    }
    let e = d.eigenvalues();
    let e0 = e[0];
    if beta.is_infinite() {
        if d.dim() > 1 {
            let gap = e[1] - e0;
            let tolerance = d.degeneracy_tolerance();
            if gap < tolerance {
                return Err(Error::DegenerateGround { gap, tolerance });
            }
        }
        let mut p = Array1::zeros(d.dim());
        p[0] = 1.0;
        return Ok(p);
    }
    let weights = e.mapv(|x| (-beta * (x - e0)).exp());
    let z = weights.sum();
    Ok(weights / z)
}

pub fn thermal_state(d: &SpectralDecomposition, beta: f64) -> Result<DensityMatrix> {
    let p = gibbs_populations(d, beta)?;
    Ok(DensityMatrix::from_trusted(
        d.synthesize(p.as_slice().expect("contiguous")),
    ))
}

pub fn eigenstate_projector(d: &SpectralDecomposition, k: usize) -> Result<DensityMatrix> {
    let psi = d.eigenvector(k)?;
    DensityMatrix::pure(psi.view())
}

/// Diagonal of `V^dag ρ V`: the populations of `ρ` in the given basis.
pub fn populations_in_basis(
    rho: &DensityMatrix,
    basis: &SpectralDecomposition,
) -> Result<Array1<f64>> {
    if rho.dim() != basis.dim() {
        return Err(Error::DimensionMismatch {
            expected: basis.dim(),
            found: rho.dim(),
        });
    }
    let v = basis.vectors().to_complex();
    let rv = rho.entries().dot(&v);
    Ok(Array1::from_iter(
        v.columns()
            .into_iter()
            .zip(rv.columns())
            .map(|(vc, rc)| vc.iter().zip(rc.iter()).map(|(a, b)| (a.conj() * b).re).sum()),
    ))
}

/// Full dephasing `Σ_m ⟨m|ρ|m⟩ |m⟩⟨m|` in the given basis.
pub fn dephase(rho: &DensityMatrix, basis: &SpectralDecomposition) -> Result<DensityMatrix> {
    let p = populations_in_basis(rho, basis)?;
    Ok(DensityMatrix::from_trusted(
        basis.synthesize(p.as_slice().expect("contiguous")),
    ))
}

/// `-Σ λ ln λ` over a spectrum, with `λ < ENTROPY_FLOOR` counted as zero.
pub fn spectrum_entropy(eigenvalues: &[f64]) -> f64 {
    let s: f64 = eigenvalues
        .iter()
        .filter(|&&l| l >= ENTROPY_FLOOR)
        .map(|&l| l * l.ln())
        .sum();
    0.0 - s
}

pub fn von_neumann_entropy(rho: &DensityMatrix) -> Result<f64> {
    let lambda = rho.eigenvalues()?;
    rho.validate_spectrum(&lambda)?;
    Ok(spectrum_entropy(lambda.as_slice().expect("contiguous")))
}

#[cfg(test)]
mod tests {
    use super::*;
    use ndarray::array;
    use std::f64::consts::PI;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    #[test]
    fn diagonal_input_is_already_diagonal() {
        let h = HermitianOperator::diagonal(&[0.0, 1.0]).unwrap();
        let d = diagonalize(&h).unwrap();
        assert_eq!(d.eigenvalues().to_vec(), vec![0.0, 1.0]);
        assert_eq!(d.vectors().to_complex(), Array2::<C64>::eye(2));
    }

    #[test]
    fn rejects_non_hermitian_and_names_entry() {
        let m = array![[c(1.0, 0.0), c(0.0, 1.0)], [c(0.0, 1.0), c(2.0, 0.0)]];
        match HermitianOperator::new(m) {
            Err(Error::NotHermitian { row, col, .. }) => assert_eq!((row, col), (0, 1)),
            other => panic!("unexpected {other:?}"),
        }
        assert!(matches!(
            HermitianOperator::new(Array2::zeros((2, 3))),
            Err(Error::NotSquare { .. })
        ));
    }

    #[test]
    fn ring_spectrum_matches_circulant_formula() {
        let n = 5;
        let mut h = Array2::<f64>::zeros((n, n));
        for i in 0..n {
            h[[i, (i + 1) % n]] = -1.0;
            h[[(i + 1) % n, i]] = -1.0;
        }
        let d = diagonalize(&HermitianOperator::from_real(h).unwrap()).unwrap();
        let mut expected: Vec<f64> = (0..n)
            .map(|k| -2.0 * (2.0 * PI * k as f64 / n as f64).cos())
            .collect();
        expected.sort_by(f64::total_cmp);
        for (a, b) in d.eigenvalues().iter().zip(&expected) {
            assert!((a - b).abs() < 1e-12, "{a} vs {b}");
        }
    }

    #[test]
    fn phase_convention_makes_peak_entry_positive() {
        let m = array![[c(1.0, 0.0), c(0.0, -0.5)], [c(0.0, 0.5), c(-1.0, 0.0)]];
        let d = diagonalize(&HermitianOperator::new(m).unwrap()).unwrap();
        for k in 0..2 {
            let v = d.eigenvector(k).unwrap();
            let peak = v
                .iter()
                .copied()
                .max_by(|a, b| a.norm().total_cmp(&b.norm()))
                .unwrap();
            assert!(peak.im.abs() < 1e-15 && peak.re > 0.0);
        }
    }

    #[test]
    fn thermal_limits() {
        let d = diagonalize(&HermitianOperator::diagonal(&[-1.0, 0.0, 2.0]).unwrap()).unwrap();
        let hot = thermal_state(&d, 0.0).unwrap();
        let mixed = DensityMatrix::maximally_mixed(3).unwrap();
        assert!((&hot.entries - &mixed.entries).iter().all(|z| z.norm() < 1e-15));
        let cold = thermal_state(&d, f64::INFINITY).unwrap();
        assert_eq!(cold.entries[[0, 0]], c(1.0, 0.0));
        assert!((cold.purity() - 1.0).abs() < 1e-15);
        assert!(thermal_state(&d, -1.0).is_err());
    }

    #[test]
    fn degenerate_ground_rejected_at_zero_temperature() {
        let d = diagonalize(&HermitianOperator::diagonal(&[0.0, 0.0, 1.0]).unwrap()).unwrap();
        assert!(matches!(
            thermal_state(&d, f64::INFINITY),
            Err(Error::DegenerateGround { .. })
        ));
        // finite temperature still fine
        let p = gibbs_populations(&d, 1e6).unwrap();
        assert!((p[0] - 0.5).abs() < 1e-15 && (p[1] - 0.5).abs() < 1e-15);
    }

    #[test]
    fn projector_and_range_check() {
        let d = diagonalize(&HermitianOperator::diagonal(&[0.0, 1.0]).unwrap()).unwrap();
        let p = eigenstate_projector(&d, 0).unwrap();
        assert_eq!(p.entries, array![[c(1.0, 0.0), c(0.0, 0.0)], [c(0.0, 0.0), c(0.0, 0.0)]]);
        assert!(matches!(
            eigenstate_projector(&d, 2),
            Err(Error::IndexOutOfRange { index: 2, dim: 2 })
        ));
    }

    #[test]
    fn dephasing_plus_state_gives_maximally_mixed() {
        let s = 1.0 / 2f64.sqrt();
        let plus = DensityMatrix::pure(array![c(s, 0.0), c(s, 0.0)].view()).unwrap();
        let comp = diagonalize(&HermitianOperator::diagonal(&[0.0, 1.0]).unwrap()).unwrap();
        let out = dephase(&plus, &comp).unwrap();
        let target = DensityMatrix::maximally_mixed(2).unwrap();
        assert!((&out.entries - &target.entries).iter().all(|z| z.norm() < 1e-15));
        assert!((von_neumann_entropy(&out).unwrap() - 2f64.ln()).abs() < 1e-14);
        assert!(von_neumann_entropy(&plus).unwrap().abs() < 1e-12);
    }

    #[test]
    fn dephasing_dimension_mismatch() {
        let rho = DensityMatrix::maximally_mixed(3).unwrap();
        let d = diagonalize(&HermitianOperator::diagonal(&[0.0, 1.0]).unwrap()).unwrap();
        assert!(matches!(dephase(&rho, &d), Err(Error::DimensionMismatch { .. })));
    }

    #[test]
    fn two_level_gibbs_entropy() {
        let rho = DensityMatrix::new(array![[c(0.982, 0.0), c(0.0, 0.0)], [c(0.0, 0.0), c(0.018, 0.0)]])
            .unwrap();
        let expected = -(0.982f64 * 0.982f64.ln() + 0.018 * 0.018f64.ln());
        assert!((von_neumann_entropy(&rho).unwrap() - expected).abs() < 1e-14);
    }

    #[test]
    fn density_matrix_validation() {
        let bad_trace = array![[c(0.6, 0.0), c(0.0, 0.0)], [c(0.0, 0.0), c(0.6, 0.0)]];
        assert!(DensityMatrix::new(bad_trace).is_err());
        let negative = array![[c(1.2, 0.0), c(0.0, 0.0)], [c(0.0, 0.0), c(-0.2, 0.0)]];
        assert!(DensityMatrix::new(negative).is_err());
        assert!(DensityMatrix::maximally_mixed(0).is_err());
    }

    #[test]
    fn unitary_checks() {
        assert!(UnitaryMatrix::new(array![[c(1.0, 0.0), c(1.0, 0.0)], [c(0.0, 0.0), c(1.0, 0.0)]])
            .is_err());
        let d = diagonalize(&HermitianOperator::diagonal(&[0.0, 1.0]).unwrap()).unwrap();
        let u = UnitaryMatrix::evolution(&d, 0.3);
        assert!(UnitaryMatrix::new(u.entries.clone()).is_ok());
        assert!(!u.is_identity());
        assert!(UnitaryMatrix::evolution(&d, 0.0).is_identity());
    }

    #[test]
    fn degenerate_level_grouping() {
        let d = diagonalize(&HermitianOperator::diagonal(&[0.0, 1.0, 1.0, 2.0]).unwrap()).unwrap();
        assert_eq!(d.degenerate_levels(d.degeneracy_tolerance()), vec![0..1, 1..3, 3..4]);
    }
}
