#![allow(dead_code)]

use ndarray::{Array1, Array2};
use rand::Rng;
use rand_distr::StandardNormal;
use work_entropy::infotheory::{bounds_report, BoundsReport};
use work_entropy::spectral::{
    diagonalize, gibbs_populations, DensityMatrix, HermitianOperator, SpectralDecomposition,
    UnitaryMatrix,
};
use work_entropy::tpm::{
    collect_work_distribution, default_cluster_tol, uncollected_distribution, QuenchSetup,
    UncollectedDistribution, WorkDistribution,
};
use work_entropy::C64;

pub fn gaussian<R: Rng>(rng: &mut R) -> C64 {
    C64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
}

pub fn adjoint(a: &Array2<C64>) -> Array2<C64> {
    a.t().mapv(|z| z.conj())
}

fn matmul(a: &Array2<C64>, b: &Array2<C64>) -> Array2<C64> {
    let n = a.nrows();
    let m = b.ncols();
    Array2::from_shape_fn((n, m), |(i, j)| (0..a.ncols()).map(|k| a[[i, k]] * b[[k, j]]).sum())
}

/// Haar-ish unitary from modified Gram-Schmidt on a complex Gaussian matrix.
pub fn random_unitary_matrix<R: Rng>(rng: &mut R, n: usize) -> Array2<C64> {
    let mut q = Array2::from_shape_fn((n, n), |_| gaussian(rng));
    for j in 0..n {
        for k in 0..j {
            let proj: C64 = (0..n).map(|i| q[[i, k]].conj() * q[[i, j]]).sum();
            for i in 0..n {
                let v = q[[i, k]];
                q[[i, j]] -= proj * v;
            }
        }
        let norm = (0..n).map(|i| q[[i, j]].norm_sqr()).sum::<f64>().sqrt();
        for i in 0..n {
            q[[i, j]] /= norm;
        }
    }
    q
}

/// `(A + A^dag)/2`, exactly Hermitian in floating point.
pub fn hermitize(a: &Array2<C64>) -> Array2<C64> {
    let n = a.nrows();
    Array2::from_shape_fn((n, n), |(i, j)| {
        if i == j {
            C64::new(a[[i, i]].re, 0.0)
        } else {
            (a[[i, j]] + a[[j, i]].conj()) * 0.5
        }
    })
}

/// `V diag(values) V^dag`.
pub fn with_spectrum(v: &Array2<C64>, values: &[f64]) -> Array2<C64> {
    let n = values.len();
    let d = Array2::from_shape_fn((n, n), |(i, j)| {
        if i == j {
            C64::new(values[i], 0.0)
        } else {
            C64::new(0.0, 0.0)
        }
    });
    hermitize(&matmul(&matmul(v, &d), &adjoint(v)))
}

pub fn random_hermitian<R: Rng>(rng: &mut R, n: usize, real: bool) -> HermitianOperator {
    let a = Array2::from_shape_fn((n, n), |_| {
        let z = gaussian(rng);
        if real {
            C64::new(z.re, 0.0)
        } else {
            z
        }
    });
    HermitianOperator::new(hermitize(&a)).expect("hermitized")
}

/// Hermitian with small-integer eigenvalues, so Bohr frequencies collide.
pub fn integer_hermitian<R: Rng>(rng: &mut R, n: usize) -> (HermitianOperator, Array2<C64>, Vec<f64>) {
    let v = random_unitary_matrix(rng, n);
    let values: Vec<f64> = (0..n).map(|_| rng.random_range(-2..=2) as f64).collect();
    let h = HermitianOperator::new(with_spectrum(&v, &values)).expect("hermitized");
    (h, v, values)
}

/// `A A^dag / tr` with `A` of random rank.
pub fn random_mixed<R: Rng>(rng: &mut R, n: usize) -> DensityMatrix {
    let rank = rng.random_range(1..=n);
    let a = Array2::from_shape_fn((n, rank), |_| gaussian(rng));
    let rho = matmul(&a, &adjoint(&a));
    let tr: f64 = (0..n).map(|i| rho[[i, i]].re).sum();
    DensityMatrix::new(hermitize(&rho.mapv(|z| z / tr))).expect("valid state")
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StateKind {
    Eigenstate,
    Thermal,
    Mixed,
}

pub struct Case {
    pub setup: QuenchSetup,
    pub state: StateKind,
}

/// One randomized protocol: a qubit a third of the time, otherwise a random
/// dimension up to 13; random or integer spectra; sudden or unitary drive;
/// eigenstate, Gibbs or arbitrary mixed state.
pub fn random_case<R: Rng>(rng: &mut R) -> Case {
    let n = if rng.random_bool(1.0 / 3.0) {
        2
    } else {
        rng.random_range(2..=13)
    };
    let (hi, hf) = if rng.random_bool(0.3) {
        (integer_hermitian(rng, n).0, integer_hermitian(rng, n).0)
    } else {
        let real = rng.random_bool(0.5);
        (random_hermitian(rng, n, real), random_hermitian(rng, n, real))
    };
    let u = if rng.random_bool(0.4) {
        UnitaryMatrix::identity(n)
    } else {
        UnitaryMatrix::new(random_unitary_matrix(rng, n)).expect("unitary")
    };
    let di = diagonalize(&hi).expect("diagonalize");
    let (rho, state) = match rng.random_range(0..3) {
        0 => {
            let k = rng.random_range(0..n);
            let psi = di.eigenvector(k).expect("level");
            (DensityMatrix::pure(psi.view()).expect("pure"), StateKind::Eigenstate)
        }
        1 => {
            let beta = 10f64.powf(rng.random_range(-2.0..2.0));
            let p = gibbs_populations(&di, beta).expect("gibbs");
            (state_from_populations(&di, &p), StateKind::Thermal)
        }
        _ => (random_mixed(rng, n), StateKind::Mixed),
    };
    Case {
        setup: QuenchSetup::new(hi, hf, u, rho).expect("setup"),
        state,
    }
}

pub fn state_from_populations(
    di: &SpectralDecomposition,
    p: &Array1<f64>,
) -> DensityMatrix {
    let v = di.vectors().to_complex();
    let n = p.len();
    let rho = Array2::from_shape_fn((n, n), |(i, j)| {
        (0..n).map(|k| v[[i, k]] * p[k] * v[[j, k]].conj()).sum::<C64>()
    });
    DensityMatrix::new(hermitize(&rho)).expect("valid state")
}

pub struct Evaluated {
    pub table: UncollectedDistribution,
    pub work: WorkDistribution,
    pub report: BoundsReport,
}

pub fn evaluate(setup: &QuenchSetup) -> work_entropy::Result<Evaluated> {
    let di = diagonalize(setup.initial_hamiltonian())?;
    let df = diagonalize(setup.final_hamiltonian())?;
    let table = uncollected_distribution(setup)?;
    let work = collect_work_distribution(&table, default_cluster_tol(&di, &df))?;
    let report = bounds_report(&table, &work)?;
    Ok(Evaluated {
        table,
        work,
        report,
    })
}

/// Largest excess over zero of the five bound-chain inequalities, recomputed
/// from the report fields (positive means violated).
pub fn worst_bound_excess(r: &BoundsReport, pure_initial: bool) -> f64 {
    let mut worst = f64::NEG_INFINITY;
    worst = worst.max(r.h_w - r.h_u);
    worst = worst.max(r.h_u - r.ln_gamma_max - r.h_w);
    worst = worst.max(r.h_u - (2.0 * r.s_diag + r.rec_rho_bar));
    worst = worst.max(r.h_w - (r.s_diag + r.c_max));
    if pure_initial {
        worst = worst.max(r.renyi2 - r.h_u);
    }
    worst
}

pub fn plain_entropy(p: &[f64]) -> f64 {
    p.iter().filter(|&&x| x > 0.0).map(|&x| -x * x.ln()).sum()
}

/// Basis `U^dag |m_f⟩` as a decomposition, for matrix-route coherences.
pub fn rotated_final_basis(setup: &QuenchSetup) -> SpectralDecomposition {
    let df = diagonalize(setup.final_hamiltonian()).unwrap();
    let u = setup.unitary().entries();
    let udag = u.t().mapv(|z| z.conj());
    let v: Array2<C64> = udag.dot(&df.vectors().to_complex());
    SpectralDecomposition::from_parts(df.eigenvalues().clone(), v).unwrap()
}

pub fn diag_populations(setup: &QuenchSetup, di: &SpectralDecomposition) -> Vec<f64> {
    let v = di.vectors().to_complex();
    let rho = setup.state().entries();
    let n = setup.dim();
    (0..n)
        .map(|k| {
            let mut acc = C64::new(0.0, 0.0);
            for i in 0..n {
                for j in 0..n {
                    acc += v[[i, k]].conj() * rho[[i, j]] * v[[j, k]];
                }
            }
            acc.re
        })
        .collect()
}
