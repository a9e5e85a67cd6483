//! Exhaustive oracle for small systems with integer spectra: `P(W)` from
//! eigenspace projectors built from the known rotations, keyed by exact
//! integer work values.

mod common;

use std::collections::BTreeMap;

use common::{adjoint, random_unitary_matrix, with_spectrum};
use ndarray::Array2;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use work_entropy::infotheory::{bounds_report, entropy_of_work};
use work_entropy::spectral::{diagonalize, DensityMatrix, HermitianOperator, UnitaryMatrix};
use work_entropy::tpm::{
    collect_work_distribution, default_cluster_tol, max_degeneracy, uncollected_distribution,
    QuenchSetup,
};
use work_entropy::C64;

fn mul(a: &Array2<C64>, b: &Array2<C64>) -> Array2<C64> {
    let n = a.nrows();
    Array2::from_shape_fn((n, b.ncols()), |(i, j)| (0..a.ncols()).map(|k| a[[i, k]] * b[[k, j]]).sum())
}

/// Projector onto the eigenspace of `value` for `V diag(values) V^dag`.
fn projector(v: &Array2<C64>, values: &[i64], value: i64) -> Array2<C64> {
    let n = values.len();
    Array2::from_shape_fn((n, n), |(i, j)| {
        (0..n)
            .filter(|&k| values[k] == value)
            .map(|k| v[[i, k]] * v[[j, k]].conj())
            .sum()
    })
}

fn trace(a: &Array2<C64>) -> f64 {
    (0..a.nrows()).map(|i| a[[i, i]].re).sum()
}

struct Oracle {
    probs: BTreeMap<i64, f64>,
    multiplicity: BTreeMap<i64, usize>,
}

/// `ρ = Σ_a q_a Π_a / Z`, so the state is a function of `H_i` and the
/// result does not depend on the basis chosen inside degenerate levels.
fn oracle(vi: &Array2<C64>, ai: &[i64], vf: &Array2<C64>, bf: &[i64], u: &Array2<C64>, q: &BTreeMap<i64, f64>) -> Oracle {
    let distinct = |xs: &[i64]| {
        let mut d = xs.to_vec();
        d.sort();
        d.dedup();
        d
    };
    let deg = |xs: &[i64], x: i64| xs.iter().filter(|&&y| y == x).count();
    let z: f64 = ai.iter().map(|a| q[a]).sum();
    let mut probs = BTreeMap::new();
    let mut multiplicity = BTreeMap::new();
    for &a in &distinct(ai) {
        let pi_a = projector(vi, ai, a);
        let evolved = mul(&mul(u, &pi_a), &adjoint(u));
        for &b in &distinct(bf) {
            let pi_b = projector(vf, bf, b);
            let p = q[&a] / z * trace(&mul(&pi_b, &evolved));
            *probs.entry(b - a).or_insert(0.0) += p;
            *multiplicity.entry(b - a).or_insert(0) += deg(ai, a) * deg(bf, b);
        }
    }
    Oracle { probs, multiplicity }
}

fn state(vi: &Array2<C64>, ai: &[i64], q: &BTreeMap<i64, f64>) -> DensityMatrix {
    let weights: Vec<f64> = ai.iter().map(|a| q[a]).collect();
    let z: f64 = weights.iter().sum();
    let w: Vec<f64> = weights.iter().map(|x| x / z).collect();
    DensityMatrix::new(with_spectrum(vi, &w)).unwrap()
}

#[test]
fn integer_spectra_match_exhaustive_enumeration() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut saw_degenerate = false;
    for trial in 0..300 {
        let n = rng.random_range(2..=6);
        let ai: Vec<i64> = (0..n).map(|_| rng.random_range(-2..=2)).collect();
        let bf: Vec<i64> = (0..n).map(|_| rng.random_range(-2..=2)).collect();
        if ai.iter().all(|&a| a == ai[0]) && bf.iter().all(|&b| b == bf[0]) {
            continue;
        }
        let vi = random_unitary_matrix(&mut rng, n);
        let vf = random_unitary_matrix(&mut rng, n);
        let u = if trial % 2 == 0 {
            UnitaryMatrix::identity(n)
        } else {
            UnitaryMatrix::new(random_unitary_matrix(&mut rng, n)).unwrap()
        };
        let q: BTreeMap<i64, f64> = (-2..=2).map(|a| (a, rng.random_range(0.1..1.0))).collect();

        let to_f = |xs: &[i64]| xs.iter().map(|&x| x as f64).collect::<Vec<_>>();
        let hi = HermitianOperator::new(with_spectrum(&vi, &to_f(&ai))).unwrap();
        let hf = HermitianOperator::new(with_spectrum(&vf, &to_f(&bf))).unwrap();
        let expected = oracle(&vi, &ai, &vf, &bf, u.entries(), &q);
        let setup = QuenchSetup::new(hi, hf, u, state(&vi, &ai, &q)).unwrap();

        let di = diagonalize(setup.initial_hamiltonian()).unwrap();
        let df = diagonalize(setup.final_hamiltonian()).unwrap();
        let table = uncollected_distribution(&setup).unwrap();
        let w = collect_work_distribution(&table, default_cluster_tol(&di, &df)).unwrap();

        for ((&x, &p), &m) in w.support().iter().zip(w.probs()).zip(w.multiplicity()) {
            let key = x.round() as i64;
            assert!((x - key as f64).abs() < 1e-9, "trial {trial}: W = {x} not an integer");
            let want = expected.probs.get(&key).copied().unwrap_or(0.0);
            assert!((p - want).abs() <= 1e-12, "trial {trial}: P({key}) = {p}, oracle {want}");
            assert_eq!(m, expected.multiplicity[&key], "trial {trial}: multiplicity at {key}");
        }
        for (&key, &p) in &expected.probs {
            if p >= 1e-13 {
                assert!(
                    w.support().iter().any(|&x| (x - key as f64).abs() < 1e-9),
                    "trial {trial}: W = {key} with P = {p} missing"
                );
            }
        }

        let h_w: f64 = expected.probs.values().filter(|&&p| p > 0.0).map(|&p| -p * p.ln()).sum();
        assert!((entropy_of_work(&w).unwrap() - h_w).abs() <= 1e-10, "trial {trial}");

        let gamma = w
            .support()
            .iter()
            .map(|&x| expected.multiplicity[&(x.round() as i64)])
            .max()
            .unwrap();
        assert_eq!(max_degeneracy(&w), gamma);
        saw_degenerate |= gamma > 1;

        let report = bounds_report(&table, &w).unwrap();
        assert!(report.h_w <= report.h_u + 1e-10);
        assert!(report.h_u - (gamma as f64).ln() <= report.h_w + 1e-10);
    }
    assert!(saw_degenerate);
}
