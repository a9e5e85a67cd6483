use work_entropy::experiments::{
    aah_transition_sweep, eigenstate_coherence_map, AahSweepConfig, StateSpec,
};
use work_entropy::infotheory::per_level_coherences;
use work_entropy::models::{aah_hamiltonian, AahParams, QuenchDirection};
use work_entropy::spectral::{diagonalize, UnitaryMatrix};
use work_entropy::tpm::transition_probabilities;

fn small(direction: QuenchDirection, delta: Vec<f64>) -> AahSweepConfig {
    AahSweepConfig {
        fib_index: 10,
        direction,
        delta,
        ..AahSweepConfig::default()
    }
}

#[test]
fn eigenstate_mean_work_is_linear_in_amplitude() {
    let cfg = small(QuenchDirection::ZeroToDelta, vec![0.7, 1.4]);
    let mut checked = 0;
    for level in 0..55 {
        let r = aah_transition_sweep(&cfg, StateSpec::Eigenstate { level }).unwrap();
        let (a, b) = (r.rows[0].moments[0], r.rows[1].moments[0]);
        if a.abs() < 1e-6 {
            continue;
        }
        assert!((b / a - 2.0).abs() <= 1e-8, "level {level}: ratio {}", b / a);
        for row in &r.rows {
            assert!((row.moments[0] - row.mean_direct).abs() <= 1e-10);
        }
        checked += 1;
    }
    assert!(checked >= 1, "no level with nonzero mean");
}

#[test]
fn ground_state_mean_vanishes_from_clean_chain() {
    let cfg = small(QuenchDirection::ZeroToDelta, vec![0.5, 2.0, 3.5]);
    let r = aah_transition_sweep(&cfg, StateSpec::Ground).unwrap();
    for row in &r.rows {
        assert!(row.moments[0].abs() <= 1e-10);
        let rep = &row.report;
        assert!(rep.h_w <= rep.h_u + 1e-10);
        assert!(rep.h_u - rep.ln_gamma_max <= rep.h_w + 1e-10);
        if rep.gamma_max == 1 {
            assert!((rep.h_w - rep.h_u).abs() <= 1e-10);
        }
    }
}

/// The scalar coherence route against dephased density matrices.
#[test]
fn coherence_map_matches_matrix_route() {
    let deltas = vec![1.0, 2.5];
    let cfg = AahSweepConfig {
        fib_index: 7,
        delta: deltas.clone(),
        ..AahSweepConfig::default()
    };
    let map = eigenstate_coherence_map(&cfg).unwrap();
    let n = map.values.nrows();
    assert_eq!(n, 13);
    let di = diagonalize(&aah_hamiltonian(&cfg.params(0.0).unwrap()).unwrap()).unwrap();
    for (k, &d) in deltas.iter().enumerate() {
        let df = diagonalize(&aah_hamiltonian(&AahParams::new(7, d, 1.0, cfg.eta).unwrap()).unwrap()).unwrap();
        let pmn = transition_probabilities(&di, &df, &UnitaryMatrix::identity(n)).unwrap();
        let scalar = per_level_coherences(&pmn).unwrap();
        for level in 0..n {
            let rho = work_entropy::spectral::eigenstate_projector(&di, level).unwrap();
            let matrix = work_entropy::infotheory::relative_entropy_of_coherence(&rho, &df).unwrap();
            assert!((map.values[[level, k]] - matrix).abs() <= 1e-10);
            assert!((scalar[level] - matrix).abs() <= 1e-10);
        }
    }
}
