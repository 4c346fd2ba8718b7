//! Library results against the brute-force reference in `common::oracle`.

mod common;

use common::oracle::{self, Reference};
use mixspin::entanglement::log_negativity;
use mixspin::exact::{diagonalize, direct_excited_pair_dm, low_energy_spectrum, spin_gap, LanczosOptions, ThermalSpec};
use mixspin::{ChainSpec, Pair};

const PAIRS: [Pair; 5] = [
    Pair { i: 1, j: 2 },
    Pair { i: 2, j: 3 },
    Pair { i: 3, j: 4 },
    Pair { i: 4, j: 5 },
    Pair { i: 3, j: 6 },
];

fn thermal(beta: Option<f64>) -> ThermalSpec {
    beta.map(|b| ThermalSpec::new(b).unwrap()).unwrap_or_else(ThermalSpec::ground)
}

#[test]
fn spectra_match() {
    for (n, alpha) in [(4, 1.0), (4, 0.0), (8, 0.5)] {
        let reference = oracle::solve(n, alpha);
        let lib = diagonalize(&ChainSpec::new(n, alpha).unwrap()).unwrap().eigenvalues();
        assert_eq!(lib.len(), reference.energies.len());
        for (a, b) in lib.iter().zip(&reference.energies) {
            assert!((a - b).abs() < 1e-9, "n={n} alpha={alpha}: {a} vs {b}");
        }
    }
}

fn check_pairs(n: usize, alpha: f64, reference: &Reference, beta: Option<f64>) {
    let spec = ChainSpec::new(n, alpha).unwrap();
    let lib = diagonalize(&spec).unwrap();
    let t = thermal(beta);
    let rho = reference.thermal_dm(beta);
    let e = lib.thermal_energy(t).unwrap();
    assert!((e - reference.energy(beta)).abs() < 1e-9);
    for pair in PAIRS.iter().filter(|p| p.j <= n) {
        let (dm, _) = lib.thermal_pair_dm(t, *pair).unwrap();
        let expected = oracle::partial_trace(&rho, n, pair.i, pair.j);
        let (da, db) = dm.dims();
        assert!(oracle::max_abs_diff(&dm.matrix, &expected) < 1e-10, "{pair:?} beta={beta:?}");
        let c = lib.thermal_correlator(t, *pair).unwrap().value;
        assert!((c - oracle::exchange(&expected, da, db)).abs() < 1e-10);
        let neg = log_negativity(&dm).unwrap().value;
        assert!((neg - oracle::log_negativity(&expected, da, db)).abs() < 1e-10, "{pair:?}");
    }
}

#[test]
fn reduced_states_match_n4() {
    let reference = oracle::solve(4, 0.8);
    for beta in [Some(0.5), Some(4.0), None] {
        check_pairs(4, 0.8, &reference, beta);
    }
}

#[test]
fn reduced_states_match_n8() {
    for alpha in [0.5, 0.768] {
        let reference = oracle::solve(8, alpha);
        for beta in [Some(4.0), Some(16.0), None] {
            check_pairs(8, alpha, &reference, beta);
        }
    }
}

#[test]
fn lanczos_ground_and_gap_match() {
    let reference = oracle::solve(8, 1.0);
    let spec = ChainSpec::new(8, 1.0).unwrap();
    let low = low_energy_spectrum(&spec, 2, 2, &LanczosOptions::default()).unwrap();
    assert!((low.ground_energy() - reference.energies[0]).abs() < 1e-9);
    let excited = reference.level(1);
    let gap = spin_gap(&spec).unwrap();
    assert!((gap - (reference.energies[excited[0]] - reference.energies[0])).abs() < 1e-8);
    let rho = reference.thermal_dm(None);
    let (dm, _) = low.thermal_pair_dm(ThermalSpec::ground(), Pair::new(2, 3)).unwrap();
    assert!(oracle::max_abs_diff(&dm.matrix, &oracle::partial_trace(&rho, 8, 2, 3)) < 1e-8);
}

#[test]
fn excited_multiplet_matches() {
    let reference = oracle::solve(8, 0.5);
    let first = reference.level(1);
    assert_eq!(first.len(), 3, "first excitation is a triplet");
    let rho = reference.mixture_dm(&first);
    let spec = ChainSpec::new(8, 0.5).unwrap();
    for pair in [Pair::new(1, 2), Pair::new(2, 3)] {
        let lib = direct_excited_pair_dm(&spec, pair).unwrap();
        let expected = oracle::partial_trace(&rho, 8, pair.i, pair.j);
        assert!(oracle::max_abs_diff(&lib.dm.matrix, &expected) < 1e-8);
        assert!((lib.energy - reference.energies[first[0]]).abs() < 1e-9);
    }
}

#[test]
fn oracle_sanity() {
    // decoupled dimers at alpha = 0: E = -3/4 - 2 per cell
    let r = oracle::solve(4, 0.0);
    assert!((r.energies[0] + 2.75).abs() < 1e-12);
    let h = oracle::hamiltonian(4, 0.3);
    assert!((&h - h.transpose()).amax() == 0.0);
    assert!(h.trace().abs() < 1e-12);
    let v = oracle::unit(h.nrows(), 0);
    // |↑,↑,+1,+1⟩ is the fully polarized state: E = ¼ + ½α + 1 + ½α
    assert!(((&h * &v)[0] - (1.25 + 0.3)).abs() < 1e-12);
}
