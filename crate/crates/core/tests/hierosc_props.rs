use kinorder_core::hierosc::quantum::{jump_rate, quadrature};
use kinorder_core::hierosc::{
    build_quantum_hamiltonian, classical_energy, decomposed_energy, evolve, interblock_energy,
    interblock_energy_direct, normal_mode_frequencies, to_hierarchical, ChainSpec, HamiltonianMode,
};
use nalgebra::DVector;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn chain(m0: f64, k0: f64, k1: f64) -> ChainSpec {
    ChainSpec {
        m0,
        k0,
        k1,
        tilde_k0: 0.05,
        n_cut: 5,
    }
}

#[test]
fn decomposition_matches_particle_energy() {
    let mut rng = ChaCha8Rng::seed_from_u64(41);
    for _ in 0..1000 {
        let spec = chain(
            rng.random_range(0.1..5.0),
            rng.random_range(0.1..5.0),
            rng.random_range(0.1..5.0),
        );
        let x: Vec<f64> = (0..4).map(|_| rng.random_range(-2.0..2.0)).collect();
        let mut v: Vec<f64> = (0..4).map(|_| rng.random_range(-2.0..2.0)).collect();
        let mean = v.iter().sum::<f64>() / 4.0;
        v.iter_mut().for_each(|u| *u -= mean);
        v[3] = -(v[0] + v[1] + v[2]);
        let direct = classical_energy(&spec, &x, &v).unwrap();
        let split = decomposed_energy(
            &spec,
            &to_hierarchical(&x).unwrap(),
            &to_hierarchical(&v).unwrap(),
        )
        .unwrap();
        assert!(
            (direct - split).abs() <= 1e-12 * direct.abs().max(1.0),
            "{direct} vs {split}"
        );

        let h = to_hierarchical(&x).unwrap();
        let a = interblock_energy(&spec, &h).unwrap();
        let b = interblock_energy_direct(&spec, &x).unwrap();
        assert!((a - b).abs() <= 1e-12 * a.abs().max(1.0));
    }
}

#[test]
fn moving_centre_of_mass_is_rejected() {
    let spec = chain(1.0, 1.0, 1.0);
    let x = to_hierarchical(&[0.0, 0.1, 0.2, 0.3]).unwrap();
    let v = to_hierarchical(&[1.0, 1.0, 1.0, 1.0]).unwrap();
    assert!(decomposed_energy(&spec, &x, &v).is_err());
}

#[test]
fn normal_modes_are_the_two_scales() {
    let mut rng = ChaCha8Rng::seed_from_u64(42);
    for _ in 0..200 {
        let spec = chain(
            rng.random_range(0.1..5.0),
            rng.random_range(0.1..5.0),
            rng.random_range(0.1..5.0),
        );
        let f = normal_mode_frequencies(&spec);
        assert!(f[0].abs() < 1e-7);
        let mut expected = [
            spec.coarse_frequency(),
            spec.fine_frequency(),
            spec.fine_frequency(),
        ];
        expected.sort_by(f64::total_cmp);
        for (got, want) in f[1..].iter().zip(expected) {
            assert!((got - want).abs() <= 1e-9 * want, "{got} vs {want}");
        }
    }
}

#[test]
fn mean_square_size_is_n_plus_half() {
    for n_cut in [2, 5, 12, 30] {
        let xi = quadrature(n_cut);
        let sq = &xi * &xi;
        for n in 0..=n_cut - 2 {
            assert!((sq[(n, n)] - (n as f64 + 0.5)).abs() <= 1e-12);
        }
    }
}

fn superposition(model: &kinorder_core::hierosc::QuantumModel) -> DVector<Complex64> {
    let a = model.fock_state(2, 0, 0).unwrap();
    let b = model.fock_state(1, 1, 0).unwrap();
    let c = model.fock_state(0, 1, 1).unwrap();
    let psi = a * Complex64::new(0.6, 0.0)
        + b * Complex64::new(0.0, 0.48)
        + c * Complex64::new(0.64, 0.0);
    let norm = psi.norm();
    psi / Complex64::new(norm, 0.0)
}

#[test]
fn hermitian_mode_conserves_norm_and_quanta() {
    let spec = ChainSpec {
        m0: 1.0,
        k0: 1.0,
        k1: 0.25,
        tilde_k0: 0.3,
        n_cut: 6,
    };
    let model = build_quantum_hamiltonian(&spec, HamiltonianMode::Hermitian).unwrap();
    let psi = superposition(&model);
    let times: Vec<f64> = (0..400).map(|k| k as f64 * 0.25).collect();
    let samples = evolve(&model, &psi, &times, 1, 0).unwrap();
    let n0 = samples[0].total_quanta();
    let mut moved: f64 = 0.0;
    for s in &samples {
        assert!((s.norm - 1.0).abs() < 1e-9);
        assert!((s.total_quanta() - n0).abs() < 1e-10);
        assert!((s.energy - samples[0].energy).abs() < 1e-9);
        moved = moved.max((s.occ_a - samples[0].occ_a).abs());
    }
    assert!(moved > 1e-3, "coupling never moved a quantum");
}

#[test]
fn full_mode_conserves_energy_not_quanta() {
    let spec = ChainSpec {
        m0: 1.0,
        k0: 1.0,
        k1: 0.25,
        tilde_k0: 0.05,
        n_cut: 8,
    };
    let model = build_quantum_hamiltonian(&spec, HamiltonianMode::Full).unwrap();
    let psi = model.fock_state(1, 0, 0).unwrap();
    let times: Vec<f64> = (0..100).map(|k| k as f64 * 0.3).collect();
    let samples = evolve(&model, &psi, &times, 1, 0).unwrap();
    let drift = samples
        .iter()
        .map(|s| (s.total_quanta() - 1.0).abs())
        .fold(0.0, f64::max);
    assert!(drift > 1e-6);
    for s in &samples {
        assert!((s.norm - 1.0).abs() < 1e-9);
        assert!((s.energy - samples[0].energy).abs() < 1e-9);
    }
}

#[test]
fn scale_ordered_mode_drains_the_coarse_mode() {
    let spec = ChainSpec {
        m0: 1.0,
        k0: 1.0,
        k1: 0.25,
        tilde_k0: 0.3,
        n_cut: 5,
    };
    let model = build_quantum_hamiltonian(&spec, HamiltonianMode::ScaleOrdered).unwrap();
    let psi = superposition(&model);
    let gamma = jump_rate(&spec);
    let times: Vec<f64> = (0..60).map(|k| k as f64 * 0.1 / gamma).collect();
    let samples = evolve(&model, &psi, &times, 1000, 7).unwrap();
    for w in samples.windows(2) {
        assert!(w[1].occ_a <= w[0].occ_a + 1e-12);
        assert!(w[1].occ_0 + w[1].occ_1 >= w[0].occ_0 + w[0].occ_1 - 1e-12);
    }
    let last = samples.last().unwrap();
    assert!(last.occ_a < 0.2 * samples[0].occ_a);
    for s in &samples {
        assert!((s.total_quanta() - samples[0].total_quanta()).abs() < 1e-9);
        // Mean of 1000 trajectories; per-trajectory spread is below one
        // jump's worth of energy.
        let shift = spec.fine_frequency() - spec.coarse_frequency();
        assert!(
            (s.energy + s.environment - samples[0].energy).abs() < 4.0 * shift / 1000f64.sqrt()
        );
    }
}

#[test]
fn trajectories_are_reproducible() {
    let spec = ChainSpec {
        m0: 1.0,
        k0: 1.0,
        k1: 0.25,
        tilde_k0: 0.3,
        n_cut: 4,
    };
    let model = build_quantum_hamiltonian(&spec, HamiltonianMode::ScaleOrdered).unwrap();
    let psi = model.fock_state(1, 0, 0).unwrap();
    let times = [0.0, 1.0, 5.0, 20.0];
    assert_eq!(
        evolve(&model, &psi, &times, 50, 3).unwrap(),
        evolve(&model, &psi, &times, 50, 3).unwrap()
    );
}
