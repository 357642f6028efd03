//! State-vector oracle against the closed-form protocol statistics.

use clocksync::exact_oracle::checks::{
    distribution_checks, euler_reduction_check, symmetrization_check, uniformity_check,
};
use clocksync::exact_oracle::{aggregate, build_singlet_dicke, evolve, measure_x_distribution};
use clocksync::protocols::{distribution_at_beta, expectation_at_beta};
use clocksync::{Protocol, ProtocolSpec};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn random_offsets(seed: u64, count: usize) -> Vec<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count).map(|_| rng.gen_range(-8.0..8.0)).collect()
}

#[test]
fn classes_and_parity_match_for_small_n() {
    for (pi, p) in Protocol::ALL.into_iter().enumerate() {
        for n in 1..=4u32 {
            let offsets = random_offsets(100 * pi as u64 + u64::from(n), 20);
            for omega in [1.0, 2.3] {
                for c in distribution_checks(p, n, omega, &offsets).unwrap() {
                    assert!(c.max_deviation < 1e-10, "{p} n={n} {c:?}");
                }
                let u = uniformity_check(p, n, omega, &offsets).unwrap();
                assert!(u.max_deviation < 1e-12, "{p} n={n} {u:?}");
            }
        }
    }
}

#[test]
fn singlet_three_qubits_at_point_seven() {
    let bits = measure_x_distribution(&evolve(&build_singlet_dicke::<f64>(3).unwrap(), 1.0, 0.0, 0.7));
    let oracle = aggregate(Protocol::SymmetricSinglet, 3, &bits);
    let closed = distribution_at_beta(&ProtocolSpec::new(Protocol::SymmetricSinglet, 3, 1).unwrap(), 0.7);
    for (a, b) in oracle.probs.iter().zip(&closed.probs) {
        assert!((a - b).abs() < 1e-10);
    }
}

#[test]
fn singlet_two_qubits_quarter_turn_all_nine_classes() {
    let beta = std::f64::consts::FRAC_PI_2;
    let bits = measure_x_distribution(&evolve(&build_singlet_dicke::<f64>(2).unwrap(), 1.0, 0.0, beta));
    let oracle = aggregate(Protocol::SymmetricSinglet, 2, &bits);
    let spec = ProtocolSpec::new(Protocol::SymmetricSinglet, 2, 1).unwrap();
    let closed = distribution_at_beta(&spec, beta);
    assert_eq!(oracle.labels, closed.labels);
    assert_eq!(oracle.parity, closed.parity);
    for (a, b) in oracle.probs.iter().zip(&closed.probs) {
        assert!((a - b).abs() < 1e-12);
    }
    assert!((oracle.parity_mean() - expectation_at_beta(&spec, beta)).abs() < 1e-12);
}

#[test]
fn dicke_and_symmetrised_constructions_agree() {
    for n in 1..=6 {
        assert!(symmetrization_check(n).unwrap().max_deviation < 1e-10);
    }
}

#[test]
fn euler_angle_reduction_of_free_evolution() {
    for n in 1..=4 {
        let offsets = random_offsets(7 + u64::from(n), 10);
        assert!(euler_reduction_check(n, 1.3, &offsets).unwrap().max_deviation < 1e-10);
    }
}
