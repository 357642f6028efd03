//! Oracle-versus-closed-form comparisons, shared by the CLI and the test suites.

use crate::error::Result;
use crate::protocols::{self, ClockParams, Protocol, ProtocolSpec};
use crate::wigner::{euler_unitary, EulerAngles};

use super::{
    aggregate, build_bell_pairs, build_ghz, build_singlet_dicke, build_symmetrized_bell, class_uniformity_defect,
    evolve, measure_x_distribution, pair_marginal, StateVector,
};

/// Default pass threshold for every check.
pub const ORACLE_TOLERANCE: f64 = 1e-10;

/// Result of one check: the worst absolute deviation seen.
#[derive(Debug, Clone, PartialEq)]
pub struct CheckOutcome {
    pub name: &'static str,
    pub max_deviation: f64,
    pub tolerance: f64,
}

impl CheckOutcome {
    pub fn passed(&self) -> bool {
        self.max_deviation.is_finite() && self.max_deviation < self.tolerance
    }
}

fn protocol_state(protocol: Protocol, n: u32) -> Result<StateVector<f64>> {
    match protocol {
        Protocol::BellSinglet => build_bell_pairs(n),
        Protocol::Ghz => build_ghz(n),
        Protocol::SymmetricSinglet => build_singlet_dicke(n),
    }
}

/// X-basis distribution of the protocol state after Alice's clock reads 0 and
/// Bob's reads `offset`.
pub fn oracle_distribution(protocol: Protocol, n: u32, omega: f64, offset: f64) -> Result<Vec<f64>> {
    let state = protocol_state(protocol, n)?;
    Ok(measure_x_distribution(&evolve(&state, omega, 0.0, offset)))
}

/// Aggregated oracle class probabilities against the closed-form distribution,
/// and the oracle parity mean against the closed-form expectation. For Bell
/// every pair marginal is compared.
pub fn distribution_checks(protocol: Protocol, n: u32, omega: f64, offsets: &[f64]) -> Result<[CheckOutcome; 2]> {
    let spec = ProtocolSpec::new(protocol, n, 1)?;
    let mut class_dev: f64 = 0.0;
    let mut parity_dev: f64 = 0.0;
    for &y in offsets {
        let clock = ClockParams::new(omega, y)?;
        let closed = protocols::outcome_distribution(&spec, &clock);
        let expectation = protocols::expectation_f(&spec, &clock);
        let bits = oracle_distribution(protocol, n, omega, y)?;
        let oracle = aggregate(protocol, n, &bits);
        debug_assert_eq!(oracle.labels, closed.labels);
        for (a, b) in oracle.probs.iter().zip(&closed.probs) {
            class_dev = class_dev.max((a - b).abs());
        }
        if protocol == Protocol::BellSinglet {
            for k in 1..n {
                for (a, b) in pair_marginal(n, k, &bits).iter().zip(&closed.probs) {
                    class_dev = class_dev.max((a - b).abs());
                }
            }
        }
        parity_dev = parity_dev.max((oracle.parity_mean() - expectation).abs());
    }
    Ok([
        CheckOutcome { name: "class-distribution", max_deviation: class_dev, tolerance: ORACLE_TOLERANCE },
        CheckOutcome { name: "parity-expectation", max_deviation: parity_dev, tolerance: ORACLE_TOLERANCE },
    ])
}

/// Bitstring probabilities are spread evenly inside each outcome class (for
/// Bell: the joint law factorises over pairs).
pub fn uniformity_check(protocol: Protocol, n: u32, omega: f64, offsets: &[f64]) -> Result<CheckOutcome> {
    let mut worst: f64 = 0.0;
    for &y in offsets {
        let bits = oracle_distribution(protocol, n, omega, y)?;
        worst = worst.max(class_uniformity_defect(protocol, n, &bits));
    }
    Ok(CheckOutcome { name: "class-uniformity", max_deviation: worst, tolerance: ORACLE_TOLERANCE })
}

/// `1 - |<chi_dicke | chi_symmetrized>|`.
pub fn symmetrization_check(n: u32) -> Result<CheckOutcome> {
    let a = build_singlet_dicke::<f64>(n)?;
    let b = build_symmetrized_bell::<f64>(n)?;
    Ok(CheckOutcome {
        name: "symmetrized-identity",
        max_deviation: (1.0 - a.fidelity(&b)).abs(),
        tolerance: ORACLE_TOLERANCE,
    })
}

/// X-basis statistics of the freely evolved singlet against those of
/// `H^{(x)2N} (I (x) U(pi/2, beta, -pi/2)^{(x)N}) chi`.
pub fn euler_reduction_check(n: u32, omega: f64, offsets: &[f64]) -> Result<CheckOutcome> {
    let chi = build_singlet_dicke::<f64>(n)?;
    let nq = 2 * n as usize;
    let mut worst: f64 = 0.0;
    for &y in offsets {
        let direct = measure_x_distribution(&evolve(&chi, omega, 0.0, y));
        let beta = omega * y.abs();
        let mut reduced = chi.clone();
        reduced.apply_each(&euler_unitary(EulerAngles::free_evolution(beta)), n as usize..nq);
        reduced.hadamard_all();
        let via_euler = measure_x_distribution(&reduced);
        for (a, b) in direct.iter().zip(&via_euler) {
            worst = worst.max((a - b).abs());
        }
    }
    Ok(CheckOutcome { name: "euler-reduction", max_deviation: worst, tolerance: ORACLE_TOLERANCE })
}

/// `1 - |<chi| u^{(x)2N} |chi>|` for a fixed set of single-qubit rotations.
pub fn rotational_invariance_check(n: u32) -> Result<CheckOutcome> {
    let chi = build_singlet_dicke::<f64>(n)?;
    let mut worst: f64 = 0.0;
    for (a, b, g) in [(0.3, 1.2, -0.7), (2.1, 0.4, 3.3), (-1.0, 2.8, 0.5)] {
        let mut rotated = chi.clone();
        rotated.apply_each(&euler_unitary(EulerAngles::new(a, b, g)), 0..2 * n as usize);
        worst = worst.max((1.0 - rotated.fidelity(&chi)).abs());
    }
    Ok(CheckOutcome { name: "rotational-invariance", max_deviation: worst, tolerance: ORACLE_TOLERANCE })
}

/// Every check relevant to `protocol` at per-party size `n`.
pub fn run_all(protocol: Protocol, n: u32, omega: f64, offsets: &[f64]) -> Result<Vec<CheckOutcome>> {
    let mut out: Vec<CheckOutcome> = distribution_checks(protocol, n, omega, offsets)?.into();
    out.push(uniformity_check(protocol, n, omega, offsets)?);
    if protocol == Protocol::SymmetricSinglet {
        if n <= super::MAX_SYMMETRIZED_N {
            out.push(symmetrization_check(n)?);
        }
        out.push(euler_reduction_check(n, omega, offsets)?);
        out.push(rotational_invariance_check(n)?);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn two_qubit_singlet_passes_everything() {
        let offsets = [0.0, 0.3, -1.1, 2.5, 7.0];
        for c in run_all(Protocol::SymmetricSinglet, 2, 1.0, &offsets).unwrap() {
            assert!(c.passed(), "{c:?}");
        }
    }

    #[test]
    fn single_bell_pair_is_tight() {
        let [classes, parity] = distribution_checks(Protocol::BellSinglet, 1, 1.0, &[0.0, 0.4, 2.2]).unwrap();
        assert!(classes.max_deviation < 1e-12);
        assert!(parity.max_deviation < 1e-12);
    }

    #[test]
    fn symmetrization_at_six() {
        assert!(symmetrization_check(6).unwrap().max_deviation < 1e-10);
    }

    #[test]
    fn nan_deviation_fails() {
        let c = CheckOutcome { name: "x", max_deviation: f64::NAN, tolerance: 1.0 };
        assert!(!c.passed());
    }
}
