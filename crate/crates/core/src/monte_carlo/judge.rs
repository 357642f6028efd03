use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::protocols::{self, ClockParams, Protocol, ProtocolSpec};
use crate::scalar::{sign_pow, Real};

use super::sampling::{mean_parity, substream, MeasurementRecord, Sampler};

/// Maximum allowed `|f_bar - (-1)^N|` for a synchronized verdict: `1 - 1/sqrt 2`.
pub fn criterion_threshold<T: Real>() -> T {
    T::one() - T::FRAC_1_SQRT_2()
}

/// Hoeffding/Chernoff lower bound `1 - 2 e^{-nu/4}` on
/// `Prob(|f_bar - <f>_Y| <= 1/sqrt 2)` for `nu` records with values in `[-1, 1]`.
pub fn chernoff_confidence<T: Real>(nu: u64) -> T {
    T::one() - T::lit(2.0) * (-T::lit(nu as f64) / T::lit(4.0)).exp()
}

/// Verdict of the synchronization criterion.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct JudgementReport<T> {
    pub f_bar: T,
    pub threshold: T,
    pub synchronized: bool,
    pub confidence_lower_bound: T,
    /// `pi / ((N+1) omega)`.
    pub accuracy_window: T,
    pub nu: u64,
    pub n: u32,
}

/// `|f_bar - (-1)^N| <= 1 - 1/sqrt 2`.
pub fn criterion_met<T: Real>(f_bar: T, n: u32) -> bool {
    (f_bar - sign_pow::<T>(i64::from(n))).abs() <= criterion_threshold::<T>()
}

fn require_singlet(spec: &ProtocolSpec) -> Result<()> {
    if spec.protocol() == Protocol::SymmetricSinglet {
        Ok(())
    } else {
        Err(Error::WrongProtocol { expected: "singlet", got: spec.protocol().name() })
    }
}

/// Applies the criterion to a symmetric-singlet run.
pub fn judge_synchronization<T: Real>(
    records: &[MeasurementRecord],
    spec: &ProtocolSpec,
    omega: T,
) -> Result<JudgementReport<T>> {
    require_singlet(spec)?;
    let f_bar = mean_parity::<T>(records)?;
    judge_mean(f_bar, records.len() as u64, spec, omega)
}

/// Criterion for an already-averaged parity over `nu` records.
pub fn judge_mean<T: Real>(f_bar: T, nu: u64, spec: &ProtocolSpec, omega: T) -> Result<JudgementReport<T>> {
    require_singlet(spec)?;
    if nu == 0 {
        return Err(Error::EmptyRecords);
    }
    Ok(JudgementReport {
        f_bar,
        threshold: criterion_threshold(),
        synchronized: criterion_met(f_bar, spec.n()),
        confidence_lower_bound: chernoff_confidence(nu),
        accuracy_window: protocols::ambiguity_window(spec, omega),
        nu,
        n: spec.n(),
    })
}

/// Empirical frequencies over repeated simulated experiments.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CoverageReport {
    pub runs: usize,
    /// Fraction of runs with `|f_bar - <f>_Y| <= 1/sqrt 2`.
    pub coverage: f64,
    /// `1 - 2 e^{-nu/4}`.
    pub bound: f64,
    /// Fraction of runs where the synchronization criterion fired.
    pub pass_rate: f64,
}

/// Runs `runs` experiments (substream `r` for run `r`) and measures how often
/// the sample mean lands within `1/sqrt 2` of the true expectation, and how
/// often the criterion fires. Any protocol may be used for the coverage
/// figure; the pass rate uses the singlet criterion's `(-1)^N` target.
pub fn chernoff_coverage(spec: &ProtocolSpec, clock: &ClockParams<f64>, runs: usize, seed: u64) -> CoverageReport {
    let dist = protocols::outcome_distribution(spec, clock);
    let truth = dist.parity_mean();
    let sampler = Sampler::new(&dist);
    let count = spec.records_per_experiment();
    let means: Vec<f64> = (0..runs)
        .into_par_iter()
        .map(|r| {
            let mut rng = substream(seed, r as u64);
            sampler.parity_sum(&mut rng, count) as f64 / count as f64
        })
        .collect();
    let covered = means.iter().filter(|&&m| (m - truth).abs() <= std::f64::consts::FRAC_1_SQRT_2).count();
    let passed = means.iter().filter(|&&m| criterion_met(m, spec.n())).count();
    CoverageReport {
        runs,
        coverage: covered as f64 / runs as f64,
        bound: chernoff_confidence(count),
        pass_rate: passed as f64 / runs as f64,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::protocols::OutcomeLabel;

    fn singlet(n: u32) -> ProtocolSpec {
        ProtocolSpec::new(Protocol::SymmetricSinglet, n, 10).unwrap()
    }

    #[test]
    fn ten_records_give_eighty_four_percent() {
        let c: f64 = chernoff_confidence(10);
        assert!((c - (1.0 - 2.0 * (-2.5f64).exp())).abs() < 1e-15);
        assert!((c - 0.8358).abs() < 5e-5);
        assert!(c < 0.84 && c > 0.835);
    }

    #[test]
    fn confidence_is_monotone_and_bounded() {
        let vals: Vec<f64> = (1..120).map(chernoff_confidence).collect();
        assert!(vals.windows(2).all(|w| w[1] > w[0]));
        let tail: Vec<f64> = (120..400).map(chernoff_confidence).collect();
        assert!(tail.windows(2).all(|w| w[1] >= w[0]));
        assert!(vals.iter().all(|&v| v > -1.0 && v < 1.0));
    }

    #[test]
    fn exact_target_is_synchronized() {
        for n in 1..6 {
            let target = if n % 2 == 0 { 1.0 } else { -1.0 };
            let r = judge_mean(target, 10, &singlet(n), 1.0).unwrap();
            assert!(r.synchronized);
            assert!((r.accuracy_window - std::f64::consts::PI / f64::from(n + 1)).abs() < 1e-15);
        }
    }

    #[test]
    fn just_outside_threshold_fails() {
        let eps = 1e-9;
        for n in 1..6u32 {
            let sign = if n % 2 == 0 { 1.0 } else { -1.0 };
            let f = sign * (std::f64::consts::FRAC_1_SQRT_2 - eps);
            assert!(!judge_mean(f, 10, &singlet(n), 1.0).unwrap().synchronized);
            let f_in = sign * (std::f64::consts::FRAC_1_SQRT_2 + eps);
            assert!(judge_mean(f_in, 10, &singlet(n), 1.0).unwrap().synchronized);
        }
        assert!(!judge_mean(0.0, 10, &singlet(4), 1.0).unwrap().synchronized);
    }

    #[test]
    fn rejects_other_protocols() {
        let ghz = ProtocolSpec::new(Protocol::Ghz, 2, 10).unwrap();
        let rec = [MeasurementRecord { outcome: OutcomeLabel::Parity(1), parity: 1 }];
        assert!(matches!(judge_synchronization(&rec, &ghz, 1.0), Err(Error::WrongProtocol { .. })));
        assert!(matches!(judge_synchronization::<f64>(&[], &singlet(2), 1.0), Err(Error::EmptyRecords)));
    }
}
