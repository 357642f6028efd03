use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::protocols::{self, ClockParams, Protocol, ProtocolSpec};
use crate::scalar::Real;

use super::estimate::{estimate_with, SingletInverter};
use super::sampling::{substream, Sampler};

/// Minimum number of trials accepted by [`rmse_study`].
pub const MIN_TRIALS: usize = 50;

/// Root-mean-square error of the `|Y|` estimator against the Cramer-Rao bound.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RmseReport<T> {
    pub rmse: T,
    pub crb: T,
    pub ratio: T,
    pub trials: usize,
}

/// Repeats the experiment `trials` times, trial `i` on substream `i` of
/// `seed`, and reports `sqrt(mean((Y_est - |Y|)^2))`.
pub fn rmse_study<T: Real>(
    spec: &ProtocolSpec,
    clock: &ClockParams<T>,
    trials: usize,
    seed: u64,
) -> Result<RmseReport<T>> {
    rmse_study_streams(spec, clock, trials, seed, 0)
}

/// As [`rmse_study`] with trial `i` on substream `stream_base + i`.
pub fn rmse_study_streams<T: Real>(
    spec: &ProtocolSpec,
    clock: &ClockParams<T>,
    trials: usize,
    seed: u64,
    stream_base: u64,
) -> Result<RmseReport<T>> {
    if trials < MIN_TRIALS {
        return Err(Error::TooFewTrials { got: trials, min: MIN_TRIALS });
    }
    let omega = clock.omega();
    let window = protocols::ambiguity_window(spec, omega);
    let truth = clock.offset().abs();
    if truth > window {
        return Err(Error::OutsideWindow { abs_offset: truth.to_f64_lossy(), window: window.to_f64_lossy() });
    }
    let inverter = match spec.protocol() {
        Protocol::SymmetricSinglet => Some(SingletInverter::new(spec.n())?),
        _ => None,
    };
    let sampler = Sampler::new(&protocols::outcome_distribution(spec, clock));
    let count = spec.records_per_experiment();
    let squared: Vec<Result<T>> = (0..trials)
        .into_par_iter()
        .map(|i| {
            let mut rng = substream(seed, stream_base + i as u64);
            let f_bar = T::int(sampler.parity_sum(&mut rng, count)) / T::lit(count as f64);
            let est = estimate_with(f_bar, spec, omega, inverter.as_ref())?;
            let err = est.y_abs_est - truth;
            Ok(err * err)
        })
        .collect();
    // fixed summation order keeps the result independent of scheduling
    let mut total = T::zero();
    for s in squared {
        total = total + s?;
    }
    let rmse = (total / T::int(trials as i64)).sqrt();
    let crb = protocols::cramer_rao_bound(spec, omega);
    Ok(RmseReport { rmse, crb, ratio: rmse / crb, trials })
}

/// Least-squares slope of `ln y` against `ln x`.
pub fn log_log_slope(points: &[(f64, f64)]) -> Result<f64> {
    if points.len() < 3 {
        return Err(Error::TooFewPoints { got: points.len(), min: 3 });
    }
    let logs: Vec<(f64, f64)> = points.iter().map(|&(x, y)| (x.ln(), y.ln())).collect();
    let k = logs.len() as f64;
    let mx = logs.iter().map(|p| p.0).sum::<f64>() / k;
    let my = logs.iter().map(|p| p.1).sum::<f64>() / k;
    let sxy: f64 = logs.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = logs.iter().map(|p| (p.0 - mx).powi(2)).sum();
    Ok(sxy / sxx)
}

/// One point of a scaling sweep.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScalingRow {
    pub n: u32,
    /// Records per experiment (`N nu` for Bell).
    pub records: u64,
    pub offset: f64,
    pub rmse: f64,
    pub crb: f64,
    pub ratio: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScalingReport {
    pub protocol: Protocol,
    pub rows: Vec<ScalingRow>,
    /// Fitted slope of `ln rmse` against `ln N`.
    pub slope: f64,
}

impl ScalingReport {
    /// Heisenberg scaling (-1) for GHZ and singlet, standard quantum limit
    /// (-1/2) for Bell pairs.
    pub fn expected_slope(protocol: Protocol) -> f64 {
        match protocol {
            Protocol::BellSinglet => -0.5,
            _ => -1.0,
        }
    }

    /// Accepted deviation of the fitted slope from [`Self::expected_slope`].
    pub fn slope_tolerance(protocol: Protocol) -> f64 {
        match protocol {
            Protocol::BellSinglet => 0.1,
            _ => 0.15,
        }
    }

    pub fn within_tolerance(&self) -> bool {
        (self.slope - Self::expected_slope(self.protocol)).abs() <= Self::slope_tolerance(self.protocol)
    }
}

/// RMSE against `N` at a fixed fraction of each `N`'s ambiguity window.
/// Point `j` uses substreams starting at `j << 32`.
pub fn scaling_study(
    protocol: Protocol,
    n_list: &[u32],
    nu: u64,
    omega: f64,
    window_fraction: f64,
    trials: usize,
    seed: u64,
) -> Result<ScalingReport> {
    if n_list.len() < 3 {
        return Err(Error::TooFewPoints { got: n_list.len(), min: 3 });
    }
    let mut rows = Vec::with_capacity(n_list.len());
    for (j, &n) in n_list.iter().enumerate() {
        let spec = ProtocolSpec::new(protocol, n, nu)?;
        let offset = window_fraction * protocols::ambiguity_window(&spec, omega);
        let clock = ClockParams::new(omega, offset)?;
        let r = rmse_study_streams(&spec, &clock, trials, seed, (j as u64) << 32)?;
        rows.push(ScalingRow {
            n,
            records: spec.records_per_experiment(),
            offset,
            rmse: r.rmse,
            crb: r.crb,
            ratio: r.ratio,
        });
    }
    let points: Vec<(f64, f64)> = rows.iter().map(|r| (f64::from(r.n), r.rmse)).collect();
    Ok(ScalingReport { protocol, slope: log_log_slope(&points)?, rows })
}
