//! One function per subcommand. Each validates its whole configuration, then
//! computes, and returns a finished [`Document`].

use clocksync::exact_oracle::{self, checks};
use clocksync::monte_carlo::{
    estimate_offset, fisher_information_numeric, judge_synchronization, mean_parity, rmse_study, sample_records,
    scaling_study, ScalingReport, MIN_TRIALS,
};
use clocksync::protocols::{
    ambiguity_window, cramer_rao_bound, expectation_at_beta, expectation_f, fisher_information_closed,
    outcome_distribution,
};
use clocksync::{ClockParams, Error, Protocol, ProtocolSpec};

use crate::config::RunConfig;
use crate::document::{Document, Value};
use crate::CliError;

/// Upper limit on records held in memory by `simulate` and `judge`.
pub const MAX_SAMPLED_RECORDS: u64 = 100_000_000;

/// Offsets tried by `oracle-check` besides `--y`.
const ORACLE_EXTRA_OFFSETS: usize = 19;

/// A computed document and whether it reports a failed check.
#[derive(Debug, Clone, PartialEq)]
pub struct Outcome {
    pub document: Document,
    pub check_failed: bool,
}

impl From<Document> for Outcome {
    fn from(document: Document) -> Self {
        Outcome { document, check_failed: false }
    }
}

fn spec(cfg: &RunConfig) -> Result<ProtocolSpec, CliError> {
    Ok(ProtocolSpec::new(cfg.protocol, cfg.n, cfg.nu)?)
}

fn clock(cfg: &RunConfig) -> Result<ClockParams<f64>, CliError> {
    Ok(ClockParams::new(cfg.omega, cfg.y)?)
}

fn sampled_spec(cfg: &RunConfig) -> Result<ProtocolSpec, CliError> {
    let spec = spec(cfg)?;
    if spec.records_per_experiment() > MAX_SAMPLED_RECORDS {
        return Err(CliError::Input(format!(
            "{} records per experiment exceeds the limit of {MAX_SAMPLED_RECORDS}",
            spec.records_per_experiment()
        )));
    }
    Ok(spec)
}

fn header(doc: &mut Document, spec: &ProtocolSpec) {
    doc.field("protocol", spec.protocol().name()).field("n", spec.n());
}

pub fn dist(cfg: &RunConfig) -> Result<Outcome, CliError> {
    let spec = spec(cfg)?;
    let clock = clock(cfg)?;
    let dist = outcome_distribution(&spec, &clock);
    let mut entries: Vec<_> = dist.iter().collect();
    entries.sort_by_key(|e| e.0);
    let total: f64 = entries.iter().map(|e| e.1).sum();

    let mut doc = Document::new("dist");
    header(&mut doc, &spec);
    doc.field("omega", cfg.omega)
        .field("y", cfg.y)
        .field("beta", clock.beta())
        .field("expectation", expectation_f(&spec, &clock))
        .field("prob_total", total);
    doc.columns = vec!["label", "prob", "parity"];
    doc.rows = entries.into_iter().map(|(label, p, g)| vec![label.to_string().into(), p.into(), g.into()]).collect();
    Ok(doc.into())
}

/// `beta_min + i (beta_max - beta_min) / (steps - 1)`, with the last point
/// pinned to `beta_max`.
pub fn beta_grid(beta_min: f64, beta_max: f64, steps: usize) -> Vec<f64> {
    let step = (beta_max - beta_min) / (steps - 1) as f64;
    (0..steps).map(|i| if i + 1 == steps { beta_max } else { beta_min + i as f64 * step }).collect()
}

pub fn sweep(cfg: &RunConfig) -> Result<Outcome, CliError> {
    if cfg.steps < 2 {
        return Err(CliError::Input(format!("--steps must be at least 2, got {}", cfg.steps)));
    }
    if !(cfg.beta_min.is_finite() && cfg.beta_max.is_finite()) || cfg.beta_max <= cfg.beta_min {
        return Err(CliError::Input(format!(
            "beta range [{}, {}] is degenerate; need finite beta_min < beta_max",
            cfg.beta_min, cfg.beta_max
        )));
    }
    let n_list = cfg.n_list.clone().unwrap_or_else(|| vec![cfg.n]);
    if n_list.is_empty() {
        return Err(CliError::Input("--n-list is empty".into()));
    }
    let specs = n_list.iter().map(|&n| ProtocolSpec::new(cfg.protocol, n, cfg.nu)).collect::<Result<Vec<_>, _>>()?;
    let grid = beta_grid(cfg.beta_min, cfg.beta_max, cfg.steps);

    let mut doc = Document::new("sweep");
    doc.field("protocol", cfg.protocol.name())
        .field("beta_min", cfg.beta_min)
        .field("beta_max", cfg.beta_max)
        .field("steps", cfg.steps);
    doc.columns = vec!["n", "beta", "f"];
    for spec in &specs {
        for &beta in &grid {
            doc.rows.push(vec![spec.n().into(), beta.into(), expectation_at_beta(spec, beta).into()]);
        }
    }
    Ok(doc.into())
}

pub fn fisher(cfg: &RunConfig) -> Result<Outcome, CliError> {
    let spec = spec(cfg)?;
    let clock = clock(cfg)?;
    let closed = fisher_information_closed(&spec, cfg.omega);
    let numeric = fisher_information_numeric(&spec, &clock)?;

    let mut doc = Document::new("fisher");
    header(&mut doc, &spec);
    doc.field("nu", spec.nu())
        .field("records", spec.records_per_experiment())
        .field("omega", cfg.omega)
        .field("y", cfg.y)
        .field("beta", clock.beta())
        .field("fisher_closed", closed)
        .field("fisher_numeric", numeric.value)
        .field("relative_difference", ((numeric.value - closed) / closed).abs())
        .field("skipped_classes", numeric.skipped_classes)
        .field("crb", cramer_rao_bound(&spec, cfg.omega))
        .field("window", ambiguity_window(&spec, cfg.omega));
    Ok(doc.into())
}

pub fn simulate(cfg: &RunConfig) -> Result<Outcome, CliError> {
    let spec = sampled_spec(cfg)?;
    let clock = clock(cfg)?;
    if cfg.trials < MIN_TRIALS {
        return Err(Error::TooFewTrials { got: cfg.trials, min: MIN_TRIALS }.into());
    }
    let window = ambiguity_window(&spec, cfg.omega);
    let records = sample_records(&spec, &clock, cfg.seed);
    let f_bar: f64 = mean_parity(&records)?;
    let est = estimate_offset(f_bar, &spec, cfg.omega)?;
    // the RMSE study is only meaningful where the estimator can be right
    let study = if cfg.y.abs() <= window { Some(rmse_study(&spec, &clock, cfg.trials, cfg.seed)?) } else { None };

    let mut doc = Document::new("simulate");
    header(&mut doc, &spec);
    doc.field("nu", spec.nu())
        .field("records", spec.records_per_experiment())
        .field("omega", cfg.omega)
        .field("y", cfg.y)
        .field("seed", cfg.seed)
        .field("f_bar", est.f_bar)
        .field("y_abs_est", est.y_abs_est)
        .field("abs_error", (est.y_abs_est - cfg.y.abs()).abs())
        .field("fisher", est.fisher)
        .field("crb", est.crb)
        .field("window", window)
        .field("in_window", est.in_window)
        .field("clamped", est.clamped)
        .field("trials", cfg.trials)
        .field("rmse", study.map_or(Value::Null, |s| s.rmse.into()))
        .field("rmse_crb_ratio", study.map_or(Value::Null, |s| s.ratio.into()));
    Ok(doc.into())
}

pub fn judge(cfg: &RunConfig) -> Result<Outcome, CliError> {
    if cfg.protocol != Protocol::SymmetricSinglet {
        return Err(Error::WrongProtocol { expected: "singlet", got: cfg.protocol.name() }.into());
    }
    let spec = sampled_spec(cfg)?;
    let clock = clock(cfg)?;
    let records = sample_records(&spec, &clock, cfg.seed);
    let report = judge_synchronization(&records, &spec, cfg.omega)?;

    let mut doc = Document::new("judge");
    header(&mut doc, &spec);
    doc.field("nu", report.nu)
        .field("omega", cfg.omega)
        .field("y", cfg.y)
        .field("seed", cfg.seed)
        .field("f_bar", report.f_bar)
        .field("threshold", report.threshold)
        .field("synchronized", report.synchronized)
        .field("confidence_lower_bound", report.confidence_lower_bound)
        .field("accuracy_window", report.accuracy_window);
    Ok(doc.into())
}

pub fn scaling(cfg: &RunConfig) -> Result<Outcome, CliError> {
    let n_list = cfg.n_list.clone().unwrap_or_else(|| vec![2, 4, 8, 16]);
    if n_list.len() < 3 {
        return Err(Error::TooFewPoints { got: n_list.len(), min: 3 }.into());
    }
    for (i, &n) in n_list.iter().enumerate() {
        ProtocolSpec::new(cfg.protocol, n, cfg.nu)?;
        if n_list[..i].contains(&n) {
            return Err(CliError::Input(format!("--n-list repeats N = {n}; the slope fit needs distinct values")));
        }
    }
    if cfg.trials < MIN_TRIALS {
        return Err(Error::TooFewTrials { got: cfg.trials, min: MIN_TRIALS }.into());
    }
    if !(cfg.window_fraction > 0.0 && cfg.window_fraction <= 1.0) {
        return Err(CliError::Input(format!("--window-fraction must lie in (0, 1], got {}", cfg.window_fraction)));
    }
    if !(cfg.omega.is_finite() && cfg.omega > 0.0) {
        return Err(Error::InvalidOmega(cfg.omega).into());
    }
    let report = scaling_study(cfg.protocol, &n_list, cfg.nu, cfg.omega, cfg.window_fraction, cfg.trials, cfg.seed)?;

    let mut doc = Document::new("scaling");
    doc.field("protocol", cfg.protocol.name())
        .field("nu", cfg.nu)
        .field("omega", cfg.omega)
        .field("trials", cfg.trials)
        .field("seed", cfg.seed)
        .field("window_fraction", cfg.window_fraction)
        .field("fit_slope", report.slope)
        .field("expected_slope", ScalingReport::expected_slope(cfg.protocol))
        .field("slope_tolerance", ScalingReport::slope_tolerance(cfg.protocol))
        .field("within_tolerance", report.within_tolerance());
    doc.columns = vec!["n", "records", "offset", "rmse", "crb", "ratio"];
    doc.rows = report
        .rows
        .iter()
        .map(|r| vec![r.n.into(), r.records.into(), r.offset.into(), r.rmse.into(), r.crb.into(), r.ratio.into()])
        .collect();
    Ok(Outcome { document: doc, check_failed: !report.within_tolerance() })
}

/// Largest `N` the state-vector oracle accepts for `protocol`.
pub fn oracle_cap(protocol: Protocol) -> u32 {
    match protocol {
        Protocol::BellSinglet | Protocol::Ghz => exact_oracle::MAX_PAIRS_N,
        Protocol::SymmetricSinglet => exact_oracle::MAX_DICKE_N,
    }
}

/// `y` followed by a fixed low-discrepancy set covering `|Y| <= 2 pi / omega`.
pub fn oracle_offsets(y: f64, omega: f64) -> Vec<f64> {
    const GOLDEN: f64 = 0.618_033_988_749_894_9;
    let span = std::f64::consts::TAU / omega;
    std::iter::once(y)
        .chain((1..=ORACLE_EXTRA_OFFSETS).map(|k| ((k as f64 * GOLDEN).fract() * 2.0 - 1.0) * span))
        .collect()
}

pub fn oracle_check(cfg: &RunConfig) -> Result<Outcome, CliError> {
    let spec = spec(cfg)?;
    clock(cfg)?;
    let cap = oracle_cap(cfg.protocol);
    if cfg.n > cap {
        return Err(Error::QubitsOutOfRange { got: cfg.n, max: cap }.into());
    }
    let offsets = oracle_offsets(cfg.y, cfg.omega);
    let results = checks::run_all(cfg.protocol, cfg.n, cfg.omega, &offsets)?;
    let all_passed = results.iter().all(checks::CheckOutcome::passed);

    let mut doc = Document::new("oracle-check");
    header(&mut doc, &spec);
    doc.field("omega", cfg.omega).field("offsets", offsets.len()).field("all_passed", all_passed);
    doc.columns = vec!["check", "max_deviation", "tolerance", "passed"];
    doc.rows = results
        .iter()
        .map(|c| vec![c.name.into(), c.max_deviation.into(), c.tolerance.into(), c.passed().into()])
        .collect();
    Ok(Outcome { document: doc, check_failed: !all_passed })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::{Flags, RunConfig};

    fn cfg(f: Flags) -> RunConfig {
        RunConfig::from_flags(f)
    }

    #[test]
    fn grid_hits_both_ends() {
        let g = beta_grid(0.0, std::f64::consts::PI, 601);
        assert_eq!(g[0], 0.0);
        assert_eq!(g[600], std::f64::consts::PI);
        assert_eq!(g.len(), 601);
    }

    #[test]
    fn bell_dist_at_zero() {
        let out = dist(&cfg(Flags { protocol: Some(Protocol::BellSinglet), ..Flags::default() })).unwrap();
        let halves = out.document.rows.iter().filter(|r| r[1] == Value::Float(0.5)).count();
        assert_eq!(halves, 2);
        assert_eq!(out.document.get("prob_total"), Some(&Value::Float(1.0)));
    }

    #[test]
    fn singlet_one_equals_bell() {
        let probs = |p| {
            let d = dist(&cfg(Flags { protocol: Some(p), n: Some(1), y: Some(0.4), ..Flags::default() })).unwrap();
            d.document.rows.iter().map(|r| r[1].clone()).collect::<Vec<_>>()
        };
        assert_eq!(probs(Protocol::SymmetricSinglet), probs(Protocol::BellSinglet));
    }

    #[test]
    fn oracle_check_cap() {
        let c = cfg(Flags { n: Some(11), ..Flags::default() });
        assert!(matches!(oracle_check(&c), Err(CliError::Core(Error::QubitsOutOfRange { .. }))));
    }
}
