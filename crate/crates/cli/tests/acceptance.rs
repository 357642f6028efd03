//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! non-zero if any criterion fails.

use std::f64::consts::PI;
use std::process::Command;
use std::time::{Duration, Instant};

use clocksync::exact_oracle::checks::{distribution_checks, symmetrization_check};
use clocksync::monte_carlo::{
    chernoff_confidence, chernoff_coverage, fisher_information_numeric, rmse_study, scaling_study, substream,
    ScalingReport,
};
use clocksync::protocols::{ambiguity_window, distribution_at_beta, expectation_at_beta, fisher_information_closed};
use clocksync::wigner::wigner_small_d;
use clocksync::{ClockParams, Protocol, ProtocolSpec};
use rand::Rng;

const SEED: u64 = 42;

type Criterion = (&'static str, fn() -> Verdict);

struct Verdict {
    passed: bool,
    detail: String,
}

fn verdict(passed: bool, detail: impl Into<String>) -> Verdict {
    Verdict { passed, detail: detail.into() }
}

fn oracle_equivalence() -> Verdict {
    let mut worst: f64 = 0.0;
    for (pi, p) in Protocol::ALL.into_iter().enumerate() {
        for n in 1..=4u32 {
            let mut rng = substream(SEED, (pi as u64) << 8 | u64::from(n));
            let offsets: Vec<f64> = (0..20).map(|_| rng.gen_range(-10.0..10.0)).collect();
            for c in distribution_checks(p, n, 1.0, &offsets).unwrap() {
                worst = worst.max(c.max_deviation);
            }
        }
    }
    verdict(worst < 1e-10, format!("max |oracle - closed form| = {worst:.3e} (< 1e-10)"))
}

fn symmetrization_identity() -> Verdict {
    let worst = (1..=6).map(|n| symmetrization_check(n).unwrap().max_deviation).fold(0.0, f64::max);
    verdict(worst < 1e-10, format!("max |1 - fidelity| over N=1..6 = {worst:.3e} (< 1e-10)"))
}

fn expectation_consistency() -> Verdict {
    let mut worst: f64 = 0.0;
    for p in Protocol::ALL {
        for n in 1..=50u32 {
            let spec = ProtocolSpec::new(p, n, 1).unwrap();
            let mut rng = substream(SEED, 1000 + u64::from(n));
            for _ in 0..200 {
                let beta = rng.gen_range(0.0..2.0 * PI);
                let d = distribution_at_beta(&spec, beta);
                worst = worst.max((d.parity_mean() - expectation_at_beta(&spec, beta)).abs());
            }
        }
    }
    verdict(worst < 1e-10, format!("max |f - sum parity*prob| over N<=50 = {worst:.3e} (< 1e-10)"))
}

/// The numeric Fisher information is specified only for `beta` at least
/// `10 h` away from a zero of every class probability. Each class probability
/// is the square of a signed amplitude, so a zero shows up as a sign change
/// of that amplitude across the interval.
fn near_class_zero(spec: &ProtocolSpec, beta: f64) -> bool {
    // h = 1e-6 / omega in Y is 1e-6 in beta
    let reach = 10.0 * 1e-6;
    let (lo, hi) = (beta - reach, beta + reach);
    let flips = |f: &dyn Fn(f64) -> f64| f(lo) * f(hi) <= 0.0;
    let n = f64::from(spec.n());
    match spec.protocol() {
        Protocol::BellSinglet => flips(&|b| (b / 2.0).cos()) || flips(&|b| (b / 2.0).sin()),
        Protocol::Ghz => flips(&|b| (n * b / 2.0).cos()) || flips(&|b| (n * b / 2.0).sin()),
        Protocol::SymmetricSinglet => {
            let a = wigner_small_d(spec.n(), lo).unwrap();
            let b = wigner_small_d(spec.n(), hi).unwrap();
            a.entries().iter().zip(b.entries()).any(|(x, y)| x * y <= 0.0)
        }
    }
}

fn fisher_agreement() -> Verdict {
    let mut worst: f64 = 0.0;
    let mut rejected = 0usize;
    let omega = 1.7;
    for p in Protocol::ALL {
        for n in 1..=20u32 {
            let spec = ProtocolSpec::new(p, n, 1).unwrap();
            let mut rng = substream(SEED, 2000 + u64::from(n));
            let mut accepted = 0;
            while accepted < 20 {
                let beta = rng.gen_range(0.0..PI);
                if near_class_zero(&spec, beta) {
                    rejected += 1;
                    continue;
                }
                accepted += 1;
                let clock = ClockParams::from_beta(omega, beta).unwrap();
                let numeric: f64 = fisher_information_numeric(&spec, &clock).unwrap().value;
                let closed = fisher_information_closed(&spec, omega);
                worst = worst.max(((numeric - closed) / closed).abs());
            }
        }
    }
    verdict(
        worst < 1e-4,
        format!(
            "max relative FI difference = {worst:.3e} (< 1e-4); {rejected} draws rejected within 10h of a class zero"
        ),
    )
}

fn chernoff() -> Verdict {
    let mut ok = true;
    let mut parts = Vec::new();
    for nu in [10u64, 40] {
        let spec = ProtocolSpec::new(Protocol::SymmetricSinglet, 4, nu).unwrap();
        let y = 0.3 * ambiguity_window(&spec, 1.0);
        let c = chernoff_coverage(&spec, &ClockParams::new(1.0, y).unwrap(), 10_000, SEED);
        ok &= c.coverage >= c.bound;
        parts.push(format!(
            "nu={nu}: coverage {:.4} >= bound {:.4} (pass rate {:.4})",
            c.coverage, c.bound, c.pass_rate
        ));
    }
    let b10: f64 = chernoff_confidence(10);
    parts.push(format!("nu=10 bound is {b10:.4}, quoted as larger than 84%"));
    verdict(ok, parts.join("; "))
}

fn crb_attainment() -> Verdict {
    let spec = ProtocolSpec::new(Protocol::SymmetricSinglet, 4, 10_000).unwrap();
    let clock = ClockParams::from_beta(1.0, 0.3 * PI / 5.0).unwrap();
    let r = rmse_study(&spec, &clock, 200, SEED).unwrap();
    verdict((0.8..=1.5).contains(&r.ratio), format!("rmse/crb = {:.4} (in [0.8, 1.5])", r.ratio))
}

fn scaling_laws() -> Verdict {
    let mut ok = true;
    let mut parts = Vec::new();
    for p in Protocol::ALL {
        let r = scaling_study(p, &[2, 4, 8, 16], 10_000, 1.0, 0.3, 100, SEED).unwrap();
        ok &= r.within_tolerance();
        parts.push(format!(
            "{p} slope {:.4} (want {} +- {}) {}",
            r.slope,
            ScalingReport::expected_slope(p),
            ScalingReport::slope_tolerance(p),
            if r.within_tolerance() { "ok" } else { "OUT" }
        ));
    }
    verdict(ok, parts.join("; "))
}

fn cli(args: &[&str]) -> std::process::Output {
    Command::new(env!("CARGO_BIN_EXE_clocksync")).args(args).output().expect("spawn clocksync")
}

fn sweep_curves() -> Verdict {
    let pi = format!("{PI:.17e}");
    let out = cli(&[
        "sweep",
        "--protocol",
        "singlet",
        "--n-list",
        "1,2,3,4",
        "--beta-min",
        "0",
        "--beta-max",
        &pi,
        "--steps",
        "601",
        "--format",
        "csv",
    ]);
    if !out.status.success() {
        return verdict(false, format!("sweep exited with {}", out.status));
    }
    let text = String::from_utf8(out.stdout).unwrap();
    let mut lines = text.lines();
    let header: Vec<&str> = lines.next().unwrap().split(',').collect();
    let col = |name: &str| header.iter().position(|h| *h == name).unwrap();
    let (cn, cb, cf) = (col("n"), col("beta"), col("f"));
    let rows: Vec<(u32, f64, f64)> = lines
        .map(|l| {
            let c: Vec<&str> = l.split(',').collect();
            (c[cn].parse().unwrap(), c[cb].parse().unwrap(), c[cf].parse().unwrap())
        })
        .collect();
    let mut ok = true;
    let mut parts = Vec::new();
    for n in 1..=4u32 {
        let curve: Vec<(f64, f64)> = rows.iter().filter(|r| r.0 == n).map(|r| (r.1, r.2)).collect();
        let peak_ok = curve[0].0 == 0.0 && curve[0].1 == if n % 2 == 0 { 1.0 } else { -1.0 };
        let root = curve.windows(2).find(|w| w[0].1 == 0.0 || w[0].1.signum() != w[1].1.signum()).map(|w| {
            let ((b0, f0), (b1, f1)) = (w[0], w[1]);
            if f0 == 0.0 {
                b0
            } else {
                b0 + f0 * (b1 - b0) / (f0 - f1)
            }
        });
        let err = root.map_or(f64::INFINITY, |r| (r - PI / f64::from(n + 1)).abs());
        ok &= peak_ok && err < 1e-9;
        parts.push(format!("N={n}: f(0) exact {peak_ok}, zero error {err:.2e}"));
    }
    verdict(ok, parts.join("; "))
}

fn determinism() -> Verdict {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.cfg");
    std::fs::write(&cfg, "protocol = singlet\nn = 3\nnu = 500\nseed = 7\ny = 0.2\n").unwrap();
    let cfg = cfg.to_str().unwrap().to_owned();
    let runs: Vec<(&str, Vec<&str>)> = vec![
        ("dist", vec!["dist", "--config", &cfg]),
        ("sweep", vec!["sweep", "--config", &cfg, "--n-list", "1,2,3"]),
        ("fisher", vec!["fisher", "--config", &cfg]),
        ("simulate", vec!["simulate", "--config", &cfg, "--trials", "60"]),
        ("judge", vec!["judge", "--config", &cfg]),
        ("scaling", vec!["scaling", "--config", &cfg, "--n-list", "1,2,3", "--trials", "50", "--format", "json"]),
        ("oracle-check", vec!["oracle-check", "--config", &cfg]),
    ];
    let mut mismatched = Vec::new();
    for (name, args) in &runs {
        let mut bytes = Vec::new();
        for rep in 0..2 {
            let path = dir.path().join(format!("{name}-{rep}.out"));
            let mut a = args.clone();
            let p = path.to_str().unwrap().to_owned();
            a.extend(["--out", &p]);
            let out = cli(&a);
            if out.status.code() == Some(1) {
                mismatched.push(format!("{name} rejected its input"));
            }
            bytes.push(std::fs::read(&path).unwrap_or_default());
        }
        if bytes[0].is_empty() || bytes[0] != bytes[1] {
            mismatched.push((*name).to_owned());
        }
    }
    verdict(
        mismatched.is_empty(),
        if mismatched.is_empty() {
            format!("{} subcommands byte-identical on rerun", runs.len())
        } else {
            format!("differs: {mismatched:?}")
        },
    )
}

fn main() {
    let criteria: [Criterion; 9] = [
        ("oracle equivalence", oracle_equivalence),
        ("symmetrized state identity", symmetrization_identity),
        ("expectation consistency", expectation_consistency),
        ("fisher information", fisher_agreement),
        ("chernoff coverage", chernoff),
        ("cramer-rao attainment", crb_attainment),
        ("scaling laws", scaling_laws),
        ("sweep curves", sweep_curves),
        ("determinism", determinism),
    ];
    let mut failures = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let v = f();
        let secs = Duration::as_secs_f64(&start.elapsed());
        failures += usize::from(!v.passed);
        println!("criterion {} {} {name}: {} [{secs:.2}s]", i + 1, if v.passed { "PASS" } else { "FAIL" }, v.detail);
    }
    println!("acceptance: {} of {} criteria passed", criteria.len() - failures, criteria.len());
    if failures > 0 {
        std::process::exit(1);
    }
}
