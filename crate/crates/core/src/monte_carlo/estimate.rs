use crate::error::{Error, Result};
use crate::protocols::{self, Protocol, ProtocolSpec};
use crate::scalar::{sign_pow, Real};

/// Grid size of the monotonicity check run before any singlet inversion.
pub const MONOTONE_GRID: usize = 10_000;

/// Offset estimate obtained by inverting the parity expectation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EstimateReport<T> {
    /// `|Y|` estimate, always inside `[0, ambiguity window]`.
    pub y_abs_est: T,
    pub f_bar: T,
    /// Closed-form Fisher information per record.
    pub fisher: T,
    /// Cramer-Rao bound for one experiment of the spec's size.
    pub crb: T,
    /// The estimate lies strictly inside the ambiguity window.
    pub in_window: bool,
    /// `f_bar` was outside the range the expectation reaches on the window
    /// and was pinned to the nearest attainable value.
    pub clamped: bool,
}

/// Inverts the singlet expectation on `[0, pi/(N+1)]`, where `(-1)^N f` falls
/// monotonically from 1 to 0.
#[derive(Debug, Clone)]
pub struct SingletInverter<T> {
    spec: ProtocolSpec,
    window: T,
    /// `(-1)^N f(window)`, zero up to rounding.
    floor: T,
}

impl<T: Real> SingletInverter<T> {
    /// Checks that `|f|` strictly decreases on a [`MONOTONE_GRID`]-point grid of
    /// the window before accepting `n`. The check always runs in `f64`: near
    /// `beta = 0` neighbouring grid values coincide in single precision.
    pub fn new(n: u32) -> Result<Self> {
        let spec = ProtocolSpec::new(Protocol::SymmetricSinglet, n, 1)?;
        let sign = sign_pow::<f64>(i64::from(n));
        let g = |b: f64| sign * protocols::expectation_at_beta(&spec, b);
        let step = protocols::beta_window::<f64>(&spec) / MONOTONE_GRID as f64;
        let mut prev = g(0.0);
        for k in 1..=MONOTONE_GRID {
            let cur = g(step * k as f64);
            if cur >= prev {
                return Err(Error::NotMonotone(n));
            }
            prev = cur;
        }
        let window = protocols::beta_window::<T>(&spec);
        let floor = sign_pow::<T>(i64::from(n)) * protocols::expectation_at_beta(&spec, window);
        Ok(Self { spec, window, floor })
    }

    /// `beta` in `[0, pi/(N+1)]` with `f(beta) = f_bar`, plus whether `f_bar`
    /// had to be clamped into the attainable range first.
    pub fn invert(&self, f_bar: T) -> (T, bool) {
        let sign = sign_pow::<T>(i64::from(self.spec.n()));
        let target = sign * f_bar;
        if target >= T::one() {
            return (T::zero(), target > T::one());
        }
        if target <= self.floor {
            return (self.window, target < self.floor);
        }
        let g = |b: T| sign * protocols::expectation_at_beta(&self.spec, b);
        let tol = T::lit(1e-12).max(T::lit(4.0) * T::epsilon() * self.window);
        let (mut lo, mut hi) = (T::zero(), self.window);
        // run past the 1e-12 bracket down to machine resolution
        for _ in 0..200 {
            let mid = (lo + hi) * T::lit(0.5);
            if mid <= lo || mid >= hi {
                break;
            }
            if g(mid) > target {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        debug_assert!(hi - lo <= tol);
        ((lo + hi) * T::lit(0.5), false)
    }
}

/// Estimates `|Y|` from the observed mean parity `f_bar`.
///
/// Bell: `beta = arccos(-f_bar)`; GHZ: `beta = arccos(f_bar) / N`; singlet:
/// bisection on the monotone branch of `f` (see [`SingletInverter`]).
/// `f_bar` outside `[-1, 1]` is rejected as corrupt input.
pub fn estimate_offset<T: Real>(f_bar: T, spec: &ProtocolSpec, omega: T) -> Result<EstimateReport<T>> {
    let inverter = match spec.protocol() {
        Protocol::SymmetricSinglet => Some(SingletInverter::new(spec.n())?),
        _ => None,
    };
    estimate_with(f_bar, spec, omega, inverter.as_ref())
}

pub(crate) fn estimate_with<T: Real>(
    f_bar: T,
    spec: &ProtocolSpec,
    omega: T,
    inverter: Option<&SingletInverter<T>>,
) -> Result<EstimateReport<T>> {
    if !(f_bar >= -T::one() && f_bar <= T::one()) {
        return Err(Error::MeanOutOfRange(f_bar.to_f64_lossy()));
    }
    let (beta, clamped) = match spec.protocol() {
        Protocol::BellSinglet => ((-f_bar).acos(), false),
        Protocol::Ghz => (f_bar.acos() / T::int(i64::from(spec.n())), false),
        Protocol::SymmetricSinglet => match inverter {
            Some(inv) => inv.invert(f_bar),
            None => SingletInverter::new(spec.n())?.invert(f_bar),
        },
    };
    let window = protocols::ambiguity_window(spec, omega);
    let y_abs_est = (beta / omega).min(window);
    Ok(EstimateReport {
        y_abs_est,
        f_bar,
        fisher: protocols::fisher_information_closed(spec, omega),
        crb: protocols::cramer_rao_bound(spec, omega),
        in_window: y_abs_est < window,
        clamped,
    })
}
