//! Closed-form statistics of the three synchronization protocols.
//!
//! Every quantity depends on the clock offset only through the phase
//! `beta = omega * |Y|`, reduced into `[0, 2pi)` before any trig call (all
//! distributions are `2pi`-periodic in `beta`).

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::scalar::{reduce_mod, sign_pow, Real};
use crate::wigner::{self, two_m_at};

/// Protocol variant.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Protocol {
    /// `N * nu` independent singlet pairs `(|01> - |10>)/sqrt 2`.
    BellSinglet,
    /// `(|0..0>_A |1..1>_B + |1..1>_A |0..0>_B)/sqrt 2` with `N` qubits per party.
    Ghz,
    /// Spin-zero singlet of two spin-`N/2` Dicke registers.
    SymmetricSinglet,
}

impl Protocol {
    pub const ALL: [Protocol; 3] = [Protocol::BellSinglet, Protocol::Ghz, Protocol::SymmetricSinglet];

    pub fn name(self) -> &'static str {
        match self {
            Protocol::BellSinglet => "bell",
            Protocol::Ghz => "ghz",
            Protocol::SymmetricSinglet => "singlet",
        }
    }
}

impl fmt::Display for Protocol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Protocol {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "bell" => Ok(Protocol::BellSinglet),
            "ghz" => Ok(Protocol::Ghz),
            "singlet" => Ok(Protocol::SymmetricSinglet),
            other => Err(format!("unknown protocol '{other}' (expected bell, ghz or singlet)")),
        }
    }
}

/// Protocol variant with its resource counts.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ProtocolSpec {
    protocol: Protocol,
    n: u32,
    nu: u64,
}

impl ProtocolSpec {
    /// Upper bound on `N` for the symmetric singlet (the Wigner matrix cap).
    pub const MAX_SINGLET_N: u32 = wigner::MAX_TWO_J;

    /// `n` is qubits per party (`2J = n`); for the Bell protocol it multiplies
    /// the number of pairs. `nu` is the repetition count.
    pub fn new(protocol: Protocol, n: u32, nu: u64) -> Result<Self> {
        let max = match protocol {
            Protocol::SymmetricSinglet => Self::MAX_SINGLET_N,
            _ => u32::MAX,
        };
        if n == 0 || n > max {
            return Err(Error::QubitsOutOfRange { got: n, max });
        }
        if nu == 0 {
            return Err(Error::ZeroRepetitions);
        }
        Ok(Self { protocol, n, nu })
    }

    pub fn protocol(&self) -> Protocol {
        self.protocol
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn nu(&self) -> u64 {
        self.nu
    }

    /// `2J`.
    pub fn two_j(&self) -> u32 {
        self.n
    }

    /// Number of independent measurement records one experiment produces:
    /// `N * nu` pairs for Bell, `nu` states otherwise.
    pub fn records_per_experiment(&self) -> u64 {
        match self.protocol {
            Protocol::BellSinglet => u64::from(self.n) * self.nu,
            _ => self.nu,
        }
    }

    pub fn with_nu(self, nu: u64) -> Result<Self> {
        Self::new(self.protocol, self.n, nu)
    }

    pub fn with_n(self, n: u32) -> Result<Self> {
        Self::new(self.protocol, n, self.nu)
    }
}

/// Clock frequency and offset.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ClockParams<T> {
    omega: T,
    offset: T,
}

impl<T: Real> ClockParams<T> {
    pub fn new(omega: T, offset: T) -> Result<Self> {
        if !omega.is_finite() || omega <= T::zero() {
            return Err(Error::InvalidOmega(omega.to_f64_lossy()));
        }
        if !offset.is_finite() {
            return Err(Error::InvalidOffset(offset.to_f64_lossy()));
        }
        Ok(Self { omega, offset })
    }

    /// Clock at angular frequency `omega` whose offset produces phase `beta`.
    pub fn from_beta(omega: T, beta: T) -> Result<Self> {
        Self::new(omega, beta / omega)
    }

    pub fn omega(&self) -> T {
        self.omega
    }

    /// Signed offset `Y = t_B - t_A`.
    pub fn offset(&self) -> T {
        self.offset
    }

    /// `omega * |Y|`, unreduced.
    pub fn beta(&self) -> T {
        self.omega * self.offset.abs()
    }
}

/// Label of an outcome class.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum OutcomeLabel {
    /// One Bell pair: Alice's bit `x`, Bob's bit `y` (X-basis outcome indices).
    Pair { x: u8, y: u8 },
    /// GHZ parity class `(-1)^{sum(x_k + y_k)}`.
    Parity(i8),
    /// Symmetric-singlet class: Alice has `J - M` zeros, Bob `J - M'` zeros.
    Magnetic { two_m: i32, two_m_prime: i32 },
}

impl fmt::Display for OutcomeLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fn half(f: &mut fmt::Formatter<'_>, two: i32) -> fmt::Result {
            if two % 2 == 0 {
                write!(f, "{}", two / 2)
            } else {
                write!(f, "{two}/2")
            }
        }
        match *self {
            OutcomeLabel::Pair { x, y } => write!(f, "x={x} y={y}"),
            OutcomeLabel::Parity(p) => write!(f, "parity={p:+}"),
            OutcomeLabel::Magnetic { two_m, two_m_prime } => {
                f.write_str("M=")?;
                half(f, two_m)?;
                f.write_str(" M'=")?;
                half(f, two_m_prime)
            }
        }
    }
}

/// Exact class probabilities for one protocol at one offset.
#[derive(Debug, Clone, PartialEq)]
pub struct OutcomeDistribution<T> {
    pub protocol: Protocol,
    pub labels: Vec<OutcomeLabel>,
    pub probs: Vec<T>,
    /// Parity weight `g` of each class, aligned with `labels`.
    pub parity: Vec<i8>,
}

impl<T: Real> OutcomeDistribution<T> {
    pub fn len(&self) -> usize {
        self.probs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.probs.is_empty()
    }

    pub fn total(&self) -> T {
        self.probs.iter().copied().sum()
    }

    /// `sum_k g_k P_k`.
    pub fn parity_mean(&self) -> T {
        self.probs.iter().zip(&self.parity).map(|(&p, &g)| p * T::int(i64::from(g))).sum()
    }

    pub fn iter(&self) -> impl Iterator<Item = (OutcomeLabel, T, i8)> + '_ {
        self.labels.iter().zip(&self.probs).zip(&self.parity).map(|((&l, &p), &g)| (l, p, g))
    }
}

fn reduced<T: Real>(beta: T) -> T {
    reduce_mod(beta.abs(), T::TAU())
}

/// Outcome distribution of `spec` at clock `clock`.
pub fn outcome_distribution<T: Real>(spec: &ProtocolSpec, clock: &ClockParams<T>) -> OutcomeDistribution<T> {
    distribution_at_beta(spec, clock.beta())
}

/// Outcome distribution at phase `beta` (`|beta|` is used).
///
/// * Bell: `P(x, y) = (1/2)[cos^2(b/2) if x != y, sin^2(b/2) if x == y]`, `g = (-1)^{x+y}`.
/// * GHZ: `P(+/-) = (1 +/- cos(N b))/2`, the two parity classes.
/// * Singlet: `P(M, M') = d^J_{M', -M}(b)^2 / (2J + 1)`, `g = (-1)^{N + M + M'}`.
///
/// Labels come out in ascending order.
pub fn distribution_at_beta<T: Real>(spec: &ProtocolSpec, beta: T) -> OutcomeDistribution<T> {
    let beta = reduced(beta);
    let half = T::lit(0.5);
    match spec.protocol() {
        Protocol::BellSinglet => {
            let (s, c) = (beta * half).sin_cos();
            let anti = half * c * c;
            let same = half * s * s;
            let labels = vec![
                OutcomeLabel::Pair { x: 0, y: 0 },
                OutcomeLabel::Pair { x: 0, y: 1 },
                OutcomeLabel::Pair { x: 1, y: 0 },
                OutcomeLabel::Pair { x: 1, y: 1 },
            ];
            OutcomeDistribution {
                protocol: Protocol::BellSinglet,
                labels,
                probs: vec![same, anti, anti, same],
                parity: vec![1, -1, -1, 1],
            }
        }
        Protocol::Ghz => {
            let c = (T::int(i64::from(spec.n())) * beta).cos();
            OutcomeDistribution {
                protocol: Protocol::Ghz,
                labels: vec![OutcomeLabel::Parity(-1), OutcomeLabel::Parity(1)],
                probs: vec![half * (T::one() - c), half * (T::one() + c)],
                parity: vec![-1, 1],
            }
        }
        Protocol::SymmetricSinglet => {
            let two_j = spec.two_j();
            let d = wigner::wigner_small_d(two_j, beta).expect("spec enforces the spin cap");
            let dim = d.dim();
            let norm = T::one() / T::int(dim as i64);
            let mut labels = Vec::with_capacity(dim * dim);
            let mut probs = Vec::with_capacity(dim * dim);
            let mut parity = Vec::with_capacity(dim * dim);
            for a in 0..dim {
                let two_m = two_m_at(two_j, a);
                for b in 0..dim {
                    let two_m_prime = two_m_at(two_j, b);
                    // row M', column -M
                    let amp = d.at(b, dim - 1 - a);
                    labels.push(OutcomeLabel::Magnetic { two_m, two_m_prime });
                    probs.push(amp * amp * norm);
                    let exponent = (2 * i64::from(two_j) + i64::from(two_m) + i64::from(two_m_prime)) / 2;
                    parity.push(if exponent.rem_euclid(2) == 0 { 1 } else { -1 });
                }
            }
            OutcomeDistribution { protocol: Protocol::SymmetricSinglet, labels, probs, parity }
        }
    }
}

/// Expectation of the parity observable at clock `clock`.
pub fn expectation_f<T: Real>(spec: &ProtocolSpec, clock: &ClockParams<T>) -> T {
    expectation_at_beta(spec, clock.beta())
}

/// Expectation of the parity observable at phase `beta`.
///
/// Bell `-cos b`, GHZ `cos(N b)`, singlet
/// `(-1)^N / (N+1) * sum_{k=0}^{N} cos((N - 2k) b)`, the Dirichlet-kernel form
/// of `(-1)^N sin((N+1) b) / ((N+1) sin b)` that stays exact at `b = m pi`.
pub fn expectation_at_beta<T: Real>(spec: &ProtocolSpec, beta: T) -> T {
    let beta = reduced(beta);
    let n = i64::from(spec.n());
    match spec.protocol() {
        Protocol::BellSinglet => -beta.cos(),
        Protocol::Ghz => (T::int(n) * beta).cos(),
        Protocol::SymmetricSinglet => {
            let sum: T = (0..=n).map(|k| (T::int(n - 2 * k) * beta).cos()).sum();
            sign_pow::<T>(n) * sum / T::int(n + 1)
        }
    }
}

/// Fisher information about `Y` carried by one record: `omega^2` (Bell),
/// `N^2 omega^2` (GHZ), `N(N+2) omega^2 / 3 = 4J(J+1) omega^2 / 3` (singlet).
pub fn fisher_information_closed<T: Real>(spec: &ProtocolSpec, omega: T) -> T {
    let n = T::int(i64::from(spec.n()));
    let w2 = omega * omega;
    match spec.protocol() {
        Protocol::BellSinglet => w2,
        Protocol::Ghz => n * n * w2,
        Protocol::SymmetricSinglet => n * (n + T::lit(2.0)) * w2 / T::lit(3.0),
    }
}

/// Largest `|Y|` on which the expectation is one-to-one in `|Y|`:
/// `pi/omega`, `pi/(N omega)`, `pi/((N+1) omega)`.
pub fn ambiguity_window<T: Real>(spec: &ProtocolSpec, omega: T) -> T {
    beta_window::<T>(spec) / omega
}

/// The ambiguity window expressed in `beta`.
pub fn beta_window<T: Real>(spec: &ProtocolSpec) -> T {
    let n = T::int(i64::from(spec.n()));
    match spec.protocol() {
        Protocol::BellSinglet => T::PI(),
        Protocol::Ghz => T::PI() / n,
        Protocol::SymmetricSinglet => T::PI() / (n + T::one()),
    }
}

/// `1 / sqrt(records * F)` with `records = N nu` for Bell and `nu` otherwise.
pub fn cramer_rao_bound<T: Real>(spec: &ProtocolSpec, omega: T) -> T {
    let records = T::lit(spec.records_per_experiment() as f64);
    T::one() / (records * fisher_information_closed(spec, omega)).sqrt()
}
