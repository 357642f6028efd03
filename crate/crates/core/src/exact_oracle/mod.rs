//! Dense state-vector simulator used as ground truth for the closed forms.
//!
//! A state on `2N` qubits stores `2^{2N}` amplitudes. Basis index `b` is read
//! big-endian with Alice's `N` qubits first: qubit `q` (0 = leftmost) is bit
//! `(b >> (2N - 1 - q)) & 1`, so Alice's register is `b >> N` and Bob's is
//! `b & (2^N - 1)`. Bit value 0 is `|0>`. The ground energy is taken as zero
//! and `hbar = 1`, so a qubit in `|1>` accrues phase `e^{-i omega t}`.
//!
//! States are compared through the fidelity `|<a|b>|`; global phases carry no
//! meaning here.

pub mod checks;

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::protocols::{OutcomeDistribution, OutcomeLabel, Protocol};
use crate::scalar::Real;
use crate::wigner::{binomial, Mat2};

/// Hard cap on the number of simulated qubits (16M amplitudes).
pub const MAX_QUBITS: usize = 24;
/// Largest per-party `N` for the Bell-pair and GHZ builders.
pub const MAX_PAIRS_N: u32 = 12;
/// Largest per-party `N` for the Dicke-built singlet.
pub const MAX_DICKE_N: u32 = 10;
/// Largest per-party `N` for the symmetrised Bell construction.
pub const MAX_SYMMETRIZED_N: u32 = 8;

/// Pure state of Alice's and Bob's registers.
#[derive(Debug, Clone, PartialEq)]
pub struct StateVector<T> {
    num_qubits: usize,
    amps: Vec<Complex<T>>,
}

impl<T: Real> StateVector<T> {
    /// All-zero amplitude vector on `num_qubits` qubits (not normalised).
    pub fn zeros(num_qubits: usize) -> Result<Self> {
        if num_qubits > MAX_QUBITS {
            return Err(Error::TooManyQubits { got: num_qubits, max: MAX_QUBITS });
        }
        Ok(Self { num_qubits, amps: vec![Complex::new(T::zero(), T::zero()); 1 << num_qubits] })
    }

    pub fn from_amplitudes(num_qubits: usize, amps: Vec<Complex<T>>) -> Result<Self> {
        if num_qubits > MAX_QUBITS {
            return Err(Error::TooManyQubits { got: num_qubits, max: MAX_QUBITS });
        }
        assert_eq!(amps.len(), 1 << num_qubits, "amplitude count must be 2^num_qubits");
        Ok(Self { num_qubits, amps })
    }

    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    /// Qubits held by each party.
    pub fn per_party(&self) -> usize {
        self.num_qubits / 2
    }

    pub fn amplitudes(&self) -> &[Complex<T>] {
        &self.amps
    }

    pub fn norm(&self) -> T {
        self.amps.iter().map(|z| z.norm_sqr()).sum::<T>().sqrt()
    }

    /// `<self|other>`.
    pub fn inner(&self, other: &Self) -> Complex<T> {
        assert_eq!(self.num_qubits, other.num_qubits);
        self.amps.iter().zip(&other.amps).map(|(a, b)| a.conj() * b).sum()
    }

    /// `|<self|other>|`.
    pub fn fidelity(&self, other: &Self) -> T {
        self.inner(other).norm()
    }

    /// Applies the single-qubit gate `u` to qubit `q` (0 = leftmost).
    pub fn apply_single(&mut self, u: &Mat2<T>, q: usize) {
        assert!(q < self.num_qubits);
        let stride = 1usize << (self.num_qubits - 1 - q);
        let len = self.amps.len();
        let mut base = 0;
        while base < len {
            for i in base..base + stride {
                let a0 = self.amps[i];
                let a1 = self.amps[i + stride];
                self.amps[i] = u[0][0] * a0 + u[0][1] * a1;
                self.amps[i + stride] = u[1][0] * a0 + u[1][1] * a1;
            }
            base += 2 * stride;
        }
    }

    /// Applies `u` to every qubit in `qubits`.
    pub fn apply_each(&mut self, u: &Mat2<T>, qubits: std::ops::Range<usize>) {
        for q in qubits {
            self.apply_single(u, q);
        }
    }

    /// Applies the Hadamard gate to every qubit (fast Walsh-Hadamard transform).
    pub fn hadamard_all(&mut self) {
        let scale = T::FRAC_1_SQRT_2();
        let len = self.amps.len();
        let mut h = 1;
        while h < len {
            let mut base = 0;
            while base < len {
                for i in base..base + h {
                    let a = self.amps[i];
                    let b = self.amps[i + h];
                    self.amps[i] = (a + b) * scale;
                    self.amps[i + h] = (a - b) * scale;
                }
                base += 2 * h;
            }
            h <<= 1;
        }
    }

    /// Computational-basis probabilities `|amp|^2`.
    pub fn probabilities(&self) -> Vec<T> {
        self.amps.iter().map(|z| z.norm_sqr()).collect()
    }
}

fn check_n(n: u32, max: u32) -> Result<()> {
    if n == 0 || n > max {
        Err(Error::QubitsOutOfRange { got: n, max })
    } else {
        Ok(())
    }
}

/// Normalised Dicke state `|J, M>` on `n = 2J` qubits with `2M = two_m`:
/// equal-amplitude sum over bitstrings with `J + M` ones.
pub fn dicke_vector<T: Real>(n: u32, two_m: i32) -> Vec<Complex<T>> {
    let ones = (i64::from(two_m) + i64::from(n)) / 2;
    let amp = T::one() / binomial::<T>(n, ones).sqrt();
    (0..1u64 << n)
        .map(|b| {
            if i64::from(b.count_ones()) == ones {
                Complex::new(amp, T::zero())
            } else {
                Complex::new(T::zero(), T::zero())
            }
        })
        .collect()
}

/// `N` singlet pairs `(|01> - |10>)/sqrt 2`, pair `k` on Alice qubit `k` and
/// Bob qubit `k`.
pub fn build_bell_pairs<T: Real>(n: u32) -> Result<StateVector<T>> {
    check_n(n, MAX_PAIRS_N)?;
    let n = n as usize;
    let mut state = StateVector::zeros(2 * n)?;
    let mask = (1usize << n) - 1;
    let amp = T::FRAC_1_SQRT_2().powi(n as i32);
    for alice in 0..=mask {
        let bob = !alice & mask;
        // each pair contributes -1 when Alice holds |1>
        let sign = if alice.count_ones() % 2 == 0 { T::one() } else { -T::one() };
        state.amps[(alice << n) | bob] = Complex::new(sign * amp, T::zero());
    }
    Ok(state)
}

/// `(|0..0>_A |1..1>_B + |1..1>_A |0..0>_B) / sqrt 2`.
pub fn build_ghz<T: Real>(n: u32) -> Result<StateVector<T>> {
    check_n(n, MAX_PAIRS_N)?;
    let n = n as usize;
    let mut state = StateVector::zeros(2 * n)?;
    let ones = (1usize << n) - 1;
    let amp = Complex::new(T::FRAC_1_SQRT_2(), T::zero());
    state.amps[ones] = amp;
    state.amps[ones << n] = amp;
    Ok(state)
}

/// `sum_M (-1)^{J-M} |J,M>_A |J,-M>_B / sqrt(2J+1)` with the Dicke states
/// expanded into bitstrings.
pub fn build_singlet_dicke<T: Real>(n: u32) -> Result<StateVector<T>> {
    check_n(n, MAX_DICKE_N)?;
    let nu = n as usize;
    let mut state = StateVector::zeros(2 * nu)?;
    let mask = (1usize << nu) - 1;
    let root = T::int(i64::from(n) + 1).sqrt();
    for (b, amp) in state.amps.iter_mut().enumerate() {
        let alice_ones = (b >> nu).count_ones();
        let bob_ones = (b & mask).count_ones();
        if alice_ones + bob_ones != n {
            continue;
        }
        // J - M = N - (Alice ones)
        let sign = if (n - alice_ones).is_multiple_of(2) { T::one() } else { -T::one() };
        let c = binomial::<T>(n, i64::from(alice_ones));
        *amp = Complex::new(sign / (root * c), T::zero());
    }
    Ok(state)
}

/// `(2^{N/2} / sqrt(N+1)) (I^{(x)N} (x) S) |Psi->^{(x)N}` where `S` projects
/// Bob's register onto its symmetric subspace. Not renormalised: the
/// prefactor alone restores unit norm.
pub fn build_symmetrized_bell<T: Real>(n: u32) -> Result<StateVector<T>> {
    check_n(n, MAX_SYMMETRIZED_N)?;
    let mut state = build_bell_pairs::<T>(n)?;
    let nu = n as usize;
    let block = 1usize << nu;
    let zero = Complex::new(T::zero(), T::zero());
    for chunk in state.amps.chunks_mut(block) {
        // S = sum_M |J,M><J,M| averages the amplitudes inside each weight class
        let mut sums = vec![zero; nu + 1];
        for (b, a) in chunk.iter().enumerate() {
            let w = b.count_ones() as usize;
            sums[w] = sums[w] + *a;
        }
        for (b, a) in chunk.iter_mut().enumerate() {
            let w = b.count_ones() as usize;
            *a = sums[w] / binomial::<T>(n, w as i64);
        }
    }
    let prefactor = T::lit(2f64.powf(f64::from(n) / 2.0)) / T::int(i64::from(n) + 1).sqrt();
    for a in state.amps.iter_mut() {
        *a = *a * prefactor;
    }
    Ok(state)
}

/// Free evolution `e^{-i H t_A}^{(x)N} (x) e^{-i H t_B}^{(x)N}`: every Alice
/// qubit in `|1>` picks up `e^{-i omega t_A}`, every Bob qubit `e^{-i omega t_B}`.
///
/// For states with a fixed total excitation (all three protocol states) the
/// result depends on the times only through `omega (t_B - t_A)`, up to a
/// global phase.
pub fn evolve<T: Real>(state: &StateVector<T>, omega: T, t_a: T, t_b: T) -> StateVector<T> {
    let n = state.per_party();
    let mask = (1usize << n) - 1;
    let amps = state
        .amps
        .iter()
        .enumerate()
        .map(|(b, &a)| {
            let alice = T::int(i64::from((b >> n).count_ones()));
            let bob = T::int(i64::from((b & mask).count_ones()));
            a * Complex::from_polar(T::one(), -omega * (alice * t_a + bob * t_b))
        })
        .collect();
    StateVector { num_qubits: state.num_qubits, amps }
}

/// Outcome probabilities when every qubit is measured in the X basis
/// `|x~> = (|0> + (-1)^x |1>)/sqrt 2`, indexed by the outcome bitstring in the
/// same layout as the state.
pub fn measure_x_distribution<T: Real>(state: &StateVector<T>) -> Vec<T> {
    let mut rotated = state.clone();
    rotated.hadamard_all();
    rotated.probabilities()
}

/// Aggregates bitstring probabilities into the closed-form outcome classes of
/// `protocol`, with `n` qubits per party.
///
/// * GHZ: parity classes of the total number of ones.
/// * Singlet: `(M, M')` classes, `J - M` = zeros among Alice's bits.
/// * Bell: marginal of the first pair `(x_0, y_0)`; see [`pair_marginal`] for
///   the others.
pub fn aggregate<T: Real>(protocol: Protocol, n: u32, bit_probs: &[T]) -> OutcomeDistribution<T> {
    let nu = n as usize;
    let mask = (1usize << nu) - 1;
    match protocol {
        Protocol::BellSinglet => {
            let m = pair_marginal(n, 0, bit_probs);
            OutcomeDistribution {
                protocol,
                labels: vec![
                    OutcomeLabel::Pair { x: 0, y: 0 },
                    OutcomeLabel::Pair { x: 0, y: 1 },
                    OutcomeLabel::Pair { x: 1, y: 0 },
                    OutcomeLabel::Pair { x: 1, y: 1 },
                ],
                probs: m.to_vec(),
                parity: vec![1, -1, -1, 1],
            }
        }
        Protocol::Ghz => {
            let mut probs = [T::zero(); 2];
            for (b, &p) in bit_probs.iter().enumerate() {
                let idx = if b.count_ones() % 2 == 0 { 1 } else { 0 };
                probs[idx] = probs[idx] + p;
            }
            OutcomeDistribution {
                protocol,
                labels: vec![OutcomeLabel::Parity(-1), OutcomeLabel::Parity(1)],
                probs: probs.to_vec(),
                parity: vec![-1, 1],
            }
        }
        Protocol::SymmetricSinglet => {
            let dim = nu + 1;
            let mut probs = vec![T::zero(); dim * dim];
            for (b, &p) in bit_probs.iter().enumerate() {
                let a = (b >> nu).count_ones() as usize;
                let c = (b & mask).count_ones() as usize;
                probs[a * dim + c] = probs[a * dim + c] + p;
            }
            let mut labels = Vec::with_capacity(dim * dim);
            let mut parity = Vec::with_capacity(dim * dim);
            for a in 0..dim {
                for c in 0..dim {
                    labels.push(OutcomeLabel::Magnetic {
                        two_m: 2 * a as i32 - nu as i32,
                        two_m_prime: 2 * c as i32 - nu as i32,
                    });
                    // g = (-1)^{total ones}
                    parity.push(if (a + c) % 2 == 0 { 1 } else { -1 });
                }
            }
            OutcomeDistribution { protocol, labels, probs, parity }
        }
    }
}

/// Marginal `P(x_k, y_k)` of pair `k` in the order `(0,0), (0,1), (1,0), (1,1)`.
pub fn pair_marginal<T: Real>(n: u32, k: u32, bit_probs: &[T]) -> [T; 4] {
    let nu = n as usize;
    let alice_shift = 2 * nu - 1 - k as usize;
    let bob_shift = nu - 1 - k as usize;
    let mut out = [T::zero(); 4];
    for (b, &p) in bit_probs.iter().enumerate() {
        let x = (b >> alice_shift) & 1;
        let y = (b >> bob_shift) & 1;
        out[2 * x + y] = out[2 * x + y] + p;
    }
    out
}

/// Largest deviation of any bitstring probability from the even share of its
/// outcome class (`P(class) / class size`).
pub fn class_uniformity_defect<T: Real>(protocol: Protocol, n: u32, bit_probs: &[T]) -> T {
    let nu = n as usize;
    let mask = (1usize << nu) - 1;
    let classes = aggregate(protocol, n, bit_probs);
    let mut worst = T::zero();
    for (b, &p) in bit_probs.iter().enumerate() {
        let expected = match protocol {
            Protocol::Ghz => {
                let idx = if b.count_ones() % 2 == 0 { 1 } else { 0 };
                classes.probs[idx] / T::lit(2f64.powi(2 * nu as i32 - 1))
            }
            Protocol::SymmetricSinglet => {
                let a = (b >> nu).count_ones() as usize;
                let c = (b & mask).count_ones() as usize;
                let size = binomial::<T>(n, a as i64) * binomial::<T>(n, c as i64);
                classes.probs[a * (nu + 1) + c] / size
            }
            // pairs are independent: compare with the product of marginals
            Protocol::BellSinglet => {
                let mut prod = T::one();
                for k in 0..n {
                    let m = pair_marginal(n, k, bit_probs);
                    let x = (b >> (2 * nu - 1 - k as usize)) & 1;
                    let y = (b >> (nu - 1 - k as usize)) & 1;
                    prod = prod * m[2 * x + y];
                }
                prod
            }
        };
        worst = worst.max((p - expected).abs());
    }
    worst
}
