//! Rotation math for spin-J representations built from N qubits.
//!
//! Half-integer quantum numbers are stored doubled (`two_j = 2J`, `two_m = 2M`)
//! so every index is an exact integer. Matrices over the Dicke basis are
//! ordered by `M` ascending from `-J`: row/column `i` holds `M = i - J`, i.e.
//! `2M = 2i - 2J`. A Dicke state `|J, M>` on `N = 2J` qubits has `J - M`
//! qubits in `|0>` and `J + M` qubits in `|1>`.

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::scalar::{reduce_mod, Real};

/// Largest `2J` accepted by [`wigner_small_d`].
pub const MAX_TWO_J: u32 = 128;

/// Returns `ln(n!)`.
///
/// For `n <= 20` the factorial is formed exactly as a `u64` product before the
/// logarithm is taken; beyond that the logarithms of the remaining factors are
/// accumulated onto `ln(20!)`.
pub fn log_factorial<T: Real>(n: u32) -> T {
    let exact = (2..=u64::from(n.min(20))).product::<u64>();
    let mut acc = (exact as f64).ln();
    for k in 21..=n {
        acc += f64::from(k).ln();
    }
    T::lit(acc)
}

/// Binomial coefficient `C(n, k)`, zero when `k` is outside `0..=n`.
///
/// Exact (as an integer converted to the scalar) while the intermediate
/// products fit in `u128`, which covers every `n <= 100`.
pub fn binomial<T: Real>(n: u32, k: i64) -> T {
    if k < 0 || k > i64::from(n) {
        return T::zero();
    }
    let k = k.min(i64::from(n) - k) as u128;
    let n128 = u128::from(n);
    let mut c: u128 = 1;
    for i in 0..k {
        match c.checked_mul(n128 - i) {
            Some(v) => c = v / (i + 1),
            None => {
                let ln = log_factorial::<f64>(n) - log_factorial::<f64>(k as u32) - log_factorial::<f64>(n - k as u32);
                return T::lit(ln.exp().round());
            }
        }
    }
    T::lit(c as f64)
}

/// Euler angles `(alpha, beta, gamma)` in radians.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct EulerAngles<T> {
    pub alpha: T,
    pub beta: T,
    pub gamma: T,
}

impl<T: Real> EulerAngles<T> {
    pub fn new(alpha: T, beta: T, gamma: T) -> Self {
        Self { alpha, beta, gamma }
    }

    /// The angles `(pi/2, beta, -pi/2)` that free evolution reduces to once the
    /// Hadamard frames are factored out.
    pub fn free_evolution(beta: T) -> Self {
        Self::new(T::FRAC_PI_2(), beta, -T::FRAC_PI_2())
    }

    pub fn is_finite(&self) -> bool {
        self.alpha.is_finite() && self.beta.is_finite() && self.gamma.is_finite()
    }
}

/// 2x2 complex matrix, row-major: `m[row][col]`.
pub type Mat2<T> = [[Complex<T>; 2]; 2];

/// Single-qubit unitary parametrised by Euler angles, in the basis `{|0>, |1>}`:
///
/// ```text
/// [  cos(b/2) e^{ i(a+g)/2}   sin(b/2) e^{-i(a-g)/2} ]
/// [ -sin(b/2) e^{ i(a-g)/2}   cos(b/2) e^{-i(a+g)/2} ]
/// ```
pub fn euler_unitary<T: Real>(angles: EulerAngles<T>) -> Mat2<T> {
    let half = T::lit(0.5);
    let (s, c) = (angles.beta * half).sin_cos();
    let sum = (angles.alpha + angles.gamma) * half;
    let diff = (angles.alpha - angles.gamma) * half;
    let phase = |theta: T| Complex::from_polar(T::one(), theta);
    [[phase(sum) * c, phase(-diff) * s], [phase(diff) * (-s), phase(-sum) * c]]
}

/// Wigner small-d matrix `d^J_{M', M}(beta)` over the Dicke basis.
#[derive(Debug, Clone, PartialEq)]
pub struct WignerSmallD<T> {
    two_j: u32,
    beta: T,
    entries: Vec<T>,
}

impl<T: Real> WignerSmallD<T> {
    pub fn two_j(&self) -> u32 {
        self.two_j
    }

    pub fn beta(&self) -> T {
        self.beta
    }

    /// Matrix dimension `2J + 1`.
    pub fn dim(&self) -> usize {
        self.two_j as usize + 1
    }

    /// Entry at row `i` (`M'`) and column `k` (`M`) in basis-index form.
    #[inline]
    pub fn at(&self, i: usize, k: usize) -> T {
        self.entries[i * self.dim() + k]
    }

    /// `d^J_{M', M}` addressed by doubled magnetic numbers, zero outside the
    /// representation.
    pub fn get(&self, two_m_prime: i32, two_m: i32) -> T {
        match (index_of(self.two_j, two_m_prime), index_of(self.two_j, two_m)) {
            (Some(i), Some(k)) => self.at(i, k),
            _ => T::zero(),
        }
    }

    /// Row-major entries.
    pub fn entries(&self) -> &[T] {
        &self.entries
    }

    /// Matrix product `self * other`; both must share `2J`.
    pub fn matmul(&self, other: &Self) -> Vec<T> {
        assert_eq!(self.two_j, other.two_j, "matmul across different spins");
        let n = self.dim();
        let mut out = vec![T::zero(); n * n];
        for i in 0..n {
            for k in 0..n {
                out[i * n + k] = (0..n).map(|l| self.at(i, l) * other.at(l, k)).sum();
            }
        }
        out
    }
}

/// Basis index of doubled magnetic number `two_m`, if it belongs to spin `two_j`.
pub fn index_of(two_j: u32, two_m: i32) -> Option<usize> {
    let shifted = two_m + two_j as i32;
    if two_m.abs() > two_j as i32 || shifted % 2 != 0 {
        None
    } else {
        Some((shifted / 2) as usize)
    }
}

/// Doubled magnetic number held at basis index `i`.
#[inline]
pub fn two_m_at(two_j: u32, i: usize) -> i32 {
    2 * i as i32 - two_j as i32
}

/// Builds `d^J(beta)` for `2J = two_j`.
///
/// The matrix is grown one qubit at a time: a Dicke state on `n` qubits
/// splits over the last qubit as
/// `|J,M> = sqrt((J+M)/2J) |J-1/2, M-1/2>|1> + sqrt((J-M)/2J) |J-1/2, M+1/2>|0>`,
/// so each `d^J` entry is a four-term combination of `d^{J-1/2}` entries and
/// the spin-1/2 matrix `[[c, s], [-s, c]]`, `c = cos(beta/2)`, `s = sin(beta/2)`.
/// Every step composes bounded quantities, which keeps the recursion accurate
/// at `2J = 128` where the alternating closed-form sum loses all digits.
pub fn wigner_small_d<T: Real>(two_j: u32, beta: T) -> Result<WignerSmallD<T>> {
    if two_j == 0 || two_j > MAX_TWO_J {
        return Err(Error::SpinOutOfRange { got: two_j, max: MAX_TWO_J });
    }
    let four_pi = T::PI() * T::lit(4.0);
    let (s, c) = (reduce_mod(beta, four_pi) * T::lit(0.5)).sin_cos();

    let mut prev = vec![T::one()];
    for n in 1..=two_j as usize {
        let dim = n + 1;
        let pdim = n;
        let mut next = vec![T::zero(); dim * dim];
        let scale = T::int(n as i64);
        for a in 0..dim {
            for b in 0..dim {
                let mut acc = T::zero();
                if a > 0 && b > 0 {
                    let w = T::int((a * b) as i64).sqrt();
                    acc = acc + w * c * prev[(a - 1) * pdim + (b - 1)];
                }
                if a > 0 && b < n {
                    let w = T::int((a * (n - b)) as i64).sqrt();
                    acc = acc - w * s * prev[(a - 1) * pdim + b];
                }
                if a < n && b > 0 {
                    let w = T::int(((n - a) * b) as i64).sqrt();
                    acc = acc + w * s * prev[a * pdim + (b - 1)];
                }
                if a < n && b < n {
                    let w = T::int(((n - a) * (n - b)) as i64).sqrt();
                    acc = acc + w * c * prev[a * pdim + b];
                }
                next[a * dim + b] = acc / scale;
            }
        }
        prev = next;
    }
    Ok(WignerSmallD { two_j, beta, entries: prev })
}

/// Single element `d^J_{M', M}(beta)` from the explicit finite sum
///
/// `sum_k (-1)^(k - M + M') sqrt((J+M')!(J-M')!(J+M)!(J-M)!)
///   / ((J+M-k)! k! (J-M'-k)! (k-M+M')!) c^(2J+M-M'-2k) s^(2k-M+M')`
///
/// with factorials in log form. Independent of the recursion in
/// [`wigner_small_d`]; loses accuracy through cancellation once `2J`
/// passes roughly 40.
pub fn small_d_element<T: Real>(two_j: u32, two_m_prime: i32, two_m: i32, beta: T) -> Result<T> {
    if two_j == 0 || two_j > MAX_TWO_J {
        return Err(Error::SpinOutOfRange { got: two_j, max: MAX_TWO_J });
    }
    for tm in [two_m_prime, two_m] {
        if index_of(two_j, tm).is_none() {
            return Err(Error::MagneticOutOfRange { two_j, two_m: tm });
        }
    }
    let tj = two_j as i32;
    // integer quantities J+M', J-M', J+M, J-M
    let jpmp = (tj + two_m_prime) / 2;
    let jmmp = (tj - two_m_prime) / 2;
    let jpm = (tj + two_m) / 2;
    let jmm = (tj - two_m) / 2;
    let m_diff = (two_m_prime - two_m) / 2; // M' - M

    let lf = |n: i32| log_factorial::<f64>(n as u32);
    let half_beta = reduce_mod(beta.to_f64_lossy(), 4.0 * std::f64::consts::PI) * 0.5;
    let (s, c) = half_beta.sin_cos();
    let prefactor = 0.5 * (lf(jpmp) + lf(jmmp) + lf(jpm) + lf(jmm));

    let k_min = 0.max(-m_diff);
    let k_max = jpm.min(jmmp);
    let mut sum = 0.0;
    for k in k_min..=k_max {
        let cos_pow = tj + (two_m - two_m_prime) / 2 - 2 * k;
        let sin_pow = 2 * k + m_diff;
        let log_mag = prefactor - lf(jpm - k) - lf(k) - lf(jmmp - k) - lf(k + m_diff);
        let term = log_mag.exp() * c.powi(cos_pow) * s.powi(sin_pow);
        if (k + m_diff).rem_euclid(2) == 0 {
            sum += term;
        } else {
            sum -= term;
        }
    }
    Ok(T::lit(sum))
}

/// Amplitudes over `M'` of `U(alpha, beta, gamma)^{(x)N} |J, M>`:
/// the coefficient of `|J, M'>` is `e^{-i(M alpha + M' gamma)} d^J_{M', M}(beta)`.
pub fn rotate_dicke<T: Real>(two_j: u32, angles: EulerAngles<T>, two_m: i32) -> Result<Vec<Complex<T>>> {
    let d = wigner_small_d(two_j, angles.beta)?;
    let col = index_of(two_j, two_m).ok_or(Error::MagneticOutOfRange { two_j, two_m })?;
    let half = T::lit(0.5);
    let m = T::int(i64::from(two_m)) * half;
    Ok((0..d.dim())
        .map(|row| {
            let mp = T::int(i64::from(two_m_at(two_j, row))) * half;
            let phase = -(m * angles.alpha + mp * angles.gamma);
            Complex::from_polar(T::one(), phase) * d.at(row, col)
        })
        .collect())
}
