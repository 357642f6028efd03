//! Scalar abstraction shared by every numeric routine in the crate.

use std::fmt::{Debug, Display};
use std::iter::Sum;

use num_traits::{Float, FloatConst, FromPrimitive, ToPrimitive};

/// Real floating-point scalar the protocol math is generic over.
///
/// Implemented for `f32` and `f64`. Tolerances quoted throughout the crate
/// assume `f64`; `f32` is supported for the closed forms but the exact oracle
/// and finite-difference Fisher information are only meaningful in `f64`.
pub trait Real:
    Float + FloatConst + FromPrimitive + ToPrimitive + Sum + Debug + Display + Default + Send + Sync + 'static
{
    /// Converts an `f64` literal into `Self`.
    #[inline]
    fn lit(x: f64) -> Self {
        Self::from_f64(x).expect("f64 literal representable")
    }

    /// Converts a small integer into `Self`.
    #[inline]
    fn int(n: i64) -> Self {
        Self::from_i64(n).expect("integer representable")
    }

    #[inline]
    fn to_f64_lossy(self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }
}

impl Real for f32 {}
impl Real for f64 {}

/// Reduces `x` into `[0, period)`.
pub(crate) fn reduce_mod<T: Real>(x: T, period: T) -> T {
    let r = x % period;
    if r < T::zero() {
        r + period
    } else {
        r
    }
}

/// `(-1)^k` as a scalar.
#[inline]
pub(crate) fn sign_pow<T: Real>(k: i64) -> T {
    if k.rem_euclid(2) == 0 {
        T::one()
    } else {
        -T::one()
    }
}
