use crate::error::Result;
use crate::protocols::{self, ClockParams, ProtocolSpec};
use crate::scalar::Real;

/// Classes with probability below this are left out of the numeric sum.
pub const MIN_CLASS_PROBABILITY: f64 = 1e-12;

/// Finite-difference Fisher information.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FisherNumeric<T> {
    pub value: T,
    /// Classes dropped for having `P < 1e-12`.
    pub skipped_classes: usize,
}

/// `F_Y = sum_xi (dP/dY)^2 / P`, with `dP/dY` from central differences of step
/// `h = 1e-6 / omega` on the closed-form distribution.
///
/// `|Y|` should sit well away from points where a class probability and its
/// derivative vanish together (for instance `Y = 0`), where dropping
/// near-empty classes discards a finite contribution.
pub fn fisher_information_numeric<T: Real>(spec: &ProtocolSpec, clock: &ClockParams<T>) -> Result<FisherNumeric<T>> {
    let omega = clock.omega();
    let y = clock.offset();
    let h = T::lit(1e-6) / omega;
    let centre = protocols::outcome_distribution(spec, clock);
    let plus = protocols::outcome_distribution(spec, &ClockParams::new(omega, y + h)?);
    let minus = protocols::outcome_distribution(spec, &ClockParams::new(omega, y - h)?);
    let floor = T::lit(MIN_CLASS_PROBABILITY);
    let two_h = h + h;
    let mut value = T::zero();
    let mut skipped = 0;
    for ((&p, &pp), &pm) in centre.probs.iter().zip(&plus.probs).zip(&minus.probs) {
        if p < floor {
            skipped += 1;
            continue;
        }
        let dp = (pp - pm) / two_h;
        value = value + dp * dp / p;
    }
    Ok(FisherNumeric { value, skipped_classes: skipped })
}
