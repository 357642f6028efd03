//! Simulation and estimation toolkit for entanglement-based clock
//! synchronization.
//!
//! Two remote parties share an entangled state, each measures every qubit in
//! the X basis when their own clock reads the same value, and the offset `Y`
//! between the clocks shows up in the outcome statistics through the phase
//! `beta = omega |Y|`. Three resource states are modelled: independent Bell
//! singlet pairs, GHZ states, and the spin-zero singlet of two Dicke
//! registers.
//!
//! * [`wigner`]: Euler-angle qubit rotations and Wigner small-d matrices.
//! * [`protocols`]: closed-form distributions, expectations, Fisher
//!   information, ambiguity windows and Cramer-Rao bounds.
//! * [`exact_oracle`]: brute-force state vectors that check the closed forms.
//! * [`monte_carlo`]: seeded sampling, estimation and the Chernoff criterion.
//!
//! All numerics are generic over [`Real`] (`f32`, `f64`); the `*F64` aliases
//! below fix the scalar for the common case.

pub mod error;
pub mod exact_oracle;
pub mod monte_carlo;
pub mod protocols;
pub mod scalar;
pub mod wigner;

pub use error::{Error, Result};
pub use protocols::{ClockParams, OutcomeDistribution, OutcomeLabel, Protocol, ProtocolSpec};
pub use scalar::Real;
pub use wigner::{EulerAngles, WignerSmallD};

pub type ClockParamsF64 = ClockParams<f64>;
pub type OutcomeDistributionF64 = OutcomeDistribution<f64>;
pub type WignerSmallDF64 = WignerSmallD<f64>;
pub type EulerAnglesF64 = EulerAngles<f64>;
pub type StateVectorF64 = exact_oracle::StateVector<f64>;
pub type EstimateReportF64 = monte_carlo::EstimateReport<f64>;
pub type JudgementReportF64 = monte_carlo::JudgementReport<f64>;
pub type RmseReportF64 = monte_carlo::RmseReport<f64>;
