//! Numerics for the Gaussian wiretap channel when secrecy is measured by
//! decoding error probability rather than equivocation.
//!
//! - [`channel`]: capacities, secrecy capacity, rate regimes and the reduced
//!   power that keeps a low rate secure.
//! - [`finite_blocklength`]: Gaussian tail function, dispersion, and the
//!   blocklength needed for joint error targets at Bob and Eve.
//! - [`error_exponents`]: Gallager `E0`, random-coding bounds for Bob and
//!   Arimoto's strong-converse bound for Eve.
//! - [`equivocation`]: Fano and entropy/error-envelope bounds on `H(W|Z^n)`.
//! - [`fading`]: power allocation and capacities on the fading wiretap channel.
//! - [`sim`]: random-codebook Monte Carlo with ML decoding.
//!
//! The crate is `no_std` (with `alloc`) when built without the default `std`
//! feature. The `parallel` feature runs Monte Carlo work on rayon without
//! changing any result.

#![cfg_attr(not(feature = "std"), no_std)]
#![deny(unsafe_code)]
#![allow(clippy::excessive_precision, clippy::neg_cmp_op_on_partial_ord)]

extern crate alloc;

pub mod channel;
pub mod equivocation;
pub mod error;
pub mod error_exponents;
pub mod fading;
pub mod finite_blocklength;
mod math;
pub mod optimize;
pub mod quadrature;
pub mod sim;

pub use channel::{
    assess_rate, capacities, wyner_operating_points, CapacitySummary, RateAssessment, Regime,
    WiretapChannel,
};
pub use error::{Error, Result};
pub use error_exponents::ExponentResult;
pub use fading::{FadingCapacityResult, FadingConfig};
pub use sim::{SimConfig, SimResult};
