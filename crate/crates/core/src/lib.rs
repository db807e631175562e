//! Bessel functions of the first kind and the zeroes of `J_{ν-1} ± J_ν`.
//!
//! The zeroes of the cross-combinations are enumerated inside brackets whose
//! endpoints are zeroes of `J_{ν-1}`, `J_ν` and their derivatives; the
//! interlacing relations between these sequences guarantee exactly one sign
//! change per bracket. The same zeroes give the spectrum of a graphene disk
//! with infinite-mass confinement, from which the mean carrier number, the
//! smoothed counting function and the level-spacing statistics follow.
//!
//! Module map:
//!
//! * [`bessel`]: `J_ν`, `J'_ν` and `J_{ν-1} ± J_ν` for real `ν ≥ 0`, `x ≥ 0`.
//! * [`zeros`]: certified zero enumeration and the interlacing verifier.
//! * [`spectrum`]: disk eigenvalues, energies, gap and mode normalization.
//! * [`charge`]: mean number at zero and finite temperature, Weyl term,
//!   spacing statistics and conductance peaks.
//! * [`cli`]: run configuration, CSV/JSON rendering and the zero cache used
//!   by the `nanodot` binary.

pub mod bessel;
pub mod charge;
pub mod cli;
pub mod error;
pub mod spectrum;
pub mod zeros;

pub use bessel::{bessel_j, bessel_j_prime, cross_combination, EvalResult, Order, Sign};
pub use error::{Error, Result};

/// Library version written into cache entries and JSON metadata.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");
