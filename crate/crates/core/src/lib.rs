//! Equal-measure partitions, distance sums and ball discrepancies on compact
//! metric-measure spaces.
//!
//! The crate is `no_std` and only needs `alloc`. Everything that touches the
//! file system, the command line or serialization formats lives in the
//! `rectdisc` companion crate.
//!
//! Layout:
//!
//! - [`spaces`]: the metric-measure space abstraction, the registered space
//!   catalogue (circle, flat tori, Euclidean cubes, Hamming cubes, the
//!   two-sphere, generic finite spaces), rectifiable charts and radial
//!   measures `ξ` on the set of radii.
//! - [`partition`]: inverse-CDF segment splitting, the inductive
//!   equal-measure box partition of the unit cube and its pushforward
//!   through a chart.
//! - [`discrepancy`]: distance sums, local and L2 ball discrepancies,
//!   symmetric-difference metrics and kernel components.
//! - [`invariance`]: exact and probabilistic invariance checks, the product
//!   sampler over partition cells, and extremal bound reports.
#![no_std]
#![warn(missing_debug_implementations)]
// Float methods come from `num_traits::Float` in no_std builds but resolve to
// inherent std methods in test builds.
// `Float` imports are only needed where `f64` lacks inherent methods.
#![cfg_attr(not(target_os = "none"), allow(unused_imports))]
#![allow(clippy::neg_cmp_op_on_partial_ord)]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod discrepancy;
mod error;
pub mod invariance;
pub mod numeric;
pub mod partition;
pub mod spaces;

pub use error::{Error, Result};
pub use numeric::{Estimate, Method};

/// Rational type used by the exact backends.
pub type Rational = num_rational::BigRational;

/// Version string stamped into emitted records.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");
