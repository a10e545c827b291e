//! Spatial degrees-of-freedom regions for a three-node full-duplex network.
//!
//! A full-duplex base station serves an uplink user (flow 1, `T₁ → R₁`) and a
//! downlink user (flow 2, `T₂ → R₂`) at once. Each array is described by its
//! half-length and each channel by the directional-cosine intervals it
//! occupies. From these the crate computes the half-duplex region, the
//! full-duplex region with self- and inter-node interference, and the
//! full-duplex region with self-interference only.
//!
//! All geometry is exact over [`Rational`]; the core is generic over
//! [`Scalar`] so `f64` and arbitrary-precision rationals work too. The
//! [`oracle`] module checks the dimension formulas against random finite
//! matrices.

pub mod cli;
pub mod dof_region;
pub mod error;
pub mod interval_set;
pub mod io;
pub mod library;
pub mod oracle;
pub mod sampling;
pub mod scalar;
pub mod scenario;

pub use dof_region::{DofRegion, Point};
pub use error::{Error, Result};
pub use interval_set::IntervalSet;
pub use scalar::Scalar;
pub use scenario::Scenario;

/// Exact rational with `i64` parts; overflow panics in every profile this
/// workspace builds.
pub type Rational = num_rational::Ratio<i64>;

pub type IntervalSetF64 = IntervalSet<f64>;
pub type ScenarioF64 = Scenario<f64>;
pub type DofRegionF64 = DofRegion<f64>;
