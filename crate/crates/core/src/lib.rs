//! Complex harmonic means.
//!
//! For a random variable `Z` taking non-zero complex values, the complex
//! harmonic mean is `H[Z] = E[Z^-1]^-1`, defined whenever `E[Z^-1]` is a
//! non-zero complex number. This crate computes it for finite distributions
//! and empirical sample sets, and turns the known bounds on `H[Z]` into
//! executable checks:
//!
//! * `|H[Z]| >= H[|Z|]` ([`estimates::check_modulus`])
//! * `c . H[Z] >= H[c . Z]` when the range sits in a half-plane `c . z >= a > 0`
//!   ([`estimates::check_inner_product`])
//! * `Range[Z]` inside a closed disk that does not contain 0 in its interior
//!   forces `H[Z]` into the same disk ([`estimates::check_disk_bound`])
//! * for two-point laws, `H[Z]` travels along the arc through `c1`, `c2`, 0
//!   or along the segment `[c1, c2]` ([`estimates::check_two_point`])
//!
//! The geometry behind the disk bound lives in [`geometry`]: generalized
//! circles under `z -> 1/z`, disk and half-plane regions. [`montecarlo`]
//! samples the complex normal law and runs the complex lognormal experiment,
//! where arithmetic and harmonic means coincide. [`suites`] drives the
//! randomized verification populations.

// `!(x > 0.0)` is used on purpose: it also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod error;
pub mod estimates;
pub mod geometry;
pub mod montecarlo;
pub mod rv;
pub mod serde_complex;
pub mod suites;

pub use error::{Error, Result};
pub use estimates::{BoundName, BoundReport, Quantity};
pub use geometry::{Circline, LocusDescription, Region};
pub use rv::{ComplexLaw, ComplexScalar, FiniteDistribution, RealDistribution, SampleSet};

/// Below this modulus `E[Z^-1]` is treated as zero and `H[Z]` as nonexistent.
pub const DEFAULT_DEGENERATE_EPS: f64 = 1e-13;

/// Default tolerance used by every bound report.
pub const DEFAULT_TOL: f64 = 1e-10;
