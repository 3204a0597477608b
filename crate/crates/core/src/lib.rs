//! Overlap measures between densities and their use as a decision summary in
//! comparative trials.
//!
//! The central quantity is `O_M(p0, p1)`, the probability that an outcome drawn
//! from `p1` is accepted as a replacement for an outcome drawn from `p0` under
//! a Metropolis–Hastings acceptance step. Around it the crate provides the
//! classical overlap coefficient, the Barker and crossmatch variants, bound
//! checks, a matching-based sample estimator, the finite-set analogue, and the
//! one-sided normal-mean test it is contrasted with.

pub mod bounds;
pub mod cli;
pub mod crossmatch;
pub mod density;
pub mod error;
pub mod input;
pub mod normal;
pub mod overlap;
pub mod quadrature;
pub mod report;
pub mod rng;
pub mod sets;
pub mod trial;

pub use bounds::{BoundCheck, BoundsReport, GridSpec};
pub use crossmatch::{CrossSamples, MatchingResult};
pub use density::{kde_fit, normal_density, normal_quantile, DensityModel};
pub use error::{Error, Result};
pub use overlap::{Measure, Method, OverlapEstimate};
pub use trial::{BootstrapSummary, TrialConfig, TrialDecision};
