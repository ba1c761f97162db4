//! Estimation of the extreme columns and range vector of a column-permuted,
//! approximately rank-one monotone matrix observed with noise.
//!
//! The main entry point is [`estimators::spectral_extremes`], which sorts the
//! columns by the leading right singular vector of the row-centered data and
//! projects onto it. Baselines, rate calculators, a Monte Carlo harness and
//! the group-comparison statistics used on estimated log peak-to-trough
//! ratios live alongside.

pub mod analysis;
pub mod error;
pub mod estimators;
pub mod linalg;
pub mod simulation;
pub mod theory;

pub use error::{Error, Result};
pub use estimators::{estimate, EstimateOptions, ExtremeEstimates, Method};
pub use linalg::{ObservationMatrix, SignConvention, SvdOptions};
