//! Extreme-column and range estimators.
//!
//! Every estimator returns a full [`ExtremeEstimates`] record so that the
//! evaluation harness can treat them uniformly. `range` is always computed as
//! `theta_r - theta_l`.

mod baselines;
mod spectral;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{Ranking, SingularTriple, SvdOptions};

pub use baselines::{irep_extremes, irep_range, order_statistic_extremes, DEFAULT_TRIM_FRACTION};
pub use spectral::{direct_sorting_extremes, regression_extremes, spectral_extremes};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub enum Method {
    Spectral,
    Regression,
    #[serde(alias = "ds")]
    DirectSorting,
    #[serde(alias = "os")]
    OrderStatistic,
    #[serde(rename = "irep")]
    IRep,
}

impl Method {
    pub const ALL: [Method; 5] = [
        Method::Spectral,
        Method::Regression,
        Method::DirectSorting,
        Method::OrderStatistic,
        Method::IRep,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Method::Spectral => "spectral",
            Method::Regression => "regression",
            Method::DirectSorting => "directSorting",
            Method::OrderStatistic => "orderStatistic",
            Method::IRep => "irep",
        }
    }

    pub fn uses_svd(self) -> bool {
        matches!(
            self,
            Method::Spectral | Method::Regression | Method::DirectSorting
        )
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "spectral" => Ok(Method::Spectral),
            "regression" => Ok(Method::Regression),
            "ds" | "directSorting" => Ok(Method::DirectSorting),
            "os" | "orderStatistic" => Ok(Method::OrderStatistic),
            "irep" => Ok(Method::IRep),
            other => Err(Error::InvalidArgument(format!("unknown method {other:?}"))),
        }
    }
}

/// Spectral quantities shared by the SVD-based estimators.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct SpectralFit {
    pub triple: SingularTriple,
    /// Ranking of `v̂`; `ranking.order` is the permutation estimate.
    pub ranking: Ranking,
    /// `v̂₍ₚ₎`
    pub v_max: f64,
    /// `v̂₍₁₎`
    pub v_min: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct ExtremeEstimates {
    pub method: Method,
    pub theta_r: Vec<f64>,
    pub theta_l: Vec<f64>,
    pub range: Vec<f64>,
    /// Absent for the per-row baselines, which never compute an SVD.
    pub spectral: Option<SpectralFit>,
}

impl ExtremeEstimates {
    pub(crate) fn from_ends(
        method: Method,
        theta_r: Vec<f64>,
        theta_l: Vec<f64>,
        spectral: Option<SpectralFit>,
    ) -> Self {
        let range = theta_r.iter().zip(&theta_l).map(|(r, l)| r - l).collect();
        Self {
            method,
            theta_r,
            theta_l,
            range,
            spectral,
        }
    }

    pub fn n(&self) -> usize {
        self.range.len()
    }

    pub fn permutation_hat(&self) -> Option<&[usize]> {
        self.spectral.as_ref().map(|s| s.ranking.order.as_slice())
    }
}

/// Options for [`estimate`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct EstimateOptions {
    pub svd: SvdOptions,
    pub trim_fraction: f64,
}

impl Default for EstimateOptions {
    fn default() -> Self {
        Self {
            svd: SvdOptions::default(),
            trim_fraction: DEFAULT_TRIM_FRACTION,
        }
    }
}

/// Runs `method` on `y`.
pub fn estimate(
    y: &crate::linalg::ObservationMatrix,
    method: Method,
    opts: &EstimateOptions,
) -> Result<ExtremeEstimates> {
    match method {
        Method::Spectral => spectral_extremes(y, &opts.svd),
        Method::Regression => regression_extremes(y, &opts.svd),
        Method::DirectSorting => direct_sorting_extremes(y, &opts.svd),
        Method::OrderStatistic => order_statistic_extremes(y),
        Method::IRep => irep_extremes(y, opts.trim_fraction),
    }
}
