//! Monte Carlo risk evaluation over simulated scenarios.

use std::fmt;
use std::io::Write;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::generators::{
    generate_custom_linear, generate_s1, generate_s2, random_permutation, synthesize_observation,
    GroundTruth,
};
use super::risk::empirical_risk;
use super::rng::trial_stream;
use crate::error::{Error, Result};
use crate::estimators::{estimate, EstimateOptions, ExtremeEstimates, Method};
use crate::linalg::Permutation;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum ScenarioKind {
    /// Linear growth, `η = (-1, 0, …, 0, 1)`.
    S1,
    /// `θᵢⱼ = ln(1 + aᵢ j + bᵢ)`.
    S2,
    /// Linear growth with sorted, centered standard-normal `η`.
    CustomLinear,
}

#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub enum PermutationMode {
    Identity,
    #[default]
    UniformRandom,
    Given(Permutation),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct ScenarioSpec {
    pub kind: ScenarioKind,
    pub n: usize,
    pub p: usize,
    pub alpha: f64,
    pub sigma: f64,
    #[serde(default)]
    pub permutation: PermutationMode,
    #[serde(default)]
    pub seed: u64,
}

impl ScenarioSpec {
    pub fn validate(&self) -> Result<()> {
        if self.n < 2 || self.p < 3 {
            return Err(Error::InvalidArgument(format!(
                "scenario needs n >= 2 and p >= 3, got n={}, p={}",
                self.n, self.p
            )));
        }
        if !(self.alpha >= 0.0 && self.alpha.is_finite()) {
            return Err(Error::InvalidArgument(format!("alpha must be >= 0, got {}", self.alpha)));
        }
        if !(self.sigma >= 0.0 && self.sigma.is_finite()) {
            return Err(Error::InvalidArgument(format!("sigma must be >= 0, got {}", self.sigma)));
        }
        if let PermutationMode::Given(pi) = &self.permutation {
            if pi.len() != self.p {
                return Err(Error::LengthMismatch {
                    left: pi.len(),
                    right: self.p,
                });
            }
        }
        Ok(())
    }

    /// Draws the signal, the permutation and the observation for one replicate.
    pub fn draw(&self, replicate: u64) -> Result<(GroundTruth, crate::linalg::ObservationMatrix)> {
        let mut rng = trial_stream(self.seed, replicate);
        let mut truth = match self.kind {
            ScenarioKind::S1 => generate_s1(self.n, self.p, self.alpha, &mut rng)?.1,
            ScenarioKind::S2 => generate_s2(self.n, self.p, self.alpha, &mut rng)?.1,
            ScenarioKind::CustomLinear => {
                generate_custom_linear(self.n, self.p, self.alpha, &mut rng)?.1
            }
        };
        truth.pi = match &self.permutation {
            PermutationMode::Identity => Permutation::identity(self.p),
            PermutationMode::UniformRandom => random_permutation(self.p, &mut rng),
            PermutationMode::Given(pi) => pi.clone(),
        };
        let y = synthesize_observation(&truth.theta, self.sigma, &truth.pi, &mut rng)?;
        Ok((truth, y))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub enum Target {
    ThetaR,
    ThetaL,
    Range,
}

impl Target {
    pub const ALL: [Target; 3] = [Target::ThetaR, Target::ThetaL, Target::Range];

    pub fn as_str(self) -> &'static str {
        match self {
            Target::ThetaR => "thetaR",
            Target::ThetaL => "thetaL",
            Target::Range => "range",
        }
    }
}

impl fmt::Display for Target {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct RunOptions {
    /// Score each estimate against the better of the two orientations.
    pub align: bool,
    pub estimate: EstimateOptions,
}

/// Simulation config file: a scenario plus the estimators to evaluate.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct SimulationConfig {
    #[serde(flatten)]
    pub scenario: ScenarioSpec,
    #[serde(default = "default_estimators")]
    pub estimators: Vec<Method>,
    #[serde(default)]
    pub align: bool,
    #[serde(default = "default_trim")]
    pub trim_fraction: f64,
}

fn default_estimators() -> Vec<Method> {
    vec![Method::Spectral, Method::DirectSorting, Method::OrderStatistic]
}

fn default_trim() -> f64 {
    crate::estimators::DEFAULT_TRIM_FRACTION
}

impl SimulationConfig {
    pub fn run_options(&self) -> RunOptions {
        RunOptions {
            align: self.align,
            estimate: EstimateOptions {
                trim_fraction: self.trim_fraction,
                ..EstimateOptions::default()
            },
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct RiskSummary {
    pub count: usize,
    pub failed: usize,
    pub mean: Option<f64>,
    pub sd: Option<f64>,
    pub q1: Option<f64>,
    pub median: Option<f64>,
    pub q3: Option<f64>,
}

impl RiskSummary {
    fn from_risks(risks: &[Option<f64>]) -> Self {
        let mut ok: Vec<f64> = risks.iter().flatten().copied().collect();
        let failed = risks.len() - ok.len();
        ok.sort_by(f64::total_cmp);
        let count = ok.len();
        if count == 0 {
            return Self {
                count,
                failed,
                mean: None,
                sd: None,
                q1: None,
                median: None,
                q3: None,
            };
        }
        let mean = ok.iter().sum::<f64>() / count as f64;
        let sd = if count > 1 {
            (ok.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (count - 1) as f64).sqrt()
        } else {
            0.0
        };
        Self {
            count,
            failed,
            mean: Some(mean),
            sd: Some(sd),
            q1: Some(quantile_sorted(&ok, 0.25)),
            median: Some(quantile_sorted(&ok, 0.5)),
            q3: Some(quantile_sorted(&ok, 0.75)),
        }
    }
}

/// Linear-interpolation quantile of sorted data (R type 7).
pub fn quantile_sorted(sorted: &[f64], q: f64) -> f64 {
    let h = (sorted.len() - 1) as f64 * q;
    let lo = h.floor() as usize;
    let hi = h.ceil() as usize;
    sorted[lo] + (h - lo as f64) * (sorted[hi] - sorted[lo])
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct RiskSeries {
    pub estimator: Method,
    pub target: Target,
    /// One entry per replicate; `None` marks a failed replicate.
    pub risks: Vec<Option<f64>>,
    pub summary: RiskSummary,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct RiskReport {
    pub scenario: ScenarioSpec,
    pub estimators: Vec<Method>,
    pub reps: usize,
    pub options: RunOptions,
    pub master_seed: u64,
    pub series: Vec<RiskSeries>,
}

impl RiskReport {
    pub fn series(&self, estimator: Method, target: Target) -> Option<&RiskSeries> {
        self.series
            .iter()
            .find(|s| s.estimator == estimator && s.target == target)
    }

    /// Tidy CSV: `estimator,target,replicate,risk`, failed replicates left blank.
    pub fn write_csv<W: Write>(&self, mut out: W) -> std::io::Result<()> {
        writeln!(out, "estimator,target,replicate,risk")?;
        for s in &self.series {
            for (r, risk) in s.risks.iter().enumerate() {
                match risk {
                    Some(v) => writeln!(out, "{},{},{},{}", s.estimator, s.target, r, v)?,
                    None => writeln!(out, "{},{},{},", s.estimator, s.target, r)?,
                }
            }
        }
        Ok(())
    }

    pub fn to_csv_string(&self) -> String {
        let mut buf = Vec::new();
        self.write_csv(&mut buf).expect("writing to a Vec cannot fail");
        String::from_utf8(buf).expect("CSV output is ASCII")
    }
}

type TrialRisks = Vec<[Option<f64>; 3]>;

fn score(est: &ExtremeEstimates, truth: &GroundTruth, align: bool) -> Result<[Option<f64>; 3]> {
    let neg_range: Vec<f64> = est.range.iter().map(|r| -r).collect();
    Ok([
        Some(empirical_risk(&est.theta_r, &truth.theta_r, align, Some(&est.theta_l))?),
        Some(empirical_risk(&est.theta_l, &truth.theta_l, align, Some(&est.theta_r))?),
        Some(empirical_risk(&est.range, &truth.range, align, Some(&neg_range))?),
    ])
}

fn run_trial(
    spec: &ScenarioSpec,
    estimators: &[Method],
    opts: &RunOptions,
    replicate: u64,
) -> TrialRisks {
    let failed = vec![[None; 3]; estimators.len()];
    let Ok((truth, y)) = spec.draw(replicate) else {
        return failed;
    };
    estimators
        .iter()
        .map(|&m| {
            estimate(&y, m, &opts.estimate)
                .and_then(|est| score(&est, &truth, opts.align))
                .unwrap_or([None; 3])
        })
        .collect()
}

/// [`run_monte_carlo_with`] using default options.
pub fn run_monte_carlo(spec: &ScenarioSpec, estimators: &[Method], reps: usize) -> Result<RiskReport> {
    run_monte_carlo_with(spec, estimators, reps, &RunOptions::default())
}

/// Evaluates every estimator on `reps` independent replicates of `spec`.
///
/// Replicate `r` draws from the stream seeded by `trial_seed(spec.seed, r)`,
/// and replicates run in parallel on the current rayon pool. Results are
/// stored by replicate index, so the report does not depend on scheduling.
/// Replicates whose draw or estimate fails are kept as `None` and excluded
/// from the summaries.
pub fn run_monte_carlo_with(
    spec: &ScenarioSpec,
    estimators: &[Method],
    reps: usize,
    opts: &RunOptions,
) -> Result<RiskReport> {
    spec.validate()?;
    if reps == 0 {
        return Err(Error::InvalidArgument("reps must be at least 1".into()));
    }
    let mut methods: Vec<Method> = Vec::with_capacity(estimators.len());
    for &m in estimators {
        if !methods.contains(&m) {
            methods.push(m);
        }
    }
    if methods.is_empty() {
        return Err(Error::InvalidArgument("no estimators requested".into()));
    }

    let trials: Vec<TrialRisks> = (0..reps as u64)
        .into_par_iter()
        .map(|r| run_trial(spec, &methods, opts, r))
        .collect();

    let mut series = Vec::with_capacity(methods.len() * 3);
    for (mi, &m) in methods.iter().enumerate() {
        for (ti, &target) in Target::ALL.iter().enumerate() {
            let risks: Vec<Option<f64>> = trials.iter().map(|t| t[mi][ti]).collect();
            series.push(RiskSeries {
                estimator: m,
                target,
                summary: RiskSummary::from_risks(&risks),
                risks,
            });
        }
    }

    Ok(RiskReport {
        scenario: spec.clone(),
        estimators: methods,
        reps,
        options: *opts,
        master_seed: spec.seed,
        series,
    })
}
