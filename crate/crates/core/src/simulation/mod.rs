//! Signal generators, noisy observations, empirical risk and a
//! deterministic Monte Carlo harness.

mod generators;
mod monte_carlo;
mod risk;
pub mod rng;

pub use generators::{
    generate_custom_linear, generate_s1, generate_s2, random_permutation, s2_theta,
    synthesize_observation, GroundTruth, LinearGrowthSignal, INTERCEPT_MAX,
};
pub use monte_carlo::{
    quantile_sorted, run_monte_carlo, run_monte_carlo_with, PermutationMode, RiskReport,
    RiskSeries, RiskSummary, RunOptions, ScenarioKind, ScenarioSpec, SimulationConfig, Target,
};
pub use risk::empirical_risk;
