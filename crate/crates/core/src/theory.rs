//! Rate calculators for extreme-column estimation.
//!
//! All rates are reported with unit constants: they describe orders of
//! magnitude, not calibrated risks. Logarithms are natural.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Signal strength `t`, extreme-component bounds `β_R`, `β_L` of the leading
/// right singular vector, and noise level `σ`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct SignalIndices {
    pub t: f64,
    pub beta_r: f64,
    pub beta_l: f64,
    pub sigma: f64,
}

impl SignalIndices {
    pub fn validate(&self) -> Result<()> {
        let ok = self.t >= 0.0
            && self.t.is_finite()
            && (0.0..=1.0).contains(&self.beta_r)
            && (0.0..=1.0).contains(&self.beta_l)
            && self.sigma > 0.0
            && self.sigma.is_finite();
        if ok {
            Ok(())
        } else {
            Err(Error::InvalidArgument(format!("invalid signal indices {self:?}")))
        }
    }

    pub fn beta(&self, target: RateTarget) -> f64 {
        match target {
            RateTarget::Right => self.beta_r,
            RateTarget::Left => self.beta_l,
            RateTarget::Range => self.beta_r + self.beta_l,
        }
    }
}

/// Which quantity a rate refers to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub enum RateTarget {
    Right,
    Left,
    /// Uses `β_W = β_R + β_L`.
    Range,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub enum SnrRegime {
    Weak,
    Intermediate,
    Strong,
}

/// `ψ(n, p) = √(ln p / n)`.
pub fn rate_psi(n: usize, p: usize) -> f64 {
    rate_psi_real(n as f64, p as f64)
}

pub fn rate_psi_real(n: f64, p: f64) -> f64 {
    (p.ln() / n).sqrt()
}

/// `(β t / √n) · min(σ √((t² + σ² p) n) / t², 1)`.
pub fn first_term_closed(beta: f64, t: f64, sigma: f64, n: usize, p: usize) -> f64 {
    if t == 0.0 || beta == 0.0 {
        return 0.0;
    }
    let (n, p) = (n as f64, p as f64);
    let t2 = t * t;
    let factor = (sigma * ((t2 + sigma * sigma * p) * n).sqrt() / t2).min(1.0);
    beta * t / n.sqrt() * factor
}

/// The three-regime form of the first term:
/// `β t / √n` (weak), `β σ² √p / t` (intermediate), `β σ` (strong).
///
/// Continuous in `t`, with switch points exactly at the [`classify_snr`]
/// boundaries `t² = σ²√(np)` and `t² = σ² p`.
pub fn first_term_phase(beta: f64, t: f64, sigma: f64, n: usize, p: usize) -> f64 {
    if t == 0.0 || beta == 0.0 {
        return 0.0;
    }
    match classify_snr(t, sigma, n, p) {
        SnrRegime::Weak => beta * t / (n as f64).sqrt(),
        SnrRegime::Intermediate => beta * sigma * sigma * (p as f64).sqrt() / t,
        SnrRegime::Strong => beta * sigma,
    }
}

/// Minimax rate `(β t/√n)·min(σ√((t²+σ²p)n)/t², 1) + σ ψ(n, p)`.
pub fn minimax_rate_extreme(idx: &SignalIndices, target: RateTarget, n: usize, p: usize) -> f64 {
    first_term_closed(idx.beta(target), idx.t, idx.sigma, n, p) + idx.sigma * rate_psi(n, p)
}

/// Same rate with the first term in its three-regime form.
pub fn minimax_rate_phase(idx: &SignalIndices, target: RateTarget, n: usize, p: usize) -> f64 {
    first_term_phase(idx.beta(target), idx.t, idx.sigma, n, p) + idx.sigma * rate_psi(n, p)
}

/// Weak if `t² ≤ σ²√(np)`, strong if `t² > σ² p` (and not weak), otherwise
/// intermediate. Boundary points go to the lower regime.
pub fn classify_snr(t: f64, sigma: f64, n: usize, p: usize) -> SnrRegime {
    let t2 = t * t;
    let s2 = sigma * sigma;
    if t2 <= s2 * ((n * p) as f64).sqrt() {
        SnrRegime::Weak
    } else if t2 <= s2 * p as f64 {
        SnrRegime::Intermediate
    } else {
        SnrRegime::Strong
    }
}

/// Whether the signal-strength requirement for the minimax rate holds with
/// unit constants:
///
/// `t² ≥ σ² [β⁻² ∧ (ψ⁻² + ψ⁻¹ √(p/(n ln p)))] n ln p + (1−β²)/β² σ² ln p + β² σ² p/(1−β²)`
///
/// with `β = β_R`. Advisory only.
pub fn feasible_condition11(idx: &SignalIndices, n: usize, p: usize) -> bool {
    let beta = idx.beta_r;
    if !(beta > 0.0 && beta < 1.0) {
        return false;
    }
    let (nf, pf) = (n as f64, p as f64);
    let s2 = idx.sigma * idx.sigma;
    let psi = rate_psi(n, p);
    let lp = pf.ln();
    let b2 = beta * beta;
    let inner = (1.0 / b2).min(1.0 / (psi * psi) + (pf / (nf * lp)).sqrt() / psi);
    let rhs = s2 * inner * nf * lp + (1.0 - b2) / b2 * s2 * lp + b2 * s2 * pf / (1.0 - b2);
    idx.t * idx.t >= rhs
}

/// Indices of a linear-growth signal `θᵢⱼ = aᵢ ηⱼ + bᵢ`:
/// `t = ‖a‖‖η‖`, `β_R = η_p/‖η‖`, `β_L = −η₁/‖η‖`.
pub fn linear_signal_indices(a: &[f64], eta: &[f64], sigma: f64) -> Result<SignalIndices> {
    let sum: f64 = eta.iter().sum();
    let scale = eta.iter().map(|x| x.abs()).sum::<f64>().max(1.0);
    if sum.abs() > 1e-10 * scale {
        return Err(Error::UncenteredEta(sum));
    }
    if eta.windows(2).any(|w| w[0] > w[1]) {
        return Err(Error::UnsortedEta);
    }
    let norm_a = crate::linalg::norm2(a);
    let norm_eta = crate::linalg::norm2(eta);
    if norm_a == 0.0 || norm_eta == 0.0 {
        return Err(Error::ZeroSignal);
    }
    Ok(SignalIndices {
        t: norm_a * norm_eta,
        beta_r: eta[eta.len() - 1] / norm_eta,
        beta_l: -eta[0] / norm_eta,
        sigma,
    })
}
