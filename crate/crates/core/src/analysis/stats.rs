//! Group comparisons on estimated log-PTRs: one-way ANOVA and two-sample t tests.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

const BETA_CF_TOL: f64 = 1e-12;
const BETA_CF_MAX_ITER: usize = 300;
const TINY: f64 = 1e-300;

/// `ln Γ(x)` for `x > 0` (Lanczos, g = 7, nine coefficients).
pub fn ln_gamma(x: f64) -> f64 {
    const G: f64 = 7.0;
    #[allow(clippy::excessive_precision)]
    const COEF: [f64; 9] = [
        0.999_999_999_999_809_93,
        676.520_368_121_885_1,
        -1_259.139_216_722_402_8,
        771.323_428_777_653_13,
        -176.615_029_162_140_59,
        12.507_343_278_686_905,
        -0.138_571_095_265_720_12,
        9.984_369_578_019_571_6e-6,
        1.505_632_735_149_311_6e-7,
    ];
    if x < 0.5 {
        // reflection
        let pi = std::f64::consts::PI;
        return (pi / (pi * x).sin()).ln() - ln_gamma(1.0 - x);
    }
    let x = x - 1.0;
    let mut acc = COEF[0];
    for (k, c) in COEF.iter().enumerate().skip(1) {
        acc += c / (x + k as f64);
    }
    let t = x + G + 0.5;
    0.5 * (2.0 * std::f64::consts::PI).ln() + (x + 0.5) * t.ln() - t + acc.ln()
}

/// Continued fraction for the incomplete beta function, modified Lentz.
fn beta_continued_fraction(a: f64, b: f64, x: f64) -> f64 {
    let qab = a + b;
    let qap = a + 1.0;
    let qam = a - 1.0;
    let mut c = 1.0;
    let mut d = 1.0 - qab * x / qap;
    if d.abs() < TINY {
        d = TINY;
    }
    d = 1.0 / d;
    let mut h = d;
    for m in 1..=BETA_CF_MAX_ITER {
        let m = m as f64;
        let m2 = 2.0 * m;
        let aa = m * (b - m) * x / ((qam + m2) * (a + m2));
        d = 1.0 + aa * d;
        if d.abs() < TINY {
            d = TINY;
        }
        c = 1.0 + aa / c;
        if c.abs() < TINY {
            c = TINY;
        }
        d = 1.0 / d;
        h *= d * c;
        let aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
        d = 1.0 + aa * d;
        if d.abs() < TINY {
            d = TINY;
        }
        c = 1.0 + aa / c;
        if c.abs() < TINY {
            c = TINY;
        }
        d = 1.0 / d;
        let del = d * c;
        h *= del;
        if (del - 1.0).abs() < BETA_CF_TOL {
            break;
        }
    }
    h
}

/// Regularized incomplete beta `I_x(a, b)`.
pub fn regularized_incomplete_beta(a: f64, b: f64, x: f64) -> f64 {
    if x <= 0.0 {
        return 0.0;
    }
    if x >= 1.0 {
        return 1.0;
    }
    let ln_front = ln_gamma(a + b) - ln_gamma(a) - ln_gamma(b) + a * x.ln() + b * (1.0 - x).ln();
    let front = ln_front.exp();
    if x < (a + 1.0) / (a + b + 2.0) {
        front * beta_continued_fraction(a, b, x) / a
    } else {
        1.0 - front * beta_continued_fraction(b, a, 1.0 - x) / b
    }
}

/// `P(F > f)` for an F distribution with `(d1, d2)` degrees of freedom.
pub fn f_survival(f: f64, d1: f64, d2: f64) -> f64 {
    if f <= 0.0 {
        return 1.0;
    }
    regularized_incomplete_beta(d2 / 2.0, d1 / 2.0, d2 / (d2 + d1 * f))
}

/// Two-sided `P(|T| > |t|)` for Student's t with `df` degrees of freedom.
pub fn t_two_sided_p(t: f64, df: f64) -> f64 {
    if t.is_infinite() {
        return 0.0;
    }
    regularized_incomplete_beta(df / 2.0, 0.5, df / (df + t * t))
}

/// Labelled groups of observations.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GroupedValues {
    pub groups: Vec<(String, Vec<f64>)>,
}

impl GroupedValues {
    pub fn new(groups: Vec<(String, Vec<f64>)>) -> Self {
        Self { groups }
    }

    pub fn get(&self, label: &str) -> Option<&[f64]> {
        self.groups
            .iter()
            .find(|(l, _)| l == label)
            .map(|(_, v)| v.as_slice())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct FTestResult {
    pub f: f64,
    pub df1: usize,
    pub df2: usize,
    pub p_value: f64,
}

/// Classical one-way ANOVA, `F = MSB / MSW`.
pub fn f_test_oneway(groups: &GroupedValues) -> Result<FTestResult> {
    let k = groups.groups.len();
    if k < 2 {
        return Err(Error::InvalidArgument(format!("need at least 2 groups, got {k}")));
    }
    if let Some((label, _)) = groups.groups.iter().find(|(_, v)| v.is_empty()) {
        return Err(Error::InvalidArgument(format!("group {label:?} is empty")));
    }
    let total: usize = groups.groups.iter().map(|(_, v)| v.len()).sum();
    if total <= k {
        return Err(Error::InvalidArgument(format!(
            "need more observations ({total}) than groups ({k})"
        )));
    }
    let grand = groups.groups.iter().flat_map(|(_, v)| v).sum::<f64>() / total as f64;
    let mut ssb = 0.0;
    let mut ssw = 0.0;
    for (_, v) in &groups.groups {
        let m = mean(v);
        ssb += v.len() as f64 * (m - grand).powi(2);
        ssw += v.iter().map(|x| (x - m).powi(2)).sum::<f64>();
    }
    let df1 = k - 1;
    let df2 = total - k;
    let msw = ssw / df2 as f64;
    if !(msw > 0.0) {
        return Err(Error::DegenerateVariance);
    }
    let f = (ssb / df1 as f64) / msw;
    Ok(FTestResult {
        f,
        df1,
        df2,
        p_value: f_survival(f, df1 as f64, df2 as f64),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub enum TTestVariant {
    #[default]
    Welch,
    Pooled,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct TTestResult {
    pub t: f64,
    pub df: f64,
    pub p_value: f64,
}

fn mean(x: &[f64]) -> f64 {
    x.iter().sum::<f64>() / x.len() as f64
}

fn sample_variance(x: &[f64], m: f64) -> f64 {
    x.iter().map(|v| (v - m).powi(2)).sum::<f64>() / (x.len() - 1) as f64
}

/// Two-sample t test of `mean(x) = mean(y)` with a two-sided p-value.
pub fn t_test_two_sample(x: &[f64], y: &[f64], variant: TTestVariant) -> Result<TTestResult> {
    if x.len() < 2 || y.len() < 2 {
        return Err(Error::InvalidArgument(format!(
            "each sample needs at least 2 values, got {} and {}",
            x.len(),
            y.len()
        )));
    }
    let (nx, ny) = (x.len() as f64, y.len() as f64);
    let (mx, my) = (mean(x), mean(y));
    let (vx, vy) = (sample_variance(x, mx), sample_variance(y, my));
    if !(vx > 0.0 || vy > 0.0) {
        return Err(Error::DegenerateVariance);
    }
    let (t, df) = match variant {
        TTestVariant::Pooled => {
            let df = nx + ny - 2.0;
            let sp2 = ((nx - 1.0) * vx + (ny - 1.0) * vy) / df;
            ((mx - my) / (sp2 * (1.0 / nx + 1.0 / ny)).sqrt(), df)
        }
        TTestVariant::Welch => {
            let (ax, ay) = (vx / nx, vy / ny);
            let se2 = ax + ay;
            let df = se2 * se2 / (ax * ax / (nx - 1.0) + ay * ay / (ny - 1.0));
            ((mx - my) / se2.sqrt(), df)
        }
    };
    Ok(TTestResult {
        t,
        df,
        p_value: t_two_sided_p(t, df),
    })
}
