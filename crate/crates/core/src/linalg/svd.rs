//! Leading singular triple of a row-centered matrix.
//!
//! The matrices of interest are short and wide (`n` samples, `p >> n`
//! positions), so everything runs on the `n x n` Gram matrix `X Xᵀ`: power
//! iteration yields the left vector `u`, and the right vector follows as
//! `v = Xᵀ u / λ`.

use serde::{Deserialize, Serialize};

use super::matrix::{dot, norm2, CenteredMatrix, Matrix};
use crate::error::{Error, Result};

/// Rule used to fix the global sign of `(u, v)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub enum SignConvention {
    /// `Σᵢ (X v)ᵢ ≥ 0`; falls back to [`SignConvention::FirstNonzeroNegative`]
    /// when the sum vanishes.
    #[default]
    RowMajoritySign,
    /// The first nonzero component of `v` is negative.
    FirstNonzeroNegative,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct SvdOptions {
    pub tol: f64,
    pub max_iter: usize,
    pub convention: SignConvention,
}

impl Default for SvdOptions {
    fn default() -> Self {
        Self {
            tol: 1e-10,
            max_iter: 1000,
            convention: SignConvention::RowMajoritySign,
        }
    }
}

impl SvdOptions {
    pub fn with_convention(convention: SignConvention) -> Self {
        Self {
            convention,
            ..Self::default()
        }
    }

    fn validate(&self) -> Result<()> {
        if !(self.tol > 0.0) {
            return Err(Error::InvalidArgument(format!(
                "tolerance must be positive, got {}",
                self.tol
            )));
        }
        if self.max_iter == 0 {
            return Err(Error::InvalidArgument("max_iter must be at least 1".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct SingularTriple {
    pub lambda: f64,
    pub u: Vec<f64>,
    pub v: Vec<f64>,
    pub convention: SignConvention,
    pub iterations: usize,
    pub converged: bool,
    /// Estimate of the second singular value.
    pub lambda2: f64,
    /// Set when `λ₁ - λ₂ ≤ tol · λ₁`, i.e. the leading direction is not identifiable.
    pub multiplicity_warning: bool,
}

impl SingularTriple {
    /// `‖X v - λ u‖₂`.
    pub fn residual(&self, x: &Matrix) -> f64 {
        let xv = x.mul_vec(&self.v);
        xv.iter()
            .zip(&self.u)
            .map(|(a, b)| (a - self.lambda * b).powi(2))
            .sum::<f64>()
            .sqrt()
    }
}

struct EigenPair {
    value: f64,
    vector: Vec<f64>,
    iterations: usize,
    converged: bool,
}

fn sym_mul(g: &Matrix, x: &[f64]) -> Vec<f64> {
    g.mul_vec(x)
}

/// Largest eigenpair of a symmetric PSD matrix by power iteration.
///
/// Starts from the column of `g` with the largest diagonal entry, which for a
/// Gram matrix `X Xᵀ` is `X` applied to its longest row. Stops once the
/// Rayleigh quotient moves by less than `tol · (μ + 1)` and the singular-value
/// residual `‖g u − μ u‖ / √μ` is at most `tol · (√μ + 1)`.
fn power_iteration(g: &Matrix, tol: f64, max_iter: usize, need_vector: bool) -> EigenPair {
    let n = g.rows();
    let start = (0..n)
        .max_by(|&a, &b| g.get(a, a).total_cmp(&g.get(b, b)).then(b.cmp(&a)))
        .unwrap_or(0);
    let mut u = g.column(start);
    let nu = norm2(&u);
    if nu == 0.0 {
        return EigenPair {
            value: 0.0,
            vector: unit(n, start),
            iterations: 0,
            converged: true,
        };
    }
    u.iter_mut().for_each(|x| *x /= nu);

    let mut prev = f64::NAN;
    let mut mu = 0.0;
    for it in 1..=max_iter {
        let w = sym_mul(g, &u);
        mu = dot(&u, &w);
        let nw = norm2(&w);
        if nw == 0.0 {
            return EigenPair {
                value: 0.0,
                vector: u,
                iterations: it,
                converged: true,
            };
        }
        let value_settled = (mu - prev).abs() < tol * (mu.abs() + 1.0);
        if value_settled {
            let vector_settled = !need_vector || {
                let resid = w
                    .iter()
                    .zip(&u)
                    .map(|(a, b)| (a - mu * b).powi(2))
                    .sum::<f64>()
                    .sqrt();
                let sv = mu.max(0.0).sqrt();
                sv > 0.0 && resid / sv <= tol * (sv + 1.0)
            };
            if vector_settled {
                return EigenPair {
                    value: mu,
                    vector: u,
                    iterations: it,
                    converged: true,
                };
            }
        }
        prev = mu;
        u = w.into_iter().map(|x| x / nw).collect();
    }
    EigenPair {
        value: dot(&u, &sym_mul(g, &u)).max(mu),
        vector: u,
        iterations: max_iter,
        converged: false,
    }
}

fn unit(n: usize, k: usize) -> Vec<f64> {
    let mut e = vec![0.0; n];
    e[k] = 1.0;
    e
}

/// `g - μ w wᵀ`.
fn deflate(g: &Matrix, value: f64, w: &[f64]) -> Matrix {
    Matrix::from_fn(g.rows(), g.cols(), |i, k| g.get(i, k) - value * w[i] * w[k])
}

/// Eigenvalues of a deflated Gram matrix below this level are roundoff.
fn gram_noise_floor(top: f64) -> f64 {
    64.0 * f64::EPSILON * top
}

fn first_nonzero_positive(v: &[f64]) -> bool {
    let scale = v.iter().fold(0.0_f64, |m, x| m.max(x.abs()));
    v.iter()
        .find(|x| x.abs() > 1e-12 * scale)
        .is_some_and(|&x| x > 0.0)
}

fn apply_sign(u: &mut [f64], v: &mut [f64], convention: SignConvention) {
    let flip = match convention {
        SignConvention::RowMajoritySign => {
            // Σᵢ (Xv)ᵢ = λ Σᵢ uᵢ
            let s: f64 = u.iter().sum();
            let mass: f64 = u.iter().map(|x| x.abs()).sum();
            if s.abs() <= 1e-12 * mass {
                first_nonzero_positive(v)
            } else {
                s < 0.0
            }
        }
        SignConvention::FirstNonzeroNegative => first_nonzero_positive(v),
    };
    if flip {
        u.iter_mut().for_each(|x| *x = -*x);
        v.iter_mut().for_each(|x| *x = -*x);
    }
}

/// Top singular triple of `x.values` with the sign fixed by `opts.convention`.
///
/// Non-convergence within `opts.max_iter` is reported through
/// [`SingularTriple::converged`] rather than as an error.
pub fn leading_singular_triple(x: &CenteredMatrix, opts: &SvdOptions) -> Result<SingularTriple> {
    leading_singular_triple_of(&x.values, opts)
}

fn leading_singular_triple_of(x: &Matrix, opts: &SvdOptions) -> Result<SingularTriple> {
    opts.validate()?;
    if x.frobenius_norm() == 0.0 {
        return Err(Error::ZeroMatrix);
    }
    let g = x.gram();
    let top = power_iteration(&g, opts.tol, opts.max_iter, true);
    let mut u = top.vector;
    let mut v = x.tmul_vec(&u);
    let lambda = norm2(&v);
    if lambda == 0.0 {
        return Err(Error::ZeroMatrix);
    }
    v.iter_mut().for_each(|a| *a /= lambda);
    apply_sign(&mut u, &mut v, opts.convention);

    let lambda2 = if g.rows() > 1 {
        let rest = deflate(&g, top.value, &u);
        let mu = power_iteration(&rest, opts.tol, opts.max_iter, false).value;
        if mu <= gram_noise_floor(top.value) {
            0.0
        } else {
            mu.sqrt()
        }
    } else {
        0.0
    };

    Ok(SingularTriple {
        lambda,
        u,
        v,
        convention: opts.convention,
        iterations: top.iterations,
        converged: top.converged,
        lambda2,
        multiplicity_warning: lambda - lambda2 <= opts.tol * lambda,
    })
}

/// Top singular value and `Σ_{i=2..k} λᵢ`, by repeated deflation of `X Xᵀ`.
///
/// Used to check the approximate rank-one condition `Σ_{i≥2} λᵢ ≤ σ √(ln p)`.
/// Negative eigenvalue estimates left by roundoff are clamped to zero.
pub fn residual_spectrum(x: &CenteredMatrix, k: usize) -> Result<(f64, f64)> {
    residual_spectrum_with(x, k, &SvdOptions::default())
}

pub fn residual_spectrum_with(
    x: &CenteredMatrix,
    k: usize,
    opts: &SvdOptions,
) -> Result<(f64, f64)> {
    opts.validate()?;
    let limit = x.n().min(x.p());
    if k == 0 || k > limit {
        return Err(Error::InvalidArgument(format!(
            "k must be in 1..={limit}, got {k}"
        )));
    }
    if x.values.frobenius_norm() == 0.0 {
        return Err(Error::ZeroMatrix);
    }
    let mut g = x.values.gram();
    let mut values = Vec::with_capacity(k);
    let mut floor = 0.0;
    for i in 0..k {
        let pair = power_iteration(&g, opts.tol, opts.max_iter.max(10_000), true);
        if i == 0 {
            floor = gram_noise_floor(pair.value);
        }
        let mu = if pair.value <= floor { 0.0 } else { pair.value };
        values.push(mu.sqrt());
        g = deflate(&g, pair.value, &pair.vector);
    }
    Ok((values[0], values[1..].iter().sum()))
}
