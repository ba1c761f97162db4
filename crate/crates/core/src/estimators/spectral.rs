use super::{ExtremeEstimates, Method, SpectralFit};
use crate::error::{Error, Result};
use crate::linalg::{
    center_rows, leading_singular_triple, rank_vector, CenteredMatrix, ObservationMatrix,
    SvdOptions,
};

fn spectral_fit(y: &ObservationMatrix, opts: &SvdOptions) -> Result<(CenteredMatrix, SpectralFit)> {
    let x = center_rows(y);
    let triple = leading_singular_triple(&x, opts)?;
    let ranking = rank_vector(&triple.v)?;
    let p = triple.v.len();
    let v_min = triple.v[ranking.order[0]];
    let v_max = triple.v[ranking.order[p - 1]];
    Ok((
        x,
        SpectralFit {
            triple,
            ranking,
            v_max,
            v_min,
        },
    ))
}

/// Compound estimates `Θ̂_R = v̂₍ₚ₎ X v̂ + Ȳ`, `Θ̂_L = v̂₍₁₎ X v̂ + Ȳ`.
///
/// The row means `Ȳ = Y e / p` restore the level removed by centering; the
/// scaled projection `X v̂` carries the shared rank-one structure.
pub fn spectral_extremes(y: &ObservationMatrix, opts: &SvdOptions) -> Result<ExtremeEstimates> {
    let (x, fit) = spectral_fit(y, opts)?;
    let xv = x.values.mul_vec(&fit.triple.v);
    let theta_r = xv
        .iter()
        .zip(&x.row_means)
        .map(|(s, m)| fit.v_max * s + m)
        .collect();
    let theta_l = xv
        .iter()
        .zip(&x.row_means)
        .map(|(s, m)| fit.v_min * s + m)
        .collect();
    Ok(ExtremeEstimates::from_ends(
        Method::Spectral,
        theta_r,
        theta_l,
        Some(fit),
    ))
}

/// Two-step estimator: sort the columns of `Y` by `v̂`, then regress each row
/// on the sorted scores `v̂₍₁₎ ≤ … ≤ v̂₍ₚ₎` and evaluate the fit at both ends.
///
/// Numerically identical to [`spectral_extremes`] because `v̂` is a centered
/// unit vector.
pub fn regression_extremes(y: &ObservationMatrix, opts: &SvdOptions) -> Result<ExtremeEstimates> {
    let (_, fit) = spectral_fit(y, opts)?;
    let p = y.p();
    let scores: Vec<f64> = fit.ranking.order.iter().map(|&j| fit.triple.v[j]).collect();
    let s_mean = scores.iter().sum::<f64>() / p as f64;
    let sxx: f64 = scores.iter().map(|s| (s - s_mean).powi(2)).sum();
    if !(sxx > 0.0) {
        return Err(Error::DegenerateRegressor);
    }

    let vals = y.values();
    let mut theta_r = Vec::with_capacity(y.n());
    let mut theta_l = Vec::with_capacity(y.n());
    for i in 0..y.n() {
        let row = vals.row(i);
        let y_mean = row.iter().sum::<f64>() / p as f64;
        let sxy: f64 = fit
            .ranking
            .order
            .iter()
            .zip(&scores)
            .map(|(&j, s)| (s - s_mean) * (row[j] - y_mean))
            .sum();
        let slope = sxy / sxx;
        let intercept = y_mean - slope * s_mean;
        theta_r.push(intercept + slope * scores[p - 1]);
        theta_l.push(intercept + slope * scores[0]);
    }
    Ok(ExtremeEstimates::from_ends(
        Method::Regression,
        theta_r,
        theta_l,
        Some(fit),
    ))
}

/// The observed columns that `v̂` places last and first.
pub fn direct_sorting_extremes(
    y: &ObservationMatrix,
    opts: &SvdOptions,
) -> Result<ExtremeEstimates> {
    let (_, fit) = spectral_fit(y, opts)?;
    let order = &fit.ranking.order;
    let theta_r = y.values().column(order[order.len() - 1]);
    let theta_l = y.values().column(order[0]);
    Ok(ExtremeEstimates::from_ends(
        Method::DirectSorting,
        theta_r,
        theta_l,
        Some(fit),
    ))
}
