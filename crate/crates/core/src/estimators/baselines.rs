//! Per-sample baselines that ignore the shared structure across rows.

use super::{ExtremeEstimates, Method};
use crate::error::{Error, Result};
use crate::linalg::ObservationMatrix;

pub const DEFAULT_TRIM_FRACTION: f64 = 0.05;

/// Rowwise maximum and minimum.
pub fn order_statistic_extremes(y: &ObservationMatrix) -> Result<ExtremeEstimates> {
    let vals = y.values();
    if let Some((row, col)) = vals.first_non_finite() {
        return Err(Error::NonFiniteInput { row, col });
    }
    let (theta_r, theta_l) = (0..y.n())
        .map(|i| {
            let row = vals.row(i);
            let max = row.iter().copied().fold(f64::NEG_INFINITY, f64::max);
            let min = row.iter().copied().fold(f64::INFINITY, f64::min);
            (max, min)
        })
        .unzip();
    Ok(ExtremeEstimates::from_ends(
        Method::OrderStatistic,
        theta_r,
        theta_l,
        None,
    ))
}

fn kept_window(p: usize, trim_fraction: f64) -> Result<(usize, usize)> {
    if !(0.0..0.25).contains(&trim_fraction) {
        return Err(Error::InvalidArgument(format!(
            "trim fraction must lie in [0, 0.25), got {trim_fraction}"
        )));
    }
    let cut = (trim_fraction * p as f64).floor() as usize;
    let kept = p.saturating_sub(2 * cut);
    if kept < 3 || (p as f64) * (1.0 - 2.0 * trim_fraction) < 3.0 {
        return Err(Error::InsufficientColumns { kept });
    }
    Ok((cut, p - cut))
}

/// Least-squares line through `(k, sorted[k])` for `k` in `lo..hi`.
fn trimmed_line(sorted: &[f64], lo: usize, hi: usize) -> (f64, f64) {
    let m = (hi - lo) as f64;
    let x_mean = (lo + hi - 1) as f64 / 2.0;
    let y_mean = sorted[lo..hi].iter().sum::<f64>() / m;
    let (sxy, sxx) = (lo..hi).fold((0.0, 0.0), |(sxy, sxx), k| {
        let dx = k as f64 - x_mean;
        (sxy + dx * (sorted[k] - y_mean), sxx + dx * dx)
    });
    let slope = sxy / sxx;
    (y_mean - slope * x_mean, slope)
}

/// Sort-trim-regress proxy for iRep.
///
/// Each row is sorted on its own, `⌊trim·p⌋` values are dropped from both
/// ends, and a line is fitted against the positions `0..p-1` of the kept
/// window. The fitted values at positions `0` and `p-1` are reported as the
/// trough and peak.
pub fn irep_extremes(y: &ObservationMatrix, trim_fraction: f64) -> Result<ExtremeEstimates> {
    let p = y.p();
    let (lo, hi) = kept_window(p, trim_fraction)?;
    let mut theta_r = Vec::with_capacity(y.n());
    let mut theta_l = Vec::with_capacity(y.n());
    let mut sorted = vec![0.0; p];
    for i in 0..y.n() {
        sorted.copy_from_slice(y.values().row(i));
        sorted.sort_by(f64::total_cmp);
        let (intercept, slope) = trimmed_line(&sorted, lo, hi);
        theta_l.push(intercept);
        theta_r.push(intercept + slope * (p - 1) as f64);
    }
    Ok(ExtremeEstimates::from_ends(
        Method::IRep,
        theta_r,
        theta_l,
        None,
    ))
}

/// Log-PTR estimate per sample from [`irep_extremes`].
pub fn irep_range(y: &ObservationMatrix, trim_fraction: f64) -> Result<Vec<f64>> {
    irep_extremes(y, trim_fraction).map(|e| e.range)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn order_statistic_small() {
        let y = ObservationMatrix::from_rows(&[[-1.0, 0.0, 1.0], [-2.0, 0.0, 2.0], [4.0, 4.0, 4.0]])
            .unwrap();
        let e = order_statistic_extremes(&y).unwrap();
        assert_eq!(e.theta_r, vec![1.0, 2.0, 4.0]);
        assert_eq!(e.theta_l, vec![-1.0, -2.0, 4.0]);
        assert_eq!(e.range, vec![2.0, 4.0, 0.0]);
        assert!(e.spectral.is_none());
    }

    #[test]
    fn irep_exact_line() {
        let y = ObservationMatrix::from_rows(&[[-1.0, 0.0, 1.0], [1.0, 0.0, -1.0]]).unwrap();
        let r = irep_range(&y, 0.0).unwrap();
        assert!((r[0] - 2.0).abs() < 1e-14);
        // sorting makes a decreasing row look increasing
        assert!((r[1] - 2.0).abs() < 1e-14);
    }

    #[test]
    fn irep_constant_row() {
        let y = ObservationMatrix::from_rows(&[[5.0; 4], [5.0, 5.0, 5.0, 6.0]]).unwrap();
        let r = irep_range(&y, 0.0).unwrap();
        assert_eq!(r[0], 0.0);
        assert!(r[1] > 0.0);
    }

    #[test]
    fn irep_trims_tails() {
        // outliers at both ends vanish with trim 0.1 at p = 10
        let row: Vec<f64> = (0..10).map(|k| k as f64).collect();
        let mut noisy = row.clone();
        noisy[0] = -100.0;
        noisy[9] = 100.0;
        let y = ObservationMatrix::from_rows(&[row, noisy]).unwrap();
        let r = irep_range(&y, 0.1).unwrap();
        assert!((r[0] - 9.0).abs() < 1e-12);
        assert!((r[1] - 9.0).abs() < 1e-12);
    }

    #[test]
    fn irep_window_validation() {
        let y = ObservationMatrix::from_rows(&[[0.0, 1.0, 2.0, 3.0], [0.0, 1.0, 2.0, 3.0]]).unwrap();
        assert!(matches!(
            irep_range(&y, 0.25),
            Err(Error::InvalidArgument(_))
        ));
        assert!(matches!(irep_range(&y, -0.1), Err(Error::InvalidArgument(_))));
        // 4 * (1 - 0.4) = 2.4 < 3 even though floor trims nothing
        assert!(matches!(
            irep_range(&y, 0.2),
            Err(Error::InsufficientColumns { .. })
        ));
        let y = ObservationMatrix::from_rows(&[[0.0, 1.0], [1.0, 0.0]]).unwrap();
        assert!(matches!(
            irep_range(&y, 0.0),
            Err(Error::InsufficientColumns { kept: 2 })
        ));
    }
}
