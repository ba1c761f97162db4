//! Signal generators and noisy, column-permuted observations.

use rand::Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{Matrix, ObservationMatrix, Permutation};

/// Upper end of the intercept distribution `bᵢ ~ Unif(0, 6)`.
pub const INTERCEPT_MAX: f64 = 6.0;

/// `θᵢⱼ = aᵢ ηⱼ + bᵢ` with centered, nondecreasing `η`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LinearGrowthSignal {
    pub a: Vec<f64>,
    pub eta: Vec<f64>,
    pub b: Vec<f64>,
}

impl LinearGrowthSignal {
    pub fn new(a: Vec<f64>, eta: Vec<f64>, b: Vec<f64>) -> Result<Self> {
        if a.len() != b.len() {
            return Err(Error::LengthMismatch {
                left: a.len(),
                right: b.len(),
            });
        }
        let sum: f64 = eta.iter().sum();
        let scale = eta.iter().map(|x| x.abs()).sum::<f64>().max(1.0);
        if sum.abs() > 1e-10 * scale {
            return Err(Error::UncenteredEta(sum));
        }
        if eta.windows(2).any(|w| w[0] > w[1]) {
            return Err(Error::UnsortedEta);
        }
        Ok(Self { a, eta, b })
    }

    pub fn n(&self) -> usize {
        self.a.len()
    }

    pub fn p(&self) -> usize {
        self.eta.len()
    }

    pub fn theta(&self) -> Matrix {
        Matrix::from_fn(self.n(), self.p(), |i, j| self.a[i] * self.eta[j] + self.b[i])
    }

    pub fn truth(&self) -> GroundTruth {
        GroundTruth::from_theta(self.theta())
    }
}

/// Unpermuted signal and its extreme columns.
#[derive(Debug, Clone, PartialEq)]
pub struct GroundTruth {
    pub theta: Matrix,
    pub theta_r: Vec<f64>,
    pub theta_l: Vec<f64>,
    pub range: Vec<f64>,
    /// Column permutation applied when observing; identity until set.
    pub pi: Permutation,
}

impl GroundTruth {
    pub fn from_theta(theta: Matrix) -> Self {
        let p = theta.cols();
        let theta_r = theta.column(p - 1);
        let theta_l = theta.column(0);
        let range = theta_r.iter().zip(&theta_l).map(|(r, l)| r - l).collect();
        Self {
            theta,
            theta_r,
            theta_l,
            range,
            pi: Permutation::identity(p),
        }
    }
}

fn check_shape(n: usize, p: usize, alpha: f64) -> Result<()> {
    if n < 1 || p < 3 {
        return Err(Error::InvalidArgument(format!(
            "need n >= 1 and p >= 3, got n={n}, p={p}"
        )));
    }
    if !(alpha >= 0.0) || !alpha.is_finite() {
        return Err(Error::InvalidArgument(format!("alpha must be >= 0, got {alpha}")));
    }
    Ok(())
}

/// Draws `aᵢ ~ Unif(0, α)` for all rows, then `bᵢ ~ Unif(0, 6)`.
fn draw_slopes_intercepts<R: Rng + ?Sized>(n: usize, alpha: f64, rng: &mut R) -> (Vec<f64>, Vec<f64>) {
    let a = (0..n).map(|_| alpha * rng.random::<f64>()).collect();
    let b = (0..n).map(|_| INTERCEPT_MAX * rng.random::<f64>()).collect();
    (a, b)
}

/// Linear growth with `η = (-1, 0, …, 0, 1)`.
pub fn generate_s1<R: Rng + ?Sized>(
    n: usize,
    p: usize,
    alpha: f64,
    rng: &mut R,
) -> Result<(LinearGrowthSignal, GroundTruth)> {
    check_shape(n, p, alpha)?;
    let (a, b) = draw_slopes_intercepts(n, alpha, rng);
    let mut eta = vec![0.0; p];
    eta[0] = -1.0;
    eta[p - 1] = 1.0;
    let signal = LinearGrowthSignal { a, eta, b };
    let truth = signal.truth();
    Ok((signal, truth))
}

/// Logarithmic growth `θᵢⱼ = ln(1 + aᵢ j + bᵢ)` for `j = 1..p`.
pub fn generate_s2<R: Rng + ?Sized>(
    n: usize,
    p: usize,
    alpha: f64,
    rng: &mut R,
) -> Result<(Matrix, GroundTruth)> {
    check_shape(n, p, alpha)?;
    let (a, b) = draw_slopes_intercepts(n, alpha, rng);
    let theta = s2_theta(&a, &b, p);
    let truth = GroundTruth::from_theta(theta.clone());
    Ok((theta, truth))
}

pub fn s2_theta(a: &[f64], b: &[f64], p: usize) -> Matrix {
    Matrix::from_fn(a.len(), p, |i, j| (1.0 + a[i] * (j + 1) as f64 + b[i]).ln())
}

/// Linear growth with `η` drawn as sorted, centered standard normals, so the
/// positions are distinct with probability one.
pub fn generate_custom_linear<R: Rng + ?Sized>(
    n: usize,
    p: usize,
    alpha: f64,
    rng: &mut R,
) -> Result<(LinearGrowthSignal, GroundTruth)> {
    check_shape(n, p, alpha)?;
    let (a, b) = draw_slopes_intercepts(n, alpha, rng);
    let mut eta: Vec<f64> = (0..p).map(|_| rng.sample(StandardNormal)).collect();
    eta.sort_by(f64::total_cmp);
    let mean = eta.iter().sum::<f64>() / p as f64;
    eta.iter_mut().for_each(|x| *x -= mean);
    let signal = LinearGrowthSignal { a, eta, b };
    let truth = signal.truth();
    Ok((signal, truth))
}

/// Uniformly random permutation of `0..p` (Fisher–Yates).
pub fn random_permutation<R: Rng + ?Sized>(p: usize, rng: &mut R) -> Permutation {
    let mut image: Vec<usize> = (0..p).collect();
    for k in (1..p).rev() {
        let j = rng.random_range(0..=k);
        image.swap(k, j);
    }
    Permutation::new(image).expect("shuffle of identity is a permutation")
}

/// `Y = ΘΠ + σZ` with `Y[:, π(k)] = Θ[:, k] + σ Z[:, π(k)]`.
///
/// Noise is drawn row-major over the observed matrix, one standard normal per
/// entry, even when `sigma` is zero.
pub fn synthesize_observation<R: Rng + ?Sized>(
    theta: &Matrix,
    sigma: f64,
    pi: &Permutation,
    rng: &mut R,
) -> Result<ObservationMatrix> {
    if !(sigma >= 0.0) || !sigma.is_finite() {
        return Err(Error::InvalidArgument(format!("sigma must be >= 0, got {sigma}")));
    }
    if pi.len() != theta.cols() {
        return Err(Error::LengthMismatch {
            left: pi.len(),
            right: theta.cols(),
        });
    }
    let mut y = theta.scatter_columns(pi.as_slice());
    for i in 0..y.rows() {
        for x in y.row_mut(i) {
            let z: f64 = rng.sample(StandardNormal);
            *x += sigma * z;
        }
    }
    ObservationMatrix::new(y)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::simulation::rng::stream;

    #[test]
    fn s1_structure() {
        let (signal, truth) = generate_s1(4, 6, 3.0, &mut stream(11)).unwrap();
        for i in 0..4 {
            let (a, b) = (signal.a[i], signal.b[i]);
            assert!((0.0..3.0).contains(&a) && (0.0..6.0).contains(&b));
            assert_eq!(truth.theta.get(i, 0), b - a);
            assert_eq!(truth.theta.get(i, 5), b + a);
            for j in 1..5 {
                assert_eq!(truth.theta.get(i, j), b);
            }
            assert!((truth.range[i] - 2.0 * a).abs() < 1e-14);
        }
    }

    #[test]
    fn s1_zero_alpha_is_flat() {
        let (_, truth) = generate_s1(3, 5, 0.0, &mut stream(1)).unwrap();
        assert!(truth.range.iter().all(|&r| r == 0.0));
        for i in 0..3 {
            let row = truth.theta.row(i);
            assert!(row.iter().all(|&x| x == row[0]));
        }
    }

    #[test]
    fn s1_same_seed_same_draw() {
        let (_, a) = generate_s1(3, 5, 2.0, &mut stream(99)).unwrap();
        let (_, b) = generate_s1(3, 5, 2.0, &mut stream(99)).unwrap();
        assert_eq!(a.theta.as_slice(), b.theta.as_slice());
        let (_, c) = generate_s1(3, 5, 2.0, &mut stream(100)).unwrap();
        assert_ne!(a.theta.as_slice(), c.theta.as_slice());
    }

    #[test]
    fn s2_formula() {
        let theta = s2_theta(&[1.0, 0.0], &[0.0, 2.0], 3);
        let expect = [2f64.ln(), 3f64.ln(), 4f64.ln()];
        for (j, e) in expect.iter().enumerate() {
            assert!((theta.get(0, j) - e).abs() < 1e-15);
            assert_eq!(theta.get(1, j), 3f64.ln());
        }
        let truth = GroundTruth::from_theta(theta);
        assert!((truth.range[0] - 2f64.ln()).abs() < 1e-15);
        assert_eq!(truth.range[1], 0.0);
    }

    #[test]
    fn s2_rows_nondecreasing_for_many_seeds() {
        for seed in 0..100 {
            let (theta, truth) = generate_s2(5, 40, 3.0, &mut stream(seed)).unwrap();
            for i in 0..5 {
                assert!(theta.row(i).windows(2).all(|w| w[0] <= w[1]));
                assert!(truth.range[i] >= 0.0);
            }
        }
    }

    #[test]
    fn custom_linear_eta_is_centered_and_sorted() {
        let (signal, _) = generate_custom_linear(3, 50, 1.0, &mut stream(5)).unwrap();
        assert!(LinearGrowthSignal::new(signal.a.clone(), signal.eta.clone(), signal.b.clone()).is_ok());
        assert!(signal.eta.windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn signal_validation() {
        assert!(matches!(
            LinearGrowthSignal::new(vec![1.0], vec![-1.0, 0.0, 2.0], vec![0.0]),
            Err(Error::UncenteredEta(_))
        ));
        assert!(matches!(
            LinearGrowthSignal::new(vec![1.0], vec![1.0, 0.0, -1.0], vec![0.0]),
            Err(Error::UnsortedEta)
        ));
        assert!(generate_s1(2, 2, 1.0, &mut stream(0)).is_err());
    }

    #[test]
    fn noiseless_identity_observation_is_theta() {
        let theta = Matrix::from_fn(2, 3, |i, j| (i * 3 + j) as f64);
        let y = synthesize_observation(&theta, 0.0, &Permutation::identity(3), &mut stream(0)).unwrap();
        assert_eq!(y.values(), &theta);
    }

    #[test]
    fn permuted_observation_restores_with_inverse() {
        let theta = Matrix::from_fn(2, 3, |i, j| (i * 3 + j) as f64);
        let pi = Permutation::new(vec![2, 0, 1]).unwrap();
        let y = synthesize_observation(&theta, 0.0, &pi, &mut stream(0)).unwrap();
        assert_eq!(y.values().column(2), theta.column(0));
        // column k of Θ sits at observed column π(k); gathering by π undoes it
        assert_eq!(y.values().gather_columns(pi.as_slice()), theta);
        assert_eq!(
            y.values().scatter_columns(pi.inverse().as_slice()),
            theta
        );
    }

    #[test]
    fn noise_moments() {
        let theta = Matrix::from_fn(100, 100, |i, j| (i as f64) - (j as f64) * 0.5);
        let pi = random_permutation(100, &mut stream(3));
        let y = synthesize_observation(&theta, 1.0, &pi, &mut stream(4)).unwrap();
        let shifted = theta.scatter_columns(pi.as_slice());
        let z: Vec<f64> = y
            .values()
            .as_slice()
            .iter()
            .zip(shifted.as_slice())
            .map(|(a, b)| a - b)
            .collect();
        let m = z.iter().sum::<f64>() / z.len() as f64;
        let var = z.iter().map(|x| (x - m).powi(2)).sum::<f64>() / (z.len() - 1) as f64;
        assert!(m.abs() < 3e-2, "mean {m}");
        assert!((var - 1.0).abs() < 0.05, "var {var}");
    }

    #[test]
    fn random_permutation_is_valid_and_seeded() {
        let a = random_permutation(30, &mut stream(8));
        let b = random_permutation(30, &mut stream(8));
        assert_eq!(a, b);
        assert!(!a.is_identity());
    }
}
