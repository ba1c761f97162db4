#![allow(dead_code)]

use permrow::linalg::Matrix;
use permrow::simulation::rng::{stream, SimRng};
use permrow::ObservationMatrix;
use rand::Rng;
use rand_distr::StandardNormal;

pub fn rng(seed: u64) -> SimRng {
    stream(seed)
}

pub fn normal_matrix(n: usize, p: usize, rng: &mut SimRng) -> Matrix {
    Matrix::from_fn(n, p, |_, _| rng.sample(StandardNormal))
}

/// `a η + b` rows with distinct sorted `η`, scattered by a random permutation,
/// plus `sigma` times standard normal noise.
pub struct Instance {
    pub theta: Matrix,
    pub pi: Vec<usize>,
    pub y: ObservationMatrix,
}

pub fn linear_instance(n: usize, p: usize, sigma: f64, rng: &mut SimRng) -> Instance {
    let a: Vec<f64> = (0..n).map(|_| rng.random_range(0.5..3.0)).collect();
    let b: Vec<f64> = (0..n).map(|_| rng.random_range(0.0..6.0)).collect();
    let mut eta: Vec<f64> = (0..p).map(|_| rng.sample(StandardNormal)).collect();
    eta.sort_by(f64::total_cmp);
    let theta = Matrix::from_fn(n, p, |i, j| a[i] * eta[j] + b[i]);
    let mut pi: Vec<usize> = (0..p).collect();
    for k in (1..p).rev() {
        pi.swap(k, rng.random_range(0..=k));
    }
    let mut y = theta.scatter_columns(&pi);
    for i in 0..n {
        for x in y.row_mut(i) {
            let z: f64 = rng.sample(StandardNormal);
            *x += sigma * z;
        }
    }
    Instance {
        theta,
        pi,
        y: ObservationMatrix::new(y).unwrap(),
    }
}

pub fn permute_columns(y: &ObservationMatrix, perm: &[usize]) -> ObservationMatrix {
    ObservationMatrix::new(y.values().scatter_columns(perm)).unwrap()
}

pub fn random_perm(p: usize, rng: &mut SimRng) -> Vec<usize> {
    let mut perm: Vec<usize> = (0..p).collect();
    for k in (1..p).rev() {
        perm.swap(k, rng.random_range(0..=k));
    }
    perm
}

pub fn max_abs_diff(a: &[f64], b: &[f64]) -> f64 {
    assert_eq!(a.len(), b.len());
    a.iter().zip(b).fold(0.0, |m, (x, y)| m.max((x - y).abs()))
}

/// Explicit `Y (I - eeᵀ/p)`, built as a dense projection matrix.
pub fn center_by_projection(y: &Matrix) -> Matrix {
    let p = y.cols();
    let proj = Matrix::from_fn(p, p, |j, k| f64::from(u8::from(j == k)) - 1.0 / p as f64);
    Matrix::from_fn(y.rows(), p, |i, k| (0..p).map(|j| y.get(i, j) * proj.get(j, k)).sum())
}

/// `AᵀA`.
pub fn normal_gram(a: &Matrix) -> Vec<Vec<f64>> {
    let p = a.cols();
    let mut g = vec![vec![0.0; p]; p];
    for j in 0..p {
        for k in 0..p {
            g[j][k] = (0..a.rows()).map(|i| a.get(i, j) * a.get(i, k)).sum();
        }
    }
    g
}

/// Cyclic Jacobi eigen-decomposition of a symmetric matrix. Returns the
/// eigenvalues in decreasing order and the matching eigenvectors.
pub fn jacobi_eigen(mut a: Vec<Vec<f64>>) -> (Vec<f64>, Vec<Vec<f64>>) {
    let n = a.len();
    let mut v: Vec<Vec<f64>> = (0..n)
        .map(|i| (0..n).map(|j| f64::from(u8::from(i == j))).collect())
        .collect();
    for _sweep in 0..100 {
        let off: f64 = (0..n)
            .flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j)))
            .map(|(i, j)| a[i][j] * a[i][j])
            .sum();
        let scale: f64 = (0..n).map(|i| a[i][i] * a[i][i]).sum::<f64>().max(1e-300);
        if off <= 1e-30 * scale {
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                if a[p][q] == 0.0 {
                    continue;
                }
                let theta = (a[q][q] - a[p][p]) / (2.0 * a[p][q]);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let t = if theta == 0.0 { 1.0 } else { t };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for k in 0..n {
                    let (akp, akq) = (a[k][p], a[k][q]);
                    a[k][p] = c * akp - s * akq;
                    a[k][q] = s * akp + c * akq;
                }
                for k in 0..n {
                    let (apk, aqk) = (a[p][k], a[q][k]);
                    a[p][k] = c * apk - s * aqk;
                    a[q][k] = s * apk + c * aqk;
                }
                for row in v.iter_mut() {
                    let (vkp, vkq) = (row[p], row[q]);
                    row[p] = c * vkp - s * vkq;
                    row[q] = s * vkp + c * vkq;
                }
            }
        }
    }
    let mut idx: Vec<usize> = (0..n).collect();
    idx.sort_by(|&i, &j| a[j][j].total_cmp(&a[i][i]));
    let values = idx.iter().map(|&i| a[i][i]).collect();
    let vectors = idx
        .iter()
        .map(|&i| (0..n).map(|k| v[k][i]).collect())
        .collect();
    (values, vectors)
}
