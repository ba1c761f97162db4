use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A permutation of `0..len`, stored as its image: position `k` maps to `self[k]`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Permutation(Vec<usize>);

impl Permutation {
    pub fn new(image: Vec<usize>) -> Result<Self> {
        let mut seen = vec![false; image.len()];
        for &k in &image {
            if k >= image.len() || std::mem::replace(&mut seen[k], true) {
                return Err(Error::InvalidArgument(format!(
                    "{image:?} is not a permutation of 0..{}",
                    image.len()
                )));
            }
        }
        Ok(Self(image))
    }

    pub fn identity(len: usize) -> Self {
        Self((0..len).collect())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn is_identity(&self) -> bool {
        self.0.iter().enumerate().all(|(k, &v)| k == v)
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.0
    }

    pub fn inverse(&self) -> Permutation {
        let mut inv = vec![0; self.0.len()];
        for (k, &v) in self.0.iter().enumerate() {
            inv[v] = k;
        }
        Permutation(inv)
    }
}

impl std::ops::Index<usize> for Permutation {
    type Output = usize;

    fn index(&self, k: usize) -> &usize {
        &self.0[k]
    }
}

/// Ascending ranks of a vector together with the order that sorts it.
///
/// Indices and ranks are zero-based: the smallest entry gets rank 0 and
/// `order[k]` is the index holding rank `k`, so `order` is the estimated
/// permutation that maps sorted positions to observed columns.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct Ranking {
    pub ranks: Vec<usize>,
    pub order: Vec<usize>,
}

impl Ranking {
    pub fn len(&self) -> usize {
        self.ranks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ranks.is_empty()
    }

    pub fn inverse_permutation(&self) -> Permutation {
        Permutation(self.order.clone())
    }
}

/// Ranks `x` in increasing order; ties go to the earlier index first.
pub fn rank_vector(x: &[f64]) -> Result<Ranking> {
    if let Some(col) = x.iter().position(|v| !v.is_finite()) {
        return Err(Error::NonFiniteInput { row: 0, col });
    }
    let mut order: Vec<usize> = (0..x.len()).collect();
    // stable sort keeps equal values in index order
    order.sort_by(|&a, &b| x[a].total_cmp(&x[b]));
    let mut ranks = vec![0; x.len()];
    for (k, &idx) in order.iter().enumerate() {
        ranks[idx] = k;
    }
    Ok(Ranking { ranks, order })
}
