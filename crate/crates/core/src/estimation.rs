//! Empirical type distribution and total-variation distance.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Per-type arrival counts.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TypeCounts {
    counts: Vec<u64>,
    total: u64,
}

impl TypeCounts {
    pub fn new(types: usize) -> Self {
        TypeCounts {
            counts: vec![0; types],
            total: 0,
        }
    }

    pub fn record(&mut self, i: usize) -> Result<()> {
        let len = self.counts.len();
        let slot = self
            .counts
            .get_mut(i)
            .ok_or(Error::IndexOutOfRange { index: i, len })?;
        *slot += 1;
        self.total += 1;
        Ok(())
    }

    pub fn counts(&self) -> &[u64] {
        &self.counts
    }

    pub fn total(&self) -> u64 {
        self.total
    }

    /// `counts[i] / total`.
    pub fn empirical_weights(&self) -> Result<Vec<f64>> {
        if self.total == 0 {
            return Err(Error::EmptyObservation);
        }
        let total = self.total as f64;
        Ok(self.counts.iter().map(|&c| c as f64 / total).collect())
    }
}

/// Tolerance on `sum == 1` for arguments of [`tv_distance`].
pub const DISTRIBUTION_TOLERANCE: f64 = 1e-9;

/// `0.5 * sum_i |p_i - q_i|`.
pub fn tv_distance(p: &[f64], q: &[f64]) -> Result<f64> {
    if p.len() != q.len() {
        return Err(Error::Domain(format!(
            "distributions have lengths {} and {}",
            p.len(),
            q.len()
        )));
    }
    for d in [p, q] {
        let sum: f64 = d.iter().sum();
        if d.iter().any(|x| x.is_nan() || *x < 0.0) || (sum - 1.0).abs() > DISTRIBUTION_TOLERANCE {
            return Err(Error::Domain(format!("not a probability vector: {d:?}")));
        }
    }
    let d = 0.5 * p.iter().zip(q).map(|(a, b)| (a - b).abs()).sum::<f64>();
    Ok(d.min(1.0))
}
