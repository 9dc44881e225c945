//! Penalty weights for the in-degree and acyclicity constraints.

use serde::{Deserialize, Serialize};

use super::score::ParentSetTable;

/// `Δ_ji`: an upper estimate of the score gain from inserting arc `j → i`.
/// Stored row-major as `values[j * n + i]` with a zero diagonal.
#[derive(Debug, Clone, PartialEq)]
pub struct DeltaMatrix {
    n: usize,
    values: Vec<f64>,
}

impl DeltaMatrix {
    pub fn n(&self) -> usize {
        self.n
    }

    /// `Δ` for the arc `from → to`.
    #[inline]
    pub fn get(&self, from: usize, to: usize) -> f64 {
        self.values[from * self.n + to]
    }

    pub fn from_values(n: usize, values: Vec<f64>) -> Self {
        assert_eq!(values.len(), n * n);
        Self { n, values }
    }
}

/// `Δ'_ji = −w_i({j}) − Σ_{k≠i,j} min(0, w_i({j,k}))`, `Δ_ji = max(0, Δ'_ji)`.
pub fn compute_deltas(weights: &ParentSetTable) -> DeltaMatrix {
    let n = weights.n();
    let mut values = vec![0.0; n * n];
    for i in 0..n {
        for j in (0..n).filter(|&j| j != i) {
            let mut d = -weights.single(i, j);
            for k in (0..n).filter(|&k| k != i && k != j) {
                d -= weights.pair(i, j, k).min(0.0);
            }
            values[j * n + i] = d.max(0.0);
        }
    }
    DeltaMatrix { n, values }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Penalties {
    pub delta_max: Vec<f64>,
    pub delta_trans: f64,
    pub delta_consist: f64,
}

/// Each penalty is its lower bound (times `scale`) plus one:
/// `δ_max(i) = max_j Δ_ji + 1`, `δ_trans = max Δ + 1`,
/// `δ_consist = (n − 2)·δ_trans + 1`.
pub fn compute_penalties(deltas: &DeltaMatrix, scale: f64) -> Penalties {
    let n = deltas.n();
    let delta_max = (0..n)
        .map(|i| {
            let bound = (0..n).filter(|&j| j != i).map(|j| deltas.get(j, i)).fold(0.0, f64::max);
            scale * bound + 1.0
        })
        .collect();
    let overall = deltas.values.iter().copied().fold(0.0, f64::max);
    let delta_trans = scale * overall + 1.0;
    let delta_consist = (n as f64 - 2.0) * delta_trans + 1.0;
    Penalties {
        delta_max,
        delta_trans,
        delta_consist,
    }
}
