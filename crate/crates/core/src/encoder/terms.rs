//! Direct evaluation of the individual Hamiltonian terms for an assignment.

use serde::{Deserialize, Serialize};

use super::build::BnslQubo;
use super::index::{MAX_PARENTS, SLACK_BITS};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HamiltonianTerms {
    /// `None` when the instance carries no score table.
    pub score: Option<f64>,
    pub max: f64,
    pub trans: f64,
    pub consist: f64,
}

impl HamiltonianTerms {
    pub fn cycle(&self) -> f64 {
        self.trans + self.consist
    }

    pub fn penalty(&self) -> f64 {
        self.max + self.cycle()
    }
}

/// Evaluates each term of the Hamiltonian, including the constant part of
/// the in-degree term that the matrix omits.
pub fn hamiltonian_terms(q: &BnslQubo, x: &[u8]) -> Result<HamiltonianTerms> {
    let index = &q.index;
    if x.len() != index.total() {
        return Err(Error::LengthMismatch {
            expected: index.total(),
            actual: x.len(),
        });
    }
    let n = index.n();
    let d = |from: usize, to: usize| x[index.edge(from, to)] as f64;
    let r = |a: usize, b: usize| x[index.order(a, b)] as f64;

    let score = q.scores.as_ref().map(|table| {
        let w = &table.weights;
        let mut total = 0.0;
        for i in 0..n {
            total += w.empty_set(i);
            for j in (0..n).filter(|&j| j != i) {
                total += w.single(i, j) * d(j, i);
                for k in (j + 1..n).filter(|&k| k != i) {
                    total += w.pair(i, j, k) * d(j, i) * d(k, i);
                }
            }
        }
        total
    });

    let mut max = 0.0;
    for i in 0..n {
        let in_degree: f64 = (0..n).filter(|&j| j != i).map(|j| d(j, i)).sum();
        let slack: f64 = (0..SLACK_BITS)
            .map(|l| (1u32 << l) as f64 * x[index.slack(i, l)] as f64)
            .sum();
        let gap = MAX_PARENTS as f64 - in_degree - slack;
        max += q.penalties.delta_max[i] * gap * gap;
    }

    let mut trans = 0.0;
    let mut consist = 0.0;
    for i in 0..n {
        for j in i + 1..n {
            for k in j + 1..n {
                trans +=
                    q.penalties.delta_trans * (r(i, k) + r(i, j) * r(j, k) - r(i, j) * r(i, k) - r(j, k) * r(i, k));
            }
            consist += q.penalties.delta_consist * (d(j, i) * r(i, j) + d(i, j) - d(i, j) * r(i, j));
        }
    }
    Ok(HamiltonianTerms {
        score,
        max,
        trans,
        consist,
    })
}
