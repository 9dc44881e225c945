//! Bayesian-Dirichlet local scores and their inclusion–exclusion weights.

use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use statrs::function::gamma::ln_gamma;

use super::parents::{enumerate_parent_sets, ParentSet};
use crate::dataset::Dataset;
use crate::error::{Error, Result};

/// Rule for the Dirichlet hyperparameter `α_ijk`, shared by every cell of a
/// (variable, parent set) pair.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AlphaRule {
    /// `1 / (r_i · q_i)`
    #[default]
    #[serde(rename = "inv_riqi")]
    InvRiQi,
    /// `1 / r_i`
    InvRi,
    /// `1`
    One,
    /// `N / (r_i · q_i)`
    #[serde(rename = "n_over_riqi")]
    NOverRiQi,
}

impl AlphaRule {
    pub fn value(self, r_i: usize, q: usize, rows: usize) -> f64 {
        let (r_i, q) = (r_i as f64, q as f64);
        match self {
            AlphaRule::InvRiQi => 1.0 / (r_i * q),
            AlphaRule::InvRi => 1.0 / r_i,
            AlphaRule::One => 1.0,
            AlphaRule::NOverRiQi => rows as f64 / (r_i * q),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            AlphaRule::InvRiQi => "inv_riqi",
            AlphaRule::InvRi => "inv_ri",
            AlphaRule::One => "one",
            AlphaRule::NOverRiQi => "n_over_riqi",
        }
    }
}

impl fmt::Display for AlphaRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for AlphaRule {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "inv_riqi" => Ok(AlphaRule::InvRiQi),
            "inv_ri" => Ok(AlphaRule::InvRi),
            "one" => Ok(AlphaRule::One),
            "n_over_riqi" => Ok(AlphaRule::NOverRiQi),
            other => Err(Error::InvalidParameter(format!("unknown alpha rule {other:?}"))),
        }
    }
}

/// The uninformative default hyperparameter `1 / (r_i · q)`.
pub fn default_alpha(r_i: usize, q: usize) -> f64 {
    AlphaRule::InvRiQi.value(r_i, q, 0)
}

/// Number of joint states of `parents`.
pub fn joint_state_count(num_states: &[usize], parents: &ParentSet) -> usize {
    parents.members().iter().map(|&p| num_states[p]).product()
}

/// Occurrence counts `N_ijk` for one variable and parent set, laid out as
/// `counts[j * r_i + k]`.
pub fn count_table(dataset: &Dataset, var: usize, parents: &ParentSet) -> Vec<u64> {
    let r = dataset.num_states();
    let r_i = r[var];
    let q = joint_state_count(r, parents);
    let mut counts = vec![0u64; q * r_i];
    match *parents {
        ParentSet::Empty => {
            for row in dataset.rows() {
                counts[row[var] as usize] += 1;
            }
        }
        ParentSet::One(a) => {
            for row in dataset.rows() {
                counts[row[a] as usize * r_i + row[var] as usize] += 1;
            }
        }
        ParentSet::Two(a, b) => {
            let r_a = r[a];
            for row in dataset.rows() {
                let j = row[a] as usize + r_a * row[b] as usize;
                counts[j * r_i + row[var] as usize] += 1;
            }
        }
    }
    counts
}

/// Number of rows where `var` is in state `k` and `parents` is in joint
/// state `j`.
pub fn count_occurrences(dataset: &Dataset, var: usize, parents: &ParentSet, j: usize, k: usize) -> u64 {
    let r = dataset.num_states();
    dataset
        .rows()
        .filter(|row| {
            if row[var] as usize != k {
                return false;
            }
            let mut state = 0;
            let mut stride = 1;
            for p in parents.members() {
                state += row[p] as usize * stride;
                stride *= r[p];
            }
            state == j
        })
        .count() as u64
}

/// Negative log marginal likelihood contribution of `var` given `parents`,
/// evaluated term by term with log-gamma.
pub fn local_score(dataset: &Dataset, var: usize, parents: &ParentSet, rule: AlphaRule) -> f64 {
    let counts = count_table(dataset, var, parents);
    let r_i = dataset.num_states()[var];
    let q = counts.len() / r_i;
    let alpha = rule.value(r_i, q, dataset.n_rows());
    score_from_counts(&counts, r_i, alpha)
}

pub(crate) fn score_from_counts(counts: &[u64], r_i: usize, alpha: f64) -> f64 {
    let alpha_j = alpha * r_i as f64;
    let ln_gamma_alpha = ln_gamma(alpha);
    let ln_gamma_alpha_j = ln_gamma(alpha_j);
    let mut sum = 0.0;
    for cells in counts.chunks_exact(r_i) {
        let n_j: u64 = cells.iter().sum();
        // a parent state never observed contributes exactly zero
        if n_j == 0 {
            continue;
        }
        sum += ln_gamma_alpha_j - ln_gamma(n_j as f64 + alpha_j);
        for &n_jk in cells {
            if n_jk > 0 {
                sum += ln_gamma(n_jk as f64 + alpha) - ln_gamma_alpha;
            }
        }
    }
    -sum
}

/// Values indexed by (variable, parent set of size ≤ 2).
#[derive(Debug, Clone, PartialEq)]
pub struct ParentSetTable {
    n: usize,
    empty: Vec<f64>,
    single: Vec<f64>,
    pair: Vec<f64>,
}

impl ParentSetTable {
    fn filled(n: usize, value: f64) -> Self {
        Self {
            n,
            empty: vec![value; n],
            single: vec![value; n * n],
            pair: vec![value; n * n * n],
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    fn slot(&self, var: usize, parents: &ParentSet) -> usize {
        match *parents {
            ParentSet::Empty => var,
            ParentSet::One(a) => var * self.n + a,
            ParentSet::Two(a, b) => (var * self.n + a) * self.n + b,
        }
    }

    /// `None` when the entry was never set.
    pub fn get(&self, var: usize, parents: &ParentSet) -> Option<f64> {
        let slot = self.slot(var, parents);
        let v = match parents {
            ParentSet::Empty => self.empty[slot],
            ParentSet::One(_) => self.single[slot],
            ParentSet::Two(..) => self.pair[slot],
        };
        (!v.is_nan()).then_some(v)
    }

    pub fn set(&mut self, var: usize, parents: &ParentSet, value: f64) {
        let slot = self.slot(var, parents);
        match parents {
            ParentSet::Empty => self.empty[slot] = value,
            ParentSet::One(_) => self.single[slot] = value,
            ParentSet::Two(..) => self.pair[slot] = value,
        }
    }

    #[inline]
    pub fn empty_set(&self, var: usize) -> f64 {
        self.empty[var]
    }

    #[inline]
    pub fn single(&self, var: usize, parent: usize) -> f64 {
        self.single[var * self.n + parent]
    }

    /// Order of `a` and `b` does not matter.
    #[inline]
    pub fn pair(&self, var: usize, a: usize, b: usize) -> f64 {
        let (a, b) = if a < b { (a, b) } else { (b, a) };
        self.pair[(var * self.n + a) * self.n + b]
    }

    /// Builds a table from a closure over every valid (variable, parent set).
    pub fn from_fn(n: usize, mut f: impl FnMut(usize, &ParentSet) -> f64) -> Result<Self> {
        let mut table = Self::filled(n, f64::NAN);
        for var in 0..n {
            for ps in enumerate_parent_sets(n, var)? {
                table.set(var, &ps, f(var, &ps));
            }
        }
        Ok(table)
    }
}

/// Local scores `s_i(π)` and weights `w_i(π)` for every variable.
#[derive(Debug, Clone, PartialEq)]
pub struct ScoreTable {
    pub scores: ParentSetTable,
    pub weights: ParentSetTable,
}

impl ScoreTable {
    pub fn compute(dataset: &Dataset, rule: AlphaRule) -> Result<Self> {
        let n = dataset.n_vars();
        let per_var: Vec<Vec<(ParentSet, f64)>> = (0..n)
            .into_par_iter()
            .map(|var| {
                enumerate_parent_sets(n, var).map(|sets| {
                    sets.into_iter()
                        .map(|ps| (ps, local_score(dataset, var, &ps, rule)))
                        .collect()
                })
            })
            .collect::<Result<_>>()?;
        let mut scores = ParentSetTable::filled(n, f64::NAN);
        for (var, entries) in per_var.iter().enumerate() {
            for (ps, s) in entries {
                scores.set(var, ps, *s);
            }
        }
        let weights = compute_weights(&scores)?;
        Ok(Self { scores, weights })
    }
}

/// Inclusion–exclusion weights: `w(∅) = s(∅)`, `w({j}) = s({j}) − s(∅)`,
/// `w({j,k}) = s({j,k}) − s({j}) − s({k}) + s(∅)`.
pub fn compute_weights(scores: &ParentSetTable) -> Result<ParentSetTable> {
    let n = scores.n();
    let mut weights = ParentSetTable::filled(n, f64::NAN);
    for var in 0..n {
        for ps in enumerate_parent_sets(n, var)? {
            let s = |p: &ParentSet| {
                scores.get(var, p).ok_or_else(|| Error::MissingScore {
                    variable: var,
                    parents: p.members(),
                })
            };
            let w = match ps {
                ParentSet::Empty => s(&ps)?,
                ParentSet::One(_) => s(&ps)? - s(&ParentSet::Empty)?,
                ParentSet::Two(a, b) => {
                    s(&ps)? - s(&ParentSet::One(a))? - s(&ParentSet::One(b))? + s(&ParentSet::Empty)?
                }
            };
            weights.set(var, &ps, w);
        }
    }
    Ok(weights)
}

/// Builds a score table directly from given scores; used for experiments and
/// tests where the scores are not derived from data.
pub fn scores_from_fn(n: usize, f: impl FnMut(usize, &ParentSet) -> f64) -> Result<ScoreTable> {
    let scores = ParentSetTable::from_fn(n, f)?;
    let weights = compute_weights(&scores)?;
    Ok(ScoreTable { scores, weights })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn names(n: usize) -> Vec<String> {
        (0..n).map(|i| format!("v{i}")).collect()
    }

    #[test]
    fn alpha_rule_names_agree_everywhere() {
        for rule in [
            AlphaRule::InvRiQi,
            AlphaRule::InvRi,
            AlphaRule::One,
            AlphaRule::NOverRiQi,
        ] {
            let json = serde_json::to_string(&rule).unwrap();
            assert_eq!(json, format!("\"{}\"", rule.name()));
            assert_eq!(rule.name().parse::<AlphaRule>().unwrap(), rule);
        }
    }

    #[test]
    fn default_alpha_values() {
        assert_eq!(default_alpha(2, 1), 0.5);
        assert_eq!(default_alpha(2, 4), 0.125);
        assert_eq!(AlphaRule::One.value(3, 9, 100), 1.0);
        assert_eq!(AlphaRule::InvRi.value(4, 9, 100), 0.25);
        assert_eq!(AlphaRule::NOverRiQi.value(2, 5, 100), 10.0);
        for rule in [
            AlphaRule::InvRiQi,
            AlphaRule::InvRi,
            AlphaRule::One,
            AlphaRule::NOverRiQi,
        ] {
            assert_eq!(rule.name().parse::<AlphaRule>().unwrap(), rule);
        }
        assert!("half".parse::<AlphaRule>().is_err());
    }

    #[test]
    fn counts_on_identical_rows() {
        let ds = Dataset::new(names(2), vec![2, 2], &[vec![0, 1], vec![0, 1], vec![0, 1]]).unwrap();
        assert_eq!(count_occurrences(&ds, 0, &ParentSet::Empty, 0, 0), 3);
        assert_eq!(count_occurrences(&ds, 0, &ParentSet::Empty, 0, 1), 0);
        assert_eq!(count_occurrences(&ds, 0, &ParentSet::One(1), 1, 0), 3);
        assert_eq!(count_table(&ds, 0, &ParentSet::One(1)), vec![0, 0, 3, 0]);
    }

    #[test]
    fn counts_on_empty_dataset_are_zero() {
        let ds = Dataset::empty(names(3), vec![2, 3, 2]).unwrap();
        for ps in enumerate_parent_sets(3, 0).unwrap() {
            assert!(count_table(&ds, 0, &ps).iter().all(|&c| c == 0));
            assert_eq!(local_score(&ds, 0, &ps, AlphaRule::InvRiQi), 0.0);
        }
    }

    #[test]
    fn count_table_agrees_with_direct_counting() {
        let rows: Vec<Vec<usize>> = (0..60).map(|t| vec![t % 2, (t / 2) % 3, (t * 7 / 3) % 2]).collect();
        let ds = Dataset::new(names(3), vec![2, 3, 2], &rows).unwrap();
        for var in 0..3 {
            for ps in enumerate_parent_sets(3, var).unwrap() {
                let table = count_table(&ds, var, &ps);
                let r_i = ds.num_states()[var];
                let q = table.len() / r_i;
                assert_eq!(q, joint_state_count(ds.num_states(), &ps));
                for j in 0..q {
                    let mut n_ij = 0;
                    for k in 0..r_i {
                        let c = count_occurrences(&ds, var, &ps, j, k);
                        assert_eq!(table[j * r_i + k], c);
                        n_ij += c;
                    }
                    let parent_rows = ds
                        .rows()
                        .filter(|row| {
                            let mut state = 0;
                            let mut stride = 1;
                            for p in ps.members() {
                                state += row[p] as usize * stride;
                                stride *= ds.num_states()[p];
                            }
                            state == j
                        })
                        .count() as u64;
                    assert_eq!(n_ij, parent_rows);
                }
            }
        }
    }

    #[test]
    fn hand_evaluated_score() {
        // one row per state, α = 0.5: −[lnΓ(1) − lnΓ(3) + 2(lnΓ(1.5) − lnΓ(0.5))] = 3 ln 2
        let ds = Dataset::new(names(1), vec![2], &[vec![0], vec![1]]).unwrap();
        let s = local_score(&ds, 0, &ParentSet::Empty, AlphaRule::InvRiQi);
        assert!((s - 3.0 * 2f64.ln()).abs() < 1e-12, "{s}");
        assert!((s - 2.0794).abs() < 1e-4);
    }

    #[test]
    fn weights_by_inclusion_exclusion() {
        let table = scores_from_fn(3, |_, _| 7.5).unwrap();
        assert_eq!(table.weights.empty_set(0), 7.5);
        assert_eq!(table.weights.single(0, 1), 0.0);
        assert_eq!(table.weights.pair(0, 1, 2), 0.0);

        let table = scores_from_fn(3, |var, ps| match (var, ps) {
            (0, ParentSet::Empty) => 5.0,
            (0, ParentSet::One(1)) => 3.0,
            (0, ParentSet::One(2)) => 4.0,
            (0, ParentSet::Two(1, 2)) => 1.0,
            _ => 0.0,
        })
        .unwrap();
        assert_eq!(table.weights.single(0, 1), -2.0);
        assert_eq!(table.weights.pair(0, 1, 2), -1.0);
        assert_eq!(table.weights.pair(0, 2, 1), -1.0);
    }

    #[test]
    fn missing_score_is_reported() {
        let mut scores = ParentSetTable::from_fn(3, |_, _| 1.0).unwrap();
        scores.set(1, &ParentSet::One(2), f64::NAN);
        assert!(matches!(
            compute_weights(&scores),
            Err(Error::MissingScore { variable: 1, .. })
        ));
    }
}
