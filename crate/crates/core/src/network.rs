//! Discrete Bayesian networks: loading, joint probabilities and dataset
//! generation.
//!
//! CPT rows are indexed by the joint parent state, a mixed-radix number over
//! the parents sorted by ascending variable index with the lowest-index
//! parent least significant. Full state combinations use the same convention
//! with variable 0 least significant.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::dataset::Dataset;
use crate::error::{Error, Result};
use crate::graph::{topological_order, Structure, TopoOrder};

const ROW_SUM_TOLERANCE: f64 = 1e-9;

/// Default cap on the number of full state combinations `expected_dataset`
/// will enumerate.
pub const DEFAULT_ENUMERATION_CAP: u128 = 1 << 24;

#[derive(Debug, Clone, PartialEq)]
pub struct Variable {
    pub name: String,
    pub states: Vec<String>,
    /// Sorted ascending.
    pub parents: Vec<usize>,
    /// `q × r` matrix, one row per joint parent state.
    pub cpt: Vec<Vec<f64>>,
}

impl Variable {
    pub fn num_states(&self) -> usize {
        self.states.len()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct BayesNet {
    name: String,
    variables: Vec<Variable>,
    topo: Vec<usize>,
}

#[derive(Debug, Serialize, Deserialize)]
struct NetworkDoc {
    name: String,
    variables: Vec<VariableDoc>,
}

#[derive(Debug, Serialize, Deserialize)]
struct VariableDoc {
    name: String,
    states: Vec<String>,
    #[serde(default)]
    parents: Vec<String>,
    cpt: Vec<Vec<f64>>,
}

impl BayesNet {
    /// Validates and builds a network. Parent lists are sorted here; CPT rows
    /// must already follow the sorted-parent convention.
    pub fn new(name: impl Into<String>, mut variables: Vec<Variable>) -> Result<Self> {
        let n = variables.len();
        for (i, v) in variables.iter_mut().enumerate() {
            if v.states.len() < 2 {
                return Err(Error::StateCountMismatch(format!(
                    "variable {} has {} states, need at least 2",
                    v.name,
                    v.states.len()
                )));
            }
            v.parents.sort_unstable();
            for (pos, &p) in v.parents.iter().enumerate() {
                if p >= n {
                    return Err(Error::InvalidIndex { index: p, n });
                }
                if p == i {
                    return Err(Error::Parse(format!("variable {} lists itself as parent", v.name)));
                }
                if pos > 0 && v.parents[pos - 1] == p {
                    return Err(Error::Parse(format!("variable {} repeats parent {p}", v.name)));
                }
            }
        }
        for v in &variables {
            let q: usize = v.parents.iter().map(|&p| variables[p].states.len()).product();
            if v.cpt.len() != q {
                return Err(Error::StateCountMismatch(format!(
                    "variable {} needs {q} CPT rows, found {}",
                    v.name,
                    v.cpt.len()
                )));
            }
            for (row_idx, row) in v.cpt.iter().enumerate() {
                if row.len() != v.states.len() {
                    return Err(Error::StateCountMismatch(format!(
                        "variable {} CPT row {row_idx} has {} entries for {} states",
                        v.name,
                        row.len(),
                        v.states.len()
                    )));
                }
                if row.iter().any(|p| !(0.0..=1.0).contains(p)) {
                    return Err(Error::Parse(format!(
                        "variable {} CPT row {row_idx} has an entry outside [0, 1]",
                        v.name
                    )));
                }
                let sum: f64 = row.iter().sum();
                if (sum - 1.0).abs() > ROW_SUM_TOLERANCE {
                    return Err(Error::CptNotNormalized {
                        variable: v.name.clone(),
                        row: row_idx,
                        sum,
                    });
                }
            }
        }

        let mut structure = Structure::empty(n);
        for (i, v) in variables.iter().enumerate() {
            for &p in &v.parents {
                structure.set_edge(p, i, true)?;
            }
        }
        let topo = match topological_order(&structure) {
            TopoOrder::Order(order) => order,
            TopoOrder::Cycle(cycle) => {
                return Err(Error::Cycle(
                    cycle.into_iter().map(|i| variables[i].name.clone()).collect(),
                ))
            }
        };
        Ok(Self {
            name: name.into(),
            variables,
            topo,
        })
    }

    /// Parses the JSON network document.
    pub fn from_json(document: &str) -> Result<Self> {
        let doc: NetworkDoc = serde_json::from_str(document)?;
        let index_of = |name: &str| {
            doc.variables
                .iter()
                .position(|v| v.name == name)
                .ok_or_else(|| Error::Parse(format!("unknown parent variable {name:?}")))
        };
        let mut variables = Vec::with_capacity(doc.variables.len());
        for (i, v) in doc.variables.iter().enumerate() {
            if index_of(&v.name)? != i {
                return Err(Error::Parse(format!("duplicate variable name {:?}", v.name)));
            }
            let parents = v.parents.iter().map(|p| index_of(p)).collect::<Result<Vec<_>>>()?;
            variables.push(Variable {
                name: v.name.clone(),
                states: v.states.clone(),
                parents,
                cpt: v.cpt.clone(),
            });
        }
        Self::new(doc.name, variables)
    }

    pub fn to_json(&self) -> String {
        let doc = NetworkDoc {
            name: self.name.clone(),
            variables: self
                .variables
                .iter()
                .map(|v| VariableDoc {
                    name: v.name.clone(),
                    states: v.states.clone(),
                    parents: v.parents.iter().map(|&p| self.variables[p].name.clone()).collect(),
                    cpt: v.cpt.clone(),
                })
                .collect(),
        };
        serde_json::to_string_pretty(&doc).expect("network serializes")
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn variables(&self) -> &[Variable] {
        &self.variables
    }

    pub fn n(&self) -> usize {
        self.variables.len()
    }

    pub fn num_states(&self) -> Vec<usize> {
        self.variables.iter().map(Variable::num_states).collect()
    }

    pub fn variable_names(&self) -> Vec<String> {
        self.variables.iter().map(|v| v.name.clone()).collect()
    }

    pub fn state_names(&self) -> Vec<Vec<String>> {
        self.variables.iter().map(|v| v.states.clone()).collect()
    }

    pub fn topological_order(&self) -> &[usize] {
        &self.topo
    }

    pub fn structure(&self) -> Structure {
        let mut s = Structure::empty(self.n());
        for (i, v) in self.variables.iter().enumerate() {
            for &p in &v.parents {
                s.set_edge(p, i, true).expect("validated on construction");
            }
        }
        s
    }

    /// Mixed-radix joint state of `var`'s parents within `assignment`.
    #[inline]
    pub fn parent_state(&self, var: usize, assignment: &[usize]) -> usize {
        let mut j = 0;
        let mut stride = 1;
        for &p in &self.variables[var].parents {
            j += assignment[p] * stride;
            stride *= self.variables[p].num_states();
        }
        j
    }

    fn check_assignment(&self, assignment: &[usize]) -> Result<()> {
        if assignment.len() != self.n() {
            return Err(Error::LengthMismatch {
                expected: self.n(),
                actual: assignment.len(),
            });
        }
        for (i, &s) in assignment.iter().enumerate() {
            let r = self.variables[i].num_states();
            if s >= r {
                return Err(Error::InvalidState {
                    variable: i,
                    state: s,
                    states: r,
                });
            }
        }
        Ok(())
    }

    pub fn joint_probability(&self, assignment: &[usize]) -> Result<f64> {
        self.check_assignment(assignment)?;
        Ok(self.joint_probability_unchecked(assignment))
    }

    fn joint_probability_unchecked(&self, assignment: &[usize]) -> f64 {
        self.variables
            .iter()
            .enumerate()
            .map(|(i, v)| v.cpt[self.parent_state(i, assignment)][assignment[i]])
            .product()
    }

    fn empty_dataset(&self) -> Dataset {
        Dataset::empty(self.variable_names(), self.num_states())
            .and_then(|d| d.with_state_names(self.state_names()))
            .expect("network validated state counts")
    }

    /// Forward sampling in topological order; reproducible for a given seed.
    pub fn ancestral_sample(&self, rows: usize, seed: u64) -> Dataset {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut ds = self.empty_dataset();
        let mut assignment = vec![0usize; self.n()];
        for _ in 0..rows {
            for &var in &self.topo {
                let row = &self.variables[var].cpt[self.parent_state(var, &assignment)];
                assignment[var] = sample_categorical(row, rng.gen::<f64>());
            }
            ds.push_repeated(&assignment, 1);
        }
        ds
    }

    /// The zero-variance dataset: `floor(N·p)` copies of every full state
    /// combination, in enumeration order.
    pub fn expected_dataset(&self, rows: usize) -> Result<Dataset> {
        self.expected_dataset_capped(rows, DEFAULT_ENUMERATION_CAP)
    }

    pub fn expected_dataset_capped(&self, rows: usize, cap: u128) -> Result<Dataset> {
        let combinations = self
            .variables
            .iter()
            .map(|v| v.num_states() as u128)
            .try_fold(1u128, |acc, r| acc.checked_mul(r))
            .unwrap_or(u128::MAX);
        if combinations > cap {
            return Err(Error::EnumerationCap { combinations, cap });
        }
        let mut ds = self.empty_dataset();
        let r = self.num_states();
        let mut assignment = vec![0usize; self.n()];
        loop {
            let copies = expected_copies(rows, self.joint_probability_unchecked(&assignment));
            if copies > 0 {
                ds.push_repeated(&assignment, copies);
            }
            if !increment_mixed_radix(&mut assignment, &r) {
                break;
            }
        }
        Ok(ds)
    }
}

/// `floor(N·p)`, with a tolerance so products that are integers in exact
/// arithmetic are not rounded down by floating-point error.
fn expected_copies(rows: usize, p: f64) -> usize {
    let x = rows as f64 * p;
    (x + 1e-9 * x.max(1.0)).floor() as usize
}

/// Advances `digits` as a mixed-radix counter, digit 0 least significant.
/// Returns false after wrapping past the last combination.
pub(crate) fn increment_mixed_radix(digits: &mut [usize], radix: &[usize]) -> bool {
    for (d, &r) in digits.iter_mut().zip(radix) {
        *d += 1;
        if *d < r {
            return true;
        }
        *d = 0;
    }
    false
}

fn sample_categorical(probabilities: &[f64], u: f64) -> usize {
    let mut acc = 0.0;
    for (k, &p) in probabilities.iter().enumerate() {
        acc += p;
        if u < acc {
            return k;
        }
    }
    // u landed in the rounding gap above the cumulative sum
    probabilities.iter().rposition(|&p| p > 0.0).unwrap_or(0)
}
