//! Matrix fill for the structure-learning Hamiltonian and the on-disk format.

use std::io::{BufRead, Write};

use serde::{Deserialize, Serialize};

use super::index::{VariableIndexMap, MAX_PARENTS, SLACK_BITS};
use super::penalty::{compute_deltas, compute_penalties, Penalties};
use super::score::{AlphaRule, ScoreTable};
use crate::dataset::Dataset;
use crate::error::{Error, Result};
use crate::qubo::Qubo;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EncoderConfig {
    pub alpha: AlphaRule,
    /// Multiplies each penalty lower bound before the `+1`; 1.0 uses the
    /// bounds as-is.
    pub penalty_scale: f64,
    pub max_parents: usize,
}

impl Default for EncoderConfig {
    fn default() -> Self {
        Self {
            alpha: AlphaRule::default(),
            penalty_scale: 1.0,
            max_parents: MAX_PARENTS,
        }
    }
}

impl EncoderConfig {
    pub fn with_alpha(alpha: AlphaRule) -> Self {
        Self {
            alpha,
            ..Self::default()
        }
    }
}

/// A QUBO encoding one structure-learning instance.
#[derive(Debug, Clone, PartialEq)]
pub struct BnslQubo {
    pub qubo: Qubo,
    pub index: VariableIndexMap,
    pub penalties: Penalties,
    /// Present when built from data or scores; absent when read from a file.
    pub scores: Option<ScoreTable>,
}

impl BnslQubo {
    pub fn n(&self) -> usize {
        self.index.n()
    }

    pub fn dim(&self) -> usize {
        self.qubo.dim()
    }

    /// The `Σ_i m²·δ_max(i)` constant dropped from the matrix; adding it to
    /// `xᵀQx` recovers the full Hamiltonian.
    pub fn constant_offset(&self) -> f64 {
        let m2 = (MAX_PARENTS * MAX_PARENTS) as f64;
        self.penalties.delta_max.iter().map(|d| m2 * d).sum()
    }

    pub fn energy(&self, x: &[u8]) -> Result<f64> {
        self.qubo.energy(x)
    }

    /// Writes the sparse text format: a `dim` header, `row col value` lines
    /// with `row ≤ col`, then the penalty lines.
    pub fn write_text<W: Write>(&self, mut w: W) -> Result<()> {
        writeln!(w, "dim {} n {} m {}", self.dim(), self.n(), MAX_PARENTS)?;
        for (r, c, v) in self.qubo.nonzeros() {
            writeln!(w, "{r} {c} {v}")?;
        }
        for (i, d) in self.penalties.delta_max.iter().enumerate() {
            writeln!(w, "delta_max {i} {d}")?;
        }
        writeln!(w, "delta_trans {}", self.penalties.delta_trans)?;
        writeln!(w, "delta_consist {}", self.penalties.delta_consist)?;
        Ok(())
    }

    pub fn read_text<R: BufRead>(reader: R) -> Result<Self> {
        let mut lines = reader.lines();
        let header = lines.next().ok_or_else(|| Error::Parse("empty QUBO file".into()))??;
        let fields: Vec<&str> = header.split_whitespace().collect();
        let (dim, n, m) = match fields.as_slice() {
            ["dim", dim, "n", n, "m", m] => (parse_num::<usize>(dim)?, parse_num::<usize>(n)?, parse_num::<usize>(m)?),
            _ => return Err(Error::Parse(format!("bad QUBO header {header:?}"))),
        };
        if m != MAX_PARENTS {
            return Err(Error::UnsupportedMaxParents(m));
        }
        let index = VariableIndexMap::new(n)?;
        if index.total() != dim {
            return Err(Error::LengthMismatch {
                expected: index.total(),
                actual: dim,
            });
        }
        let mut qubo = Qubo::zeros(dim);
        let mut delta_max = vec![f64::NAN; n];
        let mut delta_trans = None;
        let mut delta_consist = None;
        for line in lines {
            let line = line?;
            let fields: Vec<&str> = line.split_whitespace().collect();
            match fields.as_slice() {
                [] => {}
                ["delta_max", i, v] => {
                    let i: usize = parse_num(i)?;
                    if i >= n {
                        return Err(Error::InvalidIndex { index: i, n });
                    }
                    delta_max[i] = parse_num(v)?;
                }
                ["delta_trans", v] => delta_trans = Some(parse_num(v)?),
                ["delta_consist", v] => delta_consist = Some(parse_num(v)?),
                [r, c, v] => {
                    let (r, c): (usize, usize) = (parse_num(r)?, parse_num(c)?);
                    if r > c || c >= dim {
                        return Err(Error::Parse(format!("bad QUBO entry {line:?}")));
                    }
                    qubo.set(r, c, parse_num(v)?);
                }
                _ => return Err(Error::Parse(format!("bad QUBO line {line:?}"))),
            }
        }
        if delta_max.iter().any(|d| d.is_nan()) {
            return Err(Error::Parse("missing delta_max lines".into()));
        }
        let penalties = Penalties {
            delta_max,
            delta_trans: delta_trans.ok_or_else(|| Error::Parse("missing delta_trans".into()))?,
            delta_consist: delta_consist.ok_or_else(|| Error::Parse("missing delta_consist".into()))?,
        };
        Ok(Self {
            qubo,
            index,
            penalties,
            scores: None,
        })
    }

    /// JSON sidecar naming the role of every index.
    pub fn index_sidecar(&self) -> IndexSidecar {
        IndexSidecar {
            n: self.n(),
            m: MAX_PARENTS,
            mu: SLACK_BITS,
            total: self.dim(),
            roles: self.index.roles().map(|r| r.to_string()).collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct IndexSidecar {
    pub n: usize,
    pub m: usize,
    pub mu: usize,
    pub total: usize,
    pub roles: Vec<String>,
}

fn parse_num<T: std::str::FromStr>(s: &str) -> Result<T> {
    s.parse()
        .map_err(|_| Error::Parse(format!("invalid number {s:?} in QUBO file")))
}

/// Scores every candidate parent set from data, derives penalties and fills
/// the matrix.
pub fn build_qubo(dataset: &Dataset, config: &EncoderConfig) -> Result<BnslQubo> {
    let n = dataset.n_vars();
    if config.max_parents != MAX_PARENTS {
        return Err(Error::UnsupportedMaxParents(config.max_parents));
    }
    if n < 3 {
        return Err(Error::TooFewVariables(n));
    }
    if config.alpha == AlphaRule::NOverRiQi && dataset.n_rows() == 0 {
        return Err(Error::InvalidParameter(
            "alpha rule n_over_riqi needs a non-empty dataset".into(),
        ));
    }
    let scores = ScoreTable::compute(dataset, config.alpha)?;
    build_from_scores(scores, config.penalty_scale)
}

/// Fills the matrix from precomputed scores.
pub fn build_from_scores(scores: ScoreTable, penalty_scale: f64) -> Result<BnslQubo> {
    let n = scores.weights.n();
    let index = VariableIndexMap::new(n)?;
    let deltas = compute_deltas(&scores.weights);
    let penalties = compute_penalties(&deltas, penalty_scale);
    let qubo = fill(&index, &scores, &penalties);
    Ok(BnslQubo {
        qubo,
        index,
        penalties,
        scores: Some(scores),
    })
}

fn fill(index: &VariableIndexMap, scores: &ScoreTable, penalties: &Penalties) -> Qubo {
    let n = index.n();
    let w = &scores.weights;
    let m = MAX_PARENTS as f64;
    let mut q = Qubo::zeros(index.total());

    for i in 0..n {
        // score: w_i({j}) on d_ji, w_i({j,k}) on (d_ji, d_ki)
        for j in (0..n).filter(|&j| j != i) {
            q.add(index.edge(j, i), index.edge(j, i), w.single(i, j));
            for k in (j + 1..n).filter(|&k| k != i) {
                q.add(index.edge(j, i), index.edge(k, i), w.pair(i, j, k));
            }
        }

        // δ_max(i)·(m − d_i − y_i)² without the constant m²·δ_max(i)
        let delta = penalties.delta_max[i];
        let mut terms: Vec<(usize, f64)> = (0..n).filter(|&j| j != i).map(|j| (index.edge(j, i), -1.0)).collect();
        terms.extend((0..SLACK_BITS).map(|l| (index.slack(i, l), -((1u32 << l) as f64))));
        for (a, &(var_a, c_a)) in terms.iter().enumerate() {
            q.add(var_a, var_a, delta * c_a * c_a);
            q.add(var_a, var_a, delta * 2.0 * m * c_a);
            for &(var_b, c_b) in &terms[a + 1..] {
                q.add(var_a, var_b, delta * 2.0 * c_a * c_b);
            }
        }

        for j in i + 1..n {
            let trans = penalties.delta_trans;
            for k in j + 1..n {
                let (r_ij, r_jk, r_ik) = (index.order(i, j), index.order(j, k), index.order(i, k));
                q.add(r_ik, r_ik, trans);
                q.add(r_ij, r_jk, trans);
                q.add(r_ij, r_ik, -trans);
                q.add(r_ik, r_jk, -trans);
            }

            let consist = penalties.delta_consist;
            let r_ij = index.order(i, j);
            q.add(index.edge(j, i), r_ij, consist);
            q.add(index.edge(i, j), index.edge(i, j), consist);
            q.add(index.edge(i, j), r_ij, -consist);
        }
    }
    q
}
