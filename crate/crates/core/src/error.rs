use std::io;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("parse error: {0}")]
    Parse(String),

    #[error("network contains a directed cycle through {0:?}")]
    Cycle(Vec<String>),

    #[error("CPT row not normalized: variable {variable}, row {row} sums to {sum}")]
    CptNotNormalized { variable: String, row: usize, sum: f64 },

    #[error("state-count mismatch: {0}")]
    StateCountMismatch(String),

    #[error("state index {state} out of range for variable {variable} with {states} states")]
    InvalidState {
        variable: usize,
        state: usize,
        states: usize,
    },

    #[error("state space of {combinations} combinations exceeds the enumeration cap {cap}")]
    EnumerationCap { combinations: u128, cap: u128 },

    #[error("at least 3 variables are required, got {0}")]
    TooFewVariables(usize),

    #[error("only m = 2 is supported, got m = {0}")]
    UnsupportedMaxParents(usize),

    #[error("length mismatch: expected {expected}, got {actual}")]
    LengthMismatch { expected: usize, actual: usize },

    #[error("ES cap exceeded: {bits} edge bits > cap {cap}")]
    EsCapExceeded { bits: usize, cap: usize },

    #[error("subproblem size k = {k} out of range for n = {n}")]
    InvalidSubproblemSize { n: usize, k: usize },

    #[error("invalid variable index {index} (n = {n})")]
    InvalidIndex { index: usize, n: usize },

    #[error("missing score entry for variable {variable}, parent set {parents:?}")]
    MissingScore { variable: usize, parents: Vec<usize> },

    #[error("no runs to aggregate")]
    EmptyRuns,

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error(transparent)]
    Io(#[from] io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
