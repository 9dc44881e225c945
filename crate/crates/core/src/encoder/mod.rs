//! QUBO encoding of structure learning with at most two parents per node.
//!
//! The pipeline scores every candidate parent set with a Bayesian-Dirichlet
//! marginal likelihood, turns scores into inclusion–exclusion weights, bounds
//! the penalty strengths from those weights and fills an upper-triangular
//! matrix with the score, in-degree and acyclicity terms.

mod build;
mod index;
mod parents;
mod penalty;
mod score;
mod terms;

pub use build::{build_from_scores, build_qubo, BnslQubo, EncoderConfig, IndexSidecar};
pub use index::{Role, VariableIndexMap, MAX_PARENTS, SLACK_BITS};
pub use parents::{enumerate_parent_sets, ParentSet};
pub use penalty::{compute_deltas, compute_penalties, DeltaMatrix, Penalties};
pub use score::{
    compute_weights, count_occurrences, count_table, default_alpha, joint_state_count, local_score, scores_from_fn,
    AlphaRule, ParentSetTable, ScoreTable,
};
pub use terms::{hamiltonian_terms, HamiltonianTerms};
