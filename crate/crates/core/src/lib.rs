//! Bayesian network structure learning as a QUBO problem.
//!
//! * [`network`] and [`dataset`]: discrete networks and the data sampled from them.
//! * [`encoder`]: scores, penalties and the QUBO matrix for at most two parents per node.
//! * [`solvers`]: simulated annealing, exhaustive search over edge bits, decoding.
//! * [`decomposition`]: solving all `k`-variable sub-instances and merging their edges.
//! * [`eval`]: success rate, energy ratios, sensitivity and specificity.

pub mod dataset;
pub mod decomposition;
pub mod encoder;
pub mod error;
pub mod eval;
pub mod graph;
pub mod network;
pub mod networks;
pub mod qubo;
pub mod solvers;

pub use dataset::Dataset;
pub use encoder::{build_qubo, BnslQubo, EncoderConfig};
pub use error::{Error, Result};
pub use graph::{topological_order, Structure, TopoOrder};
pub use network::BayesNet;
pub use qubo::Qubo;
pub use solvers::{SolveResult, SolverParams};
