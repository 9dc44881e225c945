//! Samplers for QUBO instances and the shared result types.

mod annealing;
mod completion;
mod exhaustive;
mod result;

use serde::{Deserialize, Serialize};

pub use annealing::{auto_temperatures, geometric_schedule, simulated_annealing};
pub use completion::{complete_assignment, decode_solution, edge_bits};
pub use exhaustive::{exhaustive_search, DEFAULT_ES_CAP_BITS};
pub use result::{energies_match, Read, ReadDoc, SolveResult, SolveResultDoc, ENERGY_TOLERANCE};

use crate::encoder::BnslQubo;
use crate::error::{Error, Result};
use crate::qubo::Qubo;

pub fn energy(q: &Qubo, x: &[u8]) -> Result<f64> {
    q.energy(x)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Schedule {
    /// Start at the largest coefficient magnitude, end at 1e-3 of the smallest.
    Auto,
    Geometric {
        t_start: f64,
        t_end: f64,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SolverParams {
    pub reads: usize,
    pub sweeps: usize,
    pub seed: u64,
    pub schedule: Schedule,
}

impl Default for SolverParams {
    fn default() -> Self {
        Self {
            reads: 100,
            sweeps: 1000,
            seed: 0,
            schedule: Schedule::Auto,
        }
    }
}

impl SolverParams {
    pub fn new(reads: usize, sweeps: usize, seed: u64) -> Self {
        Self {
            reads,
            sweeps,
            seed,
            schedule: Schedule::Auto,
        }
    }

    pub fn with_seed(self, seed: u64) -> Self {
        Self { seed, ..self }
    }

    pub fn validate(&self) -> Result<()> {
        if self.reads == 0 {
            return Err(Error::InvalidParameter("reads must be at least 1".into()));
        }
        if self.sweeps == 0 {
            return Err(Error::InvalidParameter("sweeps must be at least 1".into()));
        }
        if let Schedule::Geometric { t_start, t_end } = self.schedule {
            if !(t_start > 0.0 && t_end > 0.0) {
                return Err(Error::InvalidParameter("temperatures must be positive".into()));
            }
        }
        Ok(())
    }
}

/// Minimizes an encoded instance. Implementations must return at least one
/// read, each carrying its exact energy.
pub trait Sampler: Send + Sync {
    fn name(&self) -> &str;
    fn solve(&self, q: &BnslQubo, params: &SolverParams) -> Result<SolveResult>;
}

#[derive(Debug, Clone, Copy, Default)]
pub struct SimulatedAnnealing;

impl Sampler for SimulatedAnnealing {
    fn name(&self) -> &str {
        "sa"
    }

    fn solve(&self, q: &BnslQubo, params: &SolverParams) -> Result<SolveResult> {
        simulated_annealing(&q.qubo, params)
    }
}

#[derive(Debug, Clone, Copy)]
pub struct ExhaustiveSearch {
    pub cap_bits: usize,
}

impl Default for ExhaustiveSearch {
    fn default() -> Self {
        Self {
            cap_bits: DEFAULT_ES_CAP_BITS,
        }
    }
}

impl Sampler for ExhaustiveSearch {
    fn name(&self) -> &str {
        "es"
    }

    /// Deterministic; `params` is ignored.
    fn solve(&self, q: &BnslQubo, _params: &SolverParams) -> Result<SolveResult> {
        exhaustive_search(q, self.cap_bits)
    }
}

/// Samplers selectable by name. Starts with `sa` and `es`; others may be
/// registered.
pub struct SamplerRegistry {
    samplers: Vec<Box<dyn Sampler>>,
}

impl Default for SamplerRegistry {
    fn default() -> Self {
        Self {
            samplers: vec![Box::new(SimulatedAnnealing), Box::new(ExhaustiveSearch::default())],
        }
    }
}

impl SamplerRegistry {
    /// Replaces any sampler already registered under the same name.
    pub fn register(&mut self, sampler: Box<dyn Sampler>) {
        self.samplers.retain(|s| s.name() != sampler.name());
        self.samplers.push(sampler);
    }

    pub fn get(&self, name: &str) -> Result<&dyn Sampler> {
        self.samplers
            .iter()
            .find(|s| s.name() == name)
            .map(|s| s.as_ref())
            .ok_or_else(|| Error::InvalidParameter(format!("unknown solver {name:?}")))
    }

    pub fn names(&self) -> Vec<&str> {
        self.samplers.iter().map(|s| s.name()).collect()
    }
}
