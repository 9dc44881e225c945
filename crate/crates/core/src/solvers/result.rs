use serde::{Deserialize, Serialize};

use crate::qubo::{to_bitstring, Qubo};

/// Relative tolerance under which two read energies count as equal.
pub const ENERGY_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq)]
pub struct Read {
    pub assignment: Vec<u8>,
    pub energy: f64,
}

/// Reads sorted by energy, then assignment; the first read is the best.
#[derive(Debug, Clone, PartialEq)]
pub struct SolveResult {
    reads: Vec<Read>,
    occurrences_of_best: usize,
}

pub fn energies_match(a: f64, b: f64) -> bool {
    (a - b).abs() <= ENERGY_TOLERANCE * a.abs().max(b.abs()).max(1e-3)
}

impl SolveResult {
    /// Panics on an empty read list; every sampler returns at least one read.
    pub fn from_reads(mut reads: Vec<Read>) -> Self {
        assert!(!reads.is_empty(), "a solve result needs at least one read");
        reads.sort_by(|a, b| {
            a.energy
                .total_cmp(&b.energy)
                .then_with(|| a.assignment.cmp(&b.assignment))
        });
        let best = reads[0].energy;
        let occurrences_of_best = reads.iter().filter(|r| energies_match(r.energy, best)).count();
        Self {
            reads,
            occurrences_of_best,
        }
    }

    pub fn reads(&self) -> &[Read] {
        &self.reads
    }

    pub fn best(&self) -> &Read {
        &self.reads[0]
    }

    pub fn best_energy(&self) -> f64 {
        self.reads[0].energy
    }

    pub fn occurrences_of_best(&self) -> usize {
        self.occurrences_of_best
    }

    /// Whether every stored energy re-evaluates identically under `q`.
    pub fn energies_consistent(&self, q: &Qubo) -> bool {
        self.reads
            .iter()
            .all(|r| q.energy(&r.assignment).is_ok_and(|e| energies_match(e, r.energy)))
    }

    pub fn export(&self, include_reads: bool) -> SolveResultDoc {
        SolveResultDoc {
            best_energy: self.best_energy(),
            best_assignment: to_bitstring(&self.best().assignment),
            occurrences_of_best: self.occurrences_of_best,
            reads: include_reads.then(|| {
                self.reads
                    .iter()
                    .map(|r| ReadDoc {
                        assignment: to_bitstring(&r.assignment),
                        energy: r.energy,
                    })
                    .collect()
            }),
        }
    }
}

/// JSON form of a [`SolveResult`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SolveResultDoc {
    pub best_energy: f64,
    pub best_assignment: String,
    pub occurrences_of_best: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub reads: Option<Vec<ReadDoc>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReadDoc {
    pub assignment: String,
    pub energy: f64,
}
