//! Exhaustive search over the edge bits, completing each candidate with its
//! best slack and order bits.

use rayon::prelude::*;

use super::completion::fill_completion;
use super::result::{Read, SolveResult};
use crate::encoder::{BnslQubo, VariableIndexMap};
use crate::error::{Error, Result};
use crate::graph::Structure;

/// Default limit on enumerated edge bits (`n(n−1) ≤ 24`, i.e. `n ≤ 5`).
pub const DEFAULT_ES_CAP_BITS: usize = 24;

/// Evaluates every one of the `2^{n(n−1)}` edge assignments; the result has a
/// single read holding the minimum (ties go to the smallest edge word).
pub fn exhaustive_search(q: &BnslQubo, cap_bits: usize) -> Result<SolveResult> {
    let index = q.index;
    let bits = index.edge_count();
    if bits > cap_bits || bits >= 64 {
        return Err(Error::EsCapExceeded { bits, cap: cap_bits });
    }
    let total: u64 = 1 << bits;
    let (word, energy) = (0..total)
        .into_par_iter()
        .map_init(
            || Scratch::new(&index),
            |scratch, word| (word, scratch.evaluate(q, word)),
        )
        .reduce(
            || (u64::MAX, f64::INFINITY),
            |a, b| match a.1.total_cmp(&b.1).then(a.0.cmp(&b.0)) {
                std::cmp::Ordering::Greater => b,
                _ => a,
            },
        );
    let mut scratch = Scratch::new(&index);
    scratch.complete(word);
    Ok(SolveResult::from_reads(vec![Read {
        assignment: scratch.x,
        energy,
    }]))
}

struct Scratch {
    index: VariableIndexMap,
    x: Vec<u8>,
    graph: Structure,
}

impl Scratch {
    fn new(index: &VariableIndexMap) -> Self {
        Self {
            index: *index,
            x: vec![0; index.total()],
            graph: Structure::empty(index.n()),
        }
    }

    /// Bit `b` of `word` is edge variable `b`.
    fn complete(&mut self, word: u64) {
        let n = self.index.n();
        for from in 0..n {
            for to in (0..n).filter(|&t| t != from) {
                let bit = ((word >> self.index.edge(from, to)) & 1) as u8;
                self.x[self.index.edge(from, to)] = bit;
                self.graph.set_edge(from, to, bit == 1).expect("in range");
            }
        }
        fill_completion(&self.graph, &self.index, &mut self.x);
    }

    fn evaluate(&mut self, q: &BnslQubo, word: u64) -> f64 {
        self.complete(word);
        q.qubo.energy_unchecked(&self.x)
    }
}
