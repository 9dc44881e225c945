//! Divide and conquer: solve every `k`-variable sub-instance, count how often
//! each directed edge appears, and rebuild the full structure from the counts.

use std::time::Instant;

use rand::seq::index::sample;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::dataset::Dataset;
use crate::encoder::{build_qubo, EncoderConfig};
use crate::error::{Error, Result};
use crate::graph::Structure;
use crate::solvers::{decode_solution, Sampler, SolverParams};

/// All `k`-subsets of `0..n` in lexicographic order.
pub fn generate_subproblems(n: usize, k: usize) -> Result<Vec<Vec<usize>>> {
    if k < 3 || k > n {
        return Err(Error::InvalidSubproblemSize { n, k });
    }
    let mut out = Vec::new();
    let mut combo: Vec<usize> = (0..k).collect();
    loop {
        out.push(combo.clone());
        // rightmost position that can still advance
        let Some(pos) = (0..k).rev().find(|&p| combo[p] < n - k + p) else {
            return Ok(out);
        };
        combo[pos] += 1;
        for p in pos + 1..k {
            combo[p] = combo[p - 1] + 1;
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Subproblem {
    pub indices: Vec<usize>,
    pub dataset: Dataset,
}

impl Subproblem {
    pub fn new(dataset: &Dataset, indices: Vec<usize>) -> Result<Self> {
        let projected = dataset.project(&indices)?;
        Ok(Self {
            indices,
            dataset: projected,
        })
    }

    pub fn num_states(&self) -> &[usize] {
        self.dataset.num_states()
    }
}

/// Edge appearance counts `C` and absence counts `P` over solved
/// subproblems, indexed `[from * n + to]`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReconstructionTally {
    n: usize,
    counts: Vec<u32>,
    absences: Vec<u32>,
}

/// Serialized as the number 1 or 2.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(into = "u8", try_from = "u8")]
pub enum Strategy {
    /// Keep `i → j` when `C_ij > 0` and `C_ij > C_ji`.
    MajorityCount,
    /// Keep `i → j` when `C_ij − P_ij > 0`.
    CountMinusAbsence,
}

impl From<Strategy> for u8 {
    fn from(s: Strategy) -> u8 {
        s.number()
    }
}

impl TryFrom<u8> for Strategy {
    type Error = Error;

    fn try_from(value: u8) -> Result<Self> {
        Strategy::from_number(value)
    }
}

impl Strategy {
    pub fn from_number(value: u8) -> Result<Self> {
        match value {
            1 => Ok(Strategy::MajorityCount),
            2 => Ok(Strategy::CountMinusAbsence),
            other => Err(Error::InvalidParameter(format!("unknown strategy {other}"))),
        }
    }

    pub fn number(self) -> u8 {
        match self {
            Strategy::MajorityCount => 1,
            Strategy::CountMinusAbsence => 2,
        }
    }
}

impl ReconstructionTally {
    pub fn new(n: usize) -> Self {
        Self {
            n,
            counts: vec![0; n * n],
            absences: vec![0; n * n],
        }
    }

    /// Builds a tally from explicit `C` and `P` matrices.
    pub fn from_matrices(counts: Vec<Vec<u32>>, absences: Vec<Vec<u32>>) -> Result<Self> {
        let n = counts.len();
        let flat = |m: Vec<Vec<u32>>| -> Result<Vec<u32>> {
            if m.len() != n || m.iter().any(|row| row.len() != n) {
                return Err(Error::LengthMismatch {
                    expected: n,
                    actual: m.len(),
                });
            }
            Ok(m.into_iter().flatten().collect())
        };
        let tally = Self {
            n,
            counts: flat(counts)?,
            absences: flat(absences)?,
        };
        if (0..n).any(|i| tally.count(i, i) != 0 || tally.absence(i, i) != 0) {
            return Err(Error::InvalidParameter("tally diagonal must be zero".into()));
        }
        Ok(tally)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn count(&self, from: usize, to: usize) -> u32 {
        self.counts[from * self.n + to]
    }

    pub fn absence(&self, from: usize, to: usize) -> u32 {
        self.absences[from * self.n + to]
    }

    /// Adds one subproblem solution whose local node `a` is `indices[a]`.
    pub fn add(&mut self, indices: &[usize], solution: &Structure) -> Result<()> {
        if solution.n() != indices.len() {
            return Err(Error::LengthMismatch {
                expected: indices.len(),
                actual: solution.n(),
            });
        }
        if let Some(&bad) = indices.iter().find(|&&g| g >= self.n) {
            return Err(Error::InvalidIndex { index: bad, n: self.n });
        }
        for (a, &ga) in indices.iter().enumerate() {
            for (b, &gb) in indices.iter().enumerate() {
                if a == b {
                    continue;
                }
                let present = solution.has_edge(a, b) as u32;
                self.counts[ga * self.n + gb] += present;
                self.absences[ga * self.n + gb] += 1 - present;
            }
        }
        Ok(())
    }

    pub fn merge(&mut self, other: &ReconstructionTally) {
        assert_eq!(self.n, other.n);
        for (a, b) in self.counts.iter_mut().zip(&other.counts) {
            *a += b;
        }
        for (a, b) in self.absences.iter_mut().zip(&other.absences) {
            *a += b;
        }
    }

    pub fn counts_matrix(&self) -> Vec<Vec<u32>> {
        self.counts.chunks(self.n.max(1)).map(<[u32]>::to_vec).collect()
    }

    pub fn absences_matrix(&self) -> Vec<Vec<u32>> {
        self.absences.chunks(self.n.max(1)).map(<[u32]>::to_vec).collect()
    }

    pub fn reconstruct(&self, strategy: Strategy) -> Structure {
        match strategy {
            Strategy::MajorityCount => reconstruct_strategy1(self),
            Strategy::CountMinusAbsence => reconstruct_strategy2(self),
        }
    }
}

pub fn accumulate_tally(n: usize, solutions: &[(Vec<usize>, Structure)]) -> Result<ReconstructionTally> {
    let mut tally = ReconstructionTally::new(n);
    for (indices, s) in solutions {
        tally.add(indices, s)?;
    }
    Ok(tally)
}

/// Ties `C_ij = C_ji` keep neither edge.
pub fn reconstruct_strategy1(tally: &ReconstructionTally) -> Structure {
    build_from_rule(tally, |i, j| {
        let c = tally.count(i, j);
        c > 0 && c > tally.count(j, i)
    })
}

pub fn reconstruct_strategy2(tally: &ReconstructionTally) -> Structure {
    build_from_rule(tally, |i, j| tally.count(i, j) > tally.absence(i, j))
}

fn build_from_rule(tally: &ReconstructionTally, keep: impl Fn(usize, usize) -> bool) -> Structure {
    let n = tally.n();
    let mut s = Structure::empty(n);
    for i in 0..n {
        for j in (0..n).filter(|&j| j != i) {
            if keep(i, j) {
                s.set_edge(i, j, true).expect("in range");
            }
        }
    }
    s
}

/// Solve only part of the subproblems, chosen uniformly without replacement.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SubsetSelection {
    pub count: usize,
    pub seed: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DivideConfig {
    pub k: usize,
    pub strategy: Strategy,
    pub encoder: EncoderConfig,
    pub subset: Option<SubsetSelection>,
}

impl DivideConfig {
    pub fn new(k: usize) -> Self {
        Self {
            k,
            strategy: Strategy::CountMinusAbsence,
            encoder: EncoderConfig::default(),
            subset: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SubproblemFailure {
    pub indices: Vec<usize>,
    pub message: String,
}

#[derive(Debug, Clone, PartialEq)]
pub struct DivideOutcome {
    pub structure: Structure,
    pub tally: ReconstructionTally,
    pub subproblem_count: usize,
    pub solutions: Vec<(Vec<usize>, Structure)>,
    pub failures: Vec<SubproblemFailure>,
    /// Summed time spent projecting data and building matrices.
    pub formulation_secs: f64,
    pub solve_secs: f64,
}

impl DivideOutcome {
    pub fn is_dag(&self) -> bool {
        self.structure.is_dag()
    }
}

/// Seed for subproblem `ordinal`, derived from the run seed.
pub fn subproblem_seed(seed: u64, ordinal: usize) -> u64 {
    // splitmix64 finalizer
    let mut z = seed ^ (ordinal as u64 + 1).wrapping_mul(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Indices, solved structure or error message, formulation and solve seconds.
type SubproblemRun = (Vec<usize>, std::result::Result<Structure, String>, f64, f64);

/// Runs the full decomposition on `dataset`. A subproblem whose encoding or
/// solve fails contributes nothing to the tally and is listed in
/// `failures`.
pub fn divide_et_impera(
    dataset: &Dataset,
    config: &DivideConfig,
    sampler: &dyn Sampler,
    params: &SolverParams,
) -> Result<DivideOutcome> {
    let n = dataset.n_vars();
    let mut subsets: Vec<(usize, Vec<usize>)> = generate_subproblems(n, config.k)?.into_iter().enumerate().collect();
    if let Some(sel) = config.subset {
        if sel.count < subsets.len() {
            let mut rng = ChaCha8Rng::seed_from_u64(sel.seed);
            let mut keep = sample(&mut rng, subsets.len(), sel.count).into_vec();
            keep.sort_unstable();
            subsets = keep.into_iter().map(|i| subsets[i].clone()).collect();
        }
    }

    let results: Vec<SubproblemRun> = subsets
        .into_par_iter()
        .map(|(ordinal, indices)| {
            let started = Instant::now();
            let encoded =
                Subproblem::new(dataset, indices.clone()).and_then(|sub| build_qubo(&sub.dataset, &config.encoder));
            let formulation = started.elapsed().as_secs_f64();
            let started = Instant::now();
            let solved = encoded.and_then(|q| {
                let result = sampler.solve(&q, &params.with_seed(subproblem_seed(params.seed, ordinal)))?;
                decode_solution(&result.best().assignment, &q.index)
            });
            let solve = started.elapsed().as_secs_f64();
            (indices, solved.map_err(|e| e.to_string()), formulation, solve)
        })
        .collect();

    let subproblem_count = results.len();
    let mut tally = ReconstructionTally::new(n);
    let mut solutions = Vec::new();
    let mut failures = Vec::new();
    let (mut formulation_secs, mut solve_secs) = (0.0, 0.0);
    for (indices, solved, formulation, solve) in results {
        formulation_secs += formulation;
        solve_secs += solve;
        match solved {
            Ok(structure) => {
                tally.add(&indices, &structure)?;
                solutions.push((indices, structure));
            }
            Err(message) => failures.push(SubproblemFailure { indices, message }),
        }
    }
    Ok(DivideOutcome {
        structure: tally.reconstruct(config.strategy),
        tally,
        subproblem_count,
        solutions,
        failures,
        formulation_secs,
        solve_secs,
    })
}

/// Machine-readable record of one decomposition run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunManifest {
    pub n: usize,
    pub k: usize,
    pub strategy: Strategy,
    pub solver: String,
    pub params: SolverParams,
    pub subproblem_count: usize,
    pub tally: TallyDoc,
    pub adjacency: Structure,
    pub is_dag: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[allow(non_snake_case)]
pub struct TallyDoc {
    pub C: Vec<Vec<u32>>,
    pub P: Vec<Vec<u32>>,
}

impl RunManifest {
    pub fn new(outcome: &DivideOutcome, config: &DivideConfig, solver: &str, params: &SolverParams) -> Self {
        Self {
            n: outcome.tally.n(),
            k: config.k,
            strategy: config.strategy,
            solver: solver.to_string(),
            params: *params,
            subproblem_count: outcome.subproblem_count,
            tally: TallyDoc {
                C: outcome.tally.counts_matrix(),
                P: outcome.tally.absences_matrix(),
            },
            adjacency: outcome.structure.clone(),
            is_dag: outcome.is_dag(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn binomial(n: usize, k: usize) -> usize {
        (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
    }

    #[test]
    fn subproblem_counts() {
        assert_eq!(generate_subproblems(5, 3).unwrap().len(), 10);
        assert_eq!(generate_subproblems(9, 4).unwrap().len(), 126);
        assert_eq!(generate_subproblems(5, 5).unwrap(), vec![vec![0, 1, 2, 3, 4]]);
        assert!(generate_subproblems(5, 2).is_err());
        assert!(generate_subproblems(5, 6).is_err());
        let subs = generate_subproblems(6, 3).unwrap();
        assert_eq!(subs[0], vec![0, 1, 2]);
        assert_eq!(subs[1], vec![0, 1, 3]);
        assert_eq!(subs.last().unwrap(), &vec![3, 4, 5]);
        assert!(subs.windows(2).all(|w| w[0] < w[1]));
        for (n, k) in [(7, 3), (8, 5), (9, 7)] {
            assert_eq!(generate_subproblems(n, k).unwrap().len(), binomial(n, k));
        }
    }

    #[test]
    fn single_subproblem_tally() {
        let s = Structure::from_edges(3, &[(0, 1)]).unwrap();
        let t = accumulate_tally(3, &[(vec![0, 1, 2], s)]).unwrap();
        assert_eq!((t.count(0, 1), t.absence(0, 1)), (1, 0));
        assert_eq!((t.count(1, 0), t.absence(1, 0)), (0, 1));
        for (a, b) in [(0, 2), (2, 0), (1, 2), (2, 1)] {
            assert_eq!((t.count(a, b), t.absence(a, b)), (0, 1));
        }
    }

    #[test]
    fn tally_maps_local_indices() {
        let with = Structure::from_edges(3, &[(0, 2)]).unwrap();
        let without = Structure::empty(3);
        // local 0 → 2 is global 1 → 4
        let t = accumulate_tally(5, &[(vec![1, 2, 4], with), (vec![0, 1, 4], without)]).unwrap();
        assert_eq!((t.count(1, 4), t.absence(1, 4)), (1, 1));
        assert!(accumulate_tally(5, &[(vec![0, 1], Structure::empty(3))]).is_err());
    }

    #[test]
    fn pair_coverage_identity() {
        let subs = generate_subproblems(5, 3).unwrap();
        let solutions: Vec<_> = subs.into_iter().map(|s| (s, Structure::empty(3))).collect();
        let t = accumulate_tally(5, &solutions).unwrap();
        for i in 0..5 {
            for j in (0..5).filter(|&j| j != i) {
                assert_eq!(t.count(i, j) + t.absence(i, j), 3);
            }
        }
    }

    #[test]
    fn strategies() {
        let mut c = vec![vec![0; 3]; 3];
        let mut p = vec![vec![0; 3]; 3];
        c[0][1] = 4;
        c[1][2] = 2;
        c[2][1] = 2;
        p[1][2] = 1;
        p[2][1] = 1;
        c[0][2] = 1;
        p[0][2] = 1;
        let t = ReconstructionTally::from_matrices(c, p).unwrap();
        let s1 = reconstruct_strategy1(&t);
        assert_eq!(s1.edges(), vec![(0, 1), (0, 2)]);
        let s2 = reconstruct_strategy2(&t);
        // 1 ⇄ 2 both pass C > P here; strategy 2 has no tie rule
        assert_eq!(s2.edges(), vec![(0, 1), (1, 2), (2, 1)]);
        assert_eq!(reconstruct_strategy1(&ReconstructionTally::new(4)).edge_count(), 0);
    }

    #[test]
    fn manifest_serializes_strategy_as_number() {
        assert_eq!(serde_json::to_string(&Strategy::CountMinusAbsence).unwrap(), "2");
        assert_eq!(serde_json::from_str::<Strategy>("1").unwrap(), Strategy::MajorityCount);
        assert!(serde_json::from_str::<Strategy>("3").is_err());
        assert_eq!(Strategy::from_number(1).unwrap(), Strategy::MajorityCount);
        assert!(Strategy::from_number(3).is_err());
    }

    #[test]
    fn seeds_differ_per_subproblem() {
        let seeds: std::collections::HashSet<u64> = (0..100).map(|i| subproblem_seed(7, i)).collect();
        assert_eq!(seeds.len(), 100);
    }
}
