//! Single-flip Metropolis simulated annealing with a geometric schedule.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use super::result::{Read, SolveResult};
use super::{Schedule, SolverParams};
use crate::error::Result;
use crate::qubo::Qubo;

/// Entries smaller than this fraction of the largest magnitude are treated
/// as numerical zeros when picking the final temperature.
const NEGLIGIBLE_ENTRY: f64 = 1e-9;

/// Sparse symmetric view of a QUBO for local-field updates.
struct Couplings {
    diag: Vec<f64>,
    neighbors: Vec<Vec<(usize, f64)>>,
}

impl Couplings {
    fn new(q: &Qubo) -> Self {
        let dim = q.dim();
        let mut diag = vec![0.0; dim];
        let mut neighbors = vec![Vec::new(); dim];
        for (r, c, v) in q.nonzeros() {
            if r == c {
                diag[r] = v;
            } else {
                neighbors[r].push((c, v));
                neighbors[c].push((r, v));
            }
        }
        Self { diag, neighbors }
    }
}

/// `(t_start, t_end)` for the auto schedule: hot enough to accept almost any
/// move at the start, frozen relative to the smallest coefficient at the end.
pub fn auto_temperatures(q: &Qubo) -> (f64, f64) {
    let max = q.max_abs();
    if max == 0.0 {
        return (1.0, 1e-3);
    }
    let min = q
        .nonzeros()
        .map(|(_, _, v)| v.abs())
        .filter(|&v| v > NEGLIGIBLE_ENTRY * max)
        .fold(max, f64::min);
    (max, 1e-3 * min)
}

/// `sweeps` temperatures from `t_start` down to `t_end`, geometrically spaced.
pub fn geometric_schedule(t_start: f64, t_end: f64, sweeps: usize) -> Vec<f64> {
    if sweeps == 1 {
        return vec![t_end];
    }
    let ratio = (t_end / t_start).ln() / (sweeps - 1) as f64;
    (0..sweeps).map(|s| t_start * (ratio * s as f64).exp()).collect()
}

/// Independent annealing runs, one per read; read `r` draws from stream `r`
/// of the generator seeded with `params.seed`.
pub fn simulated_annealing(q: &Qubo, params: &SolverParams) -> Result<SolveResult> {
    params.validate()?;
    let (t_start, t_end) = match params.schedule {
        Schedule::Auto => auto_temperatures(q),
        Schedule::Geometric { t_start, t_end } => (t_start, t_end),
    };
    let temperatures = geometric_schedule(t_start, t_end, params.sweeps);
    let couplings = Couplings::new(q);
    let reads: Vec<Read> = (0..params.reads as u64)
        .into_par_iter()
        .map(|read| {
            let mut rng = ChaCha8Rng::seed_from_u64(params.seed);
            rng.set_stream(read);
            let assignment = anneal_once(&couplings, &temperatures, &mut rng);
            let energy = q.energy_unchecked(&assignment);
            Read { assignment, energy }
        })
        .collect();
    Ok(SolveResult::from_reads(reads))
}

fn anneal_once(c: &Couplings, temperatures: &[f64], rng: &mut ChaCha8Rng) -> Vec<u8> {
    let dim = c.diag.len();
    let mut x: Vec<u8> = (0..dim).map(|_| rng.gen::<bool>() as u8).collect();
    // field[i] = Σ_{j≠i} q_ij x_j
    let mut field = vec![0.0; dim];
    for (i, _) in x.iter().enumerate().filter(|(_, &b)| b == 1) {
        for &(j, v) in &c.neighbors[i] {
            field[j] += v;
        }
    }
    for &t in temperatures {
        let beta = 1.0 / t;
        for i in 0..dim {
            let gain = c.diag[i] + field[i];
            let delta = if x[i] == 0 { gain } else { -gain };
            if delta <= 0.0 || rng.gen::<f64>() < (-delta * beta).exp() {
                let step = if x[i] == 0 { 1.0 } else { -1.0 };
                x[i] ^= 1;
                for &(j, v) in &c.neighbors[i] {
                    field[j] += step * v;
                }
            }
        }
    }
    x
}
