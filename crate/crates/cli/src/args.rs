use std::path::PathBuf;

use bnsl_core::encoder::AlphaRule;
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

#[derive(Debug, Parser)]
#[command(name = "bnsl", version, about = "Bayesian network structure learning through QUBO")]
pub struct Cli {
    /// Worker threads for solvers and decomposition (default: all cores).
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Write a dataset drawn from a network as CSV.
    Generate(GenerateArgs),
    /// Build the QUBO matrix for a dataset.
    Encode(EncodeArgs),
    /// Solve the full problem directly.
    Solve(SolveArgs),
    /// Solve with the divide et impera decomposition.
    Divide(DivideArgs),
    /// Score learned structures against the generating network.
    Evaluate(EvaluateArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    /// Ancestral sampling.
    Sample,
    /// floor(N·p) copies of every joint state.
    Expected,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct DataArgs {
    /// Network JSON file, or a bundled network: monty_hall, lung_cancer_4vars,
    /// lung_cancer, waste, alarm15.
    #[arg(long)]
    pub net: Option<String>,
    /// Dataset CSV. Without it, a dataset is generated from --net.
    #[arg(long)]
    pub data: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Method::Expected)]
    pub method: Method,
    /// Dataset size when generating.
    #[arg(short = 'N', long = "rows", default_value_t = 10_000)]
    pub rows: usize,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct EncoderArgs {
    #[arg(long, default_value_t = AlphaRule::InvRiQi)]
    pub alpha_rule: AlphaRule,
    /// Multiplier applied to the penalty bounds before the +1 margin.
    #[arg(long, default_value_t = 1.0)]
    pub penalty_scale: f64,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct SolverArgs {
    /// sa or es.
    #[arg(long, default_value = "sa")]
    pub solver: String,
    #[arg(long, default_value_t = 100)]
    pub reads: usize,
    #[arg(long, default_value_t = 1000)]
    pub sweeps: usize,
    /// Run r uses seed + r.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = 1)]
    pub runs: usize,
    /// Initial annealing temperature (default: derived from the matrix).
    #[arg(long, requires = "t_end")]
    pub t_start: Option<f64>,
    #[arg(long, requires = "t_start")]
    pub t_end: Option<f64>,
    /// Largest number of edge bits the exhaustive search will enumerate.
    #[arg(long, default_value_t = bnsl_core::solvers::DEFAULT_ES_CAP_BITS)]
    pub es_cap_bits: usize,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct GenerateArgs {
    #[arg(long)]
    pub net: String,
    #[arg(long, value_enum, default_value_t = Method::Expected)]
    pub method: Method,
    #[arg(short = 'N', long = "rows", default_value_t = 10_000)]
    pub rows: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Output CSV (default: stdout).
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct EncodeArgs {
    #[command(flatten)]
    pub data: DataArgs,
    #[command(flatten)]
    pub encoder: EncoderArgs,
    /// Seed for sampled datasets.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// QUBO text file; the index map is written next to it as .index.json.
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct SolveArgs {
    #[command(flatten)]
    pub data: DataArgs,
    /// Previously encoded QUBO file, used instead of encoding --data.
    #[arg(long, conflicts_with = "data")]
    pub qubo: Option<PathBuf>,
    #[command(flatten)]
    pub encoder: EncoderArgs,
    #[command(flatten)]
    pub solver: SolverArgs,
    /// Include every read in the report.
    #[arg(long)]
    pub all_reads: bool,
    /// JSON report (default: stdout).
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct DivideArgs {
    #[command(flatten)]
    pub data: DataArgs,
    #[command(flatten)]
    pub encoder: EncoderArgs,
    #[command(flatten)]
    pub solver: SolverArgs,
    /// Variables per subproblem.
    #[arg(long)]
    pub k: usize,
    /// 1: majority of directed counts; 2: counts exceed absences.
    #[arg(long, default_value_t = 2, value_parser = clap::value_parser!(u8).range(1..=2))]
    pub strategy: u8,
    /// Solve only this many randomly chosen subproblems.
    #[arg(long)]
    pub subset: Option<usize>,
    /// Append a summary row to this CSV file.
    #[arg(long)]
    pub csv: Option<PathBuf>,
    /// JSON report (default: stdout).
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct EvaluateArgs {
    /// The generating network.
    #[arg(long)]
    pub net: String,
    /// Structure files: an adjacency matrix, or a solve/divide report.
    #[arg(required = true)]
    pub structures: Vec<PathBuf>,
    /// Problem label for the CSV row.
    #[arg(long)]
    pub problem: Option<String>,
    #[arg(long, default_value_t = 0)]
    pub k: usize,
    #[arg(long, default_value = "")]
    pub solver: String,
    #[arg(long)]
    pub csv: Option<PathBuf>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}
