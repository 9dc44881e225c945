use std::fs::{self, File};
use std::io::{self, BufReader, BufWriter, Write};
use std::path::Path;
use std::time::Instant;

use bnsl_core::decomposition::{divide_et_impera, DivideConfig, RunManifest, Strategy, SubsetSelection};
use bnsl_core::encoder::{build_qubo, BnslQubo, EncoderConfig};
use bnsl_core::eval::{aggregate, edge_confusion, encode_expected, write_csv_row, EvalReport, RunRecord, CSV_HEADER};
use bnsl_core::networks;
use bnsl_core::solvers::{decode_solution, ExhaustiveSearch, SamplerRegistry, Schedule, SolverParams};
use bnsl_core::{BayesNet, Dataset, Structure};
use serde::Serialize;
use serde_json::{json, Value};

use crate::args::{
    DataArgs, DivideArgs, EncodeArgs, EncoderArgs, EvaluateArgs, GenerateArgs, Method, SolveArgs, SolverArgs,
};
use crate::error::CliError;

type Result<T> = std::result::Result<T, CliError>;

fn load_network(source: &str) -> Result<BayesNet> {
    let path = Path::new(source);
    if path.exists() || path.extension().is_some_and(|e| e == "json") {
        let text = fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
        return Ok(BayesNet::from_json(&text)?);
    }
    networks::by_name(source).ok_or_else(|| {
        CliError::Config(format!(
            "{source:?} is neither a network file nor a bundled network ({})",
            networks::NAMES.join(", ")
        ))
    })
}

fn generate_dataset(net: &BayesNet, method: Method, rows: usize, seed: u64) -> Result<Dataset> {
    Ok(match method {
        Method::Sample => net.ancestral_sample(rows, seed),
        Method::Expected => net.expected_dataset(rows)?,
    })
}

/// The generating network (when known) and the dataset to learn from.
fn load_problem(args: &DataArgs, seed: u64) -> Result<(Option<BayesNet>, Dataset)> {
    let net = args.net.as_deref().map(load_network).transpose()?;
    let dataset = match (&args.data, &net) {
        (Some(path), Some(net)) => {
            let file = File::open(path).map_err(|e| CliError::io(path, e))?;
            Dataset::read_csv_with_schema(BufReader::new(file), &net.variable_names(), &net.state_names())?
        }
        (Some(path), None) => {
            let file = File::open(path).map_err(|e| CliError::io(path, e))?;
            Dataset::read_csv_indices(BufReader::new(file))?
        }
        (None, Some(net)) => generate_dataset(net, args.method, args.rows, seed)?,
        (None, None) => return Err(CliError::Config("either --data or --net is required".into())),
    };
    Ok((net, dataset))
}

fn encoder_config(args: &EncoderArgs) -> Result<EncoderConfig> {
    if !(args.penalty_scale.is_finite() && args.penalty_scale > 0.0) {
        return Err(CliError::Config("--penalty-scale must be positive".into()));
    }
    Ok(EncoderConfig {
        penalty_scale: args.penalty_scale,
        ..EncoderConfig::with_alpha(args.alpha_rule)
    })
}

fn solver_params(args: &SolverArgs) -> Result<SolverParams> {
    let schedule = match (args.t_start, args.t_end) {
        (Some(t_start), Some(t_end)) => Schedule::Geometric { t_start, t_end },
        _ => Schedule::Auto,
    };
    let params = SolverParams {
        reads: args.reads,
        sweeps: args.sweeps,
        seed: args.seed,
        schedule,
    };
    params.validate()?;
    if args.runs == 0 {
        return Err(CliError::Config("--runs must be at least 1".into()));
    }
    Ok(params)
}

fn registry(args: &SolverArgs) -> SamplerRegistry {
    let mut registry = SamplerRegistry::default();
    registry.register(Box::new(ExhaustiveSearch {
        cap_bits: args.es_cap_bits,
    }));
    registry
}

fn create(path: &Path) -> Result<BufWriter<File>> {
    File::create(path)
        .map(BufWriter::new)
        .map_err(|e| CliError::io(path, e))
}

fn write_json<T: Serialize>(value: &T, out: Option<&Path>) -> Result<()> {
    let text = serde_json::to_string_pretty(value).map_err(bnsl_core::Error::from)? + "\n";
    match out {
        Some(path) => fs::write(path, text).map_err(|e| CliError::io(path, e)),
        None => io::stdout()
            .write_all(text.as_bytes())
            .map_err(|e| CliError::io("<stdout>", e)),
    }
}

fn check_truth(net: &Option<BayesNet>, n: usize) -> Result<Option<Structure>> {
    match net {
        Some(net) if net.n() != n => Err(CliError::Config(format!(
            "network has {} variables but the problem has {n}",
            net.n()
        ))),
        Some(net) => Ok(Some(net.structure())),
        None => Ok(None),
    }
}

fn append_csv(path: &Path, problem: &str, k: usize, solver: &str, report: &EvalReport) -> Result<()> {
    let fresh = !path.exists() || fs::metadata(path).map(|m| m.len() == 0).unwrap_or(true);
    let file = fs::OpenOptions::new()
        .create(true)
        .append(true)
        .open(path)
        .map_err(|e| CliError::io(path, e))?;
    let mut writer = csv::Writer::from_writer(file);
    if fresh {
        writer.write_record(CSV_HEADER).map_err(bnsl_core::Error::from)?;
    }
    write_csv_row(&mut writer, problem, k, solver, report)?;
    writer.flush().map_err(|e| CliError::io(path, e))
}

pub fn generate(args: &GenerateArgs) -> Result<()> {
    let net = load_network(&args.net)?;
    let dataset = generate_dataset(&net, args.method, args.rows, args.seed)?;
    match &args.out {
        Some(path) => dataset.write_csv(create(path)?)?,
        None => dataset.write_csv(io::stdout().lock())?,
    }
    let method = match args.method {
        Method::Sample => "sample",
        Method::Expected => "expected",
    };
    eprintln!("{} rows ({method}, N = {})", dataset.n_rows(), args.rows);
    Ok(())
}

pub fn encode(args: &EncodeArgs) -> Result<()> {
    let (_, dataset) = load_problem(&args.data, args.seed)?;
    let config = encoder_config(&args.encoder)?;
    let start = Instant::now();
    let q = build_qubo(&dataset, &config)?;
    let elapsed = start.elapsed().as_secs_f64();

    let mut writer = create(&args.out)?;
    q.write_text(&mut writer)?;
    writer.flush().map_err(|e| CliError::io(&args.out, e))?;
    let sidecar = args.out.with_extension("index.json");
    write_json(&q.index_sidecar(), Some(&sidecar))?;

    println!("dimension {}", q.dim());
    println!("build time {elapsed:.6} s");
    Ok(())
}

pub fn solve(args: &SolveArgs) -> Result<()> {
    let params = solver_params(&args.solver)?;
    let registry = registry(&args.solver);
    let sampler = registry.get(&args.solver.solver)?;

    let start = Instant::now();
    let (net, q) = match &args.qubo {
        Some(path) => {
            let file = File::open(path).map_err(|e| CliError::io(path, e))?;
            let net = args.data.net.as_deref().map(load_network).transpose()?;
            (net, BnslQubo::read_text(BufReader::new(file))?)
        }
        None => {
            let (net, dataset) = load_problem(&args.data, args.solver.seed)?;
            (net, build_qubo(&dataset, &encoder_config(&args.encoder)?)?)
        }
    };
    let build_secs = start.elapsed().as_secs_f64();
    let truth = check_truth(&net, q.n())?;
    let expected_energy = truth
        .as_ref()
        .map(|t| encode_expected(t, &q).and_then(|x| q.energy(&x)))
        .transpose()?;

    let start = Instant::now();
    let mut runs = Vec::with_capacity(args.solver.runs);
    let mut records = Vec::with_capacity(args.solver.runs);
    for run in 0..args.solver.runs {
        let seed = args.solver.seed.wrapping_add(run as u64);
        let result = sampler.solve(&q, &params.with_seed(seed))?;
        let found = decode_solution(&result.best().assignment, &q.index)?;
        let mut entry = json!({
            "run": run,
            "seed": seed,
            "adjacency": found,
            "is_dag": found.is_dag(),
            "result": result.export(args.all_reads),
        });
        if let Some(t) = &truth {
            let (correct, wrong) = edge_confusion(&found, t)?;
            entry["correct_edges"] = json!(correct);
            entry["wrong_edges"] = json!(wrong);
        }
        records.push(RunRecord {
            found,
            energies: expected_energy.map(|e| (result.best_energy(), e)),
        });
        runs.push(entry);
    }
    let solve_secs = start.elapsed().as_secs_f64();
    let evaluation = truth.as_ref().map(|t| aggregate(t, &records)).transpose()?;

    let report = json!({
        "command": "solve",
        "config": args,
        "solver": sampler.name(),
        "params": params,
        "n": q.n(),
        "dim": q.dim(),
        "penalties": q.penalties,
        "expected_energy": expected_energy,
        "runs": runs,
        "evaluation": evaluation,
        "timing": { "build_secs": build_secs, "solve_secs": solve_secs },
    });
    write_json(&report, args.out.as_deref())
}

pub fn divide(args: &DivideArgs) -> Result<()> {
    let params = solver_params(&args.solver)?;
    let registry = registry(&args.solver);
    let sampler = registry.get(&args.solver.solver)?;
    let (net, dataset) = load_problem(&args.data, args.solver.seed)?;
    let truth = check_truth(&net, dataset.n_vars())?;
    let strategy = Strategy::from_number(args.strategy)?;

    let mut manifests = Vec::with_capacity(args.solver.runs);
    let mut records = Vec::with_capacity(args.solver.runs);
    for run in 0..args.solver.runs {
        let seed = args.solver.seed.wrapping_add(run as u64);
        let config = DivideConfig {
            k: args.k,
            strategy,
            encoder: encoder_config(&args.encoder)?,
            subset: args.subset.map(|count| SubsetSelection { count, seed }),
        };
        let run_params = params.with_seed(seed);
        let outcome = divide_et_impera(&dataset, &config, sampler, &run_params)?;
        let mut entry = json!({
            "run": run,
            "seed": seed,
            "manifest": RunManifest::new(&outcome, &config, sampler.name(), &run_params),
            "failures": outcome
                .failures
                .iter()
                .map(|f| json!({ "indices": f.indices, "error": f.message }))
                .collect::<Vec<_>>(),
            "timing": {
                "formulation_secs": outcome.formulation_secs,
                "solve_secs": outcome.solve_secs,
            },
        });
        if let Some(t) = &truth {
            let (correct, wrong) = edge_confusion(&outcome.structure, t)?;
            entry["correct_edges"] = json!(correct);
            entry["wrong_edges"] = json!(wrong);
        }
        records.push(RunRecord {
            found: outcome.structure,
            energies: None,
        });
        manifests.push(entry);
    }
    let evaluation = truth.as_ref().map(|t| aggregate(t, &records)).transpose()?;
    if let (Some(path), Some(report)) = (&args.csv, &evaluation) {
        let problem = net.as_ref().map(|n| n.name().to_string()).unwrap_or_default();
        append_csv(path, &problem, args.k, sampler.name(), report)?;
    }

    let report = json!({
        "command": "divide",
        "config": args,
        "solver": sampler.name(),
        "params": params,
        "n": dataset.n_vars(),
        "k": args.k,
        "strategy": strategy,
        "runs": manifests,
        "evaluation": evaluation,
    });
    write_json(&report, args.out.as_deref())
}

/// Every structure in a file: a bare adjacency matrix, an object with an
/// `adjacency` field, or a report whose runs carry one.
fn structures_in(value: &Value) -> Vec<Value> {
    if value.is_array() {
        return vec![value.clone()];
    }
    if let Some(adj) = value.get("adjacency") {
        return vec![adj.clone()];
    }
    if let Some(adj) = value.get("manifest").and_then(|m| m.get("adjacency")) {
        return vec![adj.clone()];
    }
    match value.get("runs").and_then(Value::as_array) {
        Some(runs) => runs.iter().flat_map(structures_in).collect(),
        None => Vec::new(),
    }
}

pub fn evaluate(args: &EvaluateArgs) -> Result<()> {
    let net = load_network(&args.net)?;
    let truth = net.structure();
    let mut runs = Vec::new();
    for path in &args.structures {
        let text = fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
        let value: Value = serde_json::from_str(&text).map_err(bnsl_core::Error::from)?;
        let found = structures_in(&value);
        if found.is_empty() {
            return Err(CliError::Config(format!("{}: no structure found", path.display())));
        }
        for adj in found {
            let structure: Structure = serde_json::from_value(adj).map_err(bnsl_core::Error::from)?;
            runs.push(RunRecord {
                found: structure,
                energies: None,
            });
        }
    }
    let report = aggregate(&truth, &runs)?;
    if let Some(path) = &args.csv {
        let problem = args.problem.clone().unwrap_or_else(|| net.name().to_string());
        append_csv(path, &problem, args.k, &args.solver, &report)?;
    }
    write_json(
        &json!({ "command": "evaluate", "config": args, "evaluation": report }),
        args.out.as_deref(),
    )
}
