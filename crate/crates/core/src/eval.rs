//! Comparing learned structures with the generating network.

use std::collections::BTreeSet;
use std::io::Write;

use serde::{Deserialize, Serialize};

use crate::encoder::BnslQubo;
use crate::error::{Error, Result};
use crate::graph::Structure;
use crate::solvers::{complete_assignment, edge_bits};

/// The QUBO assignment of the ground truth: its edges plus the cheapest
/// slack and order bits.
pub fn encode_expected(truth: &Structure, q: &BnslQubo) -> Result<Vec<u8>> {
    let d = edge_bits(truth, &q.index)?;
    complete_assignment(&d, &q.index)
}

/// `(correct, wrong)`: found edges present in / absent from the truth.
pub fn edge_confusion(found: &Structure, truth: &Structure) -> Result<(usize, usize)> {
    if found.n() != truth.n() {
        return Err(Error::LengthMismatch {
            expected: truth.n(),
            actual: found.n(),
        });
    }
    let (mut correct, mut wrong) = (0, 0);
    for (i, j) in found.edges() {
        if truth.has_edge(i, j) {
            correct += 1;
        } else {
            wrong += 1;
        }
    }
    Ok((correct, wrong))
}

/// One solve or decomposition run to be scored.
#[derive(Debug, Clone, PartialEq)]
pub struct RunRecord {
    pub found: Structure,
    /// `xᵀQx` of the found assignment and of the expected one, when both
    /// come from the same matrix.
    pub energies: Option<(f64, f64)>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EvalReport {
    pub runs: usize,
    pub n: usize,
    pub true_edges: usize,
    pub success_rate: f64,
    /// Mean of found / expected energy; absent when energies are unknown.
    pub average_result: Option<f64>,
    pub correct_edges_per_run: Vec<usize>,
    pub wrong_edges_per_run: Vec<usize>,
    pub mean_correct: f64,
    pub mean_wrong: f64,
    pub unique_correct: usize,
    pub unique_wrong: usize,
    pub sensitivity: f64,
    pub specificity: f64,
}

/// Scores a batch of runs. A run succeeds when its structure equals the
/// truth exactly.
pub fn aggregate(truth: &Structure, runs: &[RunRecord]) -> Result<EvalReport> {
    if runs.is_empty() {
        return Err(Error::EmptyRuns);
    }
    let n = truth.n();
    let mut correct_per_run = Vec::with_capacity(runs.len());
    let mut wrong_per_run = Vec::with_capacity(runs.len());
    let mut unique_correct = BTreeSet::new();
    let mut unique_wrong = BTreeSet::new();
    let mut successes = 0;
    for run in runs {
        let (c, w) = edge_confusion(&run.found, truth)?;
        correct_per_run.push(c);
        wrong_per_run.push(w);
        for e in run.found.edges() {
            if truth.has_edge(e.0, e.1) {
                unique_correct.insert(e);
            } else {
                unique_wrong.insert(e);
            }
        }
        if run.found == *truth {
            successes += 1;
        }
    }
    let average_result = runs
        .iter()
        .map(|r| r.energies.map(|(found, expected)| found / expected))
        .collect::<Option<Vec<f64>>>()
        .map(|ratios| ratios.iter().sum::<f64>() / ratios.len() as f64);
    let count = runs.len() as f64;
    let mean_correct = correct_per_run.iter().sum::<usize>() as f64 / count;
    let mean_wrong = wrong_per_run.iter().sum::<usize>() as f64 / count;
    let true_edges = truth.edge_count();
    let (sensitivity, specificity) = rates(n, true_edges, mean_correct, mean_wrong);
    Ok(EvalReport {
        runs: runs.len(),
        n,
        true_edges,
        success_rate: successes as f64 / count,
        average_result,
        correct_edges_per_run: correct_per_run,
        wrong_edges_per_run: wrong_per_run,
        mean_correct,
        mean_wrong,
        unique_correct: unique_correct.len(),
        unique_wrong: unique_wrong.len(),
        sensitivity,
        specificity,
    })
}

/// Sensitivity over true directed edges, specificity over the
/// `n(n−1) − true_edges` directed non-edges. An empty class scores 1.
pub fn rates(n: usize, true_edges: usize, mean_correct: f64, mean_wrong: f64) -> (f64, f64) {
    let negatives = n * n.saturating_sub(1) - true_edges;
    let sensitivity = if true_edges == 0 {
        1.0
    } else {
        mean_correct / true_edges as f64
    };
    let specificity = if negatives == 0 {
        1.0
    } else {
        (negatives as f64 - mean_wrong) / negatives as f64
    };
    (sensitivity, specificity)
}

pub const CSV_HEADER: [&str; 14] = [
    "problem",
    "k",
    "solver",
    "runs",
    "success_rate",
    "average_result",
    "mean_correct",
    "mean_wrong",
    "unique_correct",
    "unique_wrong",
    "sensitivity",
    "specificity",
    "correct_per_run",
    "wrong_per_run",
];

/// Appends one sweep-experiment row per (problem, k, solver) cell.
pub fn write_csv_row<W: Write>(
    writer: &mut csv::Writer<W>,
    problem: &str,
    k: usize,
    solver: &str,
    report: &EvalReport,
) -> Result<()> {
    let join = |v: &[usize]| v.iter().map(usize::to_string).collect::<Vec<_>>().join(" ");
    writer.write_record([
        problem.to_string(),
        k.to_string(),
        solver.to_string(),
        report.runs.to_string(),
        format!("{:.2}", report.success_rate),
        report.average_result.map(|a| format!("{a:.4}")).unwrap_or_default(),
        format!("{}", report.mean_correct),
        format!("{}", report.mean_wrong),
        report.unique_correct.to_string(),
        report.unique_wrong.to_string(),
        format!("{:.2}", report.sensitivity),
        format!("{:.2}", report.specificity),
        join(&report.correct_edges_per_run),
        join(&report.wrong_edges_per_run),
    ])?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn lc_truth() -> Structure {
        Structure::from_edges(5, &[(0, 2), (1, 2), (2, 3), (2, 4)]).unwrap()
    }

    #[test]
    fn confusion_counts() {
        let truth = lc_truth();
        assert_eq!(edge_confusion(&truth, &truth).unwrap(), (4, 0));
        assert_eq!(edge_confusion(&Structure::empty(5), &truth).unwrap(), (0, 0));
        let found = Structure::from_edges(5, &[(0, 2), (1, 2), (2, 3), (3, 4)]).unwrap();
        assert_eq!(edge_confusion(&found, &truth).unwrap(), (3, 1));
        let (sens, spec) = rates(5, 4, 3.0, 1.0);
        assert_eq!(sens, 0.75);
        assert_eq!(spec, 15.0 / 16.0);
        assert!(edge_confusion(&Structure::empty(4), &truth).is_err());
    }

    #[test]
    fn all_exact_runs() {
        let truth = lc_truth();
        let runs = vec![
            RunRecord {
                found: truth.clone(),
                energies: Some((-10.0, -10.0)),
            };
            10
        ];
        let report = aggregate(&truth, &runs).unwrap();
        assert_eq!(report.success_rate, 1.0);
        assert_eq!(report.average_result, Some(1.0));
        assert_eq!(report.sensitivity, 1.0);
        assert_eq!(report.mean_wrong, 0.0);
        assert_eq!(report.specificity, 1.0);
    }

    #[test]
    fn empty_runs_rejected() {
        assert!(matches!(aggregate(&lc_truth(), &[]), Err(Error::EmptyRuns)));
    }

    #[test]
    fn missing_energies_leave_average_unset() {
        let truth = lc_truth();
        let runs = vec![RunRecord {
            found: Structure::empty(5),
            energies: None,
        }];
        let report = aggregate(&truth, &runs).unwrap();
        assert_eq!(report.average_result, None);
        assert_eq!(report.success_rate, 0.0);
        assert_eq!(report.sensitivity, 0.0);
    }

    #[test]
    fn csv_row() {
        let truth = lc_truth();
        let report = aggregate(
            &truth,
            &[RunRecord {
                found: truth.clone(),
                energies: None,
            }],
        )
        .unwrap();
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(CSV_HEADER).unwrap();
        write_csv_row(&mut w, "lc", 4, "sa", &report).unwrap();
        let text = String::from_utf8(w.into_inner().unwrap()).unwrap();
        assert!(text
            .lines()
            .nth(1)
            .unwrap()
            .starts_with("lc,4,sa,1,1.00,,4,0,4,0,1.00,1.00,4,0"));
    }
}
