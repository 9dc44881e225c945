use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;
use tempfile::TempDir;

fn bnsl(args: &[&str], dir: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_bnsl"))
        .args(args)
        .current_dir(dir)
        .output()
        .expect("binary runs")
}

fn ok(args: &[&str], dir: &Path) -> Output {
    let out = bnsl(args, dir);
    assert!(
        out.status.success(),
        "{args:?} failed: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    out
}

fn json_file(path: &Path) -> Value {
    serde_json::from_str(&fs::read_to_string(path).unwrap()).unwrap()
}

fn without_timing(mut v: Value) -> Value {
    match &mut v {
        Value::Object(map) => {
            map.remove("timing");
            for value in map.values_mut() {
                *value = without_timing(value.take());
            }
        }
        Value::Array(items) => {
            for item in items.iter_mut() {
                *item = without_timing(item.take());
            }
        }
        _ => {}
    }
    v
}

#[test]
fn sampled_generation_is_reproducible() {
    let dir = TempDir::new().unwrap();
    for name in ["a.csv", "b.csv"] {
        ok(
            &[
                "generate",
                "--net",
                "lung_cancer",
                "--method",
                "sample",
                "-N",
                "2000",
                "--seed",
                "7",
                "--out",
                name,
            ],
            dir.path(),
        );
    }
    let a = fs::read(dir.path().join("a.csv")).unwrap();
    assert_eq!(a, fs::read(dir.path().join("b.csv")).unwrap());
    assert_eq!(String::from_utf8(a).unwrap().lines().count(), 2001);
}

#[test]
fn expected_generation_reports_rows() {
    let dir = TempDir::new().unwrap();
    let out = ok(
        &[
            "generate",
            "--net",
            "lung_cancer",
            "--method",
            "expected",
            "-N",
            "10000",
            "--out",
            "e.csv",
        ],
        dir.path(),
    );
    let rows = fs::read_to_string(dir.path().join("e.csv")).unwrap().lines().count() - 1;
    assert!(rows <= 10_000);
    let stderr = String::from_utf8(out.stderr).unwrap();
    assert!(stderr.contains(&format!("{rows} rows")), "{stderr}");
}

#[test]
fn encode_writes_matrix_and_index_map() {
    let dir = TempDir::new().unwrap();
    ok(&["generate", "--net", "lung_cancer", "--out", "lc.csv"], dir.path());
    let first = ok(
        &["encode", "--net", "lung_cancer", "--data", "lc.csv", "--out", "a.qubo"],
        dir.path(),
    );
    ok(
        &["encode", "--net", "lung_cancer", "--data", "lc.csv", "--out", "b.qubo"],
        dir.path(),
    );
    let stdout = String::from_utf8(first.stdout).unwrap();
    assert!(stdout.contains("dimension 40"), "{stdout}");
    assert!(stdout.contains("build time"));
    let a = fs::read(dir.path().join("a.qubo")).unwrap();
    assert_eq!(a, fs::read(dir.path().join("b.qubo")).unwrap());
    assert!(String::from_utf8(a).unwrap().starts_with("dim 40 n 5 m 2\n"));
    let sidecar = json_file(&dir.path().join("a.index.json"));
    assert_eq!(sidecar["total"], 40);
    assert_eq!(sidecar["roles"][0], "d 0 1");
    assert_eq!(sidecar["roles"][39], "r 3 4");
}

#[test]
fn exhaustive_solve_recovers_small_network() {
    let dir = TempDir::new().unwrap();
    ok(
        &["solve", "--net", "monty_hall", "--solver", "es", "--out", "r.json"],
        dir.path(),
    );
    let report = json_file(&dir.path().join("r.json"));
    assert_eq!(report["evaluation"]["success_rate"], 1.0);
    assert_eq!(report["config"]["solver"]["solver"], "es");
    assert_eq!(report["config"]["encoder"]["alpha_rule"], "inv_riqi");
}

#[test]
fn solving_an_encoded_file_matches_solving_the_data() {
    let dir = TempDir::new().unwrap();
    ok(&["encode", "--net", "lung_cancer_4vars", "--out", "q.txt"], dir.path());
    ok(
        &[
            "solve",
            "--qubo",
            "q.txt",
            "--net",
            "lung_cancer_4vars",
            "--solver",
            "es",
            "--out",
            "a.json",
        ],
        dir.path(),
    );
    ok(
        &[
            "solve",
            "--net",
            "lung_cancer_4vars",
            "--solver",
            "es",
            "--out",
            "b.json",
        ],
        dir.path(),
    );
    let a = json_file(&dir.path().join("a.json"));
    let b = json_file(&dir.path().join("b.json"));
    assert_eq!(a["runs"][0]["adjacency"], b["runs"][0]["adjacency"]);
    assert_eq!(a["evaluation"]["success_rate"], 1.0);
}

#[test]
fn seeded_annealing_reports_are_reproducible() {
    let dir = TempDir::new().unwrap();
    let args = [
        "solve",
        "--net",
        "lung_cancer_4vars",
        "--reads",
        "20",
        "--sweeps",
        "200",
        "--runs",
        "2",
        "--seed",
        "3",
        "--out",
        "r.json",
    ];
    ok(&args, dir.path());
    let a = without_timing(json_file(&dir.path().join("r.json")));
    ok(&args, dir.path());
    assert_eq!(a, without_timing(json_file(&dir.path().join("r.json"))));
    assert_eq!(a["runs"][1]["seed"], 4);
}

#[test]
fn exit_codes_distinguish_failures() {
    let dir = TempDir::new().unwrap();
    let cap = bnsl(&["solve", "--net", "waste", "--solver", "es"], dir.path());
    assert_eq!(cap.status.code(), Some(4));
    assert!(String::from_utf8_lossy(&cap.stderr).contains("ES cap exceeded"));

    assert_eq!(
        bnsl(&["solve", "--net", "no_such_network"], dir.path()).status.code(),
        Some(2)
    );
    assert_eq!(
        bnsl(&["divide", "--net", "waste", "--k", "2"], dir.path())
            .status
            .code(),
        Some(2)
    );
    assert_eq!(
        bnsl(&["divide", "--net", "waste", "--k", "3", "--strategy", "3"], dir.path())
            .status
            .code(),
        Some(2)
    );
    assert_eq!(
        bnsl(&["solve", "--net", "missing.json"], dir.path()).status.code(),
        Some(3)
    );
    assert_eq!(
        bnsl(
            &["encode", "--net", "lung_cancer", "--data", "missing.csv", "--out", "q"],
            dir.path()
        )
        .status
        .code(),
        Some(3)
    );
}

#[test]
fn divide_with_k_equal_n_is_a_direct_solve() {
    let dir = TempDir::new().unwrap();
    ok(
        &[
            "divide",
            "--net",
            "lung_cancer",
            "--k",
            "5",
            "--solver",
            "es",
            "--out",
            "d.json",
        ],
        dir.path(),
    );
    ok(
        &["solve", "--net", "lung_cancer", "--solver", "es", "--out", "s.json"],
        dir.path(),
    );
    let d = json_file(&dir.path().join("d.json"));
    let s = json_file(&dir.path().join("s.json"));
    assert_eq!(d["runs"][0]["manifest"]["subproblem_count"], 1);
    assert_eq!(d["runs"][0]["manifest"]["adjacency"], s["runs"][0]["adjacency"]);
}

#[test]
fn divide_solves_every_subproblem_and_feeds_evaluate() {
    let dir = TempDir::new().unwrap();
    ok(
        &[
            "divide", "--net", "waste", "--k", "3", "--reads", "10", "--sweeps", "100", "--runs", "2", "--csv",
            "rows.csv", "--out", "d.json",
        ],
        dir.path(),
    );
    let d = json_file(&dir.path().join("d.json"));
    assert_eq!(d["runs"][0]["manifest"]["subproblem_count"], 84);
    assert_eq!(d["runs"].as_array().unwrap().len(), 2);
    assert_eq!(d["evaluation"]["runs"], 2);
    assert!(d["runs"][0]["correct_edges"].is_u64());

    let rows = fs::read_to_string(dir.path().join("rows.csv")).unwrap();
    assert_eq!(rows.lines().count(), 2);
    assert!(rows.lines().nth(1).unwrap().starts_with("waste,3,sa,2,"));

    ok(&["evaluate", "--net", "waste", "d.json", "--out", "e.json"], dir.path());
    let e = json_file(&dir.path().join("e.json"));
    assert_eq!(e["evaluation"], d["evaluation"]);
}
