use std::process::Command;

use defring::cli::{self, EXIT_BUDGET, EXIT_CONFIG, EXIT_OK};
use serde_json::Value;

struct Run {
    code: i32,
    out: String,
    err: String,
}

fn call(args: &[&str]) -> Run {
    let (mut out, mut err) = (Vec::new(), Vec::new());
    let code = cli::run(std::iter::once("defring").chain(args.iter().copied()), &mut out, &mut err);
    Run {
        code,
        out: String::from_utf8(out).unwrap(),
        err: String::from_utf8(err).unwrap(),
    }
}

fn record(args: &[&str]) -> Value {
    let r = call(args);
    assert_eq!(r.code, EXIT_OK, "{args:?}: {}", r.err);
    serde_json::from_str(&r.out).unwrap()
}

fn without_elapsed(mut v: Value) -> Value {
    v.as_object_mut().unwrap().remove("elapsed");
    v
}

const SYMPL: &str = "sympl:r=1,a=1,b=0";

fn points_file(dir: &tempfile::TempDir, text: &str) -> String {
    let p = dir.path().join("points.json");
    std::fs::write(&p, text).unwrap();
    p.to_string_lossy().into_owned()
}

#[test]
fn emit_sexpr_with_stats_on_stderr() {
    let r = call(&["emit", "--set", "lie:sp:2"]);
    assert_eq!(r.code, EXIT_OK);
    assert!(r.out.starts_with("(vset (sig x[1,1] x[1,2] x[2,1] x[2,2])"));
    assert!(!r.out.contains("exists") && !r.out.contains("forall"));
    assert!(r.err.contains("4 free vars, 0 quantifiers"), "{}", r.err);
}

#[test]
fn emit_json_for_empty_signature() {
    let v = record(&["emit", "--set", "lie:so:0", "--format", "json"]);
    assert_eq!(v["sexpr"], "(vset (sig) (true))");
    assert_eq!(v["stats"]["free_vars"], 0);
    assert_eq!(v["config"]["set"], "lie:so:0");
}

#[test]
fn emit_plus_set_has_quantified_blocks() {
    let r = call(&["emit", "--set", "plus:odd-orth:r=1,a=1,b=0"]);
    assert_eq!(r.code, EXIT_OK);
    assert!(r.out.contains("exists") && r.out.contains("forall"));
}

#[test]
fn emit_is_deterministic_and_writes_files() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("rss.sexpr");
    let p = path.to_string_lossy().into_owned();
    assert_eq!(call(&["emit", "--set", "rss:so:3", "--out", &p]).code, EXIT_OK);
    let first = std::fs::read_to_string(&path).unwrap();
    assert_eq!(call(&["emit", "--set", "rss:so:3"]).out, first);
}

#[test]
fn unknown_names_are_config_errors() {
    assert_eq!(call(&["emit", "--set", "nope:3"]).code, EXIT_CONFIG);
    assert_eq!(call(&["emit", "--set", "lie:xx:3"]).code, EXIT_CONFIG);
    assert_eq!(call(&["emit", "--set", "pm:sympl:r=2,a=1,b=1"]).code, EXIT_CONFIG);
    assert_eq!(call(&["count", "--set", "L:2", "--structure", "fq:6"]).code, EXIT_CONFIG);
    assert_eq!(call(&["check", "--suite", "nope"]).code, EXIT_CONFIG);
    assert_eq!(call(&["frobnicate"]).code, EXIT_CONFIG);
}

#[test]
fn exhaustive_counts() {
    let v = record(&["count", "--set", "lie:so:3", "--structure", "fq:3"]);
    assert_eq!(v["count"], 27);
    assert_eq!(v["mode"], "exhaustive");
    assert_eq!(v["structure"], "fq:3");
    assert!(v.get("stderr").is_none() && v.get("seed").is_none());
    assert_eq!(record(&["count", "--set", "L:2", "--structure", "fq:5"])["count"], 25);
    let naive = record(&["count", "--set", "lie:u:1", "--structure", "inv:3", "--strategy", "both"]);
    assert_eq!(naive["count"], 3);
}

#[test]
fn count_records_are_reproducible() {
    let args = ["count", "--set", "rss:sp:2", "--structure", "fq:5"];
    assert_eq!(without_elapsed(record(&args)), without_elapsed(record(&args)));
}

#[test]
fn sampled_count_replays() {
    let args = ["count", "--set", &format!("plus:{SYMPL}"), "--structure", "fq:3", "--mode", "sample", "--seed", "42", "--samples", "200"];
    let a = without_elapsed(record(&args));
    assert_eq!(a, without_elapsed(record(&args)));
    assert_eq!(a["seed"], 42);
    assert_eq!(a["config"]["samples"], 200);
    assert!(a["estimate"].as_f64().unwrap() >= 0.0);
    assert!(a["stderr"].as_f64().is_some());
}

#[test]
fn budget_exhaustion_leaves_no_record() {
    let r = call(&["count", "--set", "lie:so:4", "--structure", "fq:3", "--strategy", "naive"]);
    assert_eq!(r.code, EXIT_BUDGET);
    assert!(r.out.is_empty());
    let r = call(&["count", "--set", "lie:so:3", "--structure", "fq:3", "--strategy", "naive", "--budget", "10"]);
    assert_eq!(r.code, EXIT_BUDGET);
}

#[test]
fn parameters_are_required_and_parsed() {
    assert_eq!(call(&["count", "--set", "C:2", "--structure", "fq:3"]).code, EXIT_CONFIG);
    // the centralizer of a regular diagonal matrix is the diagonal, q² points
    let v = record(&["count", "--set", "C:2", "--structure", "fq:3", "--params", "1,0,0,2"]);
    assert_eq!(v["count"], 9);
    let v = record(&["count", "--set", "C:2", "--structure", "fq:3", "--params", "1,0,0,-1"]);
    assert_eq!(v["count"], 9);
    // over F₉ entries may be named
    let v = record(&["count", "--set", "C:1", "--structure", "inv:3", "--params", "x+1"]);
    assert_eq!(v["count"], 9);
}

#[test]
fn classify_zero_mismatched_and_pm_points() {
    let dir = tempfile::tempdir().unwrap();
    let pts = points_file(
        &dir,
        r#"[{"X": [[0,0],[0,0]], "Y": [[0,0],[0,0]]},
            {"X": [[1,0],[0,2]], "Y": [[0,1],[2,0]]},
            {"X": [[1,0],[0,2]], "Y": [[1,0],[0,2]]},
            {"X": [[1,0],[0,0]], "Y": [[0,0],[0,0]]}]"#,
    );
    let r = call(&["classify", "--triple", SYMPL, "--structure", "fq:3", "--points", &pts]);
    assert_eq!(r.code, EXIT_OK, "{}", r.err);
    let rows: Vec<&str> = r.out.lines().skip(2).collect();
    assert_eq!(rows, ["0,0,ok", "1,0,ok", "2,1,ok", "3,,not-in-domain"]);
    assert!(r.out.starts_with("# {\"command\":\"classify\""));

    let v = record(&["classify", "--triple", SYMPL, "--structure", "fq:3", "--points", &pts, "--format", "json"]);
    assert_eq!(v["results"][2]["sigma"], 1);
    assert_eq!(v["glreg"], false);
}

#[test]
fn classify_both_strategies_reports_naive_budget() {
    let dir = tempfile::tempdir().unwrap();
    let pts = points_file(&dir, r#"[{"X": [[1,0],[0,2]], "Y": [[1,0],[0,2]]}]"#);
    let r = call(&["classify", "--triple", SYMPL, "--structure", "fq:3", "--points", &pts, "--strategy", "both"]);
    assert_eq!(r.code, EXIT_BUDGET);
    let rows: Vec<&str> = r.out.lines().skip(1).collect();
    assert_eq!(rows, ["index,sigma,naive,guided,status", "0,1,,1,naive-budget"]);
}

#[test]
fn classify_unitary_with_named_elements() {
    let dir = tempfile::tempdir().unwrap();
    // u(1) ⊕ u(1) ⊕ u(0): X = Y = ε, the element x of F₉ = F₃[x]/(x² + 1)
    let pts = points_file(&dir, r#"[{"X": [["x"]], "Y": [["x"]]}, {"X": [["x"]], "Y": [["2*x"]]}]"#);
    let v = record(&["classify", "--triple", "unitary:n=1,a=1,b=0", "--structure", "inv:3", "--points", &pts, "--format", "json"]);
    let res = v["results"].as_array().unwrap();
    assert_eq!(res.len(), 2);
    assert!(res[0]["sigma"].as_i64().unwrap() != 0);
    assert_eq!(res[1]["sigma"], 0);
}

#[test]
fn malformed_points_are_config_errors() {
    let dir = tempfile::tempdir().unwrap();
    for text in [
        "not json",
        r#"{"X": []}"#,
        r#"[{"X": [[0,0]], "Y": [[0,0],[0,0]]}]"#,
        r#"[{"X": [[0,0],[0,"y"]], "Y": [[0,0],[0,0]]}]"#,
    ] {
        let pts = points_file(&dir, text);
        let r = call(&["classify", "--triple", SYMPL, "--structure", "fq:3", "--points", &pts]);
        assert_eq!(r.code, EXIT_CONFIG, "{text}");
    }
    let r = call(&["classify", "--triple", SYMPL, "--structure", "inv:3", "--points", "/nonexistent"]);
    assert_eq!(r.code, EXIT_CONFIG);
}

#[test]
fn check_reports_in_json() {
    let v = record(&["check", "--suite", "parity", "--seed", "1"]);
    assert_eq!(v["report"]["passed"], true);
    assert_eq!(v["config"]["suite"], "parity");
    assert_eq!(v["report"]["failed"], 0);
}

#[test]
fn binary_exit_codes_and_budget_variable() {
    let bin = env!("CARGO_BIN_EXE_defring");
    let status = |args: &[&str], budget: Option<&str>| {
        let mut c = Command::new(bin);
        c.args(args);
        match budget {
            Some(b) => c.env("DEFRING_BUDGET", b),
            None => c.env_remove("DEFRING_BUDGET"),
        };
        c.output().unwrap()
    };
    let naive = ["count", "--set", "lie:so:3", "--structure", "fq:3", "--strategy", "naive"];
    let ok = status(&naive, None);
    assert_eq!(ok.status.code(), Some(EXIT_OK));
    let v: Value = serde_json::from_slice(&ok.stdout).unwrap();
    assert_eq!(v["count"], 27);
    assert_eq!(status(&naive, Some("100")).status.code(), Some(EXIT_BUDGET));
    assert_eq!(status(&["emit", "--set", "nope:1"], None).status.code(), Some(EXIT_CONFIG));
    assert_eq!(status(&["--help"], None).status.code(), Some(EXIT_OK));
}
