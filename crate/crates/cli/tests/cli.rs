use std::path::PathBuf;
use std::process::Command;

use proptest::prelude::*;
use serde_json::Value;
use tropical_subst::{ExtScalar, FractionalProblem, Problem, Sense, TMatrix};
use tropical_subst_cli::{emit_problem, parse_problem, run, InputError, ProblemSpec};

fn problem_file(name: &str) -> String {
    let root = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../problems");
    root.join(name).display().to_string()
}

fn invoke(args: &[&str]) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let argv = std::iter::once("tropical-subst").chain(args.iter().copied());
    let code = run(argv, &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

fn invoke_json(args: &[&str]) -> (i32, Value) {
    let (code, out, err) = invoke(args);
    let v = serde_json::from_str(&out).unwrap_or_else(|e| panic!("{e}: {out} {err}"));
    (code, v)
}

fn temp_file(name: &str, contents: &str) -> String {
    let dir = std::env::temp_dir().join(format!("tropical-subst-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join(name);
    std::fs::write(&path, contents).unwrap();
    path.display().to_string()
}

#[test]
fn solve_minimization() {
    let f = problem_file("minimization.json");
    let (code, v) = invoke_json(&["solve", &f, "--h", "0", "--format", "json", "--trace"]);
    assert_eq!(code, 0);
    assert_eq!(v["status"], "FINITE");
    assert_eq!(v["z"]["beta"], "0");
    assert_eq!(v["x1"]["beta"], "-2");
    assert_eq!(v["x2"]["beta"], "2");
    assert_eq!(v["instantiated"]["x1"], "-2");
    let trace = v["trace"].as_array().unwrap();
    assert_eq!(trace.len(), 2);
    assert_eq!(trace[0]["pivot"], serde_json::json!([3, 2]));
    assert_eq!(trace[0]["tier"], serde_json::json!(["B", "B"]));
    assert_eq!(trace[0]["tau"]["kind"], "mu");
    assert_eq!(trace[1]["transition"].as_array().unwrap().len(), 4);
}

#[test]
fn h_scales_the_answer() {
    let f = problem_file("minimization.json");
    let (code, v) = invoke_json(&["solve", &f, "--h", "7/2", "--format", "json"]);
    assert_eq!(code, 0);
    assert_eq!(v["z"]["beta"], "0");
    assert_eq!(v["instantiated"]["x1"], "3/2");
    assert_eq!(v["instantiated"]["z"], "7/2");
    let (code, _, err) = invoke(&["solve", &f, "--h", "+inf"]);
    assert_eq!(code, 1);
    assert!(err.contains("must be finite"), "{err}");
}

#[test]
fn solve_fractional() {
    let f = problem_file("fractional.json");
    let (code, v) = invoke_json(&["solve", &f, "--format", "json"]);
    assert_eq!(code, 0);
    assert_eq!(v["z"]["beta"], "-4");
    assert_eq!(v["y1"]["beta"], "-3");
    assert_eq!(v["y3"]["beta"], "-inf");
    assert_eq!(v["recovered"]["value"], "-4");
    assert_eq!(v["recovered"]["x"]["x1"], "2");
    assert_eq!(v["recovered"]["x"]["x3"], "-inf");
}

#[test]
fn solve_maximization_and_coherency() {
    let (code, v) = invoke_json(&["solve", &problem_file("maximization.json"), "--format", "json"]);
    assert_eq!(code, 0);
    assert_eq!((v["z"]["beta"].as_str(), v["x1"]["beta"].as_str()), (Some("5"), Some("2")));
    let (code, v) = invoke_json(&["solve", &problem_file("coherency.json"), "--format", "json"]);
    assert_eq!(code, 0);
    assert_eq!(v["status"], "PLUS_INFINITY");
    assert_eq!(v["x1"]["beta"], "+inf");
}

#[test]
fn bottom_status_reports_minus_infinity() {
    // x ≥ 4 from the second row, x ≤ -4 from the third
    let f = temp_file(
        "bottom.json",
        r#"{"mode":"max","A":[["-inf"],["1"],["2"]],"b":["2","5","-inf"],
            "C":[["-5"],["1"],["1"]],"d":["2","4","-2"],"c":["2"]}"#,
    );
    let (code, v) = invoke_json(&["solve", &f, "--format", "json"]);
    assert_eq!(code, 0);
    assert_eq!(v["status"], "BOTTOM");
    assert_eq!(v["z"]["beta"], "-inf");
}

#[test]
fn gap_exit_code() {
    let f = temp_file(
        "switch.json",
        r#"{"mode":"min","A":[["0","-inf"],["-inf","-inf"]],"b":["-inf","0"],
            "C":[["-inf","-inf"],["-inf","0"]],"d":["0","1"],"c":["0","-inf"]}"#,
    );
    let (code, v) = invoke_json(&["solve", &f, "--format", "json"]);
    assert_eq!(code, 0);
    assert_eq!(v["status"], "PLUS_INFINITY");
    assert_eq!(v["switches"], 1);
    let (code, out, err) = invoke(&["solve", &f, "--switch-limit", "0"]);
    assert_eq!(code, 2);
    assert!(out.starts_with("status: PAPER_GAP"), "{out}");
    assert!(err.contains("switches"), "{err}");
}

#[test]
fn check_points() {
    let (code, out, _) = invoke(&["check", &problem_file("coherency.json"), "--point", "0"]);
    assert_eq!(code, 0);
    assert!(out.starts_with("infeasible"));
    let (code, v) = invoke_json(&["check", &problem_file("minimization.json"), "--point", "-2, 2", "--format", "json"]);
    assert_eq!(code, 0);
    assert_eq!(v["feasible"], true);
    assert_eq!(v["objective"], "0");
    let (code, v) = invoke_json(&["check", &problem_file("fractional.json"), "--point", "2,1,-inf", "--format", "json"]);
    assert_eq!(code, 0);
    assert_eq!(v["feasible"], true);
    assert_eq!(v["objective"], "-4");
    let (code, _, err) = invoke(&["check", &problem_file("minimization.json"), "--point", "1"]);
    assert_eq!(code, 1);
    assert!(err.contains("coordinates"));
}

#[test]
fn oracle_and_verify() {
    let (code, v) = invoke_json(&["oracle", &problem_file("minimization.json"), "--bound", "10", "--format", "json"]);
    assert_eq!(code, 0);
    assert_eq!(v["best"], "0");
    assert!(v["points"].as_array().unwrap().contains(&serde_json::json!(["-2", "2"])));
    for name in ["coherency.json", "minimization.json", "fractional.json", "maximization.json"] {
        let (code, v) = invoke_json(&["verify", &problem_file(name), "--format", "json"]);
        assert_eq!(code, 0, "{name}: {v}");
        assert_eq!(v["verdict"], "agree");
    }
    let (_, out, _) = invoke(&["verify", &problem_file("fractional.json")]);
    assert!(out.contains("oracle value: -4"), "{out}");
}

#[test]
fn verify_reports_suboptimal_answer() {
    // min x1 subject to x1 ⊕ x2 ≥ 5: the solver keeps x1 = 5, but x = (-inf, 5) is feasible
    let f = temp_file(
        "or.json",
        r#"{"mode":"min","A":[["0","0"]],"b":["-inf"],"C":[["-inf","-inf"]],"d":["5"],"c":["0","-inf"]}"#,
    );
    let (code, v) = invoke_json(&["verify", &f, "--format", "json"]);
    assert_eq!(code, 3);
    assert_eq!(v["verdict"], "disagree");
    assert_eq!(v["solver"], "5");
    assert_eq!(v["oracle"], "-inf");
}

#[test]
fn input_errors() {
    let ragged = temp_file(
        "ragged.json",
        r#"{"mode":"min","A":[["0","0"],["0"]],"b":["0","0"],"C":[["0","0"],["0","0"]],"d":["0","0"],"c":["0","0"]}"#,
    );
    let (code, _, err) = invoke(&["solve", &ragged]);
    assert_eq!(code, 1);
    assert!(err.contains("dimension mismatch at A[1]"), "{err}");
    let mode = temp_file("mode.json", r#"{"mode":"sup","A":[],"b":[],"C":[],"d":[],"c":[]}"#);
    let (code, _, err) = invoke(&["solve", &mode]);
    assert_eq!(code, 1);
    assert!(err.contains("unknown mode"), "{err}");
    let (code, _, _) = invoke(&["solve", "/nonexistent/problem.json"]);
    assert_eq!(code, 1);
    let (code, _, _) = invoke(&["frobnicate"]);
    assert_eq!(code, 1);
    let (code, out, _) = invoke(&["--help"]);
    assert_eq!(code, 0);
    assert!(out.contains("solve"));
}

#[test]
fn output_is_deterministic() {
    for format in ["json", "text"] {
        let args = ["solve", &problem_file("fractional.json"), "--trace", "--format", format];
        assert_eq!(invoke(&args), invoke(&args));
    }
}

#[test]
fn parses_worked_example() {
    let text = std::fs::read_to_string(problem_file("minimization.json")).unwrap();
    let ProblemSpec::Linear(p) = parse_problem(&text).unwrap() else { panic!("linear") };
    assert_eq!((p.m(), p.n()), (7, 2));
    assert_eq!(p.sense(), Sense::Min);
    assert_eq!(p.d()[3], ExtScalar::int(0));
    assert!(matches!(parse_problem("[1]"), Err(InputError::Parse { .. })));
}

#[test]
fn worked_examples_round_trip() {
    for name in ["coherency.json", "minimization.json", "fractional.json", "maximization.json"] {
        let spec = parse_problem(&std::fs::read_to_string(problem_file(name)).unwrap()).unwrap();
        let emitted = emit_problem(&spec);
        assert_eq!(parse_problem(&emitted).unwrap(), spec, "{name}");
        assert_eq!(emit_problem(&parse_problem(&emitted).unwrap()), emitted);
    }
}

#[test]
fn binary_exit_codes() {
    let bin = env!("CARGO_BIN_EXE_tropical-subst");
    let ok = Command::new(bin).args(["solve", &problem_file("minimization.json")]).output().unwrap();
    assert_eq!(ok.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&ok.stdout).contains("x2 = 2 ⊗ h = 2"));
    let bad = Command::new(bin).args(["solve", "/nonexistent.json"]).output().unwrap();
    assert_eq!(bad.status.code(), Some(1));
    assert!(!bad.stderr.is_empty());
}

fn token() -> impl Strategy<Value = ExtScalar> {
    prop_oneof![
        1 => Just(ExtScalar::Bottom),
        1 => Just(ExtScalar::Top),
        6 => (-50i64..50, 1i64..8).prop_map(|(a, b)| ExtScalar::Finite(num_rational::Rational64::new(a, b))),
    ]
}

fn spec() -> impl Strategy<Value = ProblemSpec> {
    (1usize..4, 0usize..4, 0u8..3).prop_flat_map(|(n, m, mode)| {
        let v = move |len| proptest::collection::vec(token(), len);
        (v(m * n), v(m), v(m * n), v(m), v(n), v(n), token()).prop_filter_map("degenerate fraction", move |(a, b, c, d, p, r, ch)| {
            let a = TMatrix::new(m, n, a).unwrap();
            let c = TMatrix::new(m, n, c).unwrap();
            match mode {
                0 => Some(ProblemSpec::Linear(Problem::new(Sense::Min, a, b, c, d, p, ch).unwrap())),
                1 => Some(ProblemSpec::Linear(Problem::new(Sense::Max, a, b, c, d, p, ch).unwrap())),
                _ => FractionalProblem::new(p, r, a, b, c, d).ok().map(ProblemSpec::Fractional),
            }
        })
    })
}

proptest! {
    #[test]
    fn emitted_files_parse_back(s in spec()) {
        let text = emit_problem(&s);
        prop_assert_eq!(parse_problem(&text).unwrap(), s);
    }
}
