//! JSON and text renderings of solver, oracle and verification results.
//! Object keys are sorted, so equal inputs give identical bytes.

use std::fmt::Write as _;

use serde_json::{json, Map, Value};
use tropical_subst::oracle::{DiffReport, Finding, GridResult, Verdict};
use tropical_subst::solver::{Diagnostic, TraceEvent};
use tropical_subst::{Error, ExtScalar, ParamInterval, Solution};

use crate::file::{matrix_tokens, token, tokens};

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Json,
    Text,
}

/// `x1..xn` for linear problems, `y1..yn, t` for the transformed
/// fractional problem.
pub fn variable_names(n: usize, fractional: bool) -> Vec<String> {
    if fractional {
        (1..=n).map(|j| format!("y{j}")).chain(["t".to_string()]).collect()
    } else {
        (1..=n).map(|j| format!("x{j}")).collect()
    }
}

fn interval_json(t: &ParamInterval) -> Value {
    json!({"kind": t.kind().as_str(), "coeff": token(t.coeff())})
}

fn event_json(e: &TraceEvent, names: &[String]) -> Value {
    let mut o = Map::new();
    o.insert("step".into(), json!(e.step));
    o.insert("sense".into(), json!(e.sense.as_str()));
    o.insert("case".into(), json!(e.case_label));
    o.insert("pivot".into(), json!([e.pivot.0, e.pivot.1 + 1]));
    o.insert("variable".into(), json!(names[e.pivot.1]));
    o.insert("tier".into(), json!([e.tier.0.letter(), e.tier.1.letter()]));
    o.insert("tau".into(), interval_json(&e.tau));
    if let Some(tp) = &e.tau_prime {
        o.insert("tau_prime".into(), interval_json(tp));
    }
    o.insert("transition".into(), matrix_tokens(&e.transition.to_matrix()));
    Value::Object(o)
}

pub fn solution_json(sol: &Solution, names: &[String], with_trace: bool) -> Map<String, Value> {
    let mut o = Map::new();
    o.insert("status".into(), json!(sol.status.as_str()));
    o.insert("sense".into(), json!(sol.sense.as_str()));
    o.insert("final_case".into(), json!(sol.final_case));
    o.insert("switches".into(), json!(sol.switches));
    o.insert(
        "diagnostics".into(),
        Value::Array(sol.diagnostics.iter().map(|d| json!(d.to_string())).collect()),
    );
    if let Some(asg) = &sol.assignment {
        o.insert("z".into(), json!({"beta": token(asg.z_beta)}));
        let mut inst = Map::new();
        for (j, name) in names.iter().enumerate() {
            o.insert(name.clone(), json!({"beta": token(asg.var_betas[j])}));
            inst.insert(name.clone(), token(asg.instantiated[j]));
        }
        inst.insert("z".into(), token(asg.z_value));
        o.insert("h".into(), token(asg.h));
        o.insert("instantiated".into(), Value::Object(inst));
    }
    if with_trace {
        o.insert(
            "trace".into(),
            Value::Array(sol.trace.iter().map(|e| event_json(e, names)).collect()),
        );
    }
    o
}

pub fn recovered_json(rec: &Result<(Vec<ExtScalar>, ExtScalar), Error>) -> Value {
    match rec {
        Ok((x, value)) => {
            let xs: Map<_, _> = x.iter().enumerate().map(|(j, v)| (format!("x{}", j + 1), token(*v))).collect();
            json!({"x": xs, "value": token(*value)})
        }
        Err(e) => json!({"error": e.to_string()}),
    }
}

fn show_interval(t: &ParamInterval) -> String {
    format!("{}({})", t.kind().as_str(), t.coeff())
}

pub fn solution_text(sol: &Solution, names: &[String], with_trace: bool) -> String {
    let mut s = String::new();
    let _ = writeln!(
        s,
        "status: {} ({} problem, case {}, {} switch{})",
        sol.status,
        sol.sense.as_str(),
        sol.final_case,
        sol.switches,
        if sol.switches == 1 { "" } else { "es" }
    );
    if let Some(asg) = &sol.assignment {
        let width = names.iter().map(String::len).max().unwrap_or(1).max(1);
        let _ = writeln!(s, "h = {}", asg.h);
        let _ = writeln!(s, "{:width$} = {} ⊗ h = {}", "z", asg.z_beta, asg.z_value);
        for (j, name) in names.iter().enumerate() {
            let _ = writeln!(s, "{name:width$} = {} ⊗ h = {}", asg.var_betas[j], asg.instantiated[j]);
        }
    }
    let mut dominated = 0;
    for d in &sol.diagnostics {
        match d {
            Diagnostic::DominatedRow { .. } => dominated += 1,
            d => {
                let _ = writeln!(s, "note: {d}");
            }
        }
    }
    if dominated > 0 {
        let _ = writeln!(s, "note: {dominated} pair(s) of rows could be merged (listed in the JSON output)");
    }
    if with_trace {
        let _ = writeln!(s, "trace: {} substitution(s)", sol.trace.len());
        for e in &sol.trace {
            let _ = write!(
                s,
                "  step {}: {} := bound of row {} ({}, case {}, tier ({},{}), tau {}",
                e.step,
                names[e.pivot.1],
                e.pivot.0,
                e.sense.as_str(),
                e.case_label,
                e.tier.0.letter(),
                e.tier.1.letter(),
                show_interval(&e.tau)
            );
            if let Some(tp) = &e.tau_prime {
                let _ = write!(s, ", tau' {}", show_interval(tp));
            }
            let _ = writeln!(s, ")");
            let t = e.transition.to_matrix();
            for i in 0..t.rows() {
                let row: Vec<_> = t.row(i).iter().map(|v| format!("{v:>5}")).collect();
                let _ = writeln!(s, "    [{}]", row.join(" "));
            }
        }
    }
    s
}

pub fn recovered_text(rec: &Result<(Vec<ExtScalar>, ExtScalar), Error>) -> String {
    match rec {
        Ok((x, value)) => {
            let xs: Vec<_> = x.iter().map(ExtScalar::to_string).collect();
            format!("recovered: x = ({}), value = {value}\n", xs.join(", "))
        }
        Err(e) => format!("recovered: {e}\n"),
    }
}

pub fn grid_json(r: &GridResult) -> Map<String, Value> {
    let mut o = Map::new();
    o.insert("best".into(), token(r.best_value));
    o.insert("points".into(), Value::Array(r.best_points.iter().map(|p| tokens(p)).collect()));
    o.insert("attaining".into(), json!(r.attaining));
    o.insert("feasible".into(), json!(r.feasible));
    o.insert("evaluated".into(), json!(r.evaluated));
    o
}

pub fn grid_text(r: &GridResult) -> String {
    let mut s = format!(
        "best: {}\nfeasible points: {} of {}\nattaining points: {}\n",
        r.best_value, r.feasible, r.evaluated, r.attaining
    );
    for p in &r.best_points {
        let xs: Vec<_> = p.iter().map(ExtScalar::to_string).collect();
        let _ = writeln!(s, "  ({})", xs.join(", "));
    }
    s
}

pub fn finding_text(f: &Finding) -> String {
    let point = |x: &[ExtScalar]| x.iter().map(ExtScalar::to_string).collect::<Vec<_>>().join(", ");
    match f {
        Finding::InfeasiblePoint(x) => format!("solver point ({}) violates a constraint", point(x)),
        Finding::ObjectiveMismatch { reported, evaluated } => {
            format!("reported value {reported} but the objective at the point is {evaluated}")
        }
        Finding::ValueMismatch { solver, oracle } => format!("solver value {solver}, oracle value {oracle}"),
        Finding::OutsideBox => "solver point lies outside the grid box".into(),
        Finding::Uncomparable(s) => format!("status {s} has no value to compare"),
        Finding::SolverError(e) => format!("solver error: {e}"),
        Finding::OracleError(e) => format!("oracle error: {e}"),
    }
}

pub fn verdict_str(v: Verdict) -> &'static str {
    match v {
        Verdict::Agree => "agree",
        Verdict::Disagree => "disagree",
        Verdict::NotComparable => "not_comparable",
    }
}

pub fn verify_json(rep: &DiffReport) -> Map<String, Value> {
    let mut o = Map::new();
    o.insert("verdict".into(), json!(verdict_str(rep.verdict)));
    o.insert(
        "findings".into(),
        Value::Array(rep.findings.iter().map(|f| json!(finding_text(f))).collect()),
    );
    if let Some(sol) = &rep.solution {
        o.insert("status".into(), json!(sol.status.as_str()));
        if let Some(z) = sol.z_value() {
            o.insert("solver".into(), token(z));
        }
    }
    if let Some(g) = &rep.oracle {
        o.insert("oracle".into(), token(g.best_value));
    }
    if let Some((x, value)) = &rep.recovered {
        o.insert("recovered".into(), recovered_json(&Ok((x.clone(), *value))));
    }
    o
}

pub fn verify_text(rep: &DiffReport) -> String {
    let mut s = format!("verdict: {}\n", verdict_str(rep.verdict));
    if let Some(sol) = &rep.solution {
        let _ = writeln!(s, "solver: {}", sol.status);
        if let Some(z) = sol.z_value() {
            let _ = writeln!(s, "solver value: {z}");
        }
    }
    if let Some(g) = &rep.oracle {
        let _ = writeln!(s, "oracle value: {}", g.best_value);
    }
    if let Some((x, value)) = &rep.recovered {
        s.push_str(&recovered_text(&Ok((x.clone(), *value))));
    }
    for f in &rep.findings {
        let _ = writeln!(s, "finding: {}", finding_text(f));
    }
    s
}

/// Pretty JSON with a trailing newline.
pub fn render_json(o: Map<String, Value>) -> String {
    let mut s = serde_json::to_string_pretty(&Value::Object(o)).expect("values are plain JSON");
    s.push('\n');
    s
}
