//! Problem files: a JSON object with a `mode` and matrices of scalar tokens.
//!
//! ```json
//! {"mode": "min", "A": [["-2", "0"]], "b": ["-inf"], "C": [["-inf", "-3"]],
//!  "d": ["0"], "c": ["2", "-4"], "c_h": "-inf"}
//! ```
//!
//! Fractional files replace `c`/`c_h` by the numerator `p` and the
//! denominator `r`. Tokens are `-inf`, `+inf`, decimals or `num/den`; plain
//! JSON numbers are accepted too.

use serde_json::{json, Map, Value};
use tropical_subst::{ExtScalar, FractionalProblem, Problem, Sense, TMatrix};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ProblemSpec {
    Linear(Problem),
    Fractional(FractionalProblem),
}

impl ProblemSpec {
    pub fn n(&self) -> usize {
        match self {
            ProblemSpec::Linear(p) => p.n(),
            ProblemSpec::Fractional(fp) => fp.n(),
        }
    }
}

#[derive(Debug, thiserror::Error)]
pub enum InputError {
    #[error("parse error at {position}: {reason}")]
    Parse { position: String, reason: String },
    #[error("dimension mismatch at {path}: expected {expected} entries, found {found}")]
    DimensionMismatch { path: String, expected: usize, found: usize },
    #[error("unknown mode {0:?}, expected \"min\", \"max\" or \"fractional\"")]
    UnknownMode(String),
    #[error("invalid problem: {0}")]
    Problem(#[from] tropical_subst::Error),
    #[error("cannot read {path}: {source}")]
    Io { path: String, source: std::io::Error },
}

fn parse_err(position: impl Into<String>, reason: impl Into<String>) -> InputError {
    InputError::Parse {
        position: position.into(),
        reason: reason.into(),
    }
}

pub fn parse_token(v: &Value, path: &str) -> Result<ExtScalar, InputError> {
    let text = match v {
        Value::String(s) => s.clone(),
        Value::Number(n) => n.to_string(),
        _ => return Err(parse_err(path, "expected a scalar token")),
    };
    text.parse().map_err(|e: tropical_subst::Error| parse_err(path, e.to_string()))
}

fn parse_vector(v: &Value, path: &str) -> Result<Vec<ExtScalar>, InputError> {
    let items = v.as_array().ok_or_else(|| parse_err(path, "expected an array"))?;
    items
        .iter()
        .enumerate()
        .map(|(i, t)| parse_token(t, &format!("{path}[{i}]")))
        .collect()
}

fn parse_matrix(v: &Value, path: &str, rows: usize, cols: usize) -> Result<TMatrix, InputError> {
    let items = v.as_array().ok_or_else(|| parse_err(path, "expected an array of rows"))?;
    check_len(path, rows, items.len())?;
    let mut data = Vec::with_capacity(rows * cols);
    for (i, row) in items.iter().enumerate() {
        let row_path = format!("{path}[{i}]");
        let row = parse_vector(row, &row_path)?;
        check_len(&row_path, cols, row.len())?;
        data.extend(row);
    }
    Ok(TMatrix::new(rows, cols, data)?)
}

fn check_len(path: &str, expected: usize, found: usize) -> Result<(), InputError> {
    if expected == found {
        Ok(())
    } else {
        Err(InputError::DimensionMismatch {
            path: path.to_string(),
            expected,
            found,
        })
    }
}

fn field<'a>(obj: &'a Map<String, Value>, key: &str) -> Result<&'a Value, InputError> {
    obj.get(key).ok_or_else(|| parse_err(key, "missing field"))
}

pub fn parse_problem(text: &str) -> Result<ProblemSpec, InputError> {
    let root: Value = serde_json::from_str(text).map_err(|e| {
        let msg = e.to_string();
        let reason = msg.rsplit_once(" at line ").map_or(msg.as_str(), |(r, _)| r);
        parse_err(format!("line {}, column {}", e.line(), e.column()), reason)
    })?;
    let obj = root.as_object().ok_or_else(|| parse_err("top level", "expected an object"))?;
    let mode = field(obj, "mode")?
        .as_str()
        .ok_or_else(|| parse_err("mode", "expected a string"))?;
    let allowed: &[&str] = match mode {
        "min" | "max" => &["mode", "A", "b", "C", "d", "c", "c_h"],
        "fractional" => &["mode", "A", "b", "C", "d", "p", "r"],
        other => return Err(InputError::UnknownMode(other.to_string())),
    };
    if let Some(key) = obj.keys().find(|k| !allowed.contains(&k.as_str())) {
        return Err(parse_err(key.as_str(), format!("unexpected field for mode {mode}")));
    }

    let b = parse_vector(field(obj, "b")?, "b")?;
    let m = b.len();
    let objective_key = if mode == "fractional" { "p" } else { "c" };
    let cost = parse_vector(field(obj, objective_key)?, objective_key)?;
    let n = cost.len();
    let a = parse_matrix(field(obj, "A")?, "A", m, n)?;
    let c_mat = parse_matrix(field(obj, "C")?, "C", m, n)?;
    let d = parse_vector(field(obj, "d")?, "d")?;
    check_len("d", m, d.len())?;

    if mode == "fractional" {
        let r = parse_vector(field(obj, "r")?, "r")?;
        check_len("r", n, r.len())?;
        return Ok(ProblemSpec::Fractional(FractionalProblem::new(cost, r, a, b, c_mat, d)?));
    }
    let c_h = match obj.get("c_h") {
        Some(v) => parse_token(v, "c_h")?,
        None => ExtScalar::Bottom,
    };
    let sense = if mode == "min" { Sense::Min } else { Sense::Max };
    Ok(ProblemSpec::Linear(Problem::new(sense, a, b, c_mat, d, cost, c_h)?))
}

pub fn read_problem(path: &std::path::Path) -> Result<ProblemSpec, InputError> {
    let text = std::fs::read_to_string(path).map_err(|source| InputError::Io {
        path: path.display().to_string(),
        source,
    })?;
    parse_problem(&text)
}

pub fn token(v: ExtScalar) -> Value {
    Value::String(v.to_string())
}

pub fn tokens(vs: &[ExtScalar]) -> Value {
    Value::Array(vs.iter().copied().map(token).collect())
}

pub fn matrix_tokens(a: &TMatrix) -> Value {
    Value::Array((0..a.rows()).map(|i| tokens(a.row(i))).collect())
}

pub fn problem_json(spec: &ProblemSpec) -> Value {
    match spec {
        ProblemSpec::Linear(p) => json!({
            "mode": p.sense().as_str(),
            "A": matrix_tokens(p.a()),
            "b": tokens(p.b()),
            "C": matrix_tokens(p.c_mat()),
            "d": tokens(p.d()),
            "c": tokens(p.cost()),
            "c_h": token(p.cost_h()),
        }),
        ProblemSpec::Fractional(fp) => json!({
            "mode": "fractional",
            "A": matrix_tokens(fp.a()),
            "b": tokens(fp.b()),
            "C": matrix_tokens(fp.c_mat()),
            "d": tokens(fp.d()),
            "p": tokens(fp.p()),
            "r": tokens(fp.r()),
        }),
    }
}

/// Pretty-printed problem file; `parse_problem` reads it back unchanged.
pub fn emit_problem(spec: &ProblemSpec) -> String {
    let mut s = serde_json::to_string_pretty(&problem_json(spec)).expect("values are plain JSON");
    s.push('\n');
    s
}
