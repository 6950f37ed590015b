//! Worked instances shared by the integration suites.

#![allow(dead_code)]

pub mod props;

use tropical_subst::{ExtScalar, FractionalProblem, Problem, Sense, TMatrix};

/// Parses one scalar; `.` stands for `-inf` so matrices stay readable.
pub fn sc(token: &str) -> ExtScalar {
    match token {
        "." => ExtScalar::Bottom,
        t => t.parse().unwrap_or_else(|e| panic!("bad scalar {t:?}: {e}")),
    }
}

pub fn vecs(line: &str) -> Vec<ExtScalar> {
    line.split_whitespace().map(sc).collect()
}

pub fn mat(rows: &[&str]) -> TMatrix {
    TMatrix::from_rows(rows.iter().map(|r| vecs(r)).collect()).expect("rectangular")
}

pub fn s(v: i64) -> ExtScalar {
    ExtScalar::int(v)
}

pub const BOT: ExtScalar = ExtScalar::Bottom;
pub const TOP: ExtScalar = ExtScalar::Top;

/// One variable; the only point satisfying both rows is `+∞`.
pub fn coherency() -> Problem {
    Problem::new(
        Sense::Min,
        mat(&["0", "-2"]),
        vecs("0 1"),
        mat(&["-1", "0"]),
        vecs("2 ."),
        vecs("0"),
        BOT,
    )
    .unwrap()
}

/// Two variables, seven rows, minimum `0` at `(-2, 2)`.
pub fn minimization() -> Problem {
    Problem::new(
        Sense::Min,
        mat(&["-2 0", "0 -1", "1 -2", "2 .", "0 .", "-2 .", "-4 ."]),
        vecs(". . . . 0 0 0"),
        mat(&[". .", ". .", ". .", ". -3", ". -4", ". -5", ". -6"]),
        vecs("0 0 0 0 . . ."),
        vecs("2 -4"),
        BOT,
    )
    .unwrap()
}

/// `min x2 - (3 + x1)` over three variables and four rows.
pub fn fractional() -> FractionalProblem {
    FractionalProblem::new(
        vecs(". 0 ."),
        vecs("3 . ."),
        mat(&[". . .", ". 0 .", "0 . .", "0 . ."]),
        vecs("0 . . 3"),
        mat(&["-3 -4 .", "-1 0 .", ". . .", "1 . 0"]),
        vecs(". 1 0 ."),
    )
    .unwrap()
}

/// Maximization over two variables and four rows, maximum `5` at `(2, 2)`.
pub fn maximization() -> Problem {
    Problem::new(
        Sense::Max,
        mat(&[". -1", "-2 -2", "-1 .", "0 ."]),
        vecs(". . . ."),
        mat(&["0 .", ". .", ". 0", ". 2"]),
        vecs("0 0 0 0"),
        vecs("1 3"),
        BOT,
    )
    .unwrap()
}
