//! Brute-force reference: exhaustive search over a lattice box, used to
//! cross-check the solver.
//!
//! All data, the box bound and the step are scaled by a common denominator
//! so the search runs on machine integers; `-∞` and `+∞` are sentinels.

use alloc::vec;
use alloc::vec::Vec;

use num_integer::Integer;
use num_rational::Rational64;
use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::fractional::{charnes_cooper, recover, FractionalProblem};
use crate::interval::Sense;
use crate::scalar::ExtScalar;
use crate::solver::{solve_with, Problem, SolveOptions, Solution, Status};

/// A search box `[-bound, bound]^n` sampled every `step`, optionally with
/// `-∞` and `+∞` added to every coordinate.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GridSpec {
    pub bound: Rational64,
    pub step: Rational64,
    pub include_bottom: bool,
    pub include_top: bool,
    /// Maximum number of candidate values per coordinate.
    pub max_per_coord: u64,
    /// Maximum number of grid points.
    pub max_points: u128,
    /// Attaining points kept in the result; the count is always exact.
    pub max_reported: usize,
}

impl GridSpec {
    pub const DEFAULT_MAX_PER_COORD: u64 = 100_001;
    pub const DEFAULT_MAX_POINTS: u128 = 50_000_000;
    pub const DEFAULT_MAX_REPORTED: usize = 1_000;

    pub fn new(bound: Rational64, step: Rational64) -> Result<Self> {
        let g = GridSpec {
            bound,
            step,
            include_bottom: true,
            include_top: true,
            max_per_coord: Self::DEFAULT_MAX_PER_COORD,
            max_points: Self::DEFAULT_MAX_POINTS,
            max_reported: Self::DEFAULT_MAX_REPORTED,
        };
        g.validate()?;
        Ok(g)
    }

    /// `bound = 3 M + 3` where `M` is the largest absolute finite entry of
    /// the problem, `step = 1`, both infinities included.
    pub fn default_for(p: &Problem) -> Self {
        let m = max_abs_entry(p.a().as_slice().iter().chain(p.c_mat().as_slice()).chain(p.b()).chain(p.d()).chain(p.cost()).chain([&p.cost_h()]));
        Self::with_bound(m)
    }

    pub fn default_for_fractional(fp: &FractionalProblem) -> Self {
        let m = max_abs_entry(
            fp.a().as_slice().iter().chain(fp.c_mat().as_slice()).chain(fp.b()).chain(fp.d()).chain(fp.p()).chain(fp.r()),
        );
        Self::with_bound(m)
    }

    fn with_bound(max_abs: Rational64) -> Self {
        let three = Rational64::from_integer(3);
        GridSpec::new(three * max_abs + three, Rational64::from_integer(1)).expect("positive bound and step")
    }

    fn validate(&self) -> Result<()> {
        if !self.bound.is_positive() {
            return Err(Error::InvalidGrid("bound must be positive"));
        }
        if !self.step.is_positive() {
            return Err(Error::InvalidGrid("step must be positive"));
        }
        Ok(())
    }

    /// Number of finite lattice values per coordinate.
    fn finite_count(&self) -> Result<u64> {
        let ratio = (self.bound * 2 / self.step).floor().to_integer();
        u64::try_from(ratio)
            .ok()
            .and_then(|r| r.checked_add(1))
            .ok_or(Error::InvalidGrid("too many lattice values"))
    }

    pub fn per_coord(&self) -> Result<u64> {
        self.validate()?;
        let count = self.finite_count()? + u64::from(self.include_bottom) + u64::from(self.include_top);
        if count > self.max_per_coord {
            return Err(Error::GridTooLarge {
                points: u128::from(count),
                cap: u128::from(self.max_per_coord),
            });
        }
        Ok(count)
    }

    /// Candidate values of one coordinate, in increasing order.
    pub fn candidates(&self) -> Result<Vec<ExtScalar>> {
        self.per_coord()?;
        let mut out = Vec::new();
        if self.include_bottom {
            out.push(ExtScalar::Bottom);
        }
        for k in 0..self.finite_count()? {
            let k = i64::try_from(k).map_err(|_| Error::InvalidGrid("too many lattice values"))?;
            out.push(ExtScalar::Finite(-self.bound + self.step * k));
        }
        if self.include_top {
            out.push(ExtScalar::Top);
        }
        Ok(out)
    }

    /// Whether `x` is one of the grid points.
    pub fn contains(&self, x: &[ExtScalar]) -> bool {
        x.iter().all(|v| match v {
            ExtScalar::Bottom => self.include_bottom,
            ExtScalar::Top => self.include_top,
            ExtScalar::Finite(q) => q.abs() <= self.bound && ((*q + self.bound) / self.step).is_integer(),
        })
    }

    fn total_points(&self, n: usize) -> Result<u128> {
        let per = u128::from(self.per_coord()?);
        let mut total: u128 = 1;
        for _ in 0..n {
            total = total.saturating_mul(per);
            if total > self.max_points {
                return Err(Error::GridTooLarge {
                    points: total,
                    cap: self.max_points,
                });
            }
        }
        Ok(total)
    }
}

fn max_abs_entry<'a>(values: impl Iterator<Item = &'a ExtScalar>) -> Rational64 {
    values
        .filter_map(ExtScalar::abs_finite)
        .max()
        .unwrap_or_else(Rational64::zero)
}

/// Outcome of a grid search.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GridResult {
    /// Best objective over feasible grid points; `+∞` (min) or `-∞` (max)
    /// when none is feasible.
    pub best_value: ExtScalar,
    /// Attaining points in enumeration order, at most `max_reported`.
    pub best_points: Vec<Vec<ExtScalar>>,
    pub attaining: u64,
    pub feasible: u64,
    pub evaluated: u64,
}

pub fn is_feasible(x: &[ExtScalar], p: &Problem) -> Result<bool> {
    if x.len() != p.n() {
        return Err(Error::DimensionMismatch {
            context: "point length",
            expected: p.n(),
            found: x.len(),
        });
    }
    Ok(p.satisfies(x, ExtScalar::one()))
}

const NEG: i64 = i64::MIN;
const POS: i64 = i64::MAX;

fn mul(a: i64, b: i64) -> i64 {
    if a == NEG || b == NEG {
        NEG
    } else if a == POS || b == POS {
        POS
    } else {
        a.checked_add(b).expect("lattice overflow")
    }
}

/// A linear form `coeffs ⊗ x ⊕ constant` on the integer lattice.
struct IntForm {
    coeffs: Vec<i64>,
    constant: i64,
}

/// Exhaustive search over the integer lattice.
struct Search<'a> {
    n: usize,
    /// `(greater side, smaller side)` per constraint.
    rows: Vec<(IntForm, IntForm)>,
    /// Objective parts: the value is computed from these by `value`.
    objective: Vec<IntForm>,
    value: &'a dyn Fn(&[i64]) -> Option<i64>,
    minimize: bool,
    values: Vec<i64>,
}

impl Search<'_> {
    /// Depth-first enumeration with running row maxima, one level per
    /// coordinate.
    fn run(&self, max_reported: usize) -> (Option<i64>, Vec<Vec<usize>>, u64, u64, u64) {
        let n = self.n;
        let k = self.rows.len();
        let o = self.objective.len();
        // partial maxima per depth
        let mut big = vec![vec![0i64; k]; n + 1];
        let mut small = vec![vec![0i64; k]; n + 1];
        let mut obj = vec![vec![0i64; o]; n + 1];
        for (r, (g, s)) in self.rows.iter().enumerate() {
            big[0][r] = g.constant;
            small[0][r] = s.constant;
        }
        for (q, f) in self.objective.iter().enumerate() {
            obj[0][q] = f.constant;
        }
        let mut idx = vec![0usize; n];
        let mut best: Option<i64> = None;
        let mut points: Vec<Vec<usize>> = Vec::new();
        let (mut attaining, mut feasible, mut evaluated) = (0u64, 0u64, 0u64);
        let per = self.values.len();
        if n > 0 && per == 0 {
            return (None, points, 0, 0, 0);
        }
        let mut depth = 0usize;
        loop {
            if depth == n {
                evaluated += 1;
                let ok = big[n].iter().zip(&small[n]).all(|(g, s)| g >= s);
                if ok {
                    feasible += 1;
                    if let Some(v) = (self.value)(&obj[n]) {
                        let better = match best {
                            None => true,
                            Some(b) => (self.minimize && v < b) || (!self.minimize && v > b),
                        };
                        if better {
                            best = Some(v);
                            points.clear();
                            attaining = 0;
                        }
                        if best == Some(v) {
                            attaining += 1;
                            if points.len() < max_reported {
                                points.push(idx.clone());
                            }
                        }
                    }
                }
                // backtrack
                loop {
                    if depth == 0 {
                        return (best, points, attaining, feasible, evaluated);
                    }
                    depth -= 1;
                    idx[depth] += 1;
                    if idx[depth] < per {
                        break;
                    }
                    idx[depth] = 0;
                }
            }
            let v = self.values[idx[depth]];
            let (lo, hi) = big.split_at_mut(depth + 1);
            let (slo, shi) = small.split_at_mut(depth + 1);
            let (olo, ohi) = obj.split_at_mut(depth + 1);
            for (r, (g, s)) in self.rows.iter().enumerate() {
                hi[0][r] = lo[depth][r].max(mul(g.coeffs[depth], v));
                shi[0][r] = slo[depth][r].max(mul(s.coeffs[depth], v));
            }
            for (q, f) in self.objective.iter().enumerate() {
                ohi[0][q] = olo[depth][q].max(mul(f.coeffs[depth], v));
            }
            depth += 1;
        }
    }
}

/// Common denominator of every finite value involved.
fn lattice_scale<'a>(values: impl Iterator<Item = &'a ExtScalar>, g: &GridSpec) -> Result<i64> {
    let mut l: i64 = 1;
    let dens = values
        .filter_map(|v| v.finite())
        .chain([g.bound, g.step])
        .map(|q| *q.denom());
    for d in dens {
        l = l
            .checked_mul(d / l.gcd(&d))
            .ok_or(Error::InvalidGrid("denominators too large for the integer lattice"))?;
    }
    Ok(l)
}

fn to_int(v: ExtScalar, scale: i64) -> Result<i64> {
    match v {
        ExtScalar::Bottom => Ok(NEG),
        ExtScalar::Top => Ok(POS),
        ExtScalar::Finite(q) => (q * scale)
            .is_integer()
            .then(|| (q * scale).to_integer())
            .filter(|&i| i != NEG && i != POS)
            .ok_or(Error::InvalidGrid("value not on the integer lattice")),
    }
}

fn from_int(v: i64, scale: i64) -> ExtScalar {
    match v {
        NEG => ExtScalar::Bottom,
        POS => ExtScalar::Top,
        _ => ExtScalar::Finite(Rational64::new(v, scale)),
    }
}

fn int_form(coeffs: &[ExtScalar], constant: ExtScalar, scale: i64) -> Result<IntForm> {
    Ok(IntForm {
        coeffs: coeffs.iter().map(|c| to_int(*c, scale)).collect::<Result<_>>()?,
        constant: to_int(constant, scale)?,
    })
}

fn lattice_values(g: &GridSpec, scale: i64) -> Result<Vec<i64>> {
    g.candidates()?.into_iter().map(|v| to_int(v, scale)).collect()
}

fn constraint_rows(p: &Problem, scale: i64) -> Result<Vec<(IntForm, IntForm)>> {
    (0..p.m())
        .map(|i| {
            let lhs = int_form(p.a().row(i), p.b()[i], scale)?;
            let rhs = int_form(p.c_mat().row(i), p.d()[i], scale)?;
            Ok(match p.sense() {
                Sense::Min => (lhs, rhs),
                Sense::Max => (rhs, lhs),
            })
        })
        .collect()
}

fn finish(raw: (Option<i64>, Vec<Vec<usize>>, u64, u64, u64), candidates: &[ExtScalar], scale: i64, empty: ExtScalar) -> GridResult {
    let (best, points, attaining, feasible, evaluated) = raw;
    GridResult {
        best_value: best.map_or(empty, |b| from_int(b, scale)),
        best_points: points
            .into_iter()
            .map(|idx| idx.into_iter().map(|k| candidates[k]).collect())
            .collect(),
        attaining,
        feasible,
        evaluated,
    }
}

/// Best objective value over the feasible grid points, in the problem's
/// sense, at `h = 0`.
pub fn grid_optimize(p: &Problem, g: &GridSpec) -> Result<GridResult> {
    g.total_points(p.n())?;
    let cost_h = p.cost_h();
    let all = p
        .a()
        .as_slice()
        .iter()
        .chain(p.c_mat().as_slice())
        .chain(p.b())
        .chain(p.d())
        .chain(p.cost())
        .chain([&cost_h]);
    let scale = lattice_scale(all, g)?;
    let candidates = g.candidates()?;
    let value = |parts: &[i64]| Some(parts[0]);
    let search = Search {
        n: p.n(),
        rows: constraint_rows(p, scale)?,
        objective: vec![int_form(p.cost(), p.cost_h(), scale)?],
        value: &value,
        minimize: p.sense() == Sense::Min,
        values: lattice_values(g, scale)?,
    };
    let empty = match p.sense() {
        Sense::Min => ExtScalar::Top,
        Sense::Max => ExtScalar::Bottom,
    };
    Ok(finish(search.run(g.max_reported), &candidates, scale, empty))
}

/// Least `(p ⊗ x) - (r ⊗ x)` over feasible grid points where `r ⊗ x` is
/// finite.
pub fn fractional_grid_optimize(fp: &FractionalProblem, g: &GridSpec) -> Result<GridResult> {
    g.total_points(fp.n())?;
    let all = fp
        .a()
        .as_slice()
        .iter()
        .chain(fp.c_mat().as_slice())
        .chain(fp.b())
        .chain(fp.d())
        .chain(fp.p())
        .chain(fp.r());
    let scale = lattice_scale(all, g)?;
    let candidates = g.candidates()?;
    let value = |parts: &[i64]| {
        let (num, den) = (parts[0], parts[1]);
        if den == NEG || den == POS {
            return None;
        }
        Some(match num {
            NEG | POS => num,
            _ => num.checked_sub(den).expect("lattice overflow"),
        })
    };
    let search = Search {
        n: fp.n(),
        rows: constraint_rows(&fp.constraints(), scale)?,
        objective: vec![
            int_form(fp.p(), ExtScalar::Bottom, scale)?,
            int_form(fp.r(), ExtScalar::Bottom, scale)?,
        ],
        value: &value,
        minimize: true,
        values: lattice_values(g, scale)?,
    };
    Ok(finish(search.run(g.max_reported), &candidates, scale, ExtScalar::Top))
}

/// One observation of a differential run.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Finding {
    /// The solver's point violates a constraint.
    InfeasiblePoint(Vec<ExtScalar>),
    /// The reported optimum differs from the objective at the reported point.
    ObjectiveMismatch { reported: ExtScalar, evaluated: ExtScalar },
    /// Solver and oracle optima differ.
    ValueMismatch { solver: ExtScalar, oracle: ExtScalar },
    /// The solver's point is outside the box; only "the oracle is not
    /// better" could be checked.
    OutsideBox,
    /// Status without a value to compare.
    Uncomparable(Status),
    SolverError(Error),
    OracleError(Error),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Verdict {
    Agree,
    Disagree,
    NotComparable,
}

#[derive(Clone, Debug)]
pub struct DiffReport {
    pub verdict: Verdict,
    pub findings: Vec<Finding>,
    pub solution: Option<Solution>,
    pub oracle: Option<GridResult>,
    /// Recovered `(x, value)` for fractional problems.
    pub recovered: Option<(Vec<ExtScalar>, ExtScalar)>,
}

impl DiffReport {
    fn not_comparable(finding: Finding, solution: Option<Solution>, oracle: Option<GridResult>) -> Self {
        DiffReport {
            verdict: Verdict::NotComparable,
            findings: vec![finding],
            solution,
            oracle,
            recovered: None,
        }
    }
}

/// `a` strictly better than `b` in the given sense.
fn better(sense: Sense, a: ExtScalar, b: ExtScalar) -> bool {
    match sense {
        Sense::Min => a < b,
        Sense::Max => a > b,
    }
}

/// Compares a solver point and value against the oracle optimum.
fn compare_point(
    sense: Sense,
    g: &GridSpec,
    point: &[ExtScalar],
    feasible: bool,
    reported: ExtScalar,
    evaluated: Option<ExtScalar>,
    oracle: &GridResult,
) -> (Verdict, Vec<Finding>) {
    let mut findings = Vec::new();
    if !feasible {
        findings.push(Finding::InfeasiblePoint(point.to_vec()));
    }
    if evaluated != Some(reported) {
        findings.push(Finding::ObjectiveMismatch {
            reported,
            evaluated: evaluated.unwrap_or(ExtScalar::Bottom),
        });
    }
    let mismatch = Finding::ValueMismatch {
        solver: reported,
        oracle: oracle.best_value,
    };
    if g.contains(point) {
        if oracle.best_value != reported {
            findings.push(mismatch);
        }
    } else {
        findings.push(Finding::OutsideBox);
        if better(sense, oracle.best_value, reported) {
            findings.push(mismatch);
        }
    }
    let bad = findings.iter().any(|f| !matches!(f, Finding::OutsideBox));
    (if bad { Verdict::Disagree } else { Verdict::Agree }, findings)
}

/// Solves at `h = 0` and checks the result against [`grid_optimize`].
pub fn differential_check(p: &Problem, g: &GridSpec) -> DiffReport {
    let sol = match solve_with(p, &SolveOptions::default()) {
        Ok(s) => s,
        Err(e) => return DiffReport::not_comparable(Finding::SolverError(e), None, None),
    };
    let oracle = match grid_optimize(p, g) {
        Ok(o) => o,
        Err(e) => return DiffReport::not_comparable(Finding::OracleError(e), Some(sol), None),
    };
    let (verdict, findings) = match sol.status {
        Status::Finite => {
            let asg = sol.assignment.as_ref().expect("finite solutions carry values");
            let x = &asg.instantiated;
            compare_point(
                p.sense(),
                g,
                x,
                p.satisfies(x, asg.h),
                asg.z_value,
                Some(p.objective(x, asg.h)),
                &oracle,
            )
        }
        Status::PlusInfinity | Status::Bottom => {
            let value = if sol.status == Status::PlusInfinity {
                ExtScalar::Top
            } else {
                ExtScalar::Bottom
            };
            if oracle.best_value == value {
                (Verdict::Agree, Vec::new())
            } else {
                (
                    Verdict::Disagree,
                    vec![Finding::ValueMismatch {
                        solver: value,
                        oracle: oracle.best_value,
                    }],
                )
            }
        }
        status => (Verdict::NotComparable, vec![Finding::Uncomparable(status)]),
    };
    DiffReport {
        verdict,
        findings,
        solution: Some(sol),
        oracle: Some(oracle),
        recovered: None,
    }
}

/// Solves the transformed problem, recovers `x`, and checks it against
/// [`fractional_grid_optimize`].
pub fn fractional_differential_check(fp: &FractionalProblem, g: &GridSpec) -> DiffReport {
    let lp = match charnes_cooper(fp) {
        Ok(lp) => lp,
        Err(e) => return DiffReport::not_comparable(Finding::SolverError(e), None, None),
    };
    let sol = match solve_with(&lp, &SolveOptions::default()) {
        Ok(s) => s,
        Err(e) => return DiffReport::not_comparable(Finding::SolverError(e), None, None),
    };
    let oracle = match fractional_grid_optimize(fp, g) {
        Ok(o) => o,
        Err(e) => return DiffReport::not_comparable(Finding::OracleError(e), Some(sol), None),
    };
    if sol.status == Status::PlusInfinity {
        let (verdict, findings) = if oracle.best_value == ExtScalar::Top {
            (Verdict::Agree, Vec::new())
        } else {
            (
                Verdict::Disagree,
                vec![Finding::ValueMismatch {
                    solver: ExtScalar::Top,
                    oracle: oracle.best_value,
                }],
            )
        };
        return DiffReport {
            verdict,
            findings,
            solution: Some(sol),
            oracle: Some(oracle),
            recovered: None,
        };
    }
    let (x, value) = match recover(&sol) {
        Ok(r) => r,
        Err(e) => {
            let finding = match sol.status {
                Status::Finite => Finding::SolverError(e),
                s => Finding::Uncomparable(s),
            };
            return DiffReport::not_comparable(finding, Some(sol), Some(oracle));
        }
    };
    let cons = fp.constraints();
    let (verdict, findings) = compare_point(
        Sense::Min,
        g,
        &x,
        cons.satisfies(&x, ExtScalar::one()),
        value,
        fp.objective(&x),
        &oracle,
    );
    DiffReport {
        verdict,
        findings,
        solution: Some(sol),
        oracle: Some(oracle),
        recovered: Some((x, value)),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::TMatrix;

    fn s(v: i64) -> ExtScalar {
        ExtScalar::int(v)
    }

    fn grid(bound: i64) -> GridSpec {
        GridSpec::new(Rational64::from_integer(bound), Rational64::from_integer(1)).unwrap()
    }

    #[test]
    fn candidates_and_membership() {
        let g = GridSpec::new(Rational64::new(1, 1), Rational64::new(1, 2)).unwrap();
        assert_eq!(
            g.candidates().unwrap(),
            vec![
                ExtScalar::Bottom,
                s(-1),
                ExtScalar::ratio(-1, 2),
                s(0),
                ExtScalar::ratio(1, 2),
                s(1),
                ExtScalar::Top
            ]
        );
        assert!(g.contains(&[ExtScalar::ratio(1, 2), ExtScalar::Bottom]));
        assert!(!g.contains(&[ExtScalar::ratio(1, 3)]));
        assert!(!g.contains(&[s(2)]));
        assert!(GridSpec::new(Rational64::from_integer(0), Rational64::from_integer(1)).is_err());
    }

    #[test]
    fn caps_are_enforced() {
        let mut g = grid(10);
        g.max_points = 100;
        let p = Problem::new(Sense::Min, TMatrix::null(0, 0), vec![], TMatrix::null(0, 0), vec![], vec![s(0); 3], ExtScalar::Bottom)
            .unwrap();
        assert!(matches!(grid_optimize(&p, &g), Err(Error::GridTooLarge { .. })));
        let mut g = grid(10);
        g.max_per_coord = 5;
        assert!(matches!(g.candidates(), Err(Error::GridTooLarge { .. })));
    }

    #[test]
    fn infeasible_everywhere() {
        // -inf ≥ 0 in a single row
        let p = Problem::new(
            Sense::Min,
            TMatrix::from_rows(vec![vec![ExtScalar::Bottom]]).unwrap(),
            vec![ExtScalar::Bottom],
            TMatrix::from_rows(vec![vec![ExtScalar::Bottom]]).unwrap(),
            vec![s(0)],
            vec![s(0)],
            ExtScalar::Bottom,
        )
        .unwrap();
        let r = grid_optimize(&p, &grid(3)).unwrap();
        assert_eq!(r.best_value, ExtScalar::Top);
        assert!(r.best_points.is_empty());
    }

    #[test]
    fn rational_data_use_a_common_denominator() {
        // min x s.t. x ≥ 1/2 (as 0 x ≥ 1/2)
        let p = Problem::new(
            Sense::Min,
            TMatrix::from_rows(vec![vec![s(0)]]).unwrap(),
            vec![ExtScalar::Bottom],
            TMatrix::from_rows(vec![vec![ExtScalar::Bottom]]).unwrap(),
            vec![ExtScalar::ratio(1, 2)],
            vec![s(0)],
            ExtScalar::Bottom,
        )
        .unwrap();
        let g = GridSpec::new(Rational64::from_integer(2), Rational64::new(1, 4)).unwrap();
        let r = grid_optimize(&p, &g).unwrap();
        assert_eq!(r.best_value, ExtScalar::ratio(1, 2));
        assert_eq!(r.best_points, vec![vec![ExtScalar::ratio(1, 2)]]);
    }
}
