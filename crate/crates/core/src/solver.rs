//! The substitution engine.
//!
//! A problem is homogenized into a pair of `(m+1) × (n+2)` matrices
//! `(A⁺, A⁻)` over the columns `z, x_1..x_n, h`: row 0 encodes the cost
//! (`z ≥ cost` for min, `z ≤ cost` for max) and rows `1..=m` encode
//! `A⁺_i ⊗ w ≥ A⁻_i ⊗ w` (min) or `A⁺_i ⊗ w ≤ A⁻_i ⊗ w` (max). Each step
//! saturates one single-variable bound `x_j = f(x, h)`, rewrites every row
//! and the cost through it, and drops the rows that became trivially true.
//! When no variable is left to substitute (or the remaining ones can all be
//! set to `-∞`) the stored equalities are solved backwards, giving every
//! variable as `β ⊗ h`.

use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::error::{Error, Result};
use crate::form::{valid_bound, Equality, FormClass, LinearForm, VarId};
use crate::interval::{min_of, ParamInterval, Sense};
use crate::matrix::{zero_satisfied_rows, TMatrix};
use crate::scalar::ExtScalar;

/// `min` (or `max`) of `cost ⊗ x ⊕ cost_h` over
/// `A ⊗ x ⊕ b ≥ C ⊗ x ⊕ d` (`≤` for max).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Problem {
    sense: Sense,
    a: TMatrix,
    b: Vec<ExtScalar>,
    c_mat: TMatrix,
    d: Vec<ExtScalar>,
    cost: Vec<ExtScalar>,
    cost_h: ExtScalar,
}

impl Problem {
    /// `m` is taken from `b`, `n` from `cost`. With `m = 0` the constraint
    /// matrices may be given as `0 × 0`.
    pub fn new(
        sense: Sense,
        a: TMatrix,
        b: Vec<ExtScalar>,
        c_mat: TMatrix,
        d: Vec<ExtScalar>,
        cost: Vec<ExtScalar>,
        cost_h: ExtScalar,
    ) -> Result<Self> {
        let (m, n) = (b.len(), cost.len());
        let check = |context, expected: usize, found: usize| {
            if expected == found {
                Ok(())
            } else {
                Err(Error::DimensionMismatch {
                    context,
                    expected,
                    found,
                })
            }
        };
        check("rows of A", m, a.rows())?;
        check("rows of C", m, c_mat.rows())?;
        check("length of d", m, d.len())?;
        let (a, c_mat) = if m == 0 {
            (TMatrix::null(0, n), TMatrix::null(0, n))
        } else {
            check("columns of A", n, a.cols())?;
            check("columns of C", n, c_mat.cols())?;
            (a, c_mat)
        };
        Ok(Problem {
            sense,
            a,
            b,
            c_mat,
            d,
            cost,
            cost_h,
        })
    }

    pub fn sense(&self) -> Sense {
        self.sense
    }
    pub fn a(&self) -> &TMatrix {
        &self.a
    }
    pub fn b(&self) -> &[ExtScalar] {
        &self.b
    }
    pub fn c_mat(&self) -> &TMatrix {
        &self.c_mat
    }
    pub fn d(&self) -> &[ExtScalar] {
        &self.d
    }
    pub fn cost(&self) -> &[ExtScalar] {
        &self.cost
    }
    pub fn cost_h(&self) -> ExtScalar {
        self.cost_h
    }
    pub fn n(&self) -> usize {
        self.cost.len()
    }
    pub fn m(&self) -> usize {
        self.b.len()
    }

    /// Objective `cost ⊗ x ⊕ cost_h ⊗ h`.
    pub fn objective(&self, x: &[ExtScalar], h: ExtScalar) -> ExtScalar {
        LinearForm::new(self.cost.clone(), self.cost_h).evaluate_at(x, h)
    }

    /// Whether `x` satisfies every constraint row at the given `h`.
    pub fn satisfies(&self, x: &[ExtScalar], h: ExtScalar) -> bool {
        (0..self.m()).all(|i| {
            let lhs = LinearForm::new(self.a.row(i).to_vec(), self.b[i]).evaluate_at(x, h);
            let rhs = LinearForm::new(self.c_mat.row(i).to_vec(), self.d[i]).evaluate_at(x, h);
            match self.sense {
                Sense::Min => lhs >= rhs,
                Sense::Max => lhs <= rhs,
            }
        })
    }
}

/// The step-`k` state of a run.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SolverState {
    k: usize,
    a_plus: TMatrix,
    a_minus: TMatrix,
    remaining: Vec<bool>,
    cost: LinearForm,
    equalities: Vec<Equality>,
    sense: Sense,
    switches: usize,
}

impl SolverState {
    pub fn step(&self) -> usize {
        self.k
    }
    pub fn a_plus(&self) -> &TMatrix {
        &self.a_plus
    }
    pub fn a_minus(&self) -> &TMatrix {
        &self.a_minus
    }
    pub fn cost(&self) -> &LinearForm {
        &self.cost
    }
    pub fn equalities(&self) -> &[Equality] {
        &self.equalities
    }
    pub fn sense(&self) -> Sense {
        self.sense
    }
    pub fn switches(&self) -> usize {
        self.switches
    }
    pub fn n(&self) -> usize {
        self.remaining.len()
    }
    pub fn m(&self) -> usize {
        self.a_plus.rows() - 1
    }
    pub fn remaining(&self) -> Vec<VarId> {
        (0..self.n()).filter(|&j| self.remaining[j]).collect()
    }
    pub fn is_remaining(&self, j: VarId) -> bool {
        self.remaining.get(j).copied().unwrap_or(false)
    }

    fn h_col(&self) -> usize {
        self.n() + 1
    }

    /// Row `i` of `A⁻` (or `A⁺`) read as a linear form over `x` and `h`.
    fn row_form(&self, matrix: &TMatrix, i: usize) -> LinearForm {
        let row = matrix.row(i);
        LinearForm::new(row[1..=self.n()].to_vec(), row[self.h_col()])
    }

    /// `a⁺_ij ≠ -∞` and `a⁺_ij > a⁻_ij`: a bound in the optimizing direction
    /// (lower bound for min, upper bound for max).
    fn primary_at(&self, i: usize, j: VarId) -> bool {
        let p = self.a_plus[(i, j + 1)];
        !p.is_bottom() && !p.is_top() && p > self.a_minus[(i, j + 1)]
    }

    /// `a⁻_ij ≠ -∞` and `a⁺_ij < a⁻_ij`: a bound in the opposite direction.
    fn opposite_at(&self, i: usize, j: VarId) -> bool {
        let q = self.a_minus[(i, j + 1)];
        !q.is_bottom() && !q.is_top() && self.a_plus[(i, j + 1)] < q
    }

    /// Single-variable bound obtained from row `i` for `x_j`, in the
    /// optimizing direction.
    pub fn bound(&self, i: usize, j: VarId) -> Option<LinearForm> {
        if i == 0 || i > self.m() || !self.is_remaining(j) {
            return None;
        }
        valid_bound(self.a_plus[(i, j + 1)], &self.row_form(&self.a_minus, i), j)
    }

    fn h_column_ok(&self) -> bool {
        let h = self.h_col();
        (1..=self.m()).all(|i| {
            let (p, q) = (self.a_plus[(i, h)], self.a_minus[(i, h)]);
            match self.sense {
                Sense::Min => p >= q,
                Sense::Max => p <= q,
            }
        })
    }
}

/// Which remaining variables admit bounds in each direction.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Classification {
    /// Variables with at least one valid lower bound.
    pub min_bounded: Vec<VarId>,
    /// Variables with at least one valid upper bound.
    pub max_bounded: Vec<VarId>,
    /// Variables bounded in both directions.
    pub dominating: Vec<VarId>,
    /// Remaining variables with a cost coefficient above `-∞`.
    pub x_plus: Vec<VarId>,
    /// Remaining variables absent from the cost.
    pub x_bottom: Vec<VarId>,
}

impl Classification {
    fn primary(&self, sense: Sense) -> &[VarId] {
        match sense {
            Sense::Min => &self.min_bounded,
            Sense::Max => &self.max_bounded,
        }
    }

    fn opposite(&self, sense: Sense) -> &[VarId] {
        self.primary(sense.opposite())
    }
}

/// A candidate substitution `x_var = bound` taken from constraint `row`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Candidate {
    pub row: usize,
    pub var: VarId,
    pub bound: LinearForm,
    pub cost_after: LinearForm,
}

/// Outcome of pivot selection.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PivotChoice {
    pub row: usize,
    pub var: VarId,
    /// `(class of the new cost, class of the bound)`.
    pub tier: (FormClass, FormClass),
    pub tau: ParamInterval,
    /// Present only when several candidates attain `tau`.
    pub tau_prime: Option<ParamInterval>,
}

/// The sparse transition matrix `T`: identity except for row `pivot`,
/// which carries the substituted bound.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Transition {
    pivot: usize,
    row: Vec<ExtScalar>,
}

impl Transition {
    fn new(n: usize, var: VarId, bound: &LinearForm) -> Self {
        let mut row = vec![ExtScalar::Bottom; n + 2];
        row[1..=n].copy_from_slice(bound.x_coeffs());
        row[n + 1] = bound.h_coeff();
        Transition {
            pivot: var + 1,
            row,
        }
    }

    /// Column (and row) index of the substituted variable.
    pub fn pivot_column(&self) -> usize {
        self.pivot
    }

    pub fn replacement_row(&self) -> &[ExtScalar] {
        &self.row
    }

    pub fn to_matrix(&self) -> TMatrix {
        let dim = self.row.len();
        let mut t = TMatrix::identity(dim);
        t.row_mut(self.pivot).copy_from_slice(&self.row);
        t
    }
}

/// One substitution step of a run.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TraceEvent {
    pub step: usize,
    pub sense: Sense,
    pub pivot: (usize, VarId),
    pub tier: (FormClass, FormClass),
    pub tau: ParamInterval,
    pub tau_prime: Option<ParamInterval>,
    pub bound: LinearForm,
    pub transition: Transition,
    pub case_label: &'static str,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Status {
    Finite,
    PlusInfinity,
    Bottom,
    NoOptimum,
    PaperGap,
}

impl Status {
    pub fn as_str(self) -> &'static str {
        match self {
            Status::Finite => "FINITE",
            Status::PlusInfinity => "PLUS_INFINITY",
            Status::Bottom => "BOTTOM",
            Status::NoOptimum => "NO_OPTIMUM",
            Status::PaperGap => "PAPER_GAP",
        }
    }
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Why the run stopped without an answer.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum GapReason {
    /// The cost still depends on these variables, but only bounds in the
    /// non-optimizing direction remain.
    OppositeBoundsOnly { x_plus: Vec<VarId> },
    SwitchLimit { limit: usize },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Diagnostic {
    /// Constraint `row` dominates a scaled copy of the other side of
    /// constraint `by` (both 1-based), so the pair could be merged.
    DominatedRow { row: usize, by: usize },
    /// Remaining variables without any valid bound when the run stopped.
    UnboundedVariables(Vec<VarId>),
    Gap(GapReason),
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let vars = |f: &mut fmt::Formatter<'_>, vs: &[VarId]| -> fmt::Result {
            for (k, v) in vs.iter().enumerate() {
                if k > 0 {
                    f.write_str(", ")?;
                }
                write!(f, "x{}", v + 1)?;
            }
            Ok(())
        };
        match self {
            Diagnostic::DominatedRow { row, by } => {
                write!(f, "row {row} dominates a scaling of the right side of row {by}")
            }
            Diagnostic::UnboundedVariables(vs) => {
                f.write_str("no valid bound for ")?;
                vars(f, vs)
            }
            Diagnostic::Gap(GapReason::OppositeBoundsOnly { x_plus }) => {
                f.write_str("cost still depends on ")?;
                vars(f, x_plus)?;
                f.write_str(" but only bounds in the other direction exist")
            }
            Diagnostic::Gap(GapReason::SwitchLimit { limit }) => {
                write!(f, "more than {limit} min/max switches")
            }
        }
    }
}

/// Values of a run that produced an optimum (finite or infinite).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Assignment {
    /// `z = z_beta ⊗ h`.
    pub z_beta: ExtScalar,
    /// `x_j = var_betas[j] ⊗ h`.
    pub var_betas: Vec<ExtScalar>,
    pub h: ExtScalar,
    pub instantiated: Vec<ExtScalar>,
    pub z_value: ExtScalar,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Solution {
    pub status: Status,
    /// Sense of the input problem (phases may have switched in between).
    pub sense: Sense,
    pub assignment: Option<Assignment>,
    pub trace: Vec<TraceEvent>,
    /// Label of the case that ended the run, e.g. `"2.1"`.
    pub final_case: &'static str,
    pub switches: usize,
    pub diagnostics: Vec<Diagnostic>,
}

impl Solution {
    pub fn z_beta(&self) -> Option<ExtScalar> {
        self.assignment.as_ref().map(|a| a.z_beta)
    }

    pub fn var_betas(&self) -> Option<&[ExtScalar]> {
        self.assignment.as_ref().map(|a| a.var_betas.as_slice())
    }

    pub fn instantiated(&self) -> Option<&[ExtScalar]> {
        self.assignment.as_ref().map(|a| a.instantiated.as_slice())
    }

    pub fn z_value(&self) -> Option<ExtScalar> {
        self.assignment.as_ref().map(|a| a.z_value)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SolveOptions {
    /// Value given to `h` on success; must be finite.
    pub h: ExtScalar,
    /// Maximum number of min/max switches; `None` means `2n`.
    pub switch_limit: Option<usize>,
}

impl Default for SolveOptions {
    fn default() -> Self {
        SolveOptions {
            h: ExtScalar::one(),
            switch_limit: None,
        }
    }
}

pub fn homogenize(p: &Problem) -> Result<SolverState> {
    let (m, n) = (p.m(), p.n());
    let mut a_plus = TMatrix::null(m + 1, n + 2);
    let mut a_minus = TMatrix::null(m + 1, n + 2);
    a_plus[(0, 0)] = ExtScalar::one();
    a_minus.row_mut(0)[1..=n].copy_from_slice(&p.cost);
    a_minus[(0, n + 1)] = p.cost_h;
    for i in 0..m {
        a_plus.row_mut(i + 1)[1..=n].copy_from_slice(p.a.row(i));
        a_plus[(i + 1, n + 1)] = p.b[i];
        a_minus.row_mut(i + 1)[1..=n].copy_from_slice(p.c_mat.row(i));
        a_minus[(i + 1, n + 1)] = p.d[i];
    }
    drop_dominated_terms(&mut a_plus, &mut a_minus, p.sense);
    Ok(SolverState {
        k: 0,
        a_plus,
        a_minus,
        remaining: vec![true; n],
        cost: LinearForm::new(p.cost.clone(), p.cost_h),
        equalities: Vec::new(),
        sense: p.sense,
        switches: 0,
    })
}

/// Removes a variable's term from the side where it can never be the
/// largest: `a ⊗ x_j ⊕ u ≥ c ⊗ x_j ⊕ v` with `a ≥ c` is the same constraint
/// as `a ⊗ x_j ⊕ u ≥ v` (dually for max). Only the `x` columns are touched.
fn drop_dominated_terms(a_plus: &mut TMatrix, a_minus: &mut TMatrix, sense: Sense) {
    let (rows, cols) = a_plus.shape();
    for i in 1..rows {
        for j in 1..cols - 1 {
            let (p, q) = (a_plus[(i, j)], a_minus[(i, j)]);
            match sense {
                Sense::Min if !q.is_bottom() && p >= q => a_minus[(i, j)] = ExtScalar::Bottom,
                Sense::Max if !p.is_bottom() && q >= p => a_plus[(i, j)] = ExtScalar::Bottom,
                _ => {}
            }
        }
    }
}

pub fn classify_variables(s: &SolverState) -> Classification {
    let mut cl = Classification::default();
    for j in s.remaining() {
        let mut primary = false;
        let mut opposite = false;
        for i in 1..=s.m() {
            primary |= s.primary_at(i, j);
            opposite |= s.opposite_at(i, j);
            if primary && opposite {
                break;
            }
        }
        let (lower, upper) = match s.sense {
            Sense::Min => (primary, opposite),
            Sense::Max => (opposite, primary),
        };
        if lower {
            cl.min_bounded.push(j);
        }
        if upper {
            cl.max_bounded.push(j);
        }
        if lower && upper {
            cl.dominating.push(j);
        }
        if s.cost.coeff(j).is_bottom() {
            cl.x_bottom.push(j);
        } else {
            cl.x_plus.push(j);
        }
    }
    cl
}

/// Variables eligible for substitution: the dominating ones if any,
/// otherwise every variable bounded in the optimizing direction.
fn eligible(s: &SolverState, cl: &Classification) -> Vec<bool> {
    let mut mask = vec![false; s.n()];
    let pool = if cl.dominating.is_empty() {
        cl.primary(s.sense)
    } else {
        &cl.dominating
    };
    for &j in pool {
        mask[j] = true;
    }
    mask
}

/// All valid bounds in the optimizing direction over the eligible
/// variables, with the cost each substitution would produce. Ordered by
/// row, then variable.
pub fn candidate_inequalities(s: &SolverState, cl: &Classification) -> Result<Vec<Candidate>> {
    let mask = eligible(s, cl);
    let mut out = Vec::new();
    for i in 1..=s.m() {
        for (j, &eligible) in mask.iter().enumerate() {
            if !eligible || !s.primary_at(i, j) {
                continue;
            }
            if let Some(bound) = s.bound(i, j) {
                let cost_after = s.cost.substitute(j, &bound)?;
                out.push(Candidate {
                    row: i,
                    var: j,
                    bound,
                    cost_after,
                });
            }
        }
    }
    if out.is_empty() {
        return Err(Error::NoCandidates);
    }
    Ok(out)
}

/// Ranking data of one candidate.
#[derive(Clone, Copy, Debug)]
struct Ranked {
    row: usize,
    var: VarId,
    cost_class: FormClass,
    cost_iv: ParamInterval,
    bound_class: FormClass,
    bound_iv: ParamInterval,
}

/// Priority `(B,B) ≻ (B,U) ≻ (U,B) ≻ (U,U)` over the tier, then the
/// inclusion-least cost interval, then the inclusion-least bound interval,
/// then the least `(row, var)`.
fn choose(ranked: &[Ranked]) -> Result<PivotChoice> {
    let tier = ranked
        .iter()
        .map(|r| (r.cost_class, r.bound_class))
        .min()
        .ok_or(Error::Empty)?;
    let in_tier: Vec<_> = ranked
        .iter()
        .filter(|r| (r.cost_class, r.bound_class) == tier)
        .map(|r| ((r.row, r.var), *r))
        .collect();
    let by_cost: Vec<_> = in_tier.iter().map(|(k, r)| (*k, r.cost_iv)).collect();
    let (tau, argmin) = min_of(&by_cost)?;
    if let [(row, var)] = argmin[..] {
        return Ok(PivotChoice {
            row,
            var,
            tier,
            tau,
            tau_prime: None,
        });
    }
    let by_bound: Vec<_> = in_tier
        .iter()
        .filter(|(k, _)| argmin.contains(k))
        .map(|(k, r)| (*k, r.bound_iv))
        .collect();
    let (tau_prime, argmin2) = min_of(&by_bound)?;
    let (row, var) = argmin2.into_iter().min().ok_or(Error::Empty)?;
    Ok(PivotChoice {
        row,
        var,
        tier,
        tau,
        tau_prime: Some(tau_prime),
    })
}

pub fn select_pivot(cands: &[Candidate], sense: Sense) -> Result<PivotChoice> {
    let ranked: Vec<Ranked> = cands
        .iter()
        .map(|c| {
            let (cost_class, cost_iv) = c.cost_after.ranking(sense);
            let (bound_class, bound_iv) = c.bound.ranking(sense);
            Ranked {
                row: c.row,
                var: c.var,
                cost_class,
                cost_iv,
                bound_class,
                bound_iv,
            }
        })
        .collect();
    choose(&ranked)
}

/// Largest and second largest entry (with the index of the largest).
#[derive(Clone, Copy)]
struct Top2 {
    best: ExtScalar,
    at: usize,
    second: ExtScalar,
}

impl Top2 {
    fn of(values: &[ExtScalar]) -> Self {
        let mut t = Top2 {
            best: ExtScalar::Bottom,
            at: usize::MAX,
            second: ExtScalar::Bottom,
        };
        for (k, &v) in values.iter().enumerate() {
            if v > t.best {
                t.second = t.best;
                t.best = v;
                t.at = k;
            } else if v > t.second {
                t.second = v;
            }
        }
        t
    }

    fn excluding(&self, k: usize) -> ExtScalar {
        if self.at == k {
            self.second
        } else {
            self.best
        }
    }
}

fn rank_parts(sense: Sense, x_max: ExtScalar, h: ExtScalar) -> (FormClass, ParamInterval) {
    use crate::interval::IntervalKind;
    let bounded = match sense {
        Sense::Min => !h.is_bottom(),
        Sense::Max => x_max.is_bottom(),
    };
    if bounded {
        (
            FormClass::HBounded,
            ParamInterval::new_unchecked(sense, IntervalKind::Mu, h),
        )
    } else {
        (
            FormClass::HUnbounded,
            ParamInterval::new_unchecked(sense, IntervalKind::Lambda, x_max),
        )
    }
}

/// Same ranking as [`candidate_inequalities`] + [`select_pivot`] but in
/// `O(1)` per candidate: a bound or a substituted cost is ranked only by
/// its `h` coefficient and its largest `x` coefficient, both available
/// from per-row maxima.
fn fast_choice(s: &SolverState, cl: &Classification) -> Result<PivotChoice> {
    let n = s.n();
    let mask = eligible(s, cl);
    let cost_top = Top2::of(s.cost.x_coeffs());
    let cost_h = s.cost.h_coeff();
    let mut ranked = Vec::new();
    for i in 1..=s.m() {
        let minus = s.a_minus.row(i);
        let row_top = Top2::of(&minus[1..=n]);
        let r = minus[n + 1];
        for (j, &eligible) in mask.iter().enumerate() {
            if !eligible || !s.primary_at(i, j) {
                continue;
            }
            let inv = s.a_plus[(i, j + 1)].inv();
            let bound_x = inv.otimes(row_top.excluding(j));
            let bound_h = inv.otimes(r);
            let cj = s.cost.coeff(j);
            let after_x = cost_top.excluding(j).oplus(cj.otimes(bound_x));
            let after_h = cost_h.oplus(cj.otimes(bound_h));
            let (cost_class, cost_iv) = rank_parts(s.sense, after_x, after_h);
            let (bound_class, bound_iv) = rank_parts(s.sense, bound_x, bound_h);
            ranked.push(Ranked {
                row: i,
                var: j,
                cost_class,
                cost_iv,
                bound_class,
                bound_iv,
            });
        }
    }
    if ranked.is_empty() {
        return Err(Error::NoCandidates);
    }
    choose(&ranked)
}

/// Pivot chosen for the current state, through the same path [`solve`]
/// uses.
pub fn next_pivot(s: &SolverState) -> Result<PivotChoice> {
    fast_choice(s, &classify_variables(s))
}

/// Whether the run can stop with `z = c_h ⊗ h` and every remaining
/// variable at `-∞`.
pub fn terminal_reached(s: &SolverState) -> bool {
    match s.sense {
        Sense::Min => s.h_column_ok(),
        Sense::Max => s.h_column_ok() && s.remaining().iter().all(|&j| s.cost.coeff(j).is_bottom()),
    }
}

fn apply_in_place(s: &mut SolverState, var: VarId, bound: &LinearForm, cost_after: &LinearForm) -> Transition {
    let n = s.n();
    let m = s.m();
    let col = var + 1;
    for mat in [&mut s.a_plus, &mut s.a_minus] {
        for i in 1..=m {
            let w = mat[(i, col)];
            if w.is_bottom() {
                continue;
            }
            let cells = mat.row_mut(i);
            for (c, v) in cells[1..=n].iter_mut().zip(bound.x_coeffs()) {
                *c = c.oplus(w.otimes(*v));
            }
            cells[n + 1] = cells[n + 1].oplus(w.otimes(bound.h_coeff()));
            cells[col] = ExtScalar::Bottom;
        }
    }
    zero_satisfied_rows(&mut s.a_plus, &mut s.a_minus, s.sense, 1..m + 1);
    let cost_row = s.a_minus.row_mut(0);
    cost_row[1..=n].copy_from_slice(cost_after.x_coeffs());
    cost_row[n + 1] = cost_after.h_coeff();
    s.cost = cost_after.clone();
    s.equalities.push(
        Equality::new(var, bound.clone()).expect("bound never mentions its own variable"),
    );
    s.remaining[var] = false;
    s.k += 1;
    Transition::new(n, var, bound)
}

/// `(A⁺, A⁻) := setrowtozero(A⁺ ⊗ T, A⁻ ⊗ T)` for the substitution
/// `x_var = bound` taken from constraint `row`, with the new cost in row 0.
pub fn apply_substitution(
    s: &SolverState,
    row: usize,
    var: VarId,
    bound: &LinearForm,
    cost_after: &LinearForm,
) -> Result<(SolverState, Transition)> {
    let valid = row >= 1
        && row <= s.m()
        && s.is_remaining(var)
        && s.primary_at(row, var)
        && bound.coeff(var).is_bottom()
        && bound.nvars() == s.n()
        && cost_after.nvars() == s.n();
    if !valid {
        return Err(Error::InvalidPivot { row, var });
    }
    let mut next = s.clone();
    let t = apply_in_place(&mut next, var, bound, cost_after);
    Ok((next, t))
}

/// Restates the problem in the other sense: the two sides of every
/// constraint trade places, the cost keeps only its `h` term, and the
/// remaining variables carry over.
pub fn switch_sense(s: &SolverState, limit: usize) -> Result<SolverState> {
    if s.switches >= limit {
        return Err(Error::SwitchLimitExceeded { limit });
    }
    let n = s.n();
    let mut a_plus = s.a_minus.clone();
    let mut a_minus = s.a_plus.clone();
    a_plus.row_mut(0).fill(ExtScalar::Bottom);
    a_plus[(0, 0)] = ExtScalar::one();
    a_minus.row_mut(0).fill(ExtScalar::Bottom);
    let cost = LinearForm::h_only(n, s.cost.h_coeff());
    a_minus[(0, n + 1)] = cost.h_coeff();
    Ok(SolverState {
        k: s.k,
        a_plus,
        a_minus,
        remaining: s.remaining.clone(),
        cost,
        equalities: s.equalities.clone(),
        sense: s.sense.opposite(),
        switches: s.switches + 1,
    })
}

/// Resolves the stored equalities from last to first. `defaults` gives the
/// variables fixed without an equality (the ones left at `-∞`). Returns
/// `β_j` with `x_j = β_j ⊗ h`.
pub fn backward_substitute(
    eqs: &[Equality],
    defaults: &BTreeMap<VarId, ExtScalar>,
) -> Result<BTreeMap<VarId, ExtScalar>> {
    let mut values = defaults.clone();
    for eq in eqs.iter().rev() {
        let beta = eq
            .rhs()
            .evaluate(&values, ExtScalar::one())
            .map_err(|_| Error::NonTriangular { var: eq.var() })?;
        values.insert(eq.var(), beta);
    }
    Ok(values)
}

/// Rows whose greater side covers the support of another row's smaller
/// side; such a pair could be merged into one constraint.
pub fn domination_diagnostics(p: &Problem) -> Vec<Diagnostic> {
    let (big, small) = match p.sense {
        Sense::Min => ((&p.a, &p.b), (&p.c_mat, &p.d)),
        Sense::Max => ((&p.c_mat, &p.d), (&p.a, &p.b)),
    };
    let support = |mat: &TMatrix, v: &[ExtScalar], i: usize| -> Vec<bool> {
        let mut s: Vec<bool> = mat.row(i).iter().map(|c| !c.is_bottom()).collect();
        s.push(!v[i].is_bottom());
        s
    };
    let mut out = Vec::new();
    for i in 0..p.m() {
        let greater = support(big.0, big.1, i);
        for k in 0..p.m() {
            if k == i {
                continue;
            }
            let lesser = support(small.0, small.1, k);
            let nonempty = lesser.iter().any(|&b| b);
            if nonempty && lesser.iter().zip(&greater).all(|(l, g)| !l || *g) {
                out.push(Diagnostic::DominatedRow { row: i + 1, by: k + 1 });
            }
        }
    }
    out
}

pub fn solve(p: &Problem) -> Result<Solution> {
    solve_with(p, &SolveOptions::default())
}

pub fn solve_with(p: &Problem, opts: &SolveOptions) -> Result<Solution> {
    if !opts.h.is_finite() {
        return Err(Error::InvalidH(alloc::format!("{}", opts.h)));
    }
    let n = p.n();
    let limit = opts.switch_limit.unwrap_or(2 * n);
    let mut s = homogenize(p)?;
    let mut trace = Vec::new();
    let mut diagnostics = domination_diagnostics(p);
    let finish = |status, assignment, trace, final_case, switches, diagnostics| Solution {
        status,
        sense: p.sense,
        assignment,
        trace,
        final_case,
        switches,
        diagnostics,
    };

    loop {
        let cl = classify_variables(&s);
        let remaining = s.remaining();
        if terminal_reached(&s) {
            let defaults = remaining.iter().map(|&j| (j, ExtScalar::Bottom)).collect();
            let betas = backward_substitute(&s.equalities, &defaults)?;
            let var_betas: Vec<ExtScalar> = (0..n).map(|j| betas[&j]).collect();
            let z_beta = s.cost.h_coeff();
            let h = opts.h;
            let assignment = Assignment {
                z_beta,
                instantiated: var_betas.iter().map(|b| b.otimes(h)).collect(),
                var_betas,
                h,
                z_value: z_beta.otimes(h),
            };
            let case = if remaining.is_empty() { "2.1" } else { "2.2.1" };
            return Ok(finish(Status::Finite, Some(assignment), trace, case, s.switches, diagnostics));
        }
        if remaining.is_empty() {
            // no finite h satisfies the final system
            let (status, v) = match p.sense {
                Sense::Min => (Status::PlusInfinity, ExtScalar::Top),
                Sense::Max => (Status::Bottom, ExtScalar::Bottom),
            };
            let assignment = Assignment {
                z_beta: v,
                var_betas: vec![v; n],
                h: v,
                instantiated: vec![v; n],
                z_value: v,
            };
            return Ok(finish(status, Some(assignment), trace, "0.1", s.switches, diagnostics));
        }
        if !cl.primary(s.sense).is_empty() {
            let choice = fast_choice(&s, &cl)?;
            let bound = s
                .bound(choice.row, choice.var)
                .expect("selected pivot has a valid bound");
            let cost_after = s.cost.substitute(choice.var, &bound)?;
            let step = s.k;
            let sense = s.sense;
            let transition = apply_in_place(&mut s, choice.var, &bound, &cost_after);
            trace.push(TraceEvent {
                step,
                sense,
                pivot: (choice.row, choice.var),
                tier: choice.tier,
                tau: choice.tau,
                tau_prime: choice.tau_prime,
                bound,
                transition,
                case_label: "2.2.2",
            });
            continue;
        }
        if cl.opposite(s.sense).is_empty() {
            diagnostics.push(Diagnostic::UnboundedVariables(remaining));
            return Ok(finish(Status::NoOptimum, None, trace, "0.2", s.switches, diagnostics));
        }
        if cl.x_plus.is_empty() {
            match switch_sense(&s, limit) {
                Ok(next) => {
                    s = next;
                    continue;
                }
                Err(Error::SwitchLimitExceeded { limit }) => {
                    diagnostics.push(Diagnostic::Gap(GapReason::SwitchLimit { limit }));
                    return Ok(finish(Status::PaperGap, None, trace, "1", s.switches, diagnostics));
                }
                Err(e) => return Err(e),
            }
        }
        diagnostics.push(Diagnostic::Gap(GapReason::OppositeBoundsOnly {
            x_plus: cl.x_plus.clone(),
        }));
        return Ok(finish(Status::PaperGap, None, trace, "gap", s.switches, diagnostics));
    }
}
