//! Linear-fractional programs `min (p ⊗ x) / (r ⊗ x)` over
//! `A ⊗ x ⊕ b ≥ C ⊗ x ⊕ d`, reduced to a linear program by the change of
//! variables `y = t ⊗ x` and the normalization `r ⊗ y ≥ h`.

use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::form::LinearForm;
use crate::interval::Sense;
use crate::matrix::TMatrix;
use crate::scalar::ExtScalar;
use crate::solver::{Problem, Solution, Status};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FractionalProblem {
    p: Vec<ExtScalar>,
    r: Vec<ExtScalar>,
    a: TMatrix,
    b: Vec<ExtScalar>,
    c_mat: TMatrix,
    d: Vec<ExtScalar>,
}

impl FractionalProblem {
    /// Numerator `p` and denominator `r` must both have an entry above `-∞`.
    pub fn new(
        p: Vec<ExtScalar>,
        r: Vec<ExtScalar>,
        a: TMatrix,
        b: Vec<ExtScalar>,
        c_mat: TMatrix,
        d: Vec<ExtScalar>,
    ) -> Result<Self> {
        if r.len() != p.len() {
            return Err(Error::DimensionMismatch {
                context: "length of r",
                expected: p.len(),
                found: r.len(),
            });
        }
        if p.iter().all(ExtScalar::is_bottom) {
            return Err(Error::AssumptionViolated("numerator p is identically -inf"));
        }
        if r.iter().all(ExtScalar::is_bottom) {
            return Err(Error::AssumptionViolated("denominator r is identically -inf"));
        }
        // reuse the linear problem's shape checks
        let lp = Problem::new(Sense::Min, a, b, c_mat, d, p.clone(), ExtScalar::Bottom)?;
        Ok(FractionalProblem {
            p,
            r,
            a: lp.a().clone(),
            b: lp.b().to_vec(),
            c_mat: lp.c_mat().clone(),
            d: lp.d().to_vec(),
        })
    }

    pub fn p(&self) -> &[ExtScalar] {
        &self.p
    }
    pub fn r(&self) -> &[ExtScalar] {
        &self.r
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
    pub fn n(&self) -> usize {
        self.p.len()
    }
    pub fn m(&self) -> usize {
        self.b.len()
    }

    /// The constraint system alone, as a min problem with the numerator as
    /// cost.
    pub fn constraints(&self) -> Problem {
        Problem::new(
            Sense::Min,
            self.a.clone(),
            self.b.clone(),
            self.c_mat.clone(),
            self.d.clone(),
            self.p.clone(),
            ExtScalar::Bottom,
        )
        .expect("dimensions checked at construction")
    }

    /// `(p ⊗ x) - (r ⊗ x)`, defined only when `r ⊗ x` is finite.
    pub fn objective(&self, x: &[ExtScalar]) -> Option<ExtScalar> {
        let num = LinearForm::new(self.p.clone(), ExtScalar::Bottom).evaluate_at(x, ExtScalar::one());
        let den = LinearForm::new(self.r.clone(), ExtScalar::Bottom).evaluate_at(x, ExtScalar::one());
        den.is_finite().then(|| num.otimes(den.inv()))
    }
}

/// The min problem over `(y_1..y_n, t)`:
///
/// ```text
/// min p ⊗ y
/// A ⊗ y ⊕ b ⊗ t ≥ C ⊗ y ⊕ d ⊗ t
/// r ⊗ y ≥ h
/// ```
///
/// The last row is stored with left side `r` and right side the bare
/// constant `0`, so homogenization turns it into `r ⊗ y ≥ 0 ⊗ h`.
pub fn charnes_cooper(fp: &FractionalProblem) -> Result<Problem> {
    let (m, n) = (fp.m(), fp.n());
    let bottom_row = || vec![ExtScalar::Bottom; n + 1];
    let mut a_rows = Vec::with_capacity(m + 1);
    let mut c_rows = Vec::with_capacity(m + 1);
    for i in 0..m {
        let mut ar = fp.a.row(i).to_vec();
        ar.push(fp.b[i]);
        a_rows.push(ar);
        let mut cr = fp.c_mat.row(i).to_vec();
        cr.push(fp.d[i]);
        c_rows.push(cr);
    }
    let mut last = fp.r.clone();
    last.push(ExtScalar::Bottom);
    a_rows.push(last);
    c_rows.push(bottom_row());
    let mut b = vec![ExtScalar::Bottom; m + 1];
    let mut d = vec![ExtScalar::Bottom; m + 1];
    b[m] = ExtScalar::Bottom;
    d[m] = ExtScalar::one();
    let mut cost = fp.p.clone();
    cost.push(ExtScalar::Bottom);
    Problem::new(
        Sense::Min,
        TMatrix::from_rows(a_rows)?,
        b,
        TMatrix::from_rows(c_rows)?,
        d,
        cost,
        ExtScalar::Bottom,
    )
}

/// `x = t^{-1} ⊗ y` and the optimal ratio, from a solution of
/// [`charnes_cooper`]'s problem.
pub fn recover(sol: &Solution) -> Result<(Vec<ExtScalar>, ExtScalar)> {
    if sol.status != Status::Finite {
        return Err(Error::NotFinite(sol.status.as_str()));
    }
    let asg = sol
        .assignment
        .as_ref()
        .ok_or(Error::NotFinite(sol.status.as_str()))?;
    let (t, ys) = asg.var_betas.split_last().ok_or(Error::Empty)?;
    if t.is_bottom() {
        return Err(Error::DegenerateT);
    }
    let t_inv = t.inv();
    let x = ys.iter().map(|y| y.otimes(t_inv)).collect();
    Ok((x, asg.z_beta))
}
