//! `(x, h)`-linear forms `α ⊗ x ⊕ β ⊗ h`.

use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::interval::{IntervalKind, ParamInterval, Sense};
use crate::scalar::{oplus_all, ExtScalar};

/// Zero-based index of a problem variable.
pub type VarId = usize;

/// A linear form over `n` variables and `h`, stored densely; absent terms
/// are `-∞`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct LinearForm {
    x: Vec<ExtScalar>,
    h: ExtScalar,
}

/// Whether a form's values stay controlled by `h` on the research domain.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum FormClass {
    HBounded,
    HUnbounded,
}

impl FormClass {
    pub fn letter(self) -> &'static str {
        match self {
            FormClass::HBounded => "B",
            FormClass::HUnbounded => "U",
        }
    }
}

impl LinearForm {
    pub fn new(x: Vec<ExtScalar>, h: ExtScalar) -> Self {
        LinearForm { x, h }
    }

    /// The identically `-∞` form over `n` variables.
    pub fn null(n: usize) -> Self {
        LinearForm {
            x: vec![ExtScalar::Bottom; n],
            h: ExtScalar::Bottom,
        }
    }

    /// `β ⊗ h` over `n` variables.
    pub fn h_only(n: usize, beta: ExtScalar) -> Self {
        LinearForm {
            x: vec![ExtScalar::Bottom; n],
            h: beta,
        }
    }

    pub fn nvars(&self) -> usize {
        self.x.len()
    }

    pub fn coeff(&self, j: VarId) -> ExtScalar {
        self.x.get(j).copied().unwrap_or(ExtScalar::Bottom)
    }

    pub fn x_coeffs(&self) -> &[ExtScalar] {
        &self.x
    }

    pub fn h_coeff(&self) -> ExtScalar {
        self.h
    }

    pub fn set_coeff(&mut self, j: VarId, value: ExtScalar) {
        self.x[j] = value;
    }

    pub fn set_h_coeff(&mut self, value: ExtScalar) {
        self.h = value;
    }

    /// Variables with a coefficient above `-∞`.
    pub fn support(&self) -> impl Iterator<Item = VarId> + '_ {
        self.x
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_bottom())
            .map(|(j, _)| j)
    }

    pub fn is_null(&self) -> bool {
        self.h.is_bottom() && self.x.iter().all(ExtScalar::is_bottom)
    }

    /// `⊕_j α_j`.
    pub fn max_x_coeff(&self) -> ExtScalar {
        oplus_all(self.x.iter().copied())
    }

    /// `target[var := replacement]`.
    pub fn substitute(&self, var: VarId, replacement: &LinearForm) -> Result<LinearForm> {
        if !replacement.coeff(var).is_bottom() {
            return Err(Error::SelfReference { var });
        }
        let w = self.coeff(var);
        let mut out = self.clone();
        if w.is_bottom() {
            return Ok(out);
        }
        for (c, r) in out.x.iter_mut().zip(&replacement.x) {
            *c = c.oplus(w.otimes(*r));
        }
        out.h = out.h.oplus(w.otimes(replacement.h));
        out.x[var] = ExtScalar::Bottom;
        Ok(out)
    }

    pub fn classify(&self, mode: Sense) -> Result<FormClass> {
        if self.is_null() {
            return Err(Error::NullForm);
        }
        Ok(self.class_of_nonnull(mode))
    }

    fn class_of_nonnull(&self, mode: Sense) -> FormClass {
        let bounded = match mode {
            Sense::Min => !self.h.is_bottom(),
            Sense::Max => self.x.iter().all(ExtScalar::is_bottom),
        };
        if bounded {
            FormClass::HBounded
        } else {
            FormClass::HUnbounded
        }
    }

    pub fn value_interval(&self, mode: Sense) -> Result<ParamInterval> {
        let class = self.classify(mode)?;
        Ok(self.interval_for(mode, class))
    }

    fn interval_for(&self, mode: Sense, class: FormClass) -> ParamInterval {
        match class {
            FormClass::HBounded => ParamInterval::new_unchecked(mode, IntervalKind::Mu, self.h),
            FormClass::HUnbounded => {
                ParamInterval::new_unchecked(mode, IntervalKind::Lambda, self.max_x_coeff())
            }
        }
    }

    /// Class and value interval used for pivot ranking.
    ///
    /// Unlike [`Self::classify`] this accepts the null form: its only value
    /// is `-∞`, which makes it the best possible form in min mode
    /// (`LAMBDA(-∞)`, i.e. unbounded below) and an h-bounded `MU(-∞)` in
    /// max mode.
    pub(crate) fn ranking(&self, mode: Sense) -> (FormClass, ParamInterval) {
        let class = if self.is_null() {
            match mode {
                Sense::Min => FormClass::HUnbounded,
                Sense::Max => FormClass::HBounded,
            }
        } else {
            self.class_of_nonnull(mode)
        };
        (class, self.interval_for(mode, class))
    }

    /// Value at a point given as a map; every variable with a coefficient
    /// above `-∞` must be assigned.
    pub fn evaluate(&self, assignment: &BTreeMap<VarId, ExtScalar>, h: ExtScalar) -> Result<ExtScalar> {
        let mut acc = self.h.otimes(h);
        for j in self.support() {
            let v = assignment
                .get(&j)
                .ok_or(Error::MissingVariable { var: j })?;
            acc = acc.oplus(self.x[j].otimes(*v));
        }
        Ok(acc)
    }

    /// Value at a dense point `x` (length `nvars`).
    pub fn evaluate_at(&self, x: &[ExtScalar], h: ExtScalar) -> ExtScalar {
        debug_assert_eq!(x.len(), self.x.len());
        self.x
            .iter()
            .zip(x)
            .fold(self.h.otimes(h), |acc, (c, v)| acc.oplus(c.otimes(*v)))
    }
}

/// `a ⊗ y_j ≶ v ⊗ y` can be solved for `y_j` when `a ≠ -∞` and `a > v_j`;
/// the solution is `y_j ≶ a^{-1} ⊗ v̄ ⊗ y` where `v̄` is `v` with its `j`
/// entry set to `-∞`. The direction is the caller's concern.
///
/// `a = +∞` is rejected as well: `(+∞)^{-1} = -∞` would give a bound that
/// does not reproduce the inequality.
pub fn valid_bound(a: ExtScalar, row: &LinearForm, j: VarId) -> Option<LinearForm> {
    if a.is_bottom() || a.is_top() || a <= row.coeff(j) {
        return None;
    }
    let inv = a.inv();
    let mut x: Vec<ExtScalar> = row.x.iter().map(|v| inv.otimes(*v)).collect();
    x[j] = ExtScalar::Bottom;
    Some(LinearForm {
        x,
        h: inv.otimes(row.h),
    })
}

/// A stored substitution `x_var = rhs`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Equality {
    var: VarId,
    rhs: LinearForm,
}

impl Equality {
    pub fn new(var: VarId, rhs: LinearForm) -> Result<Self> {
        if !rhs.coeff(var).is_bottom() {
            return Err(Error::SelfReference { var });
        }
        Ok(Equality { var, rhs })
    }

    pub fn var(&self) -> VarId {
        self.var
    }

    pub fn rhs(&self) -> &LinearForm {
        &self.rhs
    }
}
