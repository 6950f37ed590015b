//! Symbolic value intervals of linear forms over the parametrized research
//! domains, ordered by inclusion.
//!
//! In min mode the domain is described by two symbols `λ < μ` with `μ`
//! dominating every `θ ⊗ λ`; a form's values then range over
//! `[θ ⊗ λ, +∞]` (kind [`IntervalKind::Lambda`]) or `[β ⊗ μ, +∞]`
//! (kind [`IntervalKind::Mu`]). Max mode is the order dual, with intervals
//! `[-∞, θ ⊗ λ̃]` and `[-∞, β ⊗ μ̃]` and `μ̃` dominated by every `θ ⊗ λ̃`.

use alloc::vec::Vec;
use core::cmp::Ordering;

use num_rational::Rational64;

use crate::error::{Error, Result};
use crate::scalar::ExtScalar;

/// Optimization direction; also selects the interval family.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Sense {
    Min,
    Max,
}

impl Sense {
    pub fn opposite(self) -> Sense {
        match self {
            Sense::Min => Sense::Max,
            Sense::Max => Sense::Min,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Sense::Min => "min",
            Sense::Max => "max",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum IntervalKind {
    Lambda,
    Mu,
}

impl IntervalKind {
    pub fn as_str(self) -> &'static str {
        match self {
            IntervalKind::Lambda => "lambda",
            IntervalKind::Mu => "mu",
        }
    }
}

/// A symbolic interval: `coeff ⊗ λ` or `coeff ⊗ μ` as the finite endpoint,
/// the other endpoint being `+∞` (min) or `-∞` (max).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct ParamInterval {
    mode: Sense,
    kind: IntervalKind,
    coeff: ExtScalar,
}

impl ParamInterval {
    /// Rejects the degenerate encodings `MU(-∞)` in min mode and
    /// `LAMBDA(-∞)` in max mode.
    pub fn new(mode: Sense, kind: IntervalKind, coeff: ExtScalar) -> Result<Self> {
        match (mode, kind) {
            (Sense::Min, IntervalKind::Mu) if coeff.is_bottom() => {
                Err(Error::InvalidInterval("min-mode mu interval needs a coefficient above -inf"))
            }
            (Sense::Max, IntervalKind::Lambda) if coeff.is_bottom() => Err(
                Error::InvalidInterval("max-mode lambda interval needs a coefficient above -inf"),
            ),
            _ => Ok(ParamInterval { mode, kind, coeff }),
        }
    }

    pub(crate) fn new_unchecked(mode: Sense, kind: IntervalKind, coeff: ExtScalar) -> Self {
        ParamInterval { mode, kind, coeff }
    }

    pub fn mode(&self) -> Sense {
        self.mode
    }

    pub fn kind(&self) -> IntervalKind {
        self.kind
    }

    pub fn coeff(&self) -> ExtScalar {
        self.coeff
    }

    /// Inclusion order: `Less` when `self ⊊ other`.
    pub fn cmp_inclusion(&self, other: &ParamInterval) -> Result<Ordering> {
        if self.mode != other.mode {
            return Err(Error::ModeMismatch);
        }
        let ord = match (self.kind, other.kind) {
            (IntervalKind::Mu, IntervalKind::Lambda) => Ordering::Less,
            (IntervalKind::Lambda, IntervalKind::Mu) => Ordering::Greater,
            _ => match self.mode {
                // [a ⊗ ·, +∞] shrinks as a grows
                Sense::Min => other.coeff.cmp(&self.coeff),
                Sense::Max => self.coeff.cmp(&other.coeff),
            },
        };
        Ok(ord)
    }

    /// Whether `other ⊆ self`.
    pub fn includes(&self, other: &ParamInterval) -> Result<bool> {
        Ok(self.cmp_inclusion(other)? != Ordering::Less)
    }

    /// The concrete interval obtained by fixing the two domain symbols.
    pub fn realize(&self, inst: &Instantiation) -> ConcreteInterval {
        let symbol = match self.kind {
            IntervalKind::Lambda => inst.lambda,
            IntervalKind::Mu => inst.mu,
        };
        let end = self.coeff.otimes(symbol);
        match self.mode {
            Sense::Min => ConcreteInterval {
                lo: end,
                hi: ExtScalar::Top,
            },
            Sense::Max => ConcreteInterval {
                lo: ExtScalar::Bottom,
                hi: end,
            },
        }
    }
}

/// Concrete values for the two domain symbols.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Instantiation {
    pub lambda: ExtScalar,
    pub mu: ExtScalar,
}

impl Instantiation {
    /// `λ = 0, μ = 1 + 2M` (min) or `λ̃ = 0, μ̃ = -(1 + 2M)` (max), which
    /// satisfies the domination condition for all finite coefficients of
    /// absolute value at most `M`.
    pub fn for_bound(mode: Sense, max_abs: Rational64) -> Self {
        let gap = Rational64::from_integer(1) + max_abs * 2;
        let mu = match mode {
            Sense::Min => gap,
            Sense::Max => -gap,
        };
        Instantiation {
            lambda: ExtScalar::one(),
            mu: ExtScalar::Finite(mu),
        }
    }
}

/// Inclusion-minimum of a set of intervals of one mode and one kind,
/// together with every key attaining it (in input order).
pub fn min_of<K: Clone>(set: &[(K, ParamInterval)]) -> Result<(ParamInterval, Vec<K>)> {
    let (_, first) = set.first().ok_or(Error::Empty)?;
    let mut tau = *first;
    for (_, iv) in set {
        if iv.mode != tau.mode {
            return Err(Error::ModeMismatch);
        }
        if iv.kind != tau.kind {
            return Err(Error::KindMismatch);
        }
        if iv.cmp_inclusion(&tau)? == Ordering::Less {
            tau = *iv;
        }
    }
    let argmin = set
        .iter()
        .filter(|(_, iv)| *iv == tau)
        .map(|(k, _)| k.clone())
        .collect();
    Ok((tau, argmin))
}

/// A closed interval `[lo, hi]` of the extended line.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct ConcreteInterval {
    lo: ExtScalar,
    hi: ExtScalar,
}

impl ConcreteInterval {
    pub fn new(lo: ExtScalar, hi: ExtScalar) -> Result<Self> {
        if lo > hi {
            return Err(Error::InvalidInterval("lower end above upper end"));
        }
        Ok(ConcreteInterval { lo, hi })
    }

    pub fn lo(&self) -> ExtScalar {
        self.lo
    }

    pub fn hi(&self) -> ExtScalar {
        self.hi
    }

    /// Whether `other ⊆ self`.
    pub fn contains(&self, other: &ConcreteInterval) -> bool {
        self.lo <= other.lo && other.hi <= self.hi
    }

    pub fn intersection(&self, other: &ConcreteInterval) -> Option<ConcreteInterval> {
        let lo = self.lo.max(other.lo);
        let hi = self.hi.min(other.hi);
        (lo <= hi).then_some(ConcreteInterval { lo, hi })
    }
}

/// `⊕_i α_i ⊗ [u_i, v_i] = [⊕_i α_i ⊗ u_i, ⊕_i α_i ⊗ v_i]`.
pub fn combine(intervals: &[ConcreteInterval], weights: &[ExtScalar]) -> Result<ConcreteInterval> {
    if intervals.len() != weights.len() {
        return Err(Error::LengthMismatch {
            expected: intervals.len(),
            found: weights.len(),
        });
    }
    if intervals.is_empty() {
        return Err(Error::Empty);
    }
    let mut lo = ExtScalar::Bottom;
    let mut hi = ExtScalar::Bottom;
    for (iv, w) in intervals.iter().zip(weights) {
        lo = lo.oplus(w.otimes(iv.lo));
        hi = hi.oplus(w.otimes(iv.hi));
    }
    Ok(ConcreteInterval { lo, hi })
}
