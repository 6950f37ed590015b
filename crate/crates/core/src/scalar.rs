//! Elements of the complete max-plus dioid `ℝ ∪ {-∞, +∞}` over exact rationals.
//!
//! `⊕` is `max`, `⊗` is `+`. `-∞` is neutral for `⊕` and absorbing for `⊗`,
//! including against `+∞` (`-∞ ⊗ +∞ = -∞`). `+∞` absorbs every other element
//! under both operations.

use alloc::string::{String, ToString};
use core::fmt;
use core::str::FromStr;

use num_rational::Rational64;
use num_traits::{CheckedAdd, CheckedMul, Signed, Zero};

use crate::error::{Error, Result};

/// An extended max-plus scalar.
///
/// The derived order is the natural order of the dioid:
/// `Bottom < Finite(_) < Top`, finite values compared as rationals.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ExtScalar {
    /// `-∞`, the zero of the semiring.
    #[default]
    Bottom,
    Finite(Rational64),
    /// `+∞`.
    Top,
}

impl From<i64> for ExtScalar {
    fn from(v: i64) -> Self {
        ExtScalar::Finite(Rational64::from_integer(v))
    }
}

impl From<Rational64> for ExtScalar {
    fn from(v: Rational64) -> Self {
        ExtScalar::Finite(v)
    }
}

impl ExtScalar {
    pub const BOTTOM: ExtScalar = ExtScalar::Bottom;
    pub const TOP: ExtScalar = ExtScalar::Top;

    /// The unit `𝟙 = 0`.
    pub fn one() -> Self {
        ExtScalar::Finite(Rational64::zero())
    }

    pub fn int(v: i64) -> Self {
        v.into()
    }

    /// `numer / denom` as a finite scalar. Panics if `denom == 0`.
    pub fn ratio(numer: i64, denom: i64) -> Self {
        ExtScalar::Finite(Rational64::new(numer, denom))
    }

    pub fn is_bottom(&self) -> bool {
        matches!(self, ExtScalar::Bottom)
    }

    pub fn is_top(&self) -> bool {
        matches!(self, ExtScalar::Top)
    }

    pub fn is_finite(&self) -> bool {
        matches!(self, ExtScalar::Finite(_))
    }

    pub fn finite(&self) -> Option<Rational64> {
        match self {
            ExtScalar::Finite(v) => Some(*v),
            _ => None,
        }
    }

    /// `a ⊕ b = max(a, b)`.
    pub fn oplus(self, other: Self) -> Self {
        self.max(other)
    }

    /// `a ⊗ b`, usual addition on finite values.
    ///
    /// Panics if the rational sum overflows `i64`; see [`Self::checked_otimes`].
    pub fn otimes(self, other: Self) -> Self {
        self.checked_otimes(other)
            .expect("rational overflow in max-plus product")
    }

    pub fn checked_otimes(self, other: Self) -> Option<Self> {
        use ExtScalar::*;
        Some(match (self, other) {
            (Bottom, _) | (_, Bottom) => Bottom,
            (Top, _) | (_, Top) => Top,
            (Finite(a), Finite(b)) => Finite(a.checked_add(&b)?),
        })
    }

    /// The symmetric inverse `a^{⊗(-1)}`: negation on finite values,
    /// `(-∞)^{-1} = +∞` and `(+∞)^{-1} = -∞`.
    pub fn inv(self) -> Self {
        match self {
            ExtScalar::Bottom => ExtScalar::Top,
            ExtScalar::Top => ExtScalar::Bottom,
            ExtScalar::Finite(a) => ExtScalar::Finite(-a),
        }
    }

    /// `a / b = a ⊗ b^{⊗(-1)}`.
    pub fn odiv(self, other: Self) -> Self {
        self.otimes(other.inv())
    }

    /// `a^{⊗(k)} = k · a`. Infinite scalars only admit `k ∈ {-1, 0, 1}`.
    pub fn pow(self, k: i64) -> Result<Self> {
        match (self, k) {
            (_, 0) => Ok(Self::one()),
            (_, 1) => Ok(self),
            (_, -1) => Ok(self.inv()),
            (ExtScalar::Finite(a), _) => a
                .checked_mul(&Rational64::from_integer(k))
                .map(ExtScalar::Finite)
                .ok_or(Error::UnsupportedPower { exponent: k }),
            _ => Err(Error::UnsupportedPower { exponent: k }),
        }
    }

    /// Absolute value of a finite scalar, `None` for infinities.
    pub fn abs_finite(&self) -> Option<Rational64> {
        self.finite().map(|v| v.abs())
    }
}

/// `⊕` over an iterator; `-∞` for the empty iterator.
pub fn oplus_all<I: IntoIterator<Item = ExtScalar>>(items: I) -> ExtScalar {
    items
        .into_iter()
        .fold(ExtScalar::Bottom, ExtScalar::oplus)
}

impl fmt::Display for ExtScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExtScalar::Bottom => f.write_str("-inf"),
            ExtScalar::Top => f.write_str("+inf"),
            ExtScalar::Finite(v) => write!(f, "{v}"),
        }
    }
}

impl FromStr for ExtScalar {
    type Err = Error;

    /// Accepts `-inf`, `+inf`, a decimal literal (`-3`, `2.5`) or a fraction
    /// (`7/2`, `-1/3`).
    fn from_str(s: &str) -> Result<Self> {
        let token = s.trim();
        let err = |reason| Error::ParseScalar {
            token: token.to_string(),
            reason,
        };
        match token {
            "-inf" => return Ok(ExtScalar::Bottom),
            "+inf" => return Ok(ExtScalar::Top),
            "" => return Err(err("empty token")),
            _ => {}
        }
        if let Some((num, den)) = token.split_once('/') {
            let numer = parse_integer(num).ok_or_else(|| err("bad numerator"))?;
            let denom = parse_integer(den).ok_or_else(|| err("bad denominator"))?;
            if denom <= 0 || den.starts_with('+') {
                return Err(err("denominator must be a positive integer"));
            }
            return Ok(ExtScalar::Finite(Rational64::new(numer, denom)));
        }
        parse_decimal(token)
            .map(ExtScalar::Finite)
            .ok_or_else(|| err("not a number"))
    }
}

fn parse_integer(s: &str) -> Option<i64> {
    let digits = s.strip_prefix(['-', '+']).unwrap_or(s);
    if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
        return None;
    }
    s.parse().ok()
}

fn parse_decimal(s: &str) -> Option<Rational64> {
    let (negative, body) = match s.as_bytes()[0] {
        b'-' => (true, &s[1..]),
        b'+' => (false, &s[1..]),
        _ => (false, s),
    };
    let (int_part, frac_part) = body.split_once('.').unwrap_or((body, ""));
    if int_part.is_empty() && frac_part.is_empty() {
        return None;
    }
    if !int_part
        .bytes()
        .chain(frac_part.bytes())
        .all(|b| b.is_ascii_digit())
    {
        return None;
    }
    let mut digits = String::with_capacity(int_part.len() + frac_part.len());
    digits.push_str(int_part);
    digits.push_str(frac_part);
    let numer: i64 = digits.parse().ok()?;
    let denom = 10i64.checked_pow(u32::try_from(frac_part.len()).ok()?)?;
    let value = Rational64::new(numer, denom);
    Some(if negative { -value } else { value })
}
