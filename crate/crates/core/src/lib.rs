//! Exact max-plus linear and linear-fractional programming by substitution.
//!
//! Problems have the shape
//!
//! ```text
//! min (or max) z = c ⊗ x ⊕ c_h ⊗ h
//! subject to      A ⊗ x ⊕ b ⊗ h  ≥  C ⊗ x ⊕ d ⊗ h      (≤ for max)
//! ```
//!
//! over the complete dioid `ℝ ∪ {-∞, +∞}`. The solver eliminates one
//! variable per step by saturating a chosen single-variable bound, and
//! returns every variable as `β ⊗ h` for the homogenization variable `h`.
//!
//! The crate is `no_std` (it needs `alloc`); the `std` feature only adds
//! `std::error::Error` through `thiserror`.

#![cfg_attr(not(feature = "std"), no_std)]

extern crate alloc;

pub mod error;
pub mod form;
pub mod fractional;
pub mod interval;
pub mod matrix;
pub mod oracle;
pub mod scalar;
pub mod solver;

pub use error::{Error, Result};
pub use form::{Equality, FormClass, LinearForm, VarId};
pub use fractional::{charnes_cooper, recover, FractionalProblem};
pub use interval::{ConcreteInterval, IntervalKind, ParamInterval, Sense};
pub use matrix::TMatrix;
pub use scalar::ExtScalar;
pub use solver::{solve, Problem, Solution, SolveOptions, Status};
