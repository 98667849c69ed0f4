//! Exact arithmetic in towers of real quadratic extensions.
//!
//! A [`TowerField`] is the chain `Q = K0 ⊂ K1 ⊂ … ⊂ Kn` where
//! `K(i+1) = Ki(√di)` for a positive radicand `di ∈ Ki` that is not a
//! square in `Ki`. A [`TowerElem`] stores its `2^n` rational coefficients,
//! one per product of generators: bit `i` of the coefficient index selects
//! `√di`. Because every radicand is certified non-square, this
//! representation is canonical and equality is plain coefficient equality.
//!
//! Numeric values come from certified interval evaluation (see
//! [`eval_numeric`]) and sign decisions refine precision until the
//! enclosure excludes zero.

mod interval;
mod parse;
mod tower;

pub use interval::{eval_numeric, Enclosure};
pub use parse::{parse_expr, parse_scalar, ScalarExpr};
pub use tower::{tower_sqrt, Rational, TowerElem, TowerField};

use thiserror::Error;

/// Starting precision of certified sign tests, in bits.
pub const SIGN_START_BITS: u32 = 128;
/// Precision cap of certified sign tests; beyond it a test is `Inconclusive`.
pub const SIGN_MAX_BITS: u32 = 4096;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FieldError {
    #[error("division by zero")]
    DivisionByZero,
    #[error("square root of a negative value")]
    NegativeRadicand,
    #[error("element does not embed in the target tower")]
    IncompatibleTowers,
    #[error("invalid tower: a radicand is a square in the field below")]
    InvalidTower,
    #[error("sign undecided at {bits} bits of precision")]
    Inconclusive { bits: u32 },
    #[error("value is not finite")]
    NotFinite,
    #[error("syntax error at byte {offset}: {message}")]
    Syntax { offset: usize, message: String },
}
