//! The field abstraction shared by the float and exact backends.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use crate::qfield::{FieldError, TowerElem, TowerField};

/// Default absolute tolerance of float comparisons.
pub const DEFAULT_TOLERANCE: f64 = 1e-9;

/// A real field element. Geometry is written once against this trait.
///
/// Comparisons take an absolute tolerance which the exact backend ignores.
pub trait Scalar:
    Clone
    + fmt::Debug
    + fmt::Display
    + PartialEq
    + Send
    + Sync
    + 'static
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Neg<Output = Self>
{
    /// True for backends with exact equality.
    const EXACT: bool;

    /// # Panics
    /// If `den` is zero.
    fn from_ratio(num: i64, den: i64) -> Self;

    fn from_int(n: i64) -> Self {
        Self::from_ratio(n, 1)
    }

    fn zero() -> Self {
        Self::from_int(0)
    }

    fn one() -> Self {
        Self::from_int(1)
    }

    fn try_div(&self, rhs: &Self) -> Result<Self, FieldError>;

    /// Non-negative square root. The exact backend may extend the tower.
    fn try_sqrt(&self) -> Result<Self, FieldError>;

    /// Sign, with `|x| <= tol` counted as zero in the float backend.
    fn sign(&self, tol: f64) -> Result<Ordering, FieldError>;

    fn to_f64(&self) -> f64;

    fn is_zero_within(&self, tol: f64) -> Result<bool, FieldError> {
        Ok(self.sign(tol)? == Ordering::Equal)
    }

    fn approx_eq(&self, other: &Self, tol: f64) -> Result<bool, FieldError> {
        (self.clone() - other.clone()).is_zero_within(tol)
    }

    fn half(&self) -> Self {
        self.clone() * Self::from_ratio(1, 2)
    }

    /// Clamps to `[-1, 1]` where rounding can push a cosine outside it.
    fn clamp_unit(self) -> Self {
        self
    }

    /// Brings a set of values into one common representation (the exact
    /// backend lifts them into the longest tower).
    fn unify(values: &mut [Self]) -> Result<(), FieldError> {
        let _ = values;
        Ok(())
    }
}

impl Scalar for f64 {
    const EXACT: bool = false;

    fn from_ratio(num: i64, den: i64) -> Self {
        assert!(den != 0, "zero denominator");
        num as f64 / den as f64
    }

    fn try_div(&self, rhs: &Self) -> Result<Self, FieldError> {
        if *rhs == 0.0 {
            Err(FieldError::DivisionByZero)
        } else {
            Ok(self / rhs)
        }
    }

    fn try_sqrt(&self) -> Result<Self, FieldError> {
        if *self < 0.0 {
            Err(FieldError::NegativeRadicand)
        } else {
            Ok(self.sqrt())
        }
    }

    fn sign(&self, tol: f64) -> Result<Ordering, FieldError> {
        if !self.is_finite() {
            return Err(FieldError::NotFinite);
        }
        Ok(if self.abs() <= tol {
            Ordering::Equal
        } else if *self > 0.0 {
            Ordering::Greater
        } else {
            Ordering::Less
        })
    }

    fn to_f64(&self) -> f64 {
        *self
    }

    fn clamp_unit(self) -> Self {
        self.clamp(-1.0, 1.0)
    }
}

impl Scalar for TowerElem {
    const EXACT: bool = true;

    fn from_ratio(num: i64, den: i64) -> Self {
        TowerElem::from_ratio(num, den)
    }

    fn try_div(&self, rhs: &Self) -> Result<Self, FieldError> {
        self.checked_div(rhs)
    }

    fn try_sqrt(&self) -> Result<Self, FieldError> {
        self.sqrt()
    }

    fn sign(&self, _tol: f64) -> Result<Ordering, FieldError> {
        TowerElem::sign(self)
    }

    fn to_f64(&self) -> f64 {
        TowerElem::to_f64(self)
    }

    fn unify(values: &mut [Self]) -> Result<(), FieldError> {
        let mut field = TowerField::rationals();
        for v in values.iter() {
            field = field.join(v.field())?;
        }
        for v in values.iter_mut() {
            if v.field() != &field {
                *v = v.lift(&field)?;
            }
        }
        Ok(())
    }
}
