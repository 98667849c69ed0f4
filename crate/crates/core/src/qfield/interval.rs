//! Certified numeric evaluation with fixed-point big-integer intervals.

use std::cmp::Ordering;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, ToPrimitive, Zero};

use super::tower::{Level, Rational, TowerElem};
use super::{FieldError, SIGN_MAX_BITS, SIGN_START_BITS};

/// Closed interval `[lo, hi] · 2^-bits`.
#[derive(Clone, Debug)]
struct Fixed {
    lo: BigInt,
    hi: BigInt,
}

fn floor_div(n: &BigInt, d: &BigInt) -> BigInt {
    n.div_floor(d)
}

fn ceil_div(n: &BigInt, d: &BigInt) -> BigInt {
    -((-n).div_floor(d))
}

fn floor_shr(x: &BigInt, bits: u32) -> BigInt {
    floor_div(x, &(BigInt::from(1) << bits))
}

fn ceil_shr(x: &BigInt, bits: u32) -> BigInt {
    ceil_div(x, &(BigInt::from(1) << bits))
}

impl Fixed {
    fn zero() -> Self {
        Fixed {
            lo: BigInt::zero(),
            hi: BigInt::zero(),
        }
    }

    fn from_rational(q: &Rational, bits: u32) -> Self {
        let scaled = q.numer() << bits;
        Fixed {
            lo: floor_div(&scaled, q.denom()),
            hi: ceil_div(&scaled, q.denom()),
        }
    }

    fn add(&self, rhs: &Fixed) -> Fixed {
        Fixed {
            lo: &self.lo + &rhs.lo,
            hi: &self.hi + &rhs.hi,
        }
    }

    fn mul(&self, rhs: &Fixed, bits: u32) -> Fixed {
        let products = [
            &self.lo * &rhs.lo,
            &self.lo * &rhs.hi,
            &self.hi * &rhs.lo,
            &self.hi * &rhs.hi,
        ];
        let min = products.iter().min().expect("four products");
        let max = products.iter().max().expect("four products");
        Fixed {
            lo: floor_shr(min, bits),
            hi: ceil_shr(max, bits),
        }
    }

    /// Enclosure of `√x` for the non-negative part of the interval.
    fn sqrt(&self, bits: u32) -> Fixed {
        let lo = if self.lo.is_negative() {
            BigInt::zero()
        } else {
            (&self.lo << bits).sqrt()
        };
        let hi = if self.hi.is_negative() {
            BigInt::zero()
        } else {
            let x = &self.hi << bits;
            let r = x.sqrt();
            if &r * &r < x {
                r + 1
            } else {
                r
            }
        };
        Fixed { lo, hi }
    }
}

/// Enclosures of the generators `√d_i`, bottom-up.
fn generator_enclosures(levels: &[Level], bits: u32) -> Vec<Fixed> {
    let mut roots: Vec<Fixed> = Vec::with_capacity(levels.len());
    for level in levels {
        let radicand = eval_fixed(&level.radicand, &roots, bits);
        roots.push(radicand.sqrt(bits));
    }
    roots
}

fn eval_fixed(coeffs: &[Rational], roots: &[Fixed], bits: u32) -> Fixed {
    let n = coeffs.len();
    if n == 1 {
        return Fixed::from_rational(&coeffs[0], bits);
    }
    if coeffs.iter().all(Zero::is_zero) {
        return Fixed::zero();
    }
    let half = n / 2;
    let level = n.trailing_zeros() as usize - 1;
    let a = eval_fixed(&coeffs[..half], roots, bits);
    let b = &coeffs[half..];
    if b.iter().all(Zero::is_zero) {
        return a;
    }
    a.add(&eval_fixed(b, roots, bits).mul(&roots[level], bits))
}

/// A certified enclosure `[lo, hi]` of a real value.
#[derive(Clone, Debug, PartialEq)]
pub struct Enclosure {
    lo: Rational,
    hi: Rational,
}

impl Enclosure {
    pub fn lo(&self) -> &Rational {
        &self.lo
    }

    pub fn hi(&self) -> &Rational {
        &self.hi
    }

    pub fn contains(&self, x: &Rational) -> bool {
        &self.lo <= x && x <= &self.hi
    }

    pub fn midpoint(&self) -> f64 {
        let mid = (&self.lo + &self.hi) / Rational::from_integer(BigInt::from(2));
        mid.to_f64().unwrap_or(f64::NAN)
    }

    /// Half-width of the enclosure, an upper bound on the midpoint's error.
    pub fn radius(&self) -> f64 {
        let r = (&self.hi - &self.lo) / Rational::from_integer(BigInt::from(2));
        r.to_f64().unwrap_or(f64::INFINITY)
    }

    fn sign(&self) -> Option<Ordering> {
        if self.lo.is_positive() {
            Some(Ordering::Greater)
        } else if self.hi.is_negative() {
            Some(Ordering::Less)
        } else {
            None
        }
    }
}

/// Evaluates `a` with intervals carrying `precision_bits` fractional bits.
///
/// Precision below 32 bits is raised to 32. Exact zero evaluates to `[0, 0]`.
pub fn eval_numeric(a: &TowerElem, precision_bits: u32) -> Enclosure {
    let bits = precision_bits.max(32);
    let levels = a.field().levels();
    let roots = generator_enclosures(levels, bits);
    let value = eval_fixed(a.coefficients(), &roots, bits);
    let scale = BigInt::from(1) << bits;
    Enclosure {
        lo: Rational::new(value.lo, scale.clone()),
        hi: Rational::new(value.hi, scale),
    }
}

/// Sign of `a`, refining precision from 128 bits up to the cap.
pub(crate) fn certified_sign(a: &TowerElem) -> Result<Ordering, FieldError> {
    if a.is_zero() {
        return Ok(Ordering::Equal);
    }
    if let Some(q) = a.as_rational() {
        return Ok(q.cmp(&Rational::zero()));
    }
    let mut bits = SIGN_START_BITS;
    loop {
        if let Some(sign) = eval_numeric(a, bits).sign() {
            return Ok(sign);
        }
        if bits >= SIGN_MAX_BITS {
            return Err(FieldError::Inconclusive { bits });
        }
        bits *= 2;
    }
}
