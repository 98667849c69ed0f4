//! Tower fields and their elements.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::interval;
use super::FieldError;

/// Reduced fraction with positive denominator.
pub type Rational = BigRational;

#[derive(Clone, Debug)]
pub(crate) struct Level {
    /// Element of the field below, `2^index` coefficients.
    pub(crate) radicand: Vec<Rational>,
    pub(crate) root_approx: f64,
}

/// An append-only chain of quadratic adjunctions over `Q`.
///
/// Towers are identified by value: two towers with the same radicand list
/// are the same field, wherever they were built.
#[derive(Clone)]
pub struct TowerField {
    levels: Arc<Vec<Level>>,
}

impl TowerField {
    /// The base field `Q`.
    pub fn rationals() -> Self {
        TowerField {
            levels: Arc::new(Vec::new()),
        }
    }

    pub fn depth(&self) -> usize {
        self.levels.len()
    }

    /// Dimension over `Q`, i.e. the number of coefficients of an element.
    pub fn degree(&self) -> usize {
        1 << self.depth()
    }

    pub(crate) fn levels(&self) -> &[Level] {
        &self.levels
    }

    /// Radicand of level `i`, as an element of the field below that level.
    pub fn radicand(&self, i: usize) -> TowerElem {
        TowerElem {
            field: self.prefix(i),
            coeffs: self.levels[i].radicand.clone(),
        }
    }

    pub fn radicands(&self) -> Vec<TowerElem> {
        (0..self.depth()).map(|i| self.radicand(i)).collect()
    }

    /// Floating-point value of the generator `√d_i`, cached at adjunction.
    pub fn root_approx(&self, i: usize) -> f64 {
        self.levels[i].root_approx
    }

    /// The generator `√d_i` as an element of this field.
    pub fn generator(&self, i: usize) -> TowerElem {
        assert!(i < self.depth(), "generator index out of range");
        let mut coeffs = vec![Rational::zero(); self.degree()];
        coeffs[1 << i] = Rational::one();
        TowerElem {
            field: self.clone(),
            coeffs,
        }
    }

    /// The subfield made of the first `depth` levels.
    pub fn prefix(&self, depth: usize) -> TowerField {
        assert!(depth <= self.depth());
        if depth == self.depth() {
            return self.clone();
        }
        TowerField {
            levels: Arc::new(self.levels[..depth].to_vec()),
        }
    }

    /// True when `self` is an initial segment of `other` (or equal to it).
    pub fn is_prefix_of(&self, other: &TowerField) -> bool {
        if Arc::ptr_eq(&self.levels, &other.levels) {
            return true;
        }
        self.depth() <= other.depth()
            && self
                .levels
                .iter()
                .zip(other.levels.iter())
                .all(|(a, b)| a.radicand == b.radicand)
    }

    fn extended(&self, radicand: Vec<Rational>, root_approx: f64) -> TowerField {
        let mut levels = self.levels.as_ref().clone();
        levels.push(Level {
            radicand,
            root_approx,
        });
        TowerField {
            levels: Arc::new(levels),
        }
    }

    /// A tower containing both fields.
    ///
    /// Nested towers join to the longer one. Otherwise `other`'s radicands
    /// are adjoined to `self` in order; levels whose roots already exist
    /// (such as `√6` over `Q(√2, √3)`) add nothing.
    pub fn join(&self, other: &TowerField) -> Result<TowerField, FieldError> {
        if self.is_prefix_of(other) {
            return Ok(other.clone());
        }
        if other.is_prefix_of(self) {
            return Ok(self.clone());
        }
        let mut field = self.clone();
        let mut images: Vec<TowerElem> = Vec::with_capacity(other.depth());
        for level in other.levels.iter() {
            let radicand = evaluate(&level.radicand, &images)?;
            let (extended, root) = tower_sqrt(&field, &radicand)?;
            field = extended;
            images.push(root);
        }
        Ok(field)
    }

    /// Images of this tower's generators inside `target`, or
    /// `IncompatibleTowers` when some generator has no root there.
    fn generator_images(&self, target: &TowerField) -> Result<Vec<TowerElem>, FieldError> {
        let mut images: Vec<TowerElem> = Vec::with_capacity(self.depth());
        for level in self.levels.iter() {
            let radicand = evaluate(&level.radicand, &images)?.lift(target)?;
            let root = sqrt_exact(target.levels(), &radicand.coeffs)
                .ok_or(FieldError::IncompatibleTowers)?;
            let root = TowerElem {
                field: target.clone(),
                coeffs: root,
            };
            images.push(root.abs()?);
        }
        Ok(images)
    }
}

/// `Σ c_mask · Π_{i ∈ mask} images[i]`, the value of a coefficient vector
/// once each generator is replaced by its image.
fn evaluate(coeffs: &[Rational], images: &[TowerElem]) -> Result<TowerElem, FieldError> {
    if coeffs.len() == 1 {
        return Ok(TowerElem::from_rational(coeffs[0].clone()));
    }
    let half = coeffs.len() / 2;
    let a = evaluate(&coeffs[..half], images)?;
    if is_zero_slice(&coeffs[half..]) {
        return Ok(a);
    }
    let b = evaluate(&coeffs[half..], images)?;
    a.checked_add(&b.checked_mul(&images[level_of(coeffs.len()) - 1])?)
}

impl PartialEq for TowerField {
    fn eq(&self, other: &Self) -> bool {
        self.depth() == other.depth() && self.is_prefix_of(other)
    }
}

impl Eq for TowerField {}

impl fmt::Debug for TowerField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let radicands: Vec<String> = self.radicands().iter().map(|r| r.to_string()).collect();
        write!(f, "TowerField[{}]", radicands.join(", "))
    }
}

/// An element `a + b·√d` of a tower, stored as a flat coefficient vector.
#[derive(Clone)]
pub struct TowerElem {
    field: TowerField,
    coeffs: Vec<Rational>,
}

impl TowerElem {
    pub fn from_rational(q: Rational) -> Self {
        TowerElem {
            field: TowerField::rationals(),
            coeffs: vec![q],
        }
    }

    pub fn from_int(n: i64) -> Self {
        Self::from_rational(Rational::from_integer(BigInt::from(n)))
    }

    /// # Panics
    /// If `den` is zero.
    pub fn from_ratio(num: i64, den: i64) -> Self {
        Self::from_rational(Rational::new(BigInt::from(num), BigInt::from(den)))
    }

    pub fn zero() -> Self {
        Self::from_int(0)
    }

    pub fn one() -> Self {
        Self::from_int(1)
    }

    /// Builds an element from its coefficients, indexed by generator bitmask.
    ///
    /// # Panics
    /// If `coeffs.len()` differs from `field.degree()`.
    pub fn from_coefficients(field: &TowerField, coeffs: Vec<Rational>) -> Self {
        assert_eq!(
            coeffs.len(),
            field.degree(),
            "coefficient count must match the tower degree"
        );
        TowerElem {
            field: field.clone(),
            coeffs,
        }
    }

    pub fn field(&self) -> &TowerField {
        &self.field
    }

    pub fn coefficients(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        is_zero_slice(&self.coeffs)
    }

    /// The rational value, when the element lies in `Q`.
    pub fn as_rational(&self) -> Option<&Rational> {
        if is_zero_slice(&self.coeffs[1..]) {
            Some(&self.coeffs[0])
        } else {
            None
        }
    }

    /// Embeds the element into `field`, which must contain the roots of all
    /// of this element's radicands (a longer tower, or any tower built by
    /// [`TowerField::join`]).
    pub fn lift(&self, field: &TowerField) -> Result<TowerElem, FieldError> {
        if self.field.is_prefix_of(field) {
            return Ok(TowerElem {
                field: field.clone(),
                coeffs: padded(&self.coeffs, field.degree()),
            });
        }
        let images = self.field.generator_images(field)?;
        evaluate(&self.coeffs, &images)?.lift(field)
    }

    fn aligned(
        &self,
        rhs: &TowerElem,
    ) -> Result<(TowerField, Vec<Rational>, Vec<Rational>), FieldError> {
        let field = self.field.join(&rhs.field)?;
        let x = self.lift(&field)?.coeffs;
        let y = rhs.lift(&field)?.coeffs;
        Ok((field, x, y))
    }

    pub fn checked_add(&self, rhs: &TowerElem) -> Result<TowerElem, FieldError> {
        let (field, x, y) = self.aligned(rhs)?;
        Ok(TowerElem {
            field,
            coeffs: add_slices(&x, &y),
        })
    }

    pub fn checked_sub(&self, rhs: &TowerElem) -> Result<TowerElem, FieldError> {
        let (field, x, y) = self.aligned(rhs)?;
        Ok(TowerElem {
            field,
            coeffs: sub_slices(&x, &y),
        })
    }

    pub fn checked_mul(&self, rhs: &TowerElem) -> Result<TowerElem, FieldError> {
        let (field, x, y) = self.aligned(rhs)?;
        let coeffs = mul_slices(field.levels(), &x, &y);
        Ok(TowerElem { field, coeffs })
    }

    pub fn checked_div(&self, rhs: &TowerElem) -> Result<TowerElem, FieldError> {
        let inv = rhs.inv()?;
        self.checked_mul(&inv)
    }

    /// Multiplicative inverse by repeated rationalization of the denominator.
    pub fn inv(&self) -> Result<TowerElem, FieldError> {
        Ok(TowerElem {
            field: self.field.clone(),
            coeffs: inv_slice(self.field.levels(), &self.coeffs)?,
        })
    }

    /// Positive square root, adjoining a level when the value is not a square.
    pub fn sqrt(&self) -> Result<TowerElem, FieldError> {
        tower_sqrt(&self.field, self).map(|(_, root)| root)
    }

    /// Certified sign of the real value.
    pub fn sign(&self) -> Result<Ordering, FieldError> {
        interval::certified_sign(self)
    }

    pub fn abs(&self) -> Result<TowerElem, FieldError> {
        Ok(match self.sign()? {
            Ordering::Less => -self,
            _ => self.clone(),
        })
    }

    /// Midpoint of a 128-bit enclosure, rounded to `f64`.
    pub fn to_f64(&self) -> f64 {
        interval::eval_numeric(self, super::SIGN_START_BITS).midpoint()
    }
}

impl PartialEq for TowerElem {
    fn eq(&self, other: &Self) -> bool {
        match self.aligned(other) {
            Ok((_, x, y)) => x == y,
            Err(_) => false,
        }
    }
}

impl Eq for TowerElem {}

impl fmt::Debug for TowerElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "TowerElem({} in {:?})", self, self.field)
    }
}

impl Neg for &TowerElem {
    type Output = TowerElem;
    fn neg(self) -> TowerElem {
        TowerElem {
            field: self.field.clone(),
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }
}

impl Neg for TowerElem {
    type Output = TowerElem;
    fn neg(self) -> TowerElem {
        -&self
    }
}

macro_rules! forward_binop {
    ($Trait:ident, $method:ident, $checked:ident, $msg:expr) => {
        impl $Trait<&TowerElem> for &TowerElem {
            type Output = TowerElem;
            fn $method(self, rhs: &TowerElem) -> TowerElem {
                self.$checked(rhs).expect($msg)
            }
        }
        impl $Trait<TowerElem> for TowerElem {
            type Output = TowerElem;
            fn $method(self, rhs: TowerElem) -> TowerElem {
                (&self).$method(&rhs)
            }
        }
        impl $Trait<&TowerElem> for TowerElem {
            type Output = TowerElem;
            fn $method(self, rhs: &TowerElem) -> TowerElem {
                (&self).$method(rhs)
            }
        }
        impl $Trait<TowerElem> for &TowerElem {
            type Output = TowerElem;
            fn $method(self, rhs: TowerElem) -> TowerElem {
                self.$method(&rhs)
            }
        }
    };
}

// The operator forms panic where the checked forms return an error.
forward_binop!(Add, add, checked_add, "tower join failed");
forward_binop!(Sub, sub, checked_sub, "tower join failed");
forward_binop!(Mul, mul, checked_mul, "tower join failed");
forward_binop!(
    Div,
    div,
    checked_div,
    "division by zero or tower join failed"
);

/// Square root of `a` over `field`, returning the (possibly extended) field.
///
/// When `a` is already a square in the joined field, the field is returned
/// unchanged together with the positive root. Otherwise a new level is
/// appended whose radicand is `a` up to a square factor, and the root is
/// expressed in the extension.
pub fn tower_sqrt(
    field: &TowerField,
    a: &TowerElem,
) -> Result<(TowerField, TowerElem), FieldError> {
    let field = field.join(&a.field)?;
    let a = a.lift(&field)?;
    if a.is_zero() {
        return Ok((field, a));
    }
    if a.sign()? == Ordering::Less {
        return Err(FieldError::NegativeRadicand);
    }
    if let Some(root) = sqrt_exact(field.levels(), &a.coeffs) {
        let root = TowerElem {
            field: field.clone(),
            coeffs: root,
        };
        return Ok((field, root.abs()?));
    }

    let radicand = normalize_radicand(field.levels(), &a.coeffs)?;
    let approx = TowerElem {
        field: field.clone(),
        coeffs: radicand.clone(),
    }
    .to_f64()
    .sqrt();
    let extended = field.extended(radicand, approx);
    let lifted = a.lift(&extended)?;
    let root = sqrt_exact(extended.levels(), &lifted.coeffs).ok_or(FieldError::InvalidTower)?;
    let root = TowerElem {
        field: extended.clone(),
        coeffs: root,
    };
    Ok((extended, root.abs()?))
}

fn padded(coeffs: &[Rational], n: usize) -> Vec<Rational> {
    let mut out = Vec::with_capacity(n);
    out.extend_from_slice(coeffs);
    out.resize(n, Rational::zero());
    out
}

fn is_zero_slice(x: &[Rational]) -> bool {
    x.iter().all(Zero::is_zero)
}

fn level_of(len: usize) -> usize {
    debug_assert!(len.is_power_of_two());
    len.trailing_zeros() as usize
}

fn add_slices(x: &[Rational], y: &[Rational]) -> Vec<Rational> {
    x.iter().zip(y).map(|(a, b)| a + b).collect()
}

fn sub_slices(x: &[Rational], y: &[Rational]) -> Vec<Rational> {
    x.iter().zip(y).map(|(a, b)| a - b).collect()
}

fn neg_slice(x: &[Rational]) -> Vec<Rational> {
    x.iter().map(|a| -a).collect()
}

fn scale_slice(x: &[Rational], q: &Rational) -> Vec<Rational> {
    x.iter().map(|a| a * q).collect()
}

/// `(a1 + b1√d)(a2 + b2√d) = (a1a2 + b1b2·d) + (a1b2 + a2b1)√d`, recursively.
pub(crate) fn mul_slices(levels: &[Level], x: &[Rational], y: &[Rational]) -> Vec<Rational> {
    debug_assert_eq!(x.len(), y.len());
    let n = x.len();
    if n == 1 {
        return vec![&x[0] * &y[0]];
    }
    if is_zero_slice(x) || is_zero_slice(y) {
        return vec![Rational::zero(); n];
    }
    let half = n / 2;
    let (a1, b1) = x.split_at(half);
    let (a2, b2) = y.split_at(half);
    let d = &levels[level_of(n) - 1].radicand;

    let mut lo = mul_slices(levels, a1, a2);
    let b1b2 = mul_slices(levels, b1, b2);
    if !is_zero_slice(&b1b2) {
        lo = add_slices(&lo, &mul_slices(levels, d, &b1b2));
    }
    let hi = add_slices(&mul_slices(levels, a1, b2), &mul_slices(levels, a2, b1));
    lo.extend(hi);
    lo
}

/// `(a + b√d)⁻¹ = (a − b√d) / (a² − b²d)`, recursing on the norm.
pub(crate) fn inv_slice(levels: &[Level], x: &[Rational]) -> Result<Vec<Rational>, FieldError> {
    if is_zero_slice(x) {
        return Err(FieldError::DivisionByZero);
    }
    let n = x.len();
    if n == 1 {
        return Ok(vec![x[0].recip()]);
    }
    let half = n / 2;
    let (a, b) = x.split_at(half);
    if is_zero_slice(b) {
        let mut out = inv_slice(levels, a)?;
        out.resize(n, Rational::zero());
        return Ok(out);
    }
    let d = &levels[level_of(n) - 1].radicand;
    let bb = mul_slices(levels, b, b);
    let norm = sub_slices(&mul_slices(levels, a, a), &mul_slices(levels, d, &bb));
    if is_zero_slice(&norm) {
        return Err(FieldError::InvalidTower);
    }
    let norm_inv = inv_slice(levels, &norm)?;
    let mut out = mul_slices(levels, a, &norm_inv);
    out.extend(neg_slice(&mul_slices(levels, b, &norm_inv)));
    Ok(out)
}

pub(crate) fn rational_sqrt(q: &Rational) -> Option<Rational> {
    if q.is_negative() {
        return None;
    }
    let n = q.numer().sqrt();
    let d = q.denom().sqrt();
    if &(&n * &n) == q.numer() && &(&d * &d) == q.denom() {
        Some(Rational::new(n, d))
    } else {
        None
    }
}

/// Some square root of `y` inside the field, if one exists.
///
/// Writing `y = a + b√d` and a root `s + t√d`, the equations
/// `s² + t²d = a`, `2st = b` give `s² = (a ± √(a² − b²d)) / 2`, so the
/// search recurses on the conjugate norm and on both candidates for `s²`.
/// The returned root may have either sign.
pub(crate) fn sqrt_exact(levels: &[Level], y: &[Rational]) -> Option<Vec<Rational>> {
    let n = y.len();
    if n == 1 {
        return rational_sqrt(&y[0]).map(|r| vec![r]);
    }
    if is_zero_slice(y) {
        return Some(vec![Rational::zero(); n]);
    }
    let half = n / 2;
    let (a, b) = y.split_at(half);
    let d = &levels[level_of(n) - 1].radicand;
    let zeros = vec![Rational::zero(); half];

    if is_zero_slice(b) {
        if let Some(s) = sqrt_exact(levels, a) {
            return Some([s, zeros].concat());
        }
        // a = t²·d
        let d_inv = inv_slice(levels, d).ok()?;
        let t = sqrt_exact(levels, &mul_slices(levels, a, &d_inv))?;
        return Some([zeros, t].concat());
    }

    let bb = mul_slices(levels, b, b);
    let norm = sub_slices(&mul_slices(levels, a, a), &mul_slices(levels, d, &bb));
    let rho = sqrt_exact(levels, &norm)?;
    let half_q = Rational::new(BigInt::one(), BigInt::from(2));
    for cand in [add_slices(a, &rho), sub_slices(a, &rho)] {
        let s_sq = scale_slice(&cand, &half_q);
        if is_zero_slice(&s_sq) {
            continue;
        }
        if let Some(s) = sqrt_exact(levels, &s_sq) {
            let two_s_inv = inv_slice(
                levels,
                &scale_slice(&s, &Rational::from_integer(BigInt::from(2))),
            )
            .ok()?;
            let t = mul_slices(levels, b, &two_s_inv);
            return Some([s, t].concat());
        }
    }
    None
}

/// Largest square factor removed by trial division with bases up to this bound.
const SQUARE_TRIAL_LIMIT: u32 = 1000;

/// Returns the part of `h > 0` left after removing square factors found by
/// trial division (and the whole cofactor if it is itself a perfect square).
fn strip_squares(h: &BigInt) -> BigInt {
    let mut rest = h.clone();
    let mut kept = BigInt::one();
    for base in 2..=SQUARE_TRIAL_LIMIT {
        let base = BigInt::from(base);
        if &base * &base > rest {
            break;
        }
        let sq = &base * &base;
        while rest.is_multiple_of(&sq) {
            rest /= &sq;
        }
        if rest.is_multiple_of(&base) {
            rest /= &base;
            kept *= &base;
        }
    }
    let root = rest.sqrt();
    if &root * &root == rest {
        kept
    } else {
        kept * rest
    }
}

/// Positive rational-square multiple of `y` with coprime integer coefficients
/// and square-stripped content.
fn content_normalize(y: &[Rational]) -> Vec<Rational> {
    let lcm = y.iter().fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
    let ints: Vec<BigInt> = y.iter().map(|c| c.numer() * (&lcm / c.denom())).collect();
    let gcd = ints
        .iter()
        .filter(|v| !v.is_zero())
        .fold(BigInt::zero(), |acc, v| acc.gcd(v));
    if gcd.is_zero() {
        return y.to_vec();
    }
    let factor = strip_squares(&(&gcd * &lcm));
    ints.iter()
        .map(|v| Rational::from_integer(v / &gcd * &factor))
        .collect()
}

fn coefficient_size(y: &[Rational]) -> u64 {
    y.iter()
        .filter(|c| !c.is_zero())
        .map(|c| c.numer().bits() + c.denom().bits())
        .sum()
}

/// Picks a small representative of the square class of `y`: rational square
/// content is removed, then `y` is divided by products of earlier radicands
/// (each a square in the field) while that shrinks the coefficients.
fn normalize_radicand(levels: &[Level], y: &[Rational]) -> Result<Vec<Rational>, FieldError> {
    let n = y.len();
    let k = level_of(n);
    let mut products: Vec<Vec<Rational>> = vec![padded(&[Rational::one()], n)];
    for mask in 1usize..(1 << k) {
        let low = mask.trailing_zeros() as usize;
        let rest = &products[mask & (mask - 1)];
        let radicand = padded(&levels[low].radicand, n);
        products.push(mul_slices(levels, rest, &radicand));
    }
    let inverses = products[1..]
        .iter()
        .map(|p| inv_slice(levels, p))
        .collect::<Result<Vec<_>, _>>()?;

    let mut current = content_normalize(y);
    loop {
        let mut best: Option<(u64, Vec<Rational>)> = None;
        let current_size = coefficient_size(&current);
        for inv in &inverses {
            let cand = content_normalize(&mul_slices(levels, &current, inv));
            let size = coefficient_size(&cand);
            if size < best.as_ref().map_or(current_size, |b| b.0) {
                best = Some((size, cand));
            }
        }
        match best {
            Some((_, cand)) => current = cand,
            None => return Ok(current),
        }
    }
}
