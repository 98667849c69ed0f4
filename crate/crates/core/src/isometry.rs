//! Rotations, reflections and rotoreflections about a line through the origin.
//!
//! For a unit axis `u = (a, b, c)ᵗ` with projector `A = u·uᵗ` and cross
//! matrix `B` (`B·v = u ∧ v`):
//!
//! ```text
//! R  = I + sin α·B + (cos α − 1)(I − A)      rotation by α about u
//! S  = I − 2A                                reflection in the plane u⊥
//! SR = S + sin α·B + (cos α − 1)(I − A)      rotoreflection, SR = RS
//! ```
//!
//! [`classify`] inverts these: it reads `cos α` from the trace, the vector
//! `sin α·u` from the antisymmetric part `(M − Mᵗ)/2`, and so recovers the
//! sign of `sin α` without any two-branch `arccos` guess.

use std::cmp::Ordering;
use std::fmt;

use thiserror::Error;

use crate::linalg3::{cross, dot, Mat3, Vec3};
use crate::qfield::FieldError;
use crate::scalar::Scalar;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum IsometryError {
    #[error("axis is not a unit vector")]
    NonUnitAxis,
    #[error("zero axis vector")]
    ZeroAxis,
    #[error("invalid angle: cos² + sin² ≠ 1")]
    InvalidAngle,
    #[error("matrix is not orthogonal (residual {residual:e})")]
    NotOrthogonal { residual: f64 },
    #[error(transparent)]
    Field(#[from] FieldError),
}

/// A unit vector spanning the axis line `E`; its orthogonal plane is
/// `H: ax + by + cz = 0`.
#[derive(Clone, Debug, PartialEq)]
pub struct UnitAxis<S> {
    u: Vec3<S>,
}

impl<S: Scalar> UnitAxis<S> {
    /// Accepts `u` when `a² + b² + c² = 1` (exactly, or within `tol` for floats).
    pub fn new(u: Vec3<S>, tol: f64) -> Result<Self, IsometryError> {
        let deviation = u.norm_squared() - S::one();
        if deviation.is_zero_within(tol)? {
            Ok(UnitAxis { u })
        } else {
            Err(IsometryError::NonUnitAxis)
        }
    }

    /// Divides `v` by its length. In the exact backend this may adjoin a
    /// square root to the tower.
    pub fn normalize(v: Vec3<S>, tol: f64) -> Result<Self, IsometryError> {
        let n2 = v.norm_squared();
        if n2.is_zero_within(tol * tol)? {
            return Err(IsometryError::ZeroAxis);
        }
        let n = n2.try_sqrt()?;
        Ok(UnitAxis { u: v.try_div(&n)? })
    }

    pub(crate) fn new_unchecked(u: Vec3<S>) -> Self {
        UnitAxis { u }
    }

    pub fn a(&self) -> &S {
        &self.u.x
    }

    pub fn b(&self) -> &S {
        &self.u.y
    }

    pub fn c(&self) -> &S {
        &self.u.z
    }

    pub fn as_vec(&self) -> &Vec3<S> {
        &self.u
    }

    pub fn into_vec(self) -> Vec3<S> {
        self.u
    }

    pub fn negated(&self) -> Self {
        UnitAxis { u: -self.u.clone() }
    }

    /// True when the first component that is nonzero (within `tol`) is negative.
    pub fn points_backward(&self, tol: f64) -> Result<bool, FieldError> {
        for c in [&self.u.x, &self.u.y, &self.u.z] {
            match c.sign(tol)? {
                Ordering::Equal => continue,
                Ordering::Less => return Ok(true),
                Ordering::Greater => return Ok(false),
            }
        }
        Ok(false)
    }
}

/// The pair `(cos α, sin α)`.
#[derive(Clone, Debug, PartialEq)]
pub struct AngleRep<S> {
    cos: S,
    sin: S,
}

impl<S: Scalar> AngleRep<S> {
    pub fn new(cos: S, sin: S, tol: f64) -> Result<Self, IsometryError> {
        let deviation = cos.clone() * cos.clone() + sin.clone() * sin.clone() - S::one();
        if deviation.is_zero_within(tol)? {
            Ok(AngleRep { cos, sin })
        } else {
            Err(IsometryError::InvalidAngle)
        }
    }

    pub(crate) fn new_unchecked(cos: S, sin: S) -> Self {
        AngleRep { cos, sin }
    }

    /// α = 0.
    pub fn zero() -> Self {
        AngleRep {
            cos: S::one(),
            sin: S::zero(),
        }
    }

    /// α = π.
    pub fn half_turn() -> Self {
        AngleRep {
            cos: S::from_int(-1),
            sin: S::zero(),
        }
    }

    pub fn cos(&self) -> &S {
        &self.cos
    }

    pub fn sin(&self) -> &S {
        &self.sin
    }

    /// The opposite angle `2π − α`.
    pub fn inverse(&self) -> Self {
        AngleRep {
            cos: self.cos.clone(),
            sin: -self.sin.clone(),
        }
    }

    /// α in degrees, normalized to `[0, 360)`.
    pub fn degrees(&self) -> f64 {
        let mut d = self.sin.to_f64().atan2(self.cos.to_f64()).to_degrees();
        if d < 0.0 {
            d += 360.0;
        }
        if d >= 360.0 {
            d -= 360.0;
        }
        d + 0.0
    }
}

impl AngleRep<f64> {
    pub fn from_radians(alpha: f64) -> Self {
        let (sin, cos) = alpha.sin_cos();
        AngleRep { cos, sin }
    }

    pub fn from_degrees(alpha: f64) -> Self {
        // exact values at multiples of 90° keep the trivial cases exact
        let reduced = alpha.rem_euclid(360.0);
        match reduced {
            r if r == 0.0 => AngleRep { cos: 1.0, sin: 0.0 },
            r if r == 90.0 => AngleRep { cos: 0.0, sin: 1.0 },
            r if r == 180.0 => AngleRep {
                cos: -1.0,
                sin: 0.0,
            },
            r if r == 270.0 => AngleRep {
                cos: 0.0,
                sin: -1.0,
            },
            r => Self::from_radians(r.to_radians()),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct AxisAngle<S> {
    pub axis: UnitAxis<S>,
    pub angle: AngleRep<S>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum IsometryKind {
    Identity,
    Rotation,
    Reflection,
    Rotoreflection,
    PointInversion,
}

impl IsometryKind {
    pub fn name(self) -> &'static str {
        match self {
            IsometryKind::Identity => "Identity",
            IsometryKind::Rotation => "Rotation",
            IsometryKind::Reflection => "Reflection",
            IsometryKind::Rotoreflection => "Rotoreflection",
            IsometryKind::PointInversion => "PointInversion",
        }
    }
}

impl fmt::Display for IsometryKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Result of [`classify`].
///
/// `Identity` carries neither axis nor angle; `PointInversion` carries the
/// angle `(−1, 0)` and no axis, since `−I` is the half-turn rotoreflection
/// about every axis.
#[derive(Clone, Debug, PartialEq)]
pub struct Decomposition<S> {
    pub kind: IsometryKind,
    pub axis: Option<UnitAxis<S>>,
    pub angle: Option<AngleRep<S>>,
    pub determinant: S,
    pub orthogonality_residual: f64,
}

impl<S: Scalar> Decomposition<S> {
    pub fn axis_angle(&self) -> Option<AxisAngle<S>> {
        match (&self.axis, &self.angle) {
            (Some(axis), Some(angle)) => Some(AxisAngle {
                axis: axis.clone(),
                angle: angle.clone(),
            }),
            _ => None,
        }
    }

    pub fn angle_degrees(&self) -> Option<f64> {
        self.angle.as_ref().map(AngleRep::degrees)
    }

    /// Rebuilds the matrix from the geometric elements.
    pub fn rebuild(&self) -> Mat3<S> {
        let axis = || {
            self.axis
                .as_ref()
                .expect("decomposition kind carries an axis")
        };
        let angle = || {
            self.angle
                .as_ref()
                .expect("decomposition kind carries an angle")
        };
        match self.kind {
            IsometryKind::Identity => Mat3::identity(),
            IsometryKind::PointInversion => -Mat3::identity(),
            IsometryKind::Rotation => rotation_matrix(axis(), angle()),
            IsometryKind::Reflection => reflection_matrix(axis()),
            IsometryKind::Rotoreflection => rotoreflection_matrix(axis(), angle()),
        }
    }
}

/// `A = u·uᵗ`, the orthogonal projection onto the axis line.
pub fn projection_matrix<S: Scalar>(u: &UnitAxis<S>) -> Mat3<S> {
    Mat3::outer(&u.u, &u.u)
}

/// `B` with `B·v = u ∧ v`.
pub fn cross_matrix<S: Scalar>(u: &UnitAxis<S>) -> Mat3<S> {
    let (a, b, c) = (u.a().clone(), u.b().clone(), u.c().clone());
    Mat3::from_rows([
        [S::zero(), -c.clone(), b.clone()],
        [c, S::zero(), -a.clone()],
        [-b, a, S::zero()],
    ])
}

fn angular_part<S: Scalar>(u: &UnitAxis<S>, angle: &AngleRep<S>) -> Mat3<S> {
    let b = cross_matrix(u);
    let complement = Mat3::identity() - projection_matrix(u);
    b.scale(&angle.sin) + complement.scale(&(angle.cos.clone() - S::one()))
}

/// `R = I + sin α·B + (cos α − 1)(I − A)`.
///
/// With `u = e₃` and α = 90° this is `[[0,−1,0],[1,0,0],[0,0,1]]`: positive
/// angles turn `e₁` towards `e₂`.
pub fn rotation_matrix<S: Scalar>(u: &UnitAxis<S>, angle: &AngleRep<S>) -> Mat3<S> {
    Mat3::identity() + angular_part(u, angle)
}

/// `S = I − 2A`, the reflection in the plane orthogonal to `u`.
pub fn reflection_matrix<S: Scalar>(u: &UnitAxis<S>) -> Mat3<S> {
    Mat3::identity() - projection_matrix(u).scale(&S::from_int(2))
}

/// `SR = S + sin α·B + (cos α − 1)(I − A)`.
pub fn rotoreflection_matrix<S: Scalar>(u: &UnitAxis<S>, angle: &AngleRep<S>) -> Mat3<S> {
    reflection_matrix(u) + angular_part(u, angle)
}

/// Vectors `v, w` with `{u, v, w}` a right-handed orthonormal basis and
/// `w = u ∧ v`.
///
/// Off the poles `v = (−b, a, 0)/h` with `h = √(a² + b²)`; for `u = (0, 0, ±1)`
/// the choice is `v = e₁`.
pub fn complete_orthonormal_basis<S: Scalar>(
    u: &UnitAxis<S>,
) -> Result<(Vec3<S>, Vec3<S>), FieldError> {
    let (a, b) = (u.a().clone(), u.b().clone());
    let h2 = a.clone() * a.clone() + b.clone() * b.clone();
    let v = if h2.is_zero_within(0.0)? {
        Vec3::basis(0)
    } else {
        let h = h2.try_sqrt()?;
        Vec3::new((-b).try_div(&h)?, a.try_div(&h)?, S::zero())
    };
    let w = cross(&u.u, &v);
    Ok((v, w))
}

/// Determinant, trace and orthogonality residual, without classifying.
#[derive(Clone, Debug, PartialEq)]
pub struct InvariantReport<S> {
    pub det: S,
    pub trace: S,
    /// `max |(MᵗM − I)ᵢⱼ|`.
    pub orthogonality_residual: f64,
}

pub fn invariant_report<S: Scalar>(m: &Mat3<S>) -> InvariantReport<S> {
    let gram = m.transpose().matmul(m) - Mat3::identity();
    InvariantReport {
        det: m.det(),
        trace: m.trace(),
        orthogonality_residual: gram.max_abs(),
    }
}

/// Unit axis from a rank-1 projector `A = u·uᵗ`: its largest column
/// (first one on ties) divided by its length.
fn axis_from_projector<S: Scalar>(a: &Mat3<S>) -> Result<UnitAxis<S>, FieldError> {
    let mut best = 0;
    for j in 1..3 {
        if a[(j, j)].to_f64() > a[(best, best)].to_f64() {
            best = j;
        }
    }
    // |column j| = |u_j| = √A_jj
    let norm = a[(best, best)].try_sqrt()?;
    Ok(UnitAxis::new_unchecked(a.column(best).try_div(&norm)?))
}

/// Decomposes an orthogonal matrix into its kind, canonical axis and angle.
///
/// `tol` bounds the orthogonality residual and the float zero tests; the
/// exact backend requires exact orthogonality and ignores it. The axis is
/// reported with its first nonzero component positive, `(cos α, sin α)`
/// adjusted to match (flipping `u` negates `sin α`). In the exact backend
/// the result may live in a tower extended by one square root.
pub fn classify<S: Scalar>(m: &Mat3<S>, tol: f64) -> Result<Decomposition<S>, IsometryError> {
    let m = m.unified()?;
    let InvariantReport {
        det,
        trace,
        orthogonality_residual,
    } = invariant_report(&m);

    let orthogonal = if S::EXACT {
        let gram = m.transpose().matmul(&m) - Mat3::identity();
        let mut exact_zero = true;
        for e in gram.entries() {
            exact_zero &= e.is_zero_within(0.0)?;
        }
        exact_zero
    } else {
        orthogonality_residual <= tol
    };
    if !orthogonal {
        return Err(IsometryError::NotOrthogonal {
            residual: orthogonality_residual,
        });
    }

    let proper = match det.sign(tol)? {
        Ordering::Greater => true,
        Ordering::Less => false,
        Ordering::Equal => {
            return Err(IsometryError::NotOrthogonal {
                residual: orthogonality_residual,
            })
        }
    };
    let d = S::from_int(if proper { 1 } else { -1 });
    let cos = (trace - d.clone()).half().clamp_unit();

    let mt = m.transpose();
    let k = (m.clone() - mt.clone()).map(Scalar::half);
    let sin_axis = Vec3::new(k[(2, 1)].clone(), k[(0, 2)].clone(), k[(1, 0)].clone());

    let finish = |kind, axis: Option<UnitAxis<S>>, angle: Option<AngleRep<S>>| Decomposition {
        kind,
        axis,
        angle,
        determinant: d.clone(),
        orthogonality_residual,
    };

    let mut degenerate = true;
    for c in sin_axis.to_array() {
        degenerate &= c.is_zero_within(tol)?;
    }
    if degenerate {
        let cos_positive = cos.sign(0.0)? == Ordering::Greater;
        return Ok(match (proper, cos_positive) {
            (true, true) => finish(IsometryKind::Identity, None, None),
            (false, false) => finish(
                IsometryKind::PointInversion,
                None,
                Some(AngleRep::half_turn()),
            ),
            (true, false) => {
                let projector = (m + Mat3::identity()).map(Scalar::half);
                let axis = canonical(axis_from_projector(&projector)?, tol)?;
                finish(
                    IsometryKind::Rotation,
                    Some(axis),
                    Some(AngleRep::half_turn()),
                )
            }
            (false, true) => {
                let projector = (Mat3::identity() - m).map(Scalar::half);
                let axis = canonical(axis_from_projector(&projector)?, tol)?;
                finish(IsometryKind::Reflection, Some(axis), Some(AngleRep::zero()))
            }
        });
    }

    let signed_cos = d.clone() * cos.clone();
    let (axis, sin) = if !S::EXACT && signed_cos.sign(0.0)? == Ordering::Less {
        // sym = d·cos·I + (1 − d·cos)·A for both determinants; well
        // conditioned exactly where sin α·u is small.
        let sym = (m + mt).map(Scalar::half);
        let scale = d.try_div(&(S::one() - signed_cos))?;
        let projector = (sym - Mat3::identity().scale(&cos)).scale(&scale);
        let axis = axis_from_projector(&projector)?;
        let sin = dot(axis.as_vec(), &sin_axis);
        (axis, sin)
    } else {
        let norm = sin_axis.norm_squared().try_sqrt()?;
        (UnitAxis::new_unchecked(sin_axis.try_div(&norm)?), norm)
    };

    let (axis, sin) = if axis.points_backward(tol)? {
        (axis.negated(), -sin)
    } else {
        (axis, sin)
    };
    let angle = if S::EXACT {
        AngleRep::new(cos, sin, 0.0)?
    } else {
        AngleRep::new_unchecked(cos, sin)
    };
    let kind = if proper {
        IsometryKind::Rotation
    } else {
        IsometryKind::Rotoreflection
    };
    Ok(finish(kind, Some(axis), Some(angle)))
}

fn canonical<S: Scalar>(axis: UnitAxis<S>, tol: f64) -> Result<UnitAxis<S>, FieldError> {
    Ok(if axis.points_backward(tol)? {
        axis.negated()
    } else {
        axis
    })
}
