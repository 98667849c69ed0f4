//! Orthogonal 3×3 matrices of rotations, reflections and rotoreflections.
//!
//! The direct problem builds the matrix of an isometry from its axis and
//! angle; the inverse problem ([`isometry::classify`]) recovers the kind,
//! the canonical axis and the signed angle from an orthogonal matrix.
//! Everything is generic over [`Scalar`], implemented for `f64` and for
//! exact elements of quadratic towers ([`qfield::TowerElem`]).

pub mod cli;
pub mod isometry;
pub mod linalg3;
pub mod qfield;
pub mod scalar;

pub use isometry::{
    classify, complete_orthonormal_basis, cross_matrix, invariant_report, projection_matrix,
    reflection_matrix, rotation_matrix, rotoreflection_matrix, AngleRep, AxisAngle, Decomposition,
    InvariantReport, IsometryError, IsometryKind, UnitAxis,
};
pub use linalg3::{cross, dot, Mat3, Vec3};
pub use qfield::{FieldError, TowerElem, TowerField};
pub use scalar::{Scalar, DEFAULT_TOLERANCE};
