//! C ABI for `ortho3`.
//!
//! Matrices cross the boundary as `double[9]` in row-major order. Every
//! fallible call returns an [`Ortho3Status`]; on failure a message is kept
//! per thread and can be read with [`ortho3_last_error`]. Panics never
//! unwind into C and are reported as `ORTHO3_STATUS_INTERNAL`.

use std::cell::RefCell;
use std::ffi::{c_char, c_int, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use ortho3::cli::{classify_document, CliError, MatrixDocument, Mode};
use ortho3::{
    classify, reflection_matrix, rotation_matrix, rotoreflection_matrix, AngleRep, Decomposition,
    IsometryError, IsometryKind, Mat3, UnitAxis, Vec3,
};

/// Result codes. Values 2 to 5 match the command-line exit codes.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Ortho3Status {
    Ok = 0,
    NullPointer = 1,
    Parse = 2,
    InvalidAngle = 3,
    NotOrthogonal = 4,
    Inconclusive = 5,
    ZeroAxis = 6,
    /// The decomposition has no axis or angle to report.
    Absent = 7,
    Internal = 8,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Ortho3Kind {
    Identity = 0,
    Rotation = 1,
    Reflection = 2,
    Rotoreflection = 3,
    PointInversion = 4,
}

impl From<IsometryKind> for Ortho3Kind {
    fn from(k: IsometryKind) -> Self {
        match k {
            IsometryKind::Identity => Ortho3Kind::Identity,
            IsometryKind::Rotation => Ortho3Kind::Rotation,
            IsometryKind::Reflection => Ortho3Kind::Reflection,
            IsometryKind::Rotoreflection => Ortho3Kind::Rotoreflection,
            IsometryKind::PointInversion => Ortho3Kind::PointInversion,
        }
    }
}

/// Opaque result of [`ortho3_classify`]; release with [`ortho3_decomposition_free`].
pub struct Ortho3Decomposition {
    inner: Decomposition<f64>,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(message: &str) {
    let text = CString::new(message.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = text);
}

struct Failure(Ortho3Status, String);

impl From<IsometryError> for Failure {
    fn from(e: IsometryError) -> Self {
        let status = match &e {
            IsometryError::ZeroAxis | IsometryError::NonUnitAxis => Ortho3Status::ZeroAxis,
            IsometryError::InvalidAngle => Ortho3Status::InvalidAngle,
            IsometryError::NotOrthogonal { .. } => Ortho3Status::NotOrthogonal,
            IsometryError::Field(ortho3::FieldError::Inconclusive { .. }) => {
                Ortho3Status::Inconclusive
            }
            IsometryError::Field(_) => Ortho3Status::Parse,
        };
        Failure(status, e.to_string())
    }
}

impl From<CliError> for Failure {
    fn from(e: CliError) -> Self {
        let status = match e.code {
            3 => Ortho3Status::InvalidAngle,
            4 => Ortho3Status::NotOrthogonal,
            5 => Ortho3Status::Inconclusive,
            _ => Ortho3Status::Parse,
        };
        Failure(status, e.message)
    }
}

fn null(what: &str) -> Failure {
    Failure(Ortho3Status::NullPointer, format!("{what} is null"))
}

/// Runs `f`, recording the error message and catching panics.
fn guard(f: impl FnOnce() -> Result<(), Failure>) -> Ortho3Status {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => {
            set_error("");
            Ortho3Status::Ok
        }
        Ok(Err(Failure(status, message))) => {
            set_error(&message);
            status
        }
        Err(_) => {
            set_error("internal error");
            Ortho3Status::Internal
        }
    }
}

unsafe fn read_axis(axis: *const f64, tol: f64) -> Result<UnitAxis<f64>, Failure> {
    if axis.is_null() {
        return Err(null("axis"));
    }
    let a = std::slice::from_raw_parts(axis, 3);
    if a.iter().any(|x| !x.is_finite()) {
        return Err(Failure(Ortho3Status::Parse, "axis is not finite".into()));
    }
    Ok(UnitAxis::normalize(Vec3::new(a[0], a[1], a[2]), tol)?)
}

unsafe fn write_matrix(m: &Mat3<f64>, out: *mut f64) -> Result<(), Failure> {
    if out.is_null() {
        return Err(null("out"));
    }
    let out = std::slice::from_raw_parts_mut(out, 9);
    for (slot, value) in out.iter_mut().zip(m.entries()) {
        *slot = *value;
    }
    Ok(())
}

/// Rotation by the angle with the given cosine and sine about `axis`
/// (normalized here; it need not be unit length).
///
/// # Safety
/// `axis` must point to 3 doubles and `out` to 9 writable doubles.
#[no_mangle]
pub unsafe extern "C" fn ortho3_rotation_matrix(
    axis: *const f64,
    cos_alpha: f64,
    sin_alpha: f64,
    tol: f64,
    out: *mut f64,
) -> Ortho3Status {
    guard(|| {
        let u = read_axis(axis, tol)?;
        let angle = AngleRep::new(cos_alpha, sin_alpha, tol)?;
        write_matrix(&rotation_matrix(&u, &angle), out)
    })
}

/// Reflection in the plane orthogonal to `normal`.
///
/// # Safety
/// `normal` must point to 3 doubles and `out` to 9 writable doubles.
#[no_mangle]
pub unsafe extern "C" fn ortho3_reflection_matrix(
    normal: *const f64,
    tol: f64,
    out: *mut f64,
) -> Ortho3Status {
    guard(|| {
        let u = read_axis(normal, tol)?;
        write_matrix(&reflection_matrix(&u), out)
    })
}

/// Rotation about `axis` followed by reflection in its orthogonal plane.
///
/// # Safety
/// `axis` must point to 3 doubles and `out` to 9 writable doubles.
#[no_mangle]
pub unsafe extern "C" fn ortho3_rotoreflection_matrix(
    axis: *const f64,
    cos_alpha: f64,
    sin_alpha: f64,
    tol: f64,
    out: *mut f64,
) -> Ortho3Status {
    guard(|| {
        let u = read_axis(axis, tol)?;
        let angle = AngleRep::new(cos_alpha, sin_alpha, tol)?;
        write_matrix(&rotoreflection_matrix(&u, &angle), out)
    })
}

/// Decomposes a row-major orthogonal matrix. On success `*out` owns a new
/// handle.
///
/// # Safety
/// `matrix` must point to 9 doubles and `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ortho3_classify(
    matrix: *const f64,
    tol: f64,
    out: *mut *mut Ortho3Decomposition,
) -> Ortho3Status {
    guard(|| {
        if matrix.is_null() {
            return Err(null("matrix"));
        }
        if out.is_null() {
            return Err(null("out"));
        }
        *out = ptr::null_mut();
        let entries = std::slice::from_raw_parts(matrix, 9);
        if entries.iter().any(|x| !x.is_finite()) {
            return Err(Failure(Ortho3Status::Parse, "matrix is not finite".into()));
        }
        let m = Mat3::from_fn(|i, j| entries[3 * i + j]);
        let inner = classify(&m, tol)?;
        *out = Box::into_raw(Box::new(Ortho3Decomposition { inner }));
        Ok(())
    })
}

/// # Safety
/// `d` must be null or a handle from [`ortho3_classify`] not yet freed.
#[no_mangle]
pub unsafe extern "C" fn ortho3_decomposition_free(d: *mut Ortho3Decomposition) {
    if !d.is_null() {
        drop(Box::from_raw(d));
    }
}

/// # Safety
/// `d` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn ortho3_decomposition_kind(d: *const Ortho3Decomposition) -> Ortho3Kind {
    (*d).inner.kind.into()
}

/// Canonical unit axis (first nonzero component positive).
///
/// # Safety
/// `d` must be a live handle and `out` must point to 3 writable doubles.
#[no_mangle]
pub unsafe extern "C" fn ortho3_decomposition_axis(
    d: *const Ortho3Decomposition,
    out: *mut f64,
) -> Ortho3Status {
    guard(|| {
        if d.is_null() || out.is_null() {
            return Err(null("argument"));
        }
        let axis = (*d)
            .inner
            .axis
            .as_ref()
            .ok_or_else(|| Failure(Ortho3Status::Absent, "no axis".into()))?;
        let out = std::slice::from_raw_parts_mut(out, 3);
        out.copy_from_slice(&axis.as_vec().to_array());
        Ok(())
    })
}

/// Cosine, sine and angle in degrees within `[0, 360)`. Any output pointer
/// may be null.
///
/// # Safety
/// `d` must be a live handle; non-null outputs must be writable.
#[no_mangle]
pub unsafe extern "C" fn ortho3_decomposition_angle(
    d: *const Ortho3Decomposition,
    cos_alpha: *mut f64,
    sin_alpha: *mut f64,
    degrees: *mut f64,
) -> Ortho3Status {
    guard(|| {
        if d.is_null() {
            return Err(null("decomposition"));
        }
        let angle = (*d)
            .inner
            .angle
            .as_ref()
            .ok_or_else(|| Failure(Ortho3Status::Absent, "no angle".into()))?;
        if !cos_alpha.is_null() {
            *cos_alpha = *angle.cos();
        }
        if !sin_alpha.is_null() {
            *sin_alpha = *angle.sin();
        }
        if !degrees.is_null() {
            *degrees = angle.degrees();
        }
        Ok(())
    })
}

/// `+1` or `-1`.
///
/// # Safety
/// `d` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn ortho3_decomposition_determinant(d: *const Ortho3Decomposition) -> c_int {
    if (*d).inner.determinant > 0.0 {
        1
    } else {
        -1
    }
}

/// Frobenius norm of `MᵗM − I` for the classified matrix.
///
/// # Safety
/// `d` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn ortho3_decomposition_residual(d: *const Ortho3Decomposition) -> f64 {
    (*d).inner.orthogonality_residual
}

/// Matrix rebuilt from the decomposition.
///
/// # Safety
/// `d` must be a live handle and `out` must point to 9 writable doubles.
#[no_mangle]
pub unsafe extern "C" fn ortho3_decomposition_rebuild(
    d: *const Ortho3Decomposition,
    out: *mut f64,
) -> Ortho3Status {
    guard(|| {
        if d.is_null() {
            return Err(null("decomposition"));
        }
        write_matrix(&(*d).inner.rebuild(), out)
    })
}

/// Classifies a JSON matrix document and writes the JSON report to `*out`
/// (release with [`ortho3_string_free`]). Documents without a `mode` are
/// read in float mode.
///
/// # Safety
/// `document` must be a NUL-terminated string and `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ortho3_classify_json(
    document: *const c_char,
    tol: f64,
    digits: c_int,
    out: *mut *mut c_char,
) -> Ortho3Status {
    guard(|| {
        if document.is_null() {
            return Err(null("document"));
        }
        if out.is_null() {
            return Err(null("out"));
        }
        *out = ptr::null_mut();
        let text = CStr::from_ptr(document)
            .to_str()
            .map_err(|_| Failure(Ortho3Status::Parse, "document is not UTF-8".into()))?;
        let doc = MatrixDocument::from_json(text)?;
        let digits = digits.clamp(1, 17) as usize;
        let report = classify_document(&doc, Mode::Float, tol, digits)?;
        let json = CString::new(report.to_json())
            .map_err(|_| Failure(Ortho3Status::Internal, "NUL in report".into()))?;
        *out = json.into_raw();
        Ok(())
    })
}

/// # Safety
/// `s` must be null or a string returned by this library, not yet freed.
#[no_mangle]
pub unsafe extern "C" fn ortho3_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Message for the last failed call on this thread; empty after success.
/// Valid until the next call on the same thread.
#[no_mangle]
pub extern "C" fn ortho3_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// Library version, a static string.
#[no_mangle]
pub extern "C" fn ortho3_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}
