use std::ffi::{CStr, CString};
use std::path::{Path, PathBuf};
use std::process::Command;
use std::ptr;

use ortho3_ffi::*;

fn last_error() -> String {
    unsafe { CStr::from_ptr(ortho3_last_error()) }
        .to_string_lossy()
        .into_owned()
}

#[test]
fn builders_match_known_matrices() {
    let mut out = [0.0; 9];
    let axis = [0.0, 0.0, 1.0];
    let status =
        unsafe { ortho3_rotoreflection_matrix(axis.as_ptr(), 0.0, 1.0, 1e-9, out.as_mut_ptr()) };
    assert_eq!(status, Ortho3Status::Ok);
    assert_eq!(out, [0.0, -1.0, 0.0, 1.0, 0.0, 0.0, 0.0, 0.0, -1.0]);

    let normal = [1.0, 1.0, 0.0];
    let status = unsafe { ortho3_reflection_matrix(normal.as_ptr(), 1e-9, out.as_mut_ptr()) };
    assert_eq!(status, Ortho3Status::Ok);
    let expected = [0.0, -1.0, 0.0, -1.0, 0.0, 0.0, 0.0, 0.0, 1.0];
    for (a, b) in out.iter().zip(expected) {
        assert!((a - b).abs() < 1e-15);
    }
}

#[test]
fn error_codes_and_messages() {
    let mut out = [0.0; 9];
    let axis = [0.0, 0.0, 1.0];
    let status = unsafe { ortho3_rotation_matrix(axis.as_ptr(), 1.0, 1.0, 1e-9, out.as_mut_ptr()) };
    assert_eq!(status, Ortho3Status::InvalidAngle);
    assert!(last_error().contains("angle"));

    let status = unsafe { ortho3_rotation_matrix(ptr::null(), 1.0, 0.0, 1e-9, out.as_mut_ptr()) };
    assert_eq!(status, Ortho3Status::NullPointer);

    let nan = [f64::NAN, 0.0, 1.0];
    let status = unsafe { ortho3_reflection_matrix(nan.as_ptr(), 1e-9, out.as_mut_ptr()) };
    assert_eq!(status, Ortho3Status::Parse);

    let status = unsafe { ortho3_rotation_matrix(axis.as_ptr(), 1.0, 0.0, 1e-9, out.as_mut_ptr()) };
    assert_eq!(status, Ortho3Status::Ok);
    assert_eq!(last_error(), "");
}

#[test]
fn classify_handle_round_trip() {
    let axis = [1.0, -2.0, 2.0];
    let (c, s) = (0.6, -0.8);
    let mut m = [0.0; 9];
    unsafe {
        assert_eq!(
            ortho3_rotation_matrix(axis.as_ptr(), c, s, 1e-9, m.as_mut_ptr()),
            Ortho3Status::Ok
        );
        let mut d = ptr::null_mut();
        assert_eq!(ortho3_classify(m.as_ptr(), 1e-9, &mut d), Ortho3Status::Ok);
        assert_eq!(ortho3_decomposition_kind(d), Ortho3Kind::Rotation);
        assert_eq!(ortho3_decomposition_determinant(d), 1);
        assert!(ortho3_decomposition_residual(d) < 1e-14);

        let mut u = [0.0; 3];
        assert_eq!(
            ortho3_decomposition_axis(d, u.as_mut_ptr()),
            Ortho3Status::Ok
        );
        let (mut cos, mut sin) = (0.0, 0.0);
        assert_eq!(
            ortho3_decomposition_angle(d, &mut cos, &mut sin, ptr::null_mut()),
            Ortho3Status::Ok
        );
        // canonical axis is +(1,-2,2)/3, so the angle is unchanged
        for (a, b) in u.iter().zip([1.0 / 3.0, -2.0 / 3.0, 2.0 / 3.0]) {
            assert!((a - b).abs() < 1e-12);
        }
        assert!((cos - c).abs() < 1e-12 && (sin - s).abs() < 1e-12);

        let mut rebuilt = [0.0; 9];
        assert_eq!(
            ortho3_decomposition_rebuild(d, rebuilt.as_mut_ptr()),
            Ortho3Status::Ok
        );
        for (a, b) in rebuilt.iter().zip(m) {
            assert!((a - b).abs() < 1e-12);
        }
        ortho3_decomposition_free(d);
    }
}

#[test]
fn identity_has_no_axis() {
    let m = [1.0, 0.0, 0.0, 0.0, 1.0, 0.0, 0.0, 0.0, 1.0];
    unsafe {
        let mut d = ptr::null_mut();
        assert_eq!(ortho3_classify(m.as_ptr(), 1e-9, &mut d), Ortho3Status::Ok);
        assert_eq!(ortho3_decomposition_kind(d), Ortho3Kind::Identity);
        let mut u = [0.0; 3];
        assert_eq!(
            ortho3_decomposition_axis(d, u.as_mut_ptr()),
            Ortho3Status::Absent
        );
        ortho3_decomposition_free(d);
        ortho3_decomposition_free(ptr::null_mut());
    }
}

#[test]
fn not_orthogonal_leaves_handle_null() {
    let m = [1.0, 0.0, 0.0, 0.0, 1.0, 0.0, 0.0, 0.0, 1.001];
    unsafe {
        let mut d = ptr::null_mut();
        assert_eq!(
            ortho3_classify(m.as_ptr(), 1e-9, &mut d),
            Ortho3Status::NotOrthogonal
        );
        assert!(d.is_null());
    }
    assert!(last_error().contains("residual"));
}

#[test]
fn json_classification_exact_document() {
    let doc = CString::new(
        r#"{"mode": "exact", "scale": "1/(sqrt(2)*sqrt(3))",
            "matrix": [["sqrt(2)","sqrt(3)","1"],["sqrt(2)","-sqrt(3)","1"],["sqrt(2)","0","-2"]]}"#,
    )
    .unwrap();
    let mut out = ptr::null_mut();
    let status = unsafe { ortho3_classify_json(doc.as_ptr(), 1e-9, 12, &mut out) };
    assert_eq!(status, Ortho3Status::Ok);
    let text = unsafe { CStr::from_ptr(out) }.to_str().unwrap().to_owned();
    unsafe { ortho3_string_free(out) };
    let report: ortho3::cli::DecompositionReport = serde_json::from_str(&text).unwrap();
    assert_eq!(report.kind, "Rotation");
    assert!(report.sin.unwrap().numeric < 0.0);
    assert_eq!(report.radicands.len(), 3);
}

#[test]
fn json_errors() {
    let bad = CString::new(
        r#"{"mode": "exact", "matrix": [["sqrt(","0","0"],["0","1","0"],["0","0","1"]]}"#,
    )
    .unwrap();
    let mut out = ptr::null_mut();
    let status = unsafe { ortho3_classify_json(bad.as_ptr(), 1e-9, 12, &mut out) };
    assert_eq!(status, Ortho3Status::Parse);
    assert!(out.is_null());
    assert!(last_error().contains("byte 5"), "{}", last_error());
}

fn target_dir() -> PathBuf {
    // target/<profile>/deps/<test binary>
    let exe = std::env::current_exe().unwrap();
    exe.parent().and_then(Path::parent).unwrap().to_path_buf()
}

#[test]
fn header_declares_the_api() {
    let header =
        std::fs::read_to_string(Path::new(env!("CARGO_MANIFEST_DIR")).join("include/ortho3.h"))
            .unwrap();
    for name in [
        "typedef struct Ortho3Decomposition Ortho3Decomposition;",
        "ORTHO3_STATUS_NOT_ORTHOGONAL = 4",
        "ortho3_rotation_matrix",
        "ortho3_reflection_matrix",
        "ortho3_rotoreflection_matrix",
        "ortho3_classify(",
        "ortho3_classify_json",
        "ortho3_decomposition_free",
        "ortho3_last_error",
    ] {
        assert!(header.contains(name), "missing {name}");
    }
}

#[test]
fn c_program_links_against_static_library() {
    let lib = target_dir().join("libortho3_ffi.a");
    assert!(
        lib.exists(),
        "static library not found at {}",
        lib.display()
    );
    let manifest = Path::new(env!("CARGO_MANIFEST_DIR"));
    let dir = tempfile::tempdir().unwrap();
    let exe = dir.path().join("smoke");
    let cc = std::env::var("CC").unwrap_or_else(|_| "cc".to_string());
    let status = Command::new(&cc)
        .arg(manifest.join("tests/c/smoke.c"))
        .arg("-I")
        .arg(manifest.join("include"))
        .arg(&lib)
        .args(["-lpthread", "-ldl", "-lm", "-o"])
        .arg(&exe)
        .status()
        .expect("C compiler");
    assert!(status.success());
    let output = Command::new(&exe).output().unwrap();
    assert!(
        output.status.success(),
        "{}",
        String::from_utf8_lossy(&output.stderr)
    );
    assert!(String::from_utf8_lossy(&output.stdout).starts_with("ok "));
}
