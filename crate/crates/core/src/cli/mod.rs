//! The `ortho3` command line: build, classify and inspect 3×3 isometries.
//!
//! Exit codes: 0 success, 2 parse or input error (including a zero axis),
//! 3 invalid angle, 4 matrix not orthogonal, 5 sign test inconclusive.

mod document;

use std::ffi::OsString;
use std::io::{Read, Write};
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

pub use document::{
    degrees_minutes, round_sig, split_top_level, CliScalar, DecompositionReport, Entry,
    InvariantDocument, MatrixDocument, Mode, ScalarField, VectorField,
};

use crate::isometry::{
    classify, invariant_report, reflection_matrix, rotation_matrix, rotoreflection_matrix,
    AngleRep, IsometryError, UnitAxis,
};
use crate::linalg3::{Mat3, Vec3};
use crate::qfield::{FieldError, TowerElem};
use crate::scalar::DEFAULT_TOLERANCE;

pub const EXIT_OK: i32 = 0;
pub const EXIT_INPUT: i32 = 2;
pub const EXIT_ANGLE: i32 = 3;
pub const EXIT_NOT_ORTHOGONAL: i32 = 4;
pub const EXIT_INCONCLUSIVE: i32 = 5;

/// An error with the exit code it maps to.
#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
#[error("{message}")]
pub struct CliError {
    pub code: i32,
    pub message: String,
}

impl CliError {
    pub fn parse(message: impl Into<String>) -> Self {
        CliError {
            code: EXIT_INPUT,
            message: message.into(),
        }
    }

    /// Prefixes the message with the offending flag or field.
    pub fn context(self, label: &str) -> Self {
        CliError {
            code: self.code,
            message: format!("{label}: {}", self.message),
        }
    }
}

impl From<FieldError> for CliError {
    fn from(e: FieldError) -> Self {
        let code = match e {
            FieldError::Inconclusive { .. } => EXIT_INCONCLUSIVE,
            _ => EXIT_INPUT,
        };
        CliError {
            code,
            message: e.to_string(),
        }
    }
}

impl From<IsometryError> for CliError {
    fn from(e: IsometryError) -> Self {
        let code = match &e {
            IsometryError::Field(f) => return f.clone().into(),
            IsometryError::InvalidAngle => EXIT_ANGLE,
            IsometryError::NotOrthogonal { .. } => EXIT_NOT_ORTHOGONAL,
            IsometryError::NonUnitAxis | IsometryError::ZeroAxis => EXIT_INPUT,
        };
        CliError {
            code,
            message: e.to_string(),
        }
    }
}

#[derive(Debug, Parser)]
#[command(
    name = "ortho3",
    version,
    about = "Rotations, reflections and rotoreflections of 3-space"
)]
pub struct Cli {
    /// Arithmetic backend.
    #[arg(long, value_enum, default_value_t = Mode::Float, global = true)]
    pub mode: Mode,
    /// Tolerance for float zero tests and orthogonality.
    #[arg(long, default_value_t = DEFAULT_TOLERANCE, global = true)]
    pub tol: f64,
    /// Emit JSON instead of text.
    #[arg(long, global = true)]
    pub json: bool,
    /// Significant digits of printed numbers.
    #[arg(long, default_value_t = 12, global = true, value_parser = clap::value_parser!(u8).range(1..=17))]
    pub digits: u8,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Rotation about an axis.
    #[command(allow_negative_numbers = true)]
    Rotate {
        #[command(flatten)]
        axis: AxisArgs,
        #[command(flatten)]
        angle: AngleArgs,
    },
    /// Reflection in the plane with the given normal.
    #[command(allow_negative_numbers = true)]
    Reflect {
        #[command(flatten)]
        normal: AxisArgs,
    },
    /// Rotation followed by reflection in the orthogonal plane.
    #[command(allow_negative_numbers = true)]
    Rotoreflect {
        #[command(flatten)]
        axis: AxisArgs,
        #[command(flatten)]
        angle: AngleArgs,
    },
    /// Decompose an orthogonal matrix.
    Classify {
        #[command(flatten)]
        input: MatrixInput,
    },
    /// Determinant, trace and orthogonality residual.
    Invariants {
        #[command(flatten)]
        input: MatrixInput,
    },
}

#[derive(Debug, Args)]
pub struct AxisArgs {
    /// Three component expressions, or one string holding all three.
    #[arg(required = true, num_args = 1..=3, value_name = "EXPR")]
    pub components: Vec<String>,
}

#[derive(Debug, Args)]
#[group(required = true, multiple = true)]
pub struct AngleArgs {
    /// Angle in degrees (float mode only).
    #[arg(long, allow_hyphen_values = true, conflicts_with_all = ["cos", "sin"])]
    pub angle_deg: Option<f64>,
    /// Cosine of the angle, as an expression.
    #[arg(long, allow_hyphen_values = true, requires = "sin")]
    pub cos: Option<String>,
    /// Sine of the angle, as an expression.
    #[arg(long, allow_hyphen_values = true, requires = "cos")]
    pub sin: Option<String>,
}

#[derive(Debug, Args)]
pub struct MatrixInput {
    /// Matrix document (JSON) path, or `-` for standard input.
    #[arg(conflicts_with = "matrix")]
    pub input: Option<PathBuf>,
    /// Inline matrix, rows separated by `;`, entries by spaces or commas.
    #[arg(long, allow_hyphen_values = true)]
    pub matrix: Option<String>,
    /// Common factor applied to the inline matrix entries.
    #[arg(long, allow_hyphen_values = true, requires = "matrix")]
    pub scale: Option<String>,
}

struct Settings {
    tol: f64,
    json: bool,
    digits: usize,
}

/// Runs the command line with standard streams; returns the exit code.
pub fn run() -> i32 {
    let stdin = std::io::stdin();
    run_with(
        std::env::args_os(),
        &mut stdin.lock(),
        &mut std::io::stdout(),
        &mut std::io::stderr(),
    )
}

/// Runs the command line against the given streams.
pub fn run_with<I, T>(
    args: I,
    stdin: &mut dyn Read,
    stdout: &mut dyn Write,
    stderr: &mut dyn Write,
) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let args: Vec<OsString> = args.into_iter().map(Into::into).collect();
    let cli = match Cli::try_parse_from(separate_positionals(args)) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            if e.use_stderr() {
                let _ = write!(stderr, "{text}");
                return EXIT_INPUT;
            }
            let _ = write!(stdout, "{text}");
            return EXIT_OK;
        }
    };
    match execute(cli, stdin) {
        Ok(text) => {
            let _ = write!(stdout, "{text}");
            EXIT_OK
        }
        Err(e) => {
            let _ = writeln!(stderr, "error: {}", e.message);
            e.code
        }
    }
}

const VALUE_FLAGS: [&str; 8] = [
    "--mode",
    "--tol",
    "--digits",
    "--angle-deg",
    "--cos",
    "--sin",
    "--matrix",
    "--scale",
];

/// Moves the vector components of `rotate`, `reflect` and `rotoreflect`
/// behind a `--` when one of them starts with `-`, so that `"-1 1 1"` or
/// `-sqrt(2)` is read as a value rather than a flag.
fn separate_positionals(args: Vec<OsString>) -> Vec<OsString> {
    let text: Vec<Option<&str>> = args.iter().map(|a| a.to_str()).collect();
    if text.iter().any(|t| *t == Some("--") || t.is_none()) {
        return args;
    }
    let mut i = 1;
    let mut takes_value = false;
    let sub = loop {
        match text.get(i) {
            None => return args,
            Some(Some(_)) if takes_value => takes_value = false,
            Some(Some(t)) if t.starts_with('-') => takes_value = VALUE_FLAGS.contains(t),
            Some(Some(t)) if ["rotate", "reflect", "rotoreflect"].contains(t) => break i,
            _ => return args,
        }
        i += 1;
    };
    let (mut options, mut positionals) = (Vec::new(), Vec::new());
    let mut takes_value = false;
    for (arg, t) in args[sub + 1..].iter().zip(&text[sub + 1..]) {
        let t = t.unwrap_or_default();
        if takes_value {
            options.push(arg.clone());
            takes_value = false;
        } else if t.starts_with("--") || t == "-h" || t == "-V" {
            takes_value = VALUE_FLAGS.contains(&t);
            options.push(arg.clone());
        } else {
            positionals.push(arg.clone());
        }
    }
    if !positionals
        .iter()
        .any(|p| p.to_str().is_some_and(|t| t.starts_with('-')))
    {
        return args;
    }
    let mut out = args[..=sub].to_vec();
    out.extend(options);
    out.push("--".into());
    out.extend(positionals);
    out
}

fn execute(cli: Cli, stdin: &mut dyn Read) -> Result<String, CliError> {
    let settings = Settings {
        tol: cli.tol,
        json: cli.json,
        digits: cli.digits as usize,
    };
    match (cli.command, cli.mode) {
        (Command::Rotate { axis, angle }, Mode::Float) => {
            build::<f64>(&axis, Some(&angle), Kind::Rotation, &settings)
        }
        (Command::Rotate { axis, angle }, Mode::Exact) => {
            build::<TowerElem>(&axis, Some(&angle), Kind::Rotation, &settings)
        }
        (Command::Reflect { normal }, Mode::Float) => {
            build::<f64>(&normal, None, Kind::Reflection, &settings)
        }
        (Command::Reflect { normal }, Mode::Exact) => {
            build::<TowerElem>(&normal, None, Kind::Reflection, &settings)
        }
        (Command::Rotoreflect { axis, angle }, Mode::Float) => {
            build::<f64>(&axis, Some(&angle), Kind::Rotoreflection, &settings)
        }
        (Command::Rotoreflect { axis, angle }, Mode::Exact) => {
            build::<TowerElem>(&axis, Some(&angle), Kind::Rotoreflection, &settings)
        }
        (Command::Classify { input }, mode) => {
            let doc = read_document(&input, mode, stdin)?;
            let report = classify_document(&doc, mode, settings.tol, settings.digits)?;
            Ok(if settings.json {
                report.to_json() + "\n"
            } else {
                report.to_text()
            })
        }
        (Command::Invariants { input }, mode) => {
            let doc = read_document(&input, mode, stdin)?;
            let report = invariants_document(&doc, mode, settings.digits)?;
            Ok(if settings.json {
                serde_json::to_string_pretty(&report).expect("report serializes") + "\n"
            } else {
                report.to_text()
            })
        }
    }
}

#[derive(Clone, Copy, PartialEq)]
enum Kind {
    Rotation,
    Reflection,
    Rotoreflection,
}

fn build<S: CliScalar>(
    axis: &AxisArgs,
    angle: Option<&AngleArgs>,
    kind: Kind,
    settings: &Settings,
) -> Result<String, CliError> {
    let components = axis_components(&axis.components)?;
    let axis_label = if kind == Kind::Reflection {
        "normal"
    } else {
        "axis"
    };
    let mut texts: Vec<(&str, &str)> = ["x", "y", "z"]
        .iter()
        .zip(&components)
        .map(|(label, text)| (*label, text.as_str()))
        .collect();

    let mut degrees = None;
    if let Some(angle) = angle {
        match (&angle.angle_deg, &angle.cos, &angle.sin) {
            (Some(deg), _, _) => {
                if S::MODE == Mode::Exact {
                    return Err(CliError {
                        code: EXIT_ANGLE,
                        message: "--angle-deg: degrees are not available in exact mode; give --cos and --sin".into(),
                    });
                }
                degrees = Some(*deg);
            }
            (None, Some(cos), Some(sin)) => {
                texts.push(("--cos", cos));
                texts.push(("--sin", sin));
            }
            _ => return Err(CliError::parse("give --angle-deg or both --cos and --sin")),
        }
    }
    let values = S::parse_many(&texts).map_err(|e| {
        if e.message.starts_with("--") {
            e
        } else {
            e.context(axis_label)
        }
    })?;

    let v = Vec3::new(values[0].clone(), values[1].clone(), values[2].clone());
    let unit = UnitAxis::normalize(v, settings.tol).map_err(|e| match e {
        IsometryError::ZeroAxis => CliError::parse(format!("zero {axis_label} vector")),
        other => other.into(),
    })?;

    let angle_rep = match (degrees, values.get(3), values.get(4)) {
        (Some(deg), _, _) => Some(degrees_angle::<S>(deg)?),
        (None, Some(cos), Some(sin)) => Some(
            AngleRep::new(cos.clone(), sin.clone(), settings.tol)
                .map_err(|e| CliError::from(e).context("--cos/--sin"))?,
        ),
        _ => None,
    };

    let m = match (kind, &angle_rep) {
        (Kind::Rotation, Some(a)) => rotation_matrix(&unit, a),
        (Kind::Rotoreflection, Some(a)) => rotoreflection_matrix(&unit, a),
        _ => reflection_matrix(&unit),
    };
    Ok(render_matrix(&m, settings))
}

fn degrees_angle<S: CliScalar>(deg: f64) -> Result<AngleRep<S>, CliError> {
    if !deg.is_finite() {
        return Err(CliError {
            code: EXIT_ANGLE,
            message: "--angle-deg: angle is not finite".into(),
        });
    }
    let a = AngleRep::<f64>::from_degrees(deg);
    let cos = S::parse_many(&[("--angle-deg", &format!("{:?}", a.cos()))])?;
    let sin = S::parse_many(&[("--angle-deg", &format!("{:?}", a.sin()))])?;
    Ok(AngleRep::new(
        cos[0].clone(),
        sin[0].clone(),
        f64::INFINITY,
    )?)
}

/// One argument holding the whole vector is split at top-level whitespace.
fn axis_components(args: &[String]) -> Result<Vec<String>, CliError> {
    let parts = match args {
        [single] => split_top_level(single),
        many => many.to_vec(),
    };
    if parts.len() != 3 {
        return Err(CliError::parse(format!(
            "expected 3 vector components, found {}",
            parts.len()
        )));
    }
    Ok(parts)
}

fn render_matrix<S: CliScalar>(m: &Mat3<S>, settings: &Settings) -> String {
    let doc = MatrixDocument::from_matrix(m, settings.digits);
    if settings.json {
        return serde_json::to_string(&doc).expect("document serializes") + "\n";
    }
    let cells: Vec<Vec<String>> = doc
        .matrix
        .iter()
        .map(|row| {
            row.iter()
                .map(|e| match e {
                    Entry::Number(x) => x.to_string(),
                    Entry::Text(t) => t.clone(),
                })
                .collect()
        })
        .collect();
    let width = cells
        .iter()
        .flatten()
        .map(|c| c.chars().count())
        .max()
        .unwrap_or(1);
    cells
        .iter()
        .map(|row| {
            let padded: Vec<String> = row.iter().map(|c| format!("{c:>width$}")).collect();
            format!("[ {} ]\n", padded.join("  "))
        })
        .collect()
}

fn read_document(
    input: &MatrixInput,
    mode: Mode,
    stdin: &mut dyn Read,
) -> Result<MatrixDocument, CliError> {
    if let Some(text) = &input.matrix {
        return MatrixDocument::from_inline(text, mode, input.scale.clone());
    }
    let text = match input.input.as_deref() {
        None => {
            return Err(CliError::parse(
                "give a matrix document path, `-`, or --matrix",
            ))
        }
        Some(path) if path.as_os_str() == "-" => {
            let mut text = String::new();
            stdin
                .read_to_string(&mut text)
                .map_err(|e| CliError::parse(format!("stdin: {e}")))?;
            text
        }
        Some(path) => std::fs::read_to_string(path)
            .map_err(|e| CliError::parse(format!("{}: {e}", path.display())))?,
    };
    MatrixDocument::from_json(&text)
}

/// Classifies a matrix document. The document's own `mode` wins over
/// `default_mode`.
pub fn classify_document(
    doc: &MatrixDocument,
    default_mode: Mode,
    tol: f64,
    digits: usize,
) -> Result<DecompositionReport, CliError> {
    fn go<S: CliScalar>(
        doc: &MatrixDocument,
        tol: f64,
        digits: usize,
    ) -> Result<DecompositionReport, CliError> {
        let m: Mat3<S> = doc.to_matrix()?;
        let d = classify(&m, tol)?;
        Ok(DecompositionReport::new(&d, &m, digits))
    }
    match doc.mode.unwrap_or(default_mode) {
        Mode::Float => go::<f64>(doc, tol, digits),
        Mode::Exact => go::<TowerElem>(doc, tol, digits),
    }
}

/// Invariants of a matrix document.
pub fn invariants_document(
    doc: &MatrixDocument,
    default_mode: Mode,
    digits: usize,
) -> Result<InvariantDocument, CliError> {
    fn go<S: CliScalar>(
        doc: &MatrixDocument,
        digits: usize,
    ) -> Result<InvariantDocument, CliError> {
        let m: Mat3<S> = doc.to_matrix()?;
        Ok(InvariantDocument::new(&invariant_report(&m), digits))
    }
    match doc.mode.unwrap_or(default_mode) {
        Mode::Float => go::<f64>(doc, digits),
        Mode::Exact => go::<TowerElem>(doc, digits),
    }
}
