//! JSON documents read and written by the command line.

use serde::{Deserialize, Serialize};

use crate::isometry::{Decomposition, InvariantReport, IsometryKind};
use crate::linalg3::Mat3;
use crate::qfield::{parse_scalar, TowerElem, TowerField};
use crate::scalar::Scalar;

use super::CliError;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Float,
    Exact,
}

/// A matrix entry: a number (float mode) or a scalar expression.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Entry {
    Number(f64),
    Text(String),
}

/// `{"mode": "exact", "scale": "<expr>", "matrix": [["<expr>", ...], ...]}`
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MatrixDocument {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mode: Option<Mode>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub scale: Option<String>,
    pub matrix: [[Entry; 3]; 3],
}

impl MatrixDocument {
    pub fn from_json(text: &str) -> Result<Self, CliError> {
        serde_json::from_str(text).map_err(|e| CliError::parse(format!("matrix document: {e}")))
    }

    /// Parses `"r00 r01 r02; r10 r11 r12; r20 r21 r22"` (the semicolons are
    /// optional). Entries are separated by whitespace outside parentheses.
    pub fn from_inline(text: &str, mode: Mode, scale: Option<String>) -> Result<Self, CliError> {
        let entries: Vec<String> = text.split(';').flat_map(split_top_level).collect();
        if entries.len() != 9 {
            return Err(CliError::parse(format!(
                "--matrix: expected 9 entries, found {}",
                entries.len()
            )));
        }
        let matrix = std::array::from_fn(|i| {
            std::array::from_fn(|j| Entry::Text(entries[3 * i + j].clone()))
        });
        Ok(MatrixDocument {
            mode: Some(mode),
            scale,
            matrix,
        })
    }

    /// Document for a computed matrix, entries rounded to `digits`
    /// significant digits in float mode.
    pub fn from_matrix<S: CliScalar>(m: &Mat3<S>, digits: usize) -> Self {
        let matrix = std::array::from_fn(|i| {
            std::array::from_fn(|j| {
                let e = &m[(i, j)];
                match e.exact_text() {
                    Some(text) => Entry::Text(text),
                    None => Entry::Number(round_sig(e.to_f64(), digits)),
                }
            })
        });
        MatrixDocument {
            mode: Some(S::MODE),
            scale: None,
            matrix,
        }
    }

    /// Builds the matrix over backend `S`, applying the common scale factor.
    pub fn to_matrix<S: CliScalar>(&self) -> Result<Mat3<S>, CliError> {
        let mut texts: Vec<(String, String)> = Vec::with_capacity(10);
        if let Some(scale) = &self.scale {
            texts.push(("scale".to_string(), scale.clone()));
        }
        for (i, row) in self.matrix.iter().enumerate() {
            for (j, entry) in row.iter().enumerate() {
                let label = format!("matrix[{i}][{j}]");
                let text = match entry {
                    Entry::Text(t) => t.clone(),
                    Entry::Number(x) => S::number_text(*x, &label)?,
                };
                texts.push((label, text));
            }
        }
        let borrowed: Vec<(&str, &str)> = texts
            .iter()
            .map(|(l, t)| (l.as_str(), t.as_str()))
            .collect();
        let mut values = S::parse_many(&borrowed)?;
        let scale = if self.scale.is_some() {
            Some(values.remove(0))
        } else {
            None
        };
        Ok(Mat3::from_fn(|i, j| {
            let v = values[3 * i + j].clone();
            match &scale {
                Some(s) => v * s.clone(),
                None => v,
            }
        }))
    }
}

/// Splits on whitespace and commas at parenthesis depth zero.
pub fn split_top_level(text: &str) -> Vec<String> {
    let mut out = Vec::new();
    let mut current = String::new();
    let mut depth = 0i32;
    for ch in text.chars() {
        match ch {
            '(' => depth += 1,
            ')' => depth -= 1,
            _ => {}
        }
        if (ch.is_whitespace() || ch == ',') && depth <= 0 {
            if !current.is_empty() {
                out.push(std::mem::take(&mut current));
            }
        } else {
            current.push(ch);
        }
    }
    if !current.is_empty() {
        out.push(current);
    }
    out
}

/// Rounds to `digits` significant decimal digits; `-0` becomes `0`.
pub fn round_sig(x: f64, digits: usize) -> f64 {
    if x == 0.0 || !x.is_finite() {
        return x + 0.0;
    }
    let text = format!("{:.*e}", digits.saturating_sub(1), x);
    text.parse::<f64>().unwrap_or(x) + 0.0
}

/// Backend-specific text handling for the command line.
pub trait CliScalar: Scalar {
    const MODE: Mode;

    /// Parses labelled expressions in order. The exact backend threads one
    /// tower through all of them and returns the values in that tower.
    fn parse_many(texts: &[(&str, &str)]) -> Result<Vec<Self>, CliError>;

    /// Expression text for a JSON number entry.
    fn number_text(x: f64, label: &str) -> Result<String, CliError>;

    /// Canonical exact text, `None` for floats.
    fn exact_text(&self) -> Option<String>;

    /// Radicands of the tower the values live in.
    fn radicands(values: &[&Self]) -> Vec<String>;
}

impl CliScalar for f64 {
    const MODE: Mode = Mode::Float;

    fn parse_many(texts: &[(&str, &str)]) -> Result<Vec<Self>, CliError> {
        texts
            .iter()
            .map(|(label, text)| {
                let value = match text.trim().parse::<f64>() {
                    Ok(x) => x,
                    Err(_) => parse_scalar(text, &TowerField::rationals())
                        .map_err(|e| CliError::from(e).context(label))?
                        .1
                        .to_f64(),
                };
                if value.is_finite() {
                    Ok(value)
                } else {
                    Err(CliError::parse(format!("{label}: value is not finite")))
                }
            })
            .collect()
    }

    fn number_text(x: f64, _label: &str) -> Result<String, CliError> {
        Ok(format!("{x:?}"))
    }

    fn exact_text(&self) -> Option<String> {
        None
    }

    fn radicands(_values: &[&Self]) -> Vec<String> {
        Vec::new()
    }
}

impl CliScalar for TowerElem {
    const MODE: Mode = Mode::Exact;

    fn parse_many(texts: &[(&str, &str)]) -> Result<Vec<Self>, CliError> {
        let mut field = TowerField::rationals();
        let mut values = Vec::with_capacity(texts.len());
        for (label, text) in texts {
            let (f, v) =
                parse_scalar(text, &field).map_err(|e| CliError::from(e).context(label))?;
            field = f;
            values.push(v);
        }
        TowerElem::unify(&mut values)?;
        Ok(values)
    }

    fn number_text(x: f64, label: &str) -> Result<String, CliError> {
        if x.is_finite() && x.fract() == 0.0 && x.abs() < 1e15 {
            Ok(format!("{}", x as i64))
        } else {
            Err(CliError::parse(format!(
                "{label}: exact mode needs an integer or an expression string, got {x}"
            )))
        }
    }

    fn exact_text(&self) -> Option<String> {
        Some(self.to_string())
    }

    fn radicands(values: &[&Self]) -> Vec<String> {
        let mut field = TowerField::rationals();
        for v in values {
            if let Ok(joined) = field.join(v.field()) {
                field = joined;
            }
        }
        field.radicands().iter().map(ToString::to_string).collect()
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ScalarField {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub exact: Option<String>,
    pub numeric: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VectorField {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub exact: Option<[String; 3]>,
    pub numeric: [f64; 3],
}

fn scalar_field<S: CliScalar>(v: &S, digits: usize) -> ScalarField {
    ScalarField {
        exact: v.exact_text(),
        numeric: round_sig(v.to_f64(), digits),
    }
}

/// Machine-readable result of `classify`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DecompositionReport {
    pub kind: String,
    pub axis: Option<VectorField>,
    pub cos: Option<ScalarField>,
    pub sin: Option<ScalarField>,
    pub angle_deg: Option<f64>,
    pub det: i32,
    pub residual: f64,
    pub radicands: Vec<String>,
}

impl DecompositionReport {
    pub fn new<S: CliScalar>(d: &Decomposition<S>, input: &Mat3<S>, digits: usize) -> Self {
        let axis = d.axis.as_ref().map(|u| {
            let v = u.as_vec();
            let parts = [&v.x, &v.y, &v.z];
            VectorField {
                exact: S::MODE
                    .eq(&Mode::Exact)
                    .then(|| parts.map(|c| c.exact_text().unwrap_or_default())),
                numeric: parts.map(|c| round_sig(c.to_f64(), digits)),
            }
        });
        let mut members: Vec<&S> = input.entries().collect();
        if let Some(u) = &d.axis {
            members.extend([u.a(), u.b(), u.c()]);
        }
        if let Some(angle) = &d.angle {
            members.extend([angle.cos(), angle.sin()]);
        }
        DecompositionReport {
            kind: d.kind.name().to_string(),
            axis,
            cos: d.angle.as_ref().map(|a| scalar_field(a.cos(), digits)),
            sin: d.angle.as_ref().map(|a| scalar_field(a.sin(), digits)),
            angle_deg: d.angle_degrees().map(|x| round_sig(x, digits)),
            det: if d.determinant.to_f64() > 0.0 { 1 } else { -1 },
            residual: round_sig(d.orthogonality_residual, digits),
            radicands: S::radicands(&members),
        }
    }

    pub fn kind(&self) -> Option<IsometryKind> {
        [
            IsometryKind::Identity,
            IsometryKind::Rotation,
            IsometryKind::Reflection,
            IsometryKind::Rotoreflection,
            IsometryKind::PointInversion,
        ]
        .into_iter()
        .find(|k| k.name() == self.kind)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    /// Human-readable form, with the same rounded numbers as the JSON.
    pub fn to_text(&self) -> String {
        let mut out = format!("kind: {}\n", self.kind);
        if let Some(axis) = &self.axis {
            let numeric = axis.numeric.map(|x| x.to_string()).join(", ");
            match &axis.exact {
                Some(exact) => out += &format!("axis: ({})\n  ≈ ({numeric})\n", exact.join(", ")),
                None => out += &format!("axis: ({numeric})\n"),
            }
        }
        for (name, field) in [("cos", &self.cos), ("sin", &self.sin)] {
            if let Some(field) = field {
                match &field.exact {
                    Some(exact) => out += &format!("{name} α = {exact}\n  ≈ {}\n", field.numeric),
                    None => out += &format!("{name} α = {}\n", field.numeric),
                }
            }
        }
        if let Some(deg) = self.angle_deg {
            out += &format!("angle: {deg}° ({})\n", degrees_minutes(deg));
        }
        out += &format!(
            "det: {}\nresidual: {}\n",
            self.det,
            scientific(self.residual)
        );
        if !self.radicands.is_empty() {
            out += &format!("radicands: {}\n", self.radicands.join(", "));
        }
        out
    }
}

fn scientific(x: f64) -> String {
    if x == 0.0 {
        "0".to_string()
    } else {
        format!("{x:e}")
    }
}

/// `193.3333…` → `"193° 20′"`, rounded to the nearest arc-minute.
pub fn degrees_minutes(deg: f64) -> String {
    let total = (deg * 60.0).round() as i64;
    format!(
        "{}° {}′",
        total.div_euclid(60).rem_euclid(360),
        total.rem_euclid(60)
    )
}

/// Output of `invariants`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct InvariantDocument {
    pub det: ScalarField,
    pub trace: ScalarField,
    pub residual: f64,
}

impl InvariantDocument {
    pub fn new<S: CliScalar>(r: &InvariantReport<S>, digits: usize) -> Self {
        InvariantDocument {
            det: scalar_field(&r.det, digits),
            trace: scalar_field(&r.trace, digits),
            residual: round_sig(r.orthogonality_residual, digits),
        }
    }

    pub fn to_text(&self) -> String {
        let line = |name: &str, f: &ScalarField| match &f.exact {
            Some(exact) if exact.parse::<f64>() != Ok(f.numeric) => {
                format!("{name}: {exact}\n  ≈ {}\n", f.numeric)
            }
            _ => format!("{name}: {}\n", f.numeric),
        };
        format!(
            "{}{}residual: {}\n",
            line("det", &self.det),
            line("trace", &self.trace),
            scientific(self.residual)
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn split_respects_parentheses() {
        assert_eq!(split_top_level("0 0 1"), ["0", "0", "1"]);
        assert_eq!(split_top_level("1, -2,3"), ["1", "-2", "3"]);
        assert_eq!(
            split_top_level("(sqrt(2) + 1)  -1/2 sqrt( 3 )"),
            ["(sqrt(2) + 1)", "-1/2", "sqrt( 3 )"]
        );
    }

    #[test]
    fn rounding() {
        assert_eq!(round_sig(0.123456789012345, 12), 0.123456789012);
        assert_eq!(round_sig(-0.0, 12).to_bits(), 0.0f64.to_bits());
        assert_eq!(round_sig(193.313026035387, 5), 193.31);
    }

    #[test]
    fn degrees_minutes_rounding() {
        assert_eq!(degrees_minutes(193.0 + 20.0 / 60.0), "193° 20′");
        assert_eq!(degrees_minutes(193.313026), "193° 19′");
        assert_eq!(degrees_minutes(359.999), "0° 0′");
    }

    #[test]
    fn inline_matrix_needs_nine_entries() {
        assert!(MatrixDocument::from_inline("1 0 0; 0 1 0", Mode::Float, None).is_err());
        let doc = MatrixDocument::from_inline("1 0 0; 0 1 0; 0 0 1", Mode::Float, None).unwrap();
        assert_eq!(doc.to_matrix::<f64>().unwrap(), Mat3::identity());
    }

    #[test]
    fn document_json_shapes() {
        let doc = MatrixDocument::from_json(
            r#"{"mode": "exact", "scale": "1/2", "matrix": [["2","0","0"],["0","2","0"],["0","0",2]]}"#,
        )
        .unwrap();
        assert_eq!(doc.mode, Some(Mode::Exact));
        assert_eq!(doc.to_matrix::<TowerElem>().unwrap(), Mat3::identity());
        assert!(MatrixDocument::from_json(r#"{"matrix": [[1,0],[0,1]]}"#).is_err());
        let frac = MatrixDocument::from_json(r#"{"matrix": [[0.5,0,0],[0,1,0],[0,0,1]]}"#).unwrap();
        assert!(frac.to_matrix::<TowerElem>().is_err());
        assert_eq!(frac.to_matrix::<f64>().unwrap()[(0, 0)], 0.5);
    }
}
