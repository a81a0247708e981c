//! Knot and pattern files: `#` header lines followed by a JSON body whose
//! coordinates are decimal strings.

use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::CliError;
use crate::geometry::{ClosedPolyline, Point, TOLERANCE};
use crate::pattern::{PatternCurve, PatternPoint};

pub const KNOT_HEADER: &str = "# trunkweave knot v1";
pub const PATTERN_HEADER: &str = "# trunkweave pattern v1";

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct KnotMetadata {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub known_trunk: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub nontrivial: Option<bool>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct KnotFile {
    pub name: String,
    pub vertices: Vec<[String; 3]>,
    #[serde(default)]
    pub metadata: KnotMetadata,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct PatternMetadata {
    /// Norm of the meridian disk class, when known.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub norm: Option<u64>,
}

/// Pattern vertices `(theta, u, v)` with lifted angles; the last vertex
/// repeats the first with `theta` advanced by a whole number of turns.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PatternFile {
    pub name: String,
    pub vertices: Vec<[String; 3]>,
    #[serde(default)]
    pub metadata: PatternMetadata,
}

// Shortest decimal that parses back to the same f64.
fn decimal(x: f64) -> String {
    format!("{x:?}")
}

fn parse_decimal(s: &str, what: &str) -> Result<f64, CliError> {
    let x: f64 = s.trim().parse().map_err(|_| CliError::Invariant {
        invariant: "decimal coordinates".into(),
        detail: format!("{what}: {s:?} is not a decimal number"),
    })?;
    if !x.is_finite() {
        return Err(CliError::Invariant {
            invariant: "finite coordinates".into(),
            detail: format!("{what}: {s:?}"),
        });
    }
    Ok(x)
}

// Splits off the header; returns the header lines and the JSON body with the
// number of lines preceding it.
fn split_header<'a>(
    text: &'a str,
    expected: &str,
    path: &Path,
) -> Result<(usize, &'a str), CliError> {
    let mut offset = 0;
    let mut skipped = 0;
    let mut saw_header = false;
    for line in text.split_inclusive('\n') {
        let trimmed = line.trim();
        if trimmed.starts_with('#') {
            if skipped == 0 && trimmed != expected {
                return Err(CliError::Parse {
                    path: path.display().to_string(),
                    line: 1,
                    message: format!("expected header {expected:?}, found {trimmed:?}"),
                });
            }
            saw_header = true;
        } else if !trimmed.is_empty() {
            break;
        }
        offset += line.len();
        skipped += 1;
    }
    if !saw_header {
        return Err(CliError::Parse {
            path: path.display().to_string(),
            line: 1,
            message: format!("missing header {expected:?}"),
        });
    }
    Ok((skipped, &text[offset..]))
}

fn parse_body<T: for<'de> Deserialize<'de>>(
    text: &str,
    header: &str,
    path: &Path,
) -> Result<T, CliError> {
    let (skipped, body) = split_header(text, header, path)?;
    serde_json::from_str(body).map_err(|e| CliError::Parse {
        path: path.display().to_string(),
        line: skipped + e.line(),
        message: e.to_string(),
    })
}

fn read(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|e| CliError::Io {
        path: path.display().to_string(),
        message: e.to_string(),
    })
}

fn to_json<T: Serialize + ?Sized>(value: &T) -> String {
    serde_json::to_string(value).expect("file bodies serialize")
}

// One vertex per line; the body is still plain JSON.
fn render<M: Serialize>(
    header: &str,
    name: &str,
    vertices: &[[String; 3]],
    metadata: &M,
) -> String {
    let rows: Vec<String> = vertices
        .iter()
        .map(|v| format!("    {}", to_json(v)))
        .collect();
    format!(
        "{header}\n# name: {name}\n{{\n  \"name\": {},\n  \"vertices\": [\n{}\n  ],\n  \"metadata\": {}\n}}\n",
        to_json(name),
        rows.join(",\n"),
        to_json(metadata),
    )
}

impl KnotFile {
    pub fn from_curve(name: &str, curve: &ClosedPolyline, metadata: KnotMetadata) -> Self {
        KnotFile {
            name: name.to_string(),
            vertices: curve
                .vertices()
                .iter()
                .map(|p| [decimal(p.x), decimal(p.y), decimal(p.z)])
                .collect(),
            metadata,
        }
    }

    pub fn parse(text: &str, path: &Path) -> Result<Self, CliError> {
        let file: KnotFile = parse_body(text, KNOT_HEADER, path)?;
        if let Some(t) = file.metadata.known_trunk {
            if t == 0 || t % 2 == 1 {
                return Err(CliError::Invariant {
                    invariant: "known_trunk is positive and even".into(),
                    detail: format!("{}: known_trunk = {t}", path.display()),
                });
            }
        }
        Ok(file)
    }

    pub fn read(path: &Path) -> Result<Self, CliError> {
        Self::parse(&read(path)?, path)
    }

    pub fn render(&self) -> String {
        render(KNOT_HEADER, &self.name, &self.vertices, &self.metadata)
    }

    pub fn write(&self, path: &Path) -> Result<(), CliError> {
        write(path, &self.render())
    }

    /// The vertices as given, without rescaling or repair.
    pub fn raw_curve(&self) -> Result<ClosedPolyline, CliError> {
        let points = self
            .vertices
            .iter()
            .enumerate()
            .map(|(i, [x, y, z])| {
                let what = format!("vertex {i}");
                Ok(Point::new(
                    parse_decimal(x, &what)?,
                    parse_decimal(y, &what)?,
                    parse_decimal(z, &what)?,
                ))
            })
            .collect::<Result<Vec<_>, CliError>>()?;
        ClosedPolyline::new(points).map_err(|e| CliError::Invariant {
            invariant: "embedded closed polyline".into(),
            detail: e.to_string(),
        })
    }

    /// Rescaled to unit diameter and, if needed, perturbed to generic position.
    pub fn load(&self) -> Result<LoadedKnot, CliError> {
        let curve = self.raw_curve()?.normalized();
        let (curve, repair) = repair_genericity(curve)?;
        Ok(LoadedKnot {
            name: self.name.clone(),
            curve,
            metadata: self.metadata.clone(),
            repair,
        })
    }
}

/// Perturbation applied at load time.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Repair {
    pub epsilon: f64,
    pub duplicate_heights: usize,
    pub horizontal_edges: usize,
}

pub(crate) fn repair_genericity(
    curve: ClosedPolyline,
) -> Result<(ClosedPolyline, Option<Repair>), CliError> {
    let report = curve.validate_genericity();
    if report.is_empty() {
        return Ok((curve, None));
    }
    let epsilon = (0.25 * curve.feature_size()).min(1e3 * TOLERANCE);
    let repaired = curve
        .perturb_generic(epsilon)
        .map_err(|e| CliError::Invariant {
            invariant: "generic position".into(),
            detail: e.to_string(),
        })?;
    Ok((
        repaired,
        Some(Repair {
            epsilon,
            duplicate_heights: report.duplicate_heights.len(),
            horizontal_edges: report.horizontal_edges.len(),
        }),
    ))
}

#[derive(Debug, Clone)]
pub struct LoadedKnot {
    pub name: String,
    pub curve: ClosedPolyline,
    pub metadata: KnotMetadata,
    pub repair: Option<Repair>,
}

impl PatternFile {
    pub fn from_curve(name: &str, curve: &PatternCurve, metadata: PatternMetadata) -> Self {
        PatternFile {
            name: name.to_string(),
            vertices: curve
                .lifted_points()
                .iter()
                .map(|p| [decimal(p.theta), decimal(p.u), decimal(p.v)])
                .collect(),
            metadata,
        }
    }

    pub fn parse(text: &str, path: &Path) -> Result<Self, CliError> {
        parse_body(text, PATTERN_HEADER, path)
    }

    pub fn read(path: &Path) -> Result<Self, CliError> {
        Self::parse(&read(path)?, path)
    }

    pub fn render(&self) -> String {
        render(PATTERN_HEADER, &self.name, &self.vertices, &self.metadata)
    }

    pub fn write(&self, path: &Path) -> Result<(), CliError> {
        write(path, &self.render())
    }

    pub fn load(&self) -> Result<PatternCurve, CliError> {
        let points = self
            .vertices
            .iter()
            .enumerate()
            .map(|(i, [t, u, v])| {
                let what = format!("vertex {i}");
                Ok(PatternPoint::new(
                    parse_decimal(t, &what)?,
                    parse_decimal(u, &what)?,
                    parse_decimal(v, &what)?,
                ))
            })
            .collect::<Result<Vec<_>, CliError>>()?;
        PatternCurve::new(points).map_err(|e| CliError::Invariant {
            invariant: "valid pattern".into(),
            detail: e.to_string(),
        })
    }
}

pub(crate) fn write(path: &Path, contents: &str) -> Result<(), CliError> {
    fs::write(path, contents).map_err(|e| CliError::Io {
        path: path.display().to_string(),
        message: e.to_string(),
    })
}
