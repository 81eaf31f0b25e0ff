//! File formats: versioned JSON envelopes, CSV matrices and SVG pictures of
//! planar unit balls.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::norms::{norm_eval, NormError, NormSpec};
use crate::points::PointSet;

pub const SCHEMA_VERSION: u32 = 1;

/// Boundary points per traced unit ball.
pub const SVG_SCAN_POINTS: usize = 720;

#[derive(Debug, Error)]
pub enum ReportError {
    #[error("{path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("{path}: {source}")]
    Json {
        path: String,
        #[source]
        source: serde_json::Error,
    },
    #[error("{path}: unsupported schema_version {found}, expected {SCHEMA_VERSION}")]
    SchemaVersion { path: String, found: u32 },
    #[error(transparent)]
    Csv(#[from] csv::Error),
    #[error(transparent)]
    Norm(#[from] NormError),
    #[error("SVG output needs points in the plane, got dimension {0}")]
    NotPlanar(usize),
}

/// Input for the `fixedpoint` and `renorm` commands. Absent fields fall back
/// to command-line flags and then to defaults.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProblemFile {
    #[serde(default)]
    pub schema_version: Option<u32>,
    pub norm: NormSpec,
    #[serde(default)]
    pub points: Option<PointSet>,
    /// Number of points for the fixed-point construction.
    #[serde(default, rename = "N")]
    pub n: Option<usize>,
    #[serde(default)]
    pub tol: Option<f64>,
    #[serde(default)]
    pub max_iter: Option<usize>,
    #[serde(default)]
    pub seed: Option<u64>,
    #[serde(default)]
    pub c2: Option<f64>,
    #[serde(default)]
    pub n_dirs: Option<usize>,
}

/// Every JSON file written carries the schema version and the command that
/// produced it.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Envelope<T> {
    pub schema_version: u32,
    pub command: String,
    #[serde(flatten)]
    pub body: T,
}

impl<T> Envelope<T> {
    pub fn new(command: &str, body: T) -> Self {
        Self {
            schema_version: SCHEMA_VERSION,
            command: command.to_string(),
            body,
        }
    }
}

pub fn read_json<T: DeserializeOwned>(path: &Path) -> Result<T, ReportError> {
    let text = fs::read_to_string(path).map_err(|source| ReportError::Io {
        path: path.display().to_string(),
        source,
    })?;
    serde_json::from_str(&text).map_err(|source| ReportError::Json {
        path: path.display().to_string(),
        source,
    })
}

pub fn read_problem(path: &Path) -> Result<ProblemFile, ReportError> {
    let p: ProblemFile = read_json(path)?;
    match p.schema_version {
        Some(v) if v != SCHEMA_VERSION => Err(ReportError::SchemaVersion {
            path: path.display().to_string(),
            found: v,
        }),
        _ => Ok(p),
    }
}

fn write_text(path: &Path, text: &str) -> Result<(), ReportError> {
    fs::write(path, text).map_err(|source| ReportError::Io {
        path: path.display().to_string(),
        source,
    })
}

pub fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<(), ReportError> {
    let mut text = serde_json::to_string_pretty(value).map_err(|source| ReportError::Json {
        path: path.display().to_string(),
        source,
    })?;
    text.push('\n');
    write_text(path, &text)
}

fn point_names(n: usize, labels: Option<&[String]>) -> Vec<String> {
    match labels {
        Some(l) => l.to_vec(),
        None => (0..n).map(|i| format!("x{i}")).collect(),
    }
}

/// Square matrix as CSV with a header row and a leading label column.
pub fn matrix_csv(matrix: &[Vec<f64>], labels: Option<&[String]>) -> Result<String, ReportError> {
    let names = point_names(matrix.len(), labels);
    let mut w = csv::Writer::from_writer(Vec::new());
    let mut header = vec![String::new()];
    header.extend(names.iter().cloned());
    w.write_record(&header)?;
    for (name, row) in names.iter().zip(matrix) {
        let mut rec = vec![name.clone()];
        rec.extend(row.iter().map(|v| format!("{v:e}")));
        w.write_record(&rec)?;
    }
    let bytes = w.into_inner().map_err(|e| csv::Error::from(e.into_error()))?;
    Ok(String::from_utf8(bytes).expect("csv output is UTF-8"))
}

/// Parses [`matrix_csv`] output back into labels and values.
pub fn parse_matrix_csv(text: &str) -> Result<(Vec<String>, Vec<Vec<f64>>), ReportError> {
    let mut r = csv::Reader::from_reader(text.as_bytes());
    let labels: Vec<String> = r.headers()?.iter().skip(1).map(str::to_string).collect();
    let mut rows = Vec::new();
    for rec in r.records() {
        let rec = rec?;
        rows.push(
            rec.iter()
                .skip(1)
                .map(|s| s.parse::<f64>().unwrap_or(f64::NAN))
                .collect(),
        );
    }
    Ok((labels, rows))
}

pub fn write_matrix_csv(path: &Path, matrix: &[Vec<f64>], labels: Option<&[String]>) -> Result<(), ReportError> {
    write_text(path, &matrix_csv(matrix, labels)?)
}

/// Boundary of the unit ball of `spec` in the plane at `samples` equally
/// spaced angles.
pub fn ball_boundary(spec: &NormSpec, samples: usize) -> Result<Vec<[f64; 2]>, ReportError> {
    (0..samples)
        .map(|k| {
            let t = 2.0 * std::f64::consts::PI * k as f64 / samples as f64;
            let u = [t.cos(), t.sin()];
            let r = norm_eval(spec, &u)?;
            Ok([u[0] / r, u[1] / r])
        })
        .collect()
}

/// SVG 1.1 picture of the unit ball of `original`, optionally the unit ball
/// of `renormed`, and the points.
pub fn ball_svg(original: &NormSpec, renormed: Option<&NormSpec>, points: &PointSet) -> Result<String, ReportError> {
    if points.dim() != 2 {
        return Err(ReportError::NotPlanar(points.dim()));
    }
    let outer = ball_boundary(original, SVG_SCAN_POINTS)?;
    let inner = renormed.map(|s| ball_boundary(s, SVG_SCAN_POINTS)).transpose()?;
    let extent = outer
        .iter()
        .chain(inner.iter().flatten())
        .map(|p| p[0].abs().max(p[1].abs()))
        .chain(points.points.iter().map(|p| p[0].abs().max(p[1].abs())))
        .fold(0.0_f64, f64::max)
        .max(1e-9)
        * 1.1;
    let size = 480.0;
    let map = |p: [f64; 2]| {
        (
            size / 2.0 * (1.0 + p[0] / extent),
            size / 2.0 * (1.0 - p[1] / extent),
        )
    };
    let path = |pts: &[[f64; 2]]| {
        let mut d = String::new();
        for (k, &p) in pts.iter().enumerate() {
            let (x, y) = map(p);
            let _ = write!(d, "{}{x:.3},{y:.3} ", if k == 0 { "M" } else { "L" });
        }
        d.push('Z');
        d
    };
    let mut s = String::new();
    let _ = writeln!(s, r#"<?xml version="1.0" encoding="UTF-8"?>"#);
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{size}" height="{size}" viewBox="0 0 {size} {size}">"#
    );
    let _ = writeln!(s, r#"  <rect width="100%" height="100%" fill="white"/>"#);
    let (cx, cy) = map([0.0, 0.0]);
    let _ = writeln!(
        s,
        r##"  <g stroke="#bbbbbb" stroke-width="0.5"><line x1="0" y1="{cy}" x2="{size}" y2="{cy}"/><line x1="{cx}" y1="0" x2="{cx}" y2="{size}"/></g>"##
    );
    let _ = writeln!(
        s,
        r##"  <path id="original-ball" d="{}" fill="none" stroke="#1f77b4" stroke-width="1.5"/>"##,
        path(&outer)
    );
    if let Some(inner) = &inner {
        let _ = writeln!(
            s,
            r##"  <path id="renormed-ball" d="{}" fill="#ff7f0e" fill-opacity="0.15" stroke="#ff7f0e" stroke-width="1.5"/>"##,
            path(inner)
        );
    }
    let names = point_names(points.len(), points.labels.as_deref());
    for (p, name) in points.points.iter().zip(&names) {
        let (x, y) = map([p[0], p[1]]);
        let _ = writeln!(
            s,
            r##"  <circle cx="{x:.3}" cy="{y:.3}" r="3.5" fill="#d62728"><title>{name}</title></circle>"##
        );
    }
    let _ = writeln!(s, "</svg>");
    Ok(s)
}

pub fn write_svg(path: &Path, svg: &str) -> Result<(), ReportError> {
    write_text(path, svg)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn csv_round_trip() {
        let m = vec![vec![0.0, 1.5], vec![1.5, 0.0]];
        let text = matrix_csv(&m, None).unwrap();
        assert!(text.starts_with(",x0,x1\n"));
        let (labels, back) = parse_matrix_csv(&text).unwrap();
        assert_eq!(labels, vec!["x0", "x1"]);
        assert_eq!(back, m);
    }

    #[test]
    fn problem_rejects_unknown_fields() {
        let ok: ProblemFile = serde_json::from_str(r#"{"norm": {"variant": "Lp", "p": "inf"}, "N": 8}"#).unwrap();
        assert_eq!(ok.n, Some(8));
        assert!(serde_json::from_str::<ProblemFile>(r#"{"norm": {"variant": "Lp", "p": 2}, "nn": 8}"#).is_err());
    }

    #[test]
    fn square_ball_boundary() {
        let b = ball_boundary(&NormSpec::linf(), 8).unwrap();
        assert!((b[1][0] - 1.0).abs() < 1e-15 && (b[1][1] - 1.0).abs() < 1e-15);
    }

    #[test]
    fn svg_needs_the_plane() {
        let s = PointSet::standard_basis(3);
        assert!(matches!(ball_svg(&NormSpec::l2(), None, &s), Err(ReportError::NotPlanar(3))));
        let svg = ball_svg(&NormSpec::l2(), Some(&NormSpec::l1()), &PointSet::standard_basis(2)).unwrap();
        assert!(svg.contains("renormed-ball") && svg.matches("<circle").count() == 2);
    }
}
