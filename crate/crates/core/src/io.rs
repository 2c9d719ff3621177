//! Point-cloud, rule and report files.
//!
//! CSV clouds have a header `x1,...,xd` optionally followed by `w`; without a
//! `w` column every atom gets weight `1/N`. JSON clouds are
//! `{"dimension": d, "atoms": [[...], ...], "weights": [...]}`. Row numbers in
//! errors are 1-based file lines, so the first data row is row 2.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::error::Error;
use crate::measure::{DiscreteMeasure, Point};

#[derive(Debug, Error)]
pub enum FormatError {
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("malformed header: {0}")]
    Header(String),
    #[error("row {row}: {message}")]
    Row { row: u64, message: String },
    #[error("invalid JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error("invalid measure: {0}")]
    Measure(#[from] Error),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
struct MeasureFile {
    dimension: usize,
    atoms: Vec<Vec<f64>>,
    weights: Vec<f64>,
}

pub fn measure_to_json(measure: &DiscreteMeasure) -> String {
    let file = MeasureFile {
        dimension: measure.dimension(),
        atoms: measure.atoms().iter().map(|p| p.coords().to_vec()).collect(),
        weights: measure.weights().to_vec(),
    };
    serde_json::to_string_pretty(&file).expect("measure serializes")
}

pub fn parse_measure_json(text: &str) -> Result<DiscreteMeasure, FormatError> {
    let file: MeasureFile = serde_json::from_str(text)?;
    if let Some(index) = file.atoms.iter().position(|a| a.len() != file.dimension) {
        return Err(Error::DimensionMismatch {
            index,
            expected: file.dimension,
            found: file.atoms[index].len(),
        }
        .into());
    }
    Ok(DiscreteMeasure::from_rows(file.atoms, file.weights)?)
}

/// CSV with a `w` column, every value written with 17 significant digits.
pub fn measure_to_csv(measure: &DiscreteMeasure) -> String {
    let mut out = String::new();
    let header: Vec<String> = (1..=measure.dimension()).map(|i| format!("x{i}")).collect();
    out.push_str(&header.join(","));
    out.push_str(",w\n");
    for (p, w) in measure.iter() {
        for c in p.coords() {
            let _ = write!(out, "{c:.16e},");
        }
        let _ = writeln!(out, "{w:.16e}");
    }
    out
}

pub fn parse_measure_csv(text: &str) -> Result<DiscreteMeasure, FormatError> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(true)
        .trim(csv::Trim::All)
        .from_reader(text.as_bytes());
    let header = reader
        .headers()
        .map_err(|e| FormatError::Header(e.to_string()))?
        .clone();
    let names: Vec<&str> = header.iter().collect();
    let has_weight = names.last() == Some(&"w");
    let dim = names.len() - usize::from(has_weight);
    if dim == 0 {
        return Err(FormatError::Header("expected columns x1,...,xd[,w]".into()));
    }
    for (i, name) in names[..dim].iter().enumerate() {
        if *name != format!("x{}", i + 1) {
            return Err(FormatError::Header(format!(
                "column {} is `{name}`, expected `x{}`",
                i + 1,
                i + 1
            )));
        }
    }

    let mut atoms = Vec::new();
    let mut weights = Vec::new();
    for record in reader.records() {
        let record = record.map_err(|e| FormatError::Row {
            row: e.position().map_or(0, |p| p.line()),
            message: e.to_string(),
        })?;
        let row = record.position().map_or(0, |p| p.line());
        if record.len() != names.len() {
            return Err(FormatError::Row {
                row,
                message: format!("{} fields, expected {}", record.len(), names.len()),
            });
        }
        let mut values = Vec::with_capacity(record.len());
        for (col, field) in record.iter().enumerate() {
            let v: f64 = field.parse().map_err(|_| FormatError::Row {
                row,
                message: format!("column {}: `{field}` is not a number", col + 1),
            })?;
            if !v.is_finite() {
                return Err(FormatError::Row {
                    row,
                    message: format!("column {}: non-finite value `{field}`", col + 1),
                });
            }
            values.push(v);
        }
        if has_weight {
            let w = values.pop().unwrap_or_default();
            if w < 0.0 {
                return Err(FormatError::Row {
                    row,
                    message: format!("negative weight {w}"),
                });
            }
            weights.push(w);
        }
        atoms.push(Point::new(values)?);
    }
    if atoms.is_empty() {
        return Err(FormatError::Row {
            row: 2,
            message: "no data rows".into(),
        });
    }
    if !has_weight {
        weights = vec![1.0 / atoms.len() as f64; atoms.len()];
    }
    Ok(DiscreteMeasure::new(atoms, weights)?)
}

/// Parses either format, choosing JSON when the first non-blank byte is `{`.
pub fn parse_cloud_str(text: &str) -> Result<DiscreteMeasure, FormatError> {
    let measure = if text.trim_start().starts_with('{') {
        parse_measure_json(text)?
    } else {
        parse_measure_csv(text)?
    };
    Ok(measure.canonical())
}

/// Reads a CSV or JSON point cloud and canonicalizes it.
pub fn parse_cloud(path: &Path) -> Result<DiscreteMeasure, FormatError> {
    parse_cloud_str(&read_text(path)?)
}

pub fn read_text(path: &Path) -> Result<String, FormatError> {
    fs::read_to_string(path).map_err(|source| FormatError::Io {
        path: path.to_path_buf(),
        source,
    })
}

pub fn read_json<T: DeserializeOwned>(path: &Path) -> Result<T, FormatError> {
    Ok(serde_json::from_str(&read_text(path)?)?)
}

pub fn to_json<T: Serialize>(value: &T) -> String {
    serde_json::to_string_pretty(value).expect("value serializes")
}

pub fn write_text(path: &Path, text: &str) -> Result<(), FormatError> {
    fs::write(path, text).map_err(|source| FormatError::Io {
        path: path.to_path_buf(),
        source,
    })
}
