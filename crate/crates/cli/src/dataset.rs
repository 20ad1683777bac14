//! Reader for cumulative-PoD datasets: `year,pod_percent[,weight]`.

use std::path::Path;

use csv::{ReaderBuilder, Trim};
use extbc::{DataPoint, HistoricalDataset, ModelError};
use thiserror::Error;

const COLUMNS: [&str; 3] = ["year", "pod_percent", "weight"];

/// Rows and columns are 1-based; row 1 is the header.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum DatasetError {
    #[error("dataset is empty")]
    Empty,
    #[error("malformed header {found:?}: expected `year,pod_percent` or `year,pod_percent,weight`")]
    MalformedHeader { found: String },
    #[error("row {row}, column {column}: {value:?} is not a number")]
    NonNumericCell { row: u64, column: usize, value: String },
    #[error("row {row}: year {year} does not exceed the previous year {previous}")]
    NonIncreasingYear { row: u64, year: f64, previous: f64 },
    #[error("row {row}: expected {expected} fields, found {found}")]
    FieldCount { row: u64, expected: usize, found: usize },
    #[error("row {row}, column {column}: {value} is out of range ({expected})")]
    OutOfRange {
        row: u64,
        column: usize,
        value: f64,
        expected: &'static str,
    },
    #[error("malformed CSV: {0}")]
    Csv(String),
    #[error("{expected} weights needed, {found} given")]
    WeightCount { expected: usize, found: usize },
    #[error("invalid dataset: {0}")]
    Invalid(#[from] ModelError),
}

pub fn parse_dataset(text: &str, label: &str) -> Result<HistoricalDataset, DatasetError> {
    let text = text.strip_prefix('\u{feff}').unwrap_or(text);
    if text.trim().is_empty() {
        return Err(DatasetError::Empty);
    }
    let mut reader = ReaderBuilder::new()
        .has_headers(false)
        .flexible(true)
        .trim(Trim::All)
        .from_reader(text.as_bytes());
    let mut records = reader.records();
    let header = match records.next() {
        Some(r) => r.map_err(|e| DatasetError::Csv(e.to_string()))?,
        None => return Err(DatasetError::Empty),
    };
    let width = header.len();
    let matches = (2..=3).contains(&width)
        && header
            .iter()
            .zip(COLUMNS)
            .all(|(h, want)| h.eq_ignore_ascii_case(want));
    if !matches {
        return Err(DatasetError::MalformedHeader {
            found: header.iter().collect::<Vec<_>>().join(","),
        });
    }

    let mut points: Vec<DataPoint> = Vec::new();
    for record in records {
        let record = record.map_err(|e| DatasetError::Csv(e.to_string()))?;
        let row = record.position().map_or(0, |p| p.line());
        if record.len() != width {
            return Err(DatasetError::FieldCount {
                row,
                expected: width,
                found: record.len(),
            });
        }
        let mut cells = [0.0, 0.0, 1.0];
        for (i, cell) in record.iter().enumerate() {
            cells[i] = match cell.parse::<f64>() {
                Ok(v) if v.is_finite() => v,
                _ => {
                    return Err(DatasetError::NonNumericCell {
                        row,
                        column: i + 1,
                        value: cell.to_string(),
                    })
                }
            };
        }
        let [year, pct, weight] = cells;
        if year <= 0.0 {
            return Err(DatasetError::OutOfRange {
                row,
                column: 1,
                value: year,
                expected: "> 0",
            });
        }
        if let Some(prev) = points.last() {
            if year <= prev.t {
                return Err(DatasetError::NonIncreasingYear {
                    row,
                    year,
                    previous: prev.t,
                });
            }
        }
        if !(0.0..=100.0).contains(&pct) {
            return Err(DatasetError::OutOfRange {
                row,
                column: 2,
                value: pct,
                expected: "0 to 100",
            });
        }
        if weight < 0.0 {
            return Err(DatasetError::OutOfRange {
                row,
                column: 3,
                value: weight,
                expected: ">= 0",
            });
        }
        points.push(DataPoint {
            t: year,
            p_obs: pct / 100.0,
            weight,
        });
    }
    if points.is_empty() {
        return Err(DatasetError::Empty);
    }
    Ok(HistoricalDataset::new(label, points)?)
}

/// Label used when none is given: the file stem.
pub fn default_label(path: &Path) -> String {
    path.file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| "dataset".into())
}

/// Parses a comma-separated weight list and applies it point by point.
pub fn apply_weights(d: HistoricalDataset, list: &str) -> Result<HistoricalDataset, DatasetError> {
    let weights = list
        .split(',')
        .enumerate()
        .map(|(i, w)| {
            let w = w.trim();
            w.parse::<f64>().map_err(|_| DatasetError::NonNumericCell {
                row: 1,
                column: i + 1,
                value: w.to_string(),
            })
        })
        .collect::<Result<Vec<_>, _>>()?;
    if weights.len() != d.points.len() {
        return Err(DatasetError::WeightCount {
            expected: d.points.len(),
            found: weights.len(),
        });
    }
    let points = d
        .points
        .iter()
        .zip(weights)
        .map(|(p, weight)| DataPoint { weight, ..*p })
        .collect();
    Ok(HistoricalDataset::new(d.label, points)?)
}
