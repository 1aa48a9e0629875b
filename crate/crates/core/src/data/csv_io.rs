//! CSV ingestion: RFC-4180, UTF-8, header row mandatory.

use std::path::Path;

use super::{Column, ColumnKind, Dataset, TableSchema};
use crate::error::{Error, Result};

/// What to do with blank cells. The default rejects them so no silent
/// imputation can leak into downstream metrics; `Fill` substitutes the column
/// median for numeric columns and the literal label `__missing__` for
/// categorical ones.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub enum FillPolicy {
    #[default]
    Reject,
    Fill,
}

pub const MISSING_LABEL: &str = "__missing__";

/// An untyped CSV table: header plus string cells. Used by the preprocess
/// pipeline to merge raw source tables before a schema is applied.
#[derive(Debug, Clone, PartialEq)]
pub struct RawTable {
    pub headers: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl RawTable {
    pub fn column_index(&self, name: &str) -> Result<usize> {
        self.headers
            .iter()
            .position(|h| h == name)
            .ok_or_else(|| Error::UnknownColumn(name.to_string()))
    }
}

/// Read a CSV file without applying a schema; every cell stays a string.
pub fn read_raw_csv(path: &Path) -> Result<RawTable> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(true)
        .flexible(false)
        .from_path(path)
        .map_err(|e| csv_error(path, e))?;
    let headers = reader
        .headers()
        .map_err(|e| csv_error(path, e))?
        .iter()
        .map(str::to_string)
        .collect::<Vec<_>>();
    if headers.is_empty() {
        return Err(Error::EmptyFile {
            path: path.display().to_string(),
        });
    }
    let mut rows = Vec::new();
    for record in reader.records() {
        let record = record.map_err(|e| csv_error(path, e))?;
        rows.push(record.iter().map(str::to_string).collect());
    }
    Ok(RawTable { headers, rows })
}

/// Load a CSV file against a schema. The header must contain every schema
/// column (order-insensitive; extra file columns are ignored). Numeric cells
/// are parsed with locale-independent decimal rules and must be finite.
pub fn load_csv(path: &Path, schema: &TableSchema, fill: FillPolicy) -> Result<Dataset> {
    let raw = read_raw_csv(path)?;
    dataset_from_raw(&raw, schema, fill)
}

/// Apply a schema to an in-memory table. Same contract as [`load_csv`].
pub fn dataset_from_raw(raw: &RawTable, schema: &TableSchema, fill: FillPolicy) -> Result<Dataset> {
    // Map each schema column to its position in the header.
    let mut positions = Vec::with_capacity(schema.len());
    for col in &schema.columns {
        let pos = raw
            .headers
            .iter()
            .position(|h| *h == col.name)
            .ok_or_else(|| Error::MissingColumn {
                column: col.name.clone(),
            })?;
        positions.push(pos);
    }

    #[derive(Default)]
    struct PendingColumn {
        numeric: Vec<f64>,
        labels: Vec<String>,
        // Row indices of blank cells, resolved after the full column is read.
        missing: Vec<usize>,
    }

    let mut pending: Vec<PendingColumn> = (0..schema.len())
        .map(|_| PendingColumn::default())
        .collect();

    for (row_idx, row) in raw.rows.iter().enumerate() {
        for (col_idx, (col, &pos)) in schema.columns.iter().zip(&positions).enumerate() {
            let cell = row.get(pos).map(String::as_str).unwrap_or("");
            let slot = &mut pending[col_idx];
            if cell.trim().is_empty() {
                match fill {
                    FillPolicy::Reject => {
                        return Err(Error::MissingValue {
                            row: row_idx,
                            column: col.name.clone(),
                        })
                    }
                    FillPolicy::Fill => {
                        slot.missing.push(row_idx);
                        match col.kind {
                            // Placeholder, replaced by the column median below.
                            ColumnKind::Numeric => slot.numeric.push(0.0),
                            ColumnKind::Categorical => slot.labels.push(MISSING_LABEL.to_string()),
                        }
                        continue;
                    }
                }
            }
            match col.kind {
                ColumnKind::Numeric => {
                    let value: f64 = cell.trim().parse().map_err(|_| Error::TypeParse {
                        row: row_idx,
                        column: col.name.clone(),
                        value: cell.to_string(),
                    })?;
                    if !value.is_finite() {
                        return Err(Error::TypeParse {
                            row: row_idx,
                            column: col.name.clone(),
                            value: cell.to_string(),
                        });
                    }
                    slot.numeric.push(value);
                }
                ColumnKind::Categorical => slot.labels.push(cell.to_string()),
            }
        }
    }

    let mut columns = Vec::with_capacity(schema.len());
    for (col, slot) in schema.columns.iter().zip(pending) {
        match col.kind {
            ColumnKind::Numeric => {
                let mut values = slot.numeric;
                if !slot.missing.is_empty() {
                    let present: Vec<f64> = values
                        .iter()
                        .enumerate()
                        .filter(|(i, _)| !slot.missing.contains(i))
                        .map(|(_, v)| *v)
                        .collect();
                    let fill_value = median(&present);
                    for &row in &slot.missing {
                        values[row] = fill_value;
                    }
                }
                columns.push(Column::Numeric(values));
            }
            ColumnKind::Categorical => columns.push(Column::Categorical(slot.labels)),
        }
    }

    Dataset::new(schema.clone(), columns)
}

/// Median of the present values; 0 when the whole column is blank.
fn median(values: &[f64]) -> f64 {
    if values.is_empty() {
        return 0.0;
    }
    let mut sorted = values.to_vec();
    sorted.sort_by(|a, b| a.partial_cmp(b).expect("finite values"));
    let n = sorted.len();
    if n % 2 == 1 {
        sorted[n / 2]
    } else {
        (sorted[n / 2 - 1] + sorted[n / 2]) / 2.0
    }
}

fn csv_error(path: &Path, e: csv::Error) -> Error {
    match e.kind() {
        csv::ErrorKind::Io(_) => {
            if let csv::ErrorKind::Io(io) = e.into_kind() {
                Error::io(path, io)
            } else {
                unreachable!()
            }
        }
        _ => Error::Format {
            path: path.display().to_string(),
            message: e.to_string(),
        },
    }
}
