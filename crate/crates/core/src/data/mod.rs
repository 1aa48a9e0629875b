//! Schema-validated columnar datasets shared by every metric module.
//!
//! A [`Dataset`] is an immutable column store: numeric columns hold finite
//! `f64` values, categorical columns hold string labels, and every column has
//! the same length. All ingestion goes through [`load_csv`](csv_io::load_csv)
//! or [`Dataset::new`], both of which enforce the invariants, so downstream
//! metric code never has to re-check for NaNs or ragged columns.

mod csv_io;

pub use csv_io::{dataset_from_raw, load_csv, read_raw_csv, FillPolicy, RawTable, MISSING_LABEL};

use std::collections::{BTreeSet, HashMap};
use std::fmt;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Whether a column holds real numbers or string labels.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ColumnKind {
    Numeric,
    Categorical,
}

impl fmt::Display for ColumnKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ColumnKind::Numeric => write!(f, "numeric"),
            ColumnKind::Categorical => write!(f, "categorical"),
        }
    }
}

/// One column declaration: name, kind, and an optional short alias used when
/// rendering reports (e.g. "N1", "C4").
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ColumnSchema {
    pub name: String,
    pub kind: ColumnKind,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub alias: Option<String>,
}

impl ColumnSchema {
    pub fn numeric(name: impl Into<String>) -> Self {
        ColumnSchema {
            name: name.into(),
            kind: ColumnKind::Numeric,
            alias: None,
        }
    }

    pub fn categorical(name: impl Into<String>) -> Self {
        ColumnSchema {
            name: name.into(),
            kind: ColumnKind::Categorical,
            alias: None,
        }
    }
}

/// Ordered list of column declarations.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TableSchema {
    pub columns: Vec<ColumnSchema>,
}

impl TableSchema {
    pub fn new(columns: Vec<ColumnSchema>) -> Result<Self> {
        let schema = TableSchema { columns };
        schema.check_unique()?;
        Ok(schema)
    }

    /// Load a schema from a JSON document of the form
    /// `{"columns":[{"name":...,"kind":"numeric"|"categorical","alias":...}]}`.
    pub fn from_json_file(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        let schema: TableSchema = serde_json::from_str(&text).map_err(|e| Error::Format {
            path: path.display().to_string(),
            message: e.to_string(),
        })?;
        schema.check_unique()?;
        Ok(schema)
    }

    pub fn to_json_file(&self, path: &Path) -> Result<()> {
        let text = serde_json::to_string_pretty(self).expect("schema serializes");
        std::fs::write(path, text).map_err(|e| Error::io(path, e))
    }

    fn check_unique(&self) -> Result<()> {
        let mut violations = Vec::new();
        let mut names = BTreeSet::new();
        let mut aliases = BTreeSet::new();
        for col in &self.columns {
            if !names.insert(col.name.as_str()) {
                violations.push(format!("duplicate column name `{}`", col.name));
            }
            if let Some(alias) = &col.alias {
                if !aliases.insert(alias.as_str()) {
                    violations.push(format!("duplicate column alias `{alias}`"));
                }
            }
        }
        if violations.is_empty() {
            Ok(())
        } else {
            Err(Error::ValidationFailure { violations })
        }
    }

    pub fn len(&self) -> usize {
        self.columns.len()
    }

    pub fn is_empty(&self) -> bool {
        self.columns.is_empty()
    }

    pub fn index_of(&self, name: &str) -> Result<usize> {
        self.columns
            .iter()
            .position(|c| c.name == name)
            .ok_or_else(|| Error::UnknownColumn(name.to_string()))
    }

    pub fn kind_of(&self, name: &str) -> Result<ColumnKind> {
        Ok(self.columns[self.index_of(name)?].kind)
    }

    pub fn names(&self) -> impl Iterator<Item = &str> {
        self.columns.iter().map(|c| c.name.as_str())
    }

    pub fn numeric_names(&self) -> Vec<String> {
        self.columns
            .iter()
            .filter(|c| c.kind == ColumnKind::Numeric)
            .map(|c| c.name.clone())
            .collect()
    }

    pub fn categorical_names(&self) -> Vec<String> {
        self.columns
            .iter()
            .filter(|c| c.kind == ColumnKind::Categorical)
            .map(|c| c.name.clone())
            .collect()
    }

    /// Display label for a column: the alias when present, the name otherwise.
    pub fn label_of(&self, name: &str) -> String {
        self.columns
            .iter()
            .find(|c| c.name == name)
            .and_then(|c| c.alias.clone())
            .unwrap_or_else(|| name.to_string())
    }
}

/// Column storage. Numeric cells are finite; both variants are append-only.
#[derive(Debug, Clone, PartialEq)]
pub enum Column {
    Numeric(Vec<f64>),
    Categorical(Vec<String>),
}

impl Column {
    pub fn len(&self) -> usize {
        match self {
            Column::Numeric(v) => v.len(),
            Column::Categorical(v) => v.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn kind(&self) -> ColumnKind {
        match self {
            Column::Numeric(_) => ColumnKind::Numeric,
            Column::Categorical(_) => ColumnKind::Categorical,
        }
    }

    /// Canonical text form of one cell, as written to CSV. Numeric cells use
    /// the shortest representation that parses back to the same `f64`, so the
    /// text form is injective over distinct values.
    pub fn cell_text(&self, row: usize) -> String {
        match self {
            Column::Numeric(v) => format_number(v[row]),
            Column::Categorical(v) => v[row].clone(),
        }
    }

    fn take_rows(&self, rows: &[usize]) -> Column {
        match self {
            Column::Numeric(v) => Column::Numeric(rows.iter().map(|&i| v[i]).collect()),
            Column::Categorical(v) => {
                Column::Categorical(rows.iter().map(|&i| v[i].clone()).collect())
            }
        }
    }
}

/// Shortest round-trip text form of a finite `f64`.
pub fn format_number(v: f64) -> String {
    format!("{v}")
}

/// An immutable typed table. Instances of the training, holdout, evaluation,
/// and synthetic datasets all share this representation.
#[derive(Debug, Clone, PartialEq)]
pub struct Dataset {
    schema: TableSchema,
    columns: Vec<Column>,
    row_count: usize,
}

impl Dataset {
    /// Build a dataset, enforcing every invariant (`validate` on the result
    /// always passes).
    pub fn new(schema: TableSchema, columns: Vec<Column>) -> Result<Self> {
        let row_count = columns.first().map_or(0, Column::len);
        let dataset = Dataset {
            schema,
            columns,
            row_count,
        };
        dataset.validate()?;
        Ok(dataset)
    }

    pub fn schema(&self) -> &TableSchema {
        &self.schema
    }

    pub fn row_count(&self) -> usize {
        self.row_count
    }

    pub fn columns(&self) -> &[Column] {
        &self.columns
    }

    pub fn column(&self, name: &str) -> Result<&Column> {
        Ok(&self.columns[self.schema.index_of(name)?])
    }

    /// Numeric column values, or `KindMismatch` if the column is categorical.
    pub fn numeric(&self, name: &str) -> Result<&[f64]> {
        match self.column(name)? {
            Column::Numeric(v) => Ok(v),
            Column::Categorical(_) => Err(Error::KindMismatch {
                column: name.to_string(),
                expected: ColumnKind::Numeric,
                actual: ColumnKind::Categorical,
            }),
        }
    }

    /// Categorical column labels, or `KindMismatch` if the column is numeric.
    pub fn categorical(&self, name: &str) -> Result<&[String]> {
        match self.column(name)? {
            Column::Categorical(v) => Ok(v),
            Column::Numeric(_) => Err(Error::KindMismatch {
                column: name.to_string(),
                expected: ColumnKind::Categorical,
                actual: ColumnKind::Numeric,
            }),
        }
    }

    /// Canonical text form of one cell (used for group keys and CSV output).
    pub fn cell_text(&self, column: usize, row: usize) -> String {
        self.columns[column].cell_text(row)
    }

    /// New dataset containing the given rows, in the given order. Indices may
    /// repeat (bootstrap resampling relies on this).
    pub fn take_rows(&self, rows: &[usize]) -> Dataset {
        Dataset {
            schema: self.schema.clone(),
            columns: self.columns.iter().map(|c| c.take_rows(rows)).collect(),
            row_count: rows.len(),
        }
    }

    /// Append a numeric column. Fails with `NameCollision` if the name is
    /// already taken, `LengthMismatch` if the values do not line up.
    pub fn with_numeric_column(&self, name: &str, values: Vec<f64>) -> Result<Dataset> {
        self.append_column(ColumnSchema::numeric(name), Column::Numeric(values))
    }

    /// Append a categorical column.
    pub fn with_categorical_column(&self, name: &str, values: Vec<String>) -> Result<Dataset> {
        self.append_column(ColumnSchema::categorical(name), Column::Categorical(values))
    }

    fn append_column(&self, col_schema: ColumnSchema, column: Column) -> Result<Dataset> {
        if self.schema.index_of(&col_schema.name).is_ok() {
            return Err(Error::NameCollision(col_schema.name));
        }
        if column.len() != self.row_count {
            return Err(Error::LengthMismatch {
                left: self.row_count,
                right: column.len(),
            });
        }
        let mut schema = self.schema.clone();
        schema.columns.push(col_schema);
        let mut columns = self.columns.clone();
        columns.push(column);
        Dataset::new(schema, columns)
    }

    /// Keep only the named columns, in the given order.
    pub fn select(&self, names: &[String]) -> Result<Dataset> {
        let mut columns = Vec::with_capacity(names.len());
        let mut schema_cols = Vec::with_capacity(names.len());
        for name in names {
            let idx = self.schema.index_of(name)?;
            schema_cols.push(self.schema.columns[idx].clone());
            columns.push(self.columns[idx].clone());
        }
        Dataset::new(
            TableSchema {
                columns: schema_cols,
            },
            columns,
        )
    }

    /// Check every dataset invariant, collecting all violations instead of
    /// stopping at the first. Never mutates the dataset.
    pub fn validate(&self) -> Result<()> {
        let mut violations = Vec::new();
        if let Err(Error::ValidationFailure { violations: v }) = self.schema.check_unique() {
            violations.extend(v);
        }
        if self.schema.columns.len() != self.columns.len() {
            violations.push(format!(
                "schema declares {} columns but {} are present",
                self.schema.columns.len(),
                self.columns.len()
            ));
        }
        for (decl, col) in self.schema.columns.iter().zip(&self.columns) {
            if col.len() != self.row_count {
                violations.push(format!(
                    "column `{}` has {} rows, expected {}",
                    decl.name,
                    col.len(),
                    self.row_count
                ));
            }
            if decl.kind != col.kind() {
                violations.push(format!(
                    "column `{}` is stored as {} but declared {}",
                    decl.name,
                    col.kind(),
                    decl.kind
                ));
            }
            if let Column::Numeric(values) = col {
                if let Some(row) = values.iter().position(|v| !v.is_finite()) {
                    violations.push(format!(
                        "column `{}` holds a non-finite value at row {row}",
                        decl.name
                    ));
                }
            }
        }
        if violations.is_empty() {
            Ok(())
        } else {
            Err(Error::ValidationFailure { violations })
        }
    }

    /// Render the dataset as RFC-4180 CSV text (header row first). This is the
    /// canonical byte form used both for file output and for fingerprinting.
    pub fn to_csv_string(&self) -> String {
        let mut writer = csv::WriterBuilder::new().from_writer(Vec::new());
        let header: Vec<&str> = self.schema.names().collect();
        writer.write_record(&header).expect("write to Vec");
        for row in 0..self.row_count {
            let record: Vec<String> = (0..self.columns.len())
                .map(|c| self.cell_text(c, row))
                .collect();
            writer.write_record(&record).expect("write to Vec");
        }
        String::from_utf8(writer.into_inner().expect("flush to Vec")).expect("CSV is UTF-8")
    }

    pub fn write_csv(&self, path: &Path) -> Result<()> {
        std::fs::write(path, self.to_csv_string()).map_err(|e| Error::io(path, e))
    }
}

/// Ordered label universe for one categorical column, drawn from the union of
/// two datasets so that both sides can be expressed over the same support.
#[derive(Debug, Clone, PartialEq)]
pub struct CategoryIndex {
    column: String,
    labels: Vec<String>,
    positions: HashMap<String, usize>,
}

impl CategoryIndex {
    /// Build an index from an explicit label set (deduplicated, sorted).
    pub fn from_labels(column: &str, labels: impl IntoIterator<Item = String>) -> Self {
        let set: BTreeSet<String> = labels.into_iter().collect();
        let labels: Vec<String> = set.into_iter().collect();
        let positions = labels
            .iter()
            .enumerate()
            .map(|(i, l)| (l.clone(), i))
            .collect();
        CategoryIndex {
            column: column.to_string(),
            labels,
            positions,
        }
    }

    pub fn column(&self) -> &str {
        &self.column
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn position(&self, label: &str) -> Option<usize> {
        self.positions.get(label).copied()
    }

    /// Count how often each indexed label occurs in `values`. Labels not
    /// covered by the index are an error.
    pub fn count_labels(&self, values: &[String]) -> Result<Vec<f64>> {
        let mut counts = vec![0.0; self.labels.len()];
        for value in values {
            match self.position(value) {
                Some(i) => counts[i] += 1.0,
                None => {
                    return Err(Error::UnknownLabel {
                        column: self.column.clone(),
                        label: value.clone(),
                    })
                }
            }
        }
        Ok(counts)
    }
}

/// Index over the union of the labels the two datasets hold in `column`.
/// Ordering is lexicographic, so `align_categories(a, b)` and
/// `align_categories(b, a)` agree.
pub fn align_categories(a: &Dataset, b: &Dataset, column: &str) -> Result<CategoryIndex> {
    let left = a.categorical(column)?;
    let right = b.categorical(column)?;
    Ok(CategoryIndex::from_labels(
        column,
        left.iter().chain(right.iter()).cloned(),
    ))
}
