//! Crate-wide error type.

use thiserror::Error;

use crate::data::ColumnKind;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("column `{0}` not found")]
    UnknownColumn(String),

    #[error("schema column `{column}` is missing from the input header")]
    MissingColumn { column: String },

    #[error("cannot parse `{value}` as a number at row {row}, column `{column}`")]
    TypeParse {
        row: usize,
        column: String,
        value: String,
    },

    #[error("missing value at row {row}, column `{column}` and no fill policy is set")]
    MissingValue { row: usize, column: String },

    #[error("`{path}` has no header row")]
    EmptyFile { path: String },

    #[error("dataset validation failed:\n  {}", violations.join("\n  "))]
    ValidationFailure { violations: Vec<String> },

    #[error("column `{column}` is {actual}, expected {expected}")]
    KindMismatch {
        column: String,
        expected: ColumnKind,
        actual: ColumnKind,
    },

    #[error("invalid split ratios: {0}")]
    InvalidRatios(String),

    #[error("division by zero while deriving `{column}` at row {row}")]
    DivisionByZero { column: String, row: usize },

    #[error("column name `{0}` already exists")]
    NameCollision(String),

    #[error("empty input: {0}")]
    EmptyInput(&'static str),

    #[error("count vector length {got} does not match category index size {expected}")]
    IndexMismatch { expected: usize, got: usize },

    #[error("label `{label}` is not covered by the category index for `{column}`")]
    UnknownLabel { column: String, label: String },

    #[error("length mismatch: {left} vs {right}")]
    LengthMismatch { left: usize, right: usize },

    #[error("histogram bin count must be positive")]
    ZeroBins,

    #[error("matrix shapes differ: {left} vs {right}")]
    ShapeMismatch { left: String, right: String },

    #[error("matrix column orderings differ")]
    ColumnOrderMismatch,

    #[error("schema mismatch: {0}")]
    SchemaMismatch(String),

    #[error("training labels contain a single class")]
    SingleClassTraining,

    #[error("true labels contain a single class; ROC AUC is undefined")]
    SingleClassTruth,

    #[error("support for itemset {0:?} is missing from the provided itemsets")]
    MissingSubsetSupport(Vec<String>),

    #[error("minimum support must lie in (0, 1], got {0}")]
    InvalidSupport(f64),

    #[error("reference dataset is empty")]
    EmptyReference,

    #[error("invalid synthesizer spec: {0}")]
    InvalidSpec(String),

    #[error("{path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },

    #[error("{path}: {message}")]
    Format { path: String, message: String },

    #[error("{stage} stage failed: {source}")]
    Stage {
        stage: &'static str,
        #[source]
        source: Box<Error>,
    },

    #[error("column `{column}`: {source}")]
    Column {
        column: String,
        #[source]
        source: Box<Error>,
    },
}

impl Error {
    pub fn io(path: &std::path::Path, source: std::io::Error) -> Self {
        Error::Io {
            path: path.display().to_string(),
            source,
        }
    }

    pub(crate) fn in_column(column: &str, source: Error) -> Self {
        Error::Column {
            column: column.to_string(),
            source: Box::new(source),
        }
    }
}
