use std::io;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("empty dataset")]
    EmptyDataset,

    #[error("row {row}: expected {expected} fields, found {found}")]
    RaggedRow {
        row: usize,
        expected: usize,
        found: usize,
    },

    #[error("csv error: {0}")]
    Csv(#[from] csv::Error),

    #[error("io error: {0}")]
    Io(#[from] io::Error),

    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),

    #[error("duplicate attribute name `{0}`")]
    DuplicateAttribute(String),

    #[error("unknown attribute `{0}`")]
    UnknownAttribute(String),

    #[error("column `{column}` forced numeric but row {row} holds `{value}`")]
    NotNumeric {
        column: String,
        row: usize,
        value: String,
    },

    #[error("itemset holds two items for attribute {0}")]
    ConflictingItems(u32),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("cannot fit bins: no observed values")]
    NoValues,

    #[error("attribute `{0}` has no observed value to impute from")]
    NoKnownValues(String),

    #[error("fired rule set is empty")]
    EmptyFiredSet,

    #[error("schema mismatch: {0}")]
    SchemaMismatch(String),

    #[error("cannot mask {requested} cells without emptying a record (at most {available})")]
    MaskUnsatisfiable { requested: usize, available: usize },

    #[error("cell ({row}, {column}) is already missing before injection")]
    PreexistingMissing { row: usize, column: String },

    #[error("{context}: {source}")]
    Context {
        context: String,
        #[source]
        source: Box<Error>,
    },
}

impl Error {
    pub fn context(self, context: impl Into<String>) -> Self {
        Error::Context {
            context: context.into(),
            source: Box::new(self),
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
