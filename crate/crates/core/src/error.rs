use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("{path}: file is empty or has no data rows")]
    EmptyFile { path: PathBuf },

    #[error("missing value in column `{column}` at data row {row}")]
    MissingCell { row: usize, column: String },

    #[error("target column `{0}` not found in header")]
    UnknownTarget(String),

    #[error("target column `{0}` has fewer than two distinct classes")]
    SingleClassTarget(String),

    #[error("malformed schema line {line}: {reason}")]
    Schema { line: usize, reason: String },

    #[error("column `{column}`: {reason}")]
    SchemaMismatch { column: String, reason: String },

    #[error("invalid dataset: {0}")]
    InvalidDataset(String),

    #[error("class {class} has {count} instances, fewer than the {folds} folds requested")]
    ClassTooSmall { class: usize, count: usize, folds: usize },

    #[error("union estimate requested for an empty rule index set")]
    EmptyIndexSet,

    #[error("rule index {index} out of range for a model with {n_rules} rules")]
    RuleIndexOutOfRange { index: usize, n_rules: usize },

    #[error("row has {got} features, model expects {expected}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("brute-force enumeration of {n_classes}^{n} sequences is too large")]
    SizeTooLarge { n: usize, n_classes: usize },

    #[error("the integer code is defined for positive integers only")]
    NonPositiveInteger,

    #[error("rule has no literals")]
    EmptyRule,

    #[error("literal {index} has zero admissible values")]
    ZeroAdmissibleValues { index: usize },

    #[error("candidate rule covers no instance outside the current rule set")]
    NoNewCoverage,

    #[error("child and left-out covers do not partition the parent cover")]
    CoverMismatch,

    #[error("AUC needs both positive and negative instances")]
    SingleClass,

    #[error("metric is undefined for a model with no rules")]
    EmptyModel,

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("unsupported model format version {0}")]
    UnsupportedVersion(u32),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}
