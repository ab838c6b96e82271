use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("failed to read {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("{path}: line {line}: expected {expected} fields, found {found}")]
    RaggedRow {
        path: PathBuf,
        line: u64,
        expected: usize,
        found: usize,
    },

    #[error("{0}: file contains no data rows")]
    EmptyInput(PathBuf),

    #[error("column {index} out of range (file has {width} columns)")]
    ColumnOutOfRange { index: usize, width: usize },

    #[error("malformed delimited input: {0}")]
    Csv(#[from] csv::Error),

    #[error("invalid dataset: {0}")]
    InvalidDataset(String),

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("failed to parse {what}: {message}")]
    Parse { what: String, message: String },

    #[error("probability {value} for {context} is outside [0, 1]")]
    ProbabilityOutOfRange { context: String, value: f64 },

    #[error("sample set is empty")]
    EmptySampleSet,

    #[error("row index {row} out of range for dataset with {n_rows} rows")]
    RowOutOfRange { row: usize, n_rows: usize },

    #[error("row index {0} appears more than once in the sample set")]
    DuplicateRow(usize),

    #[error("attribute index {index} out of range ({count} attributes)")]
    AttributeOutOfRange { index: usize, count: usize },

    #[error("at least two active attributes are required, got {0}")]
    TooFewActiveAttributes(usize),

    #[error("attribute {0} is not in the active set")]
    InactiveAttribute(usize),

    #[error("distributions have different lengths ({left} vs {right})")]
    DistributionMismatch { left: usize, right: usize },

    #[error("invalid distribution: {0}")]
    InvalidDistribution(String),

    #[error("reference distribution assigns zero mass to category {category} which has mass {mass} in the compared distribution")]
    SupportViolation { category: usize, mass: f64 },

    #[error("working set is unsplittable: every active attribute is constant")]
    Unsplittable,

    #[error("attribute {0} is constant within the working set")]
    ConstantAttribute(usize),

    #[error("dataset needs at least {needed} {what}, found {found}")]
    DatasetTooSmall {
        what: &'static str,
        needed: usize,
        found: usize,
    },

    #[error("k = {k} exceeds the number of rows ({n_rows})")]
    TooManyClusters { k: usize, n_rows: usize },

    #[error("row has {found} values but the dataset has {expected} attributes")]
    ArityMismatch { expected: usize, found: usize },

    #[error("result has no recorded splits and cannot route new rows")]
    NotRoutable,

    #[error("dataset has no class labels")]
    MissingLabels,
}

impl Error {
    /// Input problems (bad files, bad flags) versus failures inside an algorithm.
    pub fn is_input_error(&self) -> bool {
        !matches!(
            self,
            Error::Unsplittable
                | Error::ConstantAttribute(_)
                | Error::SupportViolation { .. }
                | Error::NotRoutable
        )
    }

    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}
