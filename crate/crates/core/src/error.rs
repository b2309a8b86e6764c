use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("{path}: malformed CSV: {source}")]
    Csv {
        path: PathBuf,
        #[source]
        source: csv::Error,
    },

    #[error("label column `{0}` not found in header")]
    MissingLabelColumn(String),

    #[error("row {row}, column `{column}`: cannot parse `{value}` as a number")]
    NonNumericCell {
        row: u64,
        column: String,
        value: String,
    },

    #[error("row {row}, column `{column}`: non-finite value")]
    NonFiniteCell { row: u64, column: String },

    #[error("label cardinality {0}, expected 2")]
    LabelCardinality(usize),

    #[error("dataset is empty")]
    EmptyDataset,

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("length mismatch: {left} vs {right}")]
    LengthMismatch { left: usize, right: usize },

    #[error("empty input")]
    EmptyInput,

    #[error("invalid dataset: {0}")]
    InvalidDataset(String),

    #[error("class {class} has {count} samples, at least {required} required")]
    TooFewSamples {
        class: u8,
        count: usize,
        required: usize,
    },

    #[error("chromosome has no expressed genes")]
    EmptyChromosome,

    #[error("invalid chromosome encoding: {0}")]
    ChromosomeEncoding(String),

    #[error("AUC undefined: labels contain a single class")]
    AucUndefined,

    #[error("training data contains a single class")]
    SingleClass,

    #[error("non-finite loss at epoch {epoch}")]
    NonFiniteLoss { epoch: usize },

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("{}member {member_index}: {source}", generation.map(|g| format!("generation {g}, ")).unwrap_or_default())]
    Evaluation {
        generation: Option<usize>,
        member_index: usize,
        #[source]
        source: Box<Error>,
    },

    #[error("worker crashed while evaluating member {member_index}: {message}")]
    WorkerPanic {
        member_index: usize,
        message: String,
    },

    #[error("determinism regression: trace under {mode} diverges from {reference}")]
    TraceDivergence { mode: String, reference: String },

    #[error("{0}")]
    Report(String),

    #[error("{path}: {source}")]
    Json {
        path: PathBuf,
        #[source]
        source: serde_json::Error,
    },
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    pub(crate) fn config(msg: impl Into<String>) -> Self {
        Error::Config(msg.into())
    }

    /// Attach a generation number to an evaluation failure.
    pub(crate) fn in_generation(self, generation: usize) -> Self {
        match self {
            Error::Evaluation {
                member_index,
                source,
                ..
            } => Error::Evaluation {
                generation: Some(generation),
                member_index,
                source,
            },
            other => other,
        }
    }
}
