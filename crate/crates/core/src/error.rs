use std::path::PathBuf;

use thiserror::Error;

/// Errors produced anywhere in the pipeline.
///
/// [`Error::category`] gives a stable, single-token name for each variant,
/// which the command-line front end prints on failure.
#[derive(Debug, Error)]
pub enum Error {
    #[error("binary string must contain at least one symbol")]
    EmptyBinaryString,
    #[error("invalid binary symbol {0:?}")]
    InvalidBinarySymbol(char),
    #[error("shape string is empty")]
    EmptyShape,
    #[error("malformed shape {0:?}")]
    MalformedShape(String),
    #[error("invalid nucleotide {symbol:?} at position {position}")]
    InvalidNucleotide { symbol: char, position: usize },
    #[error("sequence must contain at least one nucleotide")]
    EmptySequence,
    #[error("length mismatch: {left} vs {right}")]
    LengthMismatch { left: usize, right: usize },
    #[error("malformed structure: {0}")]
    MalformedStructure(String),
    #[error("{path}:{line}: {message}")]
    MalformedRow {
        path: PathBuf,
        line: u64,
        message: String,
    },
    #[error("{path}:{line}: shape column {given:?} disagrees with structure-derived shape {derived:?}")]
    IngestInconsistent {
        path: PathBuf,
        line: u64,
        given: String,
        derived: String,
    },
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("label {label} out of range for {classes} classes")]
    LabelOutOfRange { label: usize, classes: usize },
    #[error("kernel matrix not positive definite after jitter {jitter:e}")]
    NotPositiveDefinite { jitter: f64 },
    #[error("every sample was filtered out; no classes remain")]
    NoClasses,
    #[error("correlation undefined: {0}")]
    CorrelationUndefined(String),
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
    #[error("output directory {0} already holds results; pass --force to overwrite")]
    OutputExists(PathBuf),
    #[error("io error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("csv error on {path}: {source}")]
    Csv {
        path: PathBuf,
        #[source]
        source: csv::Error,
    },
}

impl Error {
    pub fn category(&self) -> &'static str {
        match self {
            Error::EmptyBinaryString | Error::InvalidBinarySymbol(_) => "InvalidBinaryString",
            Error::EmptyShape => "EmptyShape",
            Error::MalformedShape(_) => "MalformedShape",
            Error::InvalidNucleotide { .. } | Error::EmptySequence => "InvalidSequence",
            Error::LengthMismatch { .. } => "LengthMismatch",
            Error::MalformedStructure(_) => "MalformedStructure",
            Error::MalformedRow { .. } => "MalformedRow",
            Error::IngestInconsistent { .. } => "IngestInconsistent",
            Error::DimensionMismatch { .. } => "DimensionMismatch",
            Error::LabelOutOfRange { .. } => "LabelOutOfRange",
            Error::NotPositiveDefinite { .. } => "NotPositiveDefinite",
            Error::NoClasses => "NoClasses",
            Error::CorrelationUndefined(_) => "CorrelationUndefined",
            Error::InvalidConfig(_) => "InvalidConfig",
            Error::OutputExists(_) => "OutputExists",
            Error::Io { .. } => "Io",
            Error::Csv { .. } => "Csv",
        }
    }

    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    pub(crate) fn csv(path: impl Into<PathBuf>, source: csv::Error) -> Self {
        Error::Csv {
            path: path.into(),
            source,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
