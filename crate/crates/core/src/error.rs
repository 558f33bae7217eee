use std::path::PathBuf;

use crate::dataset::Label;

/// Errors produced by dataset handling, model construction and evaluation.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("invalid exponent p = {0}: must be finite and > 0")]
    InvalidExponent(f64),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("invalid dataset: {0}")]
    InvalidDataset(String),

    #[error("no training points of class {0}")]
    MissingClass(Label),

    #[error("point appears in both classes (positive row {positive}, negative row {negative})")]
    DuplicateCrossClassPoint { positive: usize, negative: usize },

    #[error("query coincides with training points of both classes")]
    AmbiguousSingularity,

    #[error("insufficient samples: need at least {needed} per class, found {found}")]
    InsufficientSamples { needed: usize, found: usize },

    #[error("invalid k = {k}: {reason}")]
    InvalidK { k: usize, reason: String },

    #[error("decision rasters need 2-dimensional models, got dimension {0}")]
    NotTwoDimensional(usize),

    #[error("degenerate raster bounds: lo must be < hi componentwise and resolution non-zero")]
    DegenerateBounds,

    #[error("point ({0}, {1}) lies outside the board [0,4)x[0,4)")]
    OutOfBoard(f64, f64),

    #[error("numerical routine failed to converge: {0}")]
    ConvergenceFailure(&'static str),

    #[error("line {line}, column {column}: {message}")]
    Parse {
        line: u64,
        column: usize,
        message: String,
    },

    #[error("line {line}: label {value:?} is not one of 1, +1, -1")]
    Label { line: u64, value: String },

    #[error("line {line}: expected {expected} cells, found {found}")]
    RaggedRows {
        line: u64,
        expected: usize,
        found: usize,
    },

    #[error("item {index}: {source}")]
    Batch {
        index: usize,
        #[source]
        source: Box<Error>,
    },

    #[error("sweep cell (p={p}, alpha={alpha}, beta={beta}, epsilon={epsilon}): {source}")]
    SweepCell {
        p: f64,
        alpha: f64,
        beta: f64,
        epsilon: f64,
        #[source]
        source: Box<Error>,
    },

    #[error("configuration: {0}")]
    Config(String),

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

pub type Result<T> = std::result::Result<T, Error>;
