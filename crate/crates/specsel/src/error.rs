//! Error type shared across the crate.

use std::path::PathBuf;

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("matrix data has {len} entries, expected {expected} for n = {n}")]
    BadShape { n: usize, expected: usize, len: usize },

    #[error("matrix must have n >= 2, got n = {n}")]
    TooSmall { n: usize },

    #[error("entry ({i},{j}) = {value} is outside [0, 1]")]
    EntryOutOfRange { i: usize, j: usize, value: f64 },

    #[error("entry ({i},{j}) is not finite")]
    NonFinite { i: usize, j: usize },

    #[error("matrix is asymmetric at ({i},{j}), |a[i][j] - a[j][i]| = {delta:e}")]
    Asymmetric { i: usize, j: usize, delta: f64 },

    #[error("diagonal entry {i} = {value} is too far from the expected value")]
    BadDiagonal { i: usize, value: f64 },

    #[error("matrix {index} is {got}x{got}, expected {expected}x{expected}")]
    DimensionMismatch { index: usize, expected: usize, got: usize },

    #[error("{0} must not be empty")]
    EmptyInput(&'static str),

    #[error("length mismatch: {left} vs {right}")]
    LengthMismatch { left: usize, right: usize },

    #[error("label {label} at sample {index} is outside [0, {k})")]
    LabelOutOfRange { index: usize, label: usize, k: usize },

    #[error("cluster {label} is empty")]
    EmptyCluster { label: usize },

    #[error("k = {k} must satisfy {constraint} (n = {n})")]
    KOutOfRange { k: usize, n: usize, constraint: &'static str },

    #[error("invalid k-range [{k_min}, {k_max}]: need 2 <= k_min <= k_max")]
    InvalidRange { k_min: usize, k_max: usize },

    #[error("k-range [{k_min}, {k_max}] requires k_max < n, got n = {n}")]
    RangeExceedsN { k_min: usize, k_max: usize, n: usize },

    #[error("invalid synthesis parameters: {0}")]
    BadSynthSpec(String),

    #[error("eigensolver did not converge for a {n}x{n} matrix after {sweeps} sweeps")]
    NonConvergence { n: usize, sweeps: usize },

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("{path}:{line}: {msg}")]
    Parse { path: PathBuf, line: usize, msg: String },

    #[error("{path}: {source}")]
    InFile {
        path: PathBuf,
        #[source]
        source: Box<Error>,
    },

    #[error("at k = {k}: {source}")]
    AtK {
        k: usize,
        #[source]
        source: Box<Error>,
    },

    #[error("sequence {id}: {source}")]
    Sequence {
        id: String,
        #[source]
        source: Box<Error>,
    },
}

impl Error {
    /// Numerical failures (eigensolver non-convergence) as opposed to
    /// invalid inputs. Drives the CLI exit code.
    pub fn is_numerical(&self) -> bool {
        match self {
            Error::NonConvergence { .. } => true,
            Error::InFile { source, .. }
            | Error::AtK { source, .. }
            | Error::Sequence { source, .. } => source.is_numerical(),
            _ => false,
        }
    }

    pub(crate) fn at_k(self, k: usize) -> Error {
        Error::AtK { k, source: Box::new(self) }
    }

    pub(crate) fn in_file(self, path: PathBuf) -> Error {
        Error::InFile { path, source: Box::new(self) }
    }

    pub(crate) fn for_sequence(self, id: &str) -> Error {
        Error::Sequence { id: id.to_string(), source: Box::new(self) }
    }
}
