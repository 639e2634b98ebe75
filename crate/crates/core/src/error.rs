use std::path::PathBuf;

use thiserror::Error;

/// Errors raised by the filtering library.
#[derive(Debug, Error)]
pub enum Error {
    #[error("diffusion matrix is not positive definite: d11 = {d11}, 4·d11·d22 − (d12 + d21)² = {discriminant}")]
    PositiveDefinitenessViolation { d11: f64, discriminant: f64 },

    #[error("non-finite value in {0}")]
    NonFinite(&'static str),

    #[error("invalid grid: {0}")]
    InvalidGrid(String),

    #[error("grid mismatch: {0}")]
    GridMismatch(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("inverse transform left an imaginary residue of {residue:e} (allowed {allowed:e})")]
    ImaginaryResidue { residue: f64, allowed: f64 },

    #[error("d21 = 0: the second component carries no edge information")]
    ZeroCoupling,

    #[error("residual has zero variance or norm; the metric is unbounded")]
    DegenerateResidual,

    #[error("operation requires a 2D field")]
    Requires2D,

    #[error("unknown test pattern `{0}`")]
    UnknownKind(String),

    #[error("malformed file {path}: {reason}")]
    MalformedFile { path: PathBuf, reason: String },

    #[error("I/O failure on {path}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
