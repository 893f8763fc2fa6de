use thiserror::Error;

/// Errors produced by measure construction and evaluation.
#[derive(Debug, Error)]
pub enum Error {
    /// An evaluation point fell outside the `[1, cutoff]` support window.
    #[error("argument {x} outside the valid range [{lo}, {hi}]")]
    Range { x: f64, lo: f64, hi: f64 },

    /// Transform evaluated at or left of the abscissa sigma = 1.
    #[error("transform requires Re s > 1, got sigma = {sigma}")]
    Domain { sigma: f64 },

    /// Invalid measure data (mass at 1, negative mass where forbidden, ...).
    #[error("invalid measure: {0}")]
    InvalidMeasure(String),

    /// A truncated series could not converge under the configured limits.
    #[error("configuration error: {0}")]
    Config(String),

    /// Root finding failed to converge; carries the last bracket.
    #[error("root finder did not converge: target {target}, bracket [{lo}, {hi}]")]
    RootFind { target: f64, lo: f64, hi: f64 },

    /// Closed-form evaluated at a pole or branch point.
    #[error("singular point: {0}")]
    Singular(String),

    /// A sampling grid too coarse for the requested computation.
    #[error("resolution error: {0}")]
    Resolution(String),

    /// Serialization / cache file problems.
    #[error("corrupt or incompatible file: {0}")]
    CorruptFile(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
