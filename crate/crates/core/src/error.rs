//! Error type shared by every module in this crate.

use thiserror::Error;

/// Crate-wide error enum. Variants carry enough context to name the offending
/// input; callers that need process exit codes map on the variant.
#[derive(Debug, Error)]
pub enum Error {
    /// A constructor or operation was handed a value outside its domain.
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    /// Two containers that must share a geometry do not.
    #[error("geometry mismatch: {0}")]
    GeometryMismatch(String),
    /// A slice image or map does not fit the expected (rows, cols, center) shape.
    #[error("incompatible shape: {0}")]
    IncompatibleShape(String),
    /// Reference averaging was asked to run on an empty image list.
    #[error("no references")]
    NoReferences,
    /// Reference images disagree on orientation or shape.
    #[error("incompatible reference: {0}")]
    IncompatibleReference(String),
    /// A live image was paired with a reference for a different orientation.
    #[error("orientation mismatch: expected {expected} deg, got {got} deg")]
    OrientationMismatch { expected: f64, got: f64 },
    /// An ingested slice's orientation is not part of the configured protocol.
    #[error("orientation not in protocol: {0} deg")]
    UnknownOrientation(f64),
    /// Interpolation partners coincide, so the arc between them has zero length.
    #[error("degenerate partners: left and right angles coincide at {0} deg")]
    DegeneratePartners(f64),
    /// Reconstruction was requested before any live slice arrived.
    #[error("no live data")]
    NoLiveData,
    /// Sensitivity is undefined when the truth mask is empty.
    #[error("sensitivity undefined: truth mask is empty")]
    EmptyTruth,
    /// Spread statistics need at least two samples.
    #[error("need at least two samples, got {0}")]
    NotEnoughSamples(usize),
    /// An on-disk artifact failed structural validation.
    #[error("format error in {path}: {reason}")]
    Format { path: String, reason: String },
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
