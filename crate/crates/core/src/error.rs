use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid parameter {name} = {value}: {reason}")]
    InvalidParameter {
        name: &'static str,
        value: String,
        reason: &'static str,
    },

    #[error("degenerate TD-ERCS seed: x0 = {0} puts the start point on the major axis (y0 = 0)")]
    DegenerateSeed(f64),

    #[error("{map} diverged at iteration {iteration}: {detail}")]
    NumericalDivergence {
        map: &'static str,
        iteration: u64,
        detail: String,
    },

    #[error("input is empty")]
    EmptyInput,

    #[error("malformed digest: {0}")]
    MalformedDigest(String),

    #[error("malformed image: {0}")]
    MalformedImage(String),

    #[error("dimension mismatch: expected {expected}, got {actual}")]
    DimensionMismatch { expected: String, actual: String },

    #[error("length mismatch: expected {expected} bytes, got {actual}")]
    LengthMismatch { expected: usize, actual: usize },

    #[error("bad envelope magic {0:?}")]
    BadMagic([u8; 4]),

    #[error("unsupported envelope version {0}")]
    UnsupportedVersion(u16),

    #[error("malformed envelope: {0}")]
    MalformedEnvelope(String),

    #[error("key material unavailable: {0}")]
    KeyUnavailable(&'static str),

    #[error("correlation undefined: {0} marginal has zero variance")]
    ZeroVariance(&'static str),

    #[error("AES baseline unavailable in this build")]
    BaselineUnavailable,
}

impl Error {
    /// Stable, greppable identifier for the error kind.
    pub fn code(&self) -> &'static str {
        match self {
            Error::InvalidParameter { .. } => "E_PARAM",
            Error::DegenerateSeed(_) => "E_DEGENERATE_SEED",
            Error::NumericalDivergence { .. } => "E_DIVERGENCE",
            Error::EmptyInput => "E_EMPTY_INPUT",
            Error::MalformedDigest(_) => "E_MALFORMED_DIGEST",
            Error::MalformedImage(_) => "E_MALFORMED_IMAGE",
            Error::DimensionMismatch { .. } => "E_DIMENSION_MISMATCH",
            Error::LengthMismatch { .. } => "E_LENGTH_MISMATCH",
            Error::BadMagic(_) => "E_BAD_MAGIC",
            Error::UnsupportedVersion(_) => "E_UNSUPPORTED_VERSION",
            Error::MalformedEnvelope(_) => "E_MALFORMED_ENVELOPE",
            Error::KeyUnavailable(_) => "E_KEY_UNAVAILABLE",
            Error::ZeroVariance(_) => "E_ZERO_VARIANCE",
            Error::BaselineUnavailable => "E_BASELINE_UNAVAILABLE",
        }
    }

    /// True for errors caused by caller-supplied parameters rather than data.
    pub fn is_validation(&self) -> bool {
        matches!(self, Error::InvalidParameter { .. } | Error::DegenerateSeed(_))
    }

    pub(crate) fn param(name: &'static str, value: impl ToString, reason: &'static str) -> Self {
        Error::InvalidParameter {
            name,
            value: value.to_string(),
            reason,
        }
    }
}
