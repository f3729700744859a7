use thiserror::Error;

/// Stable numeric codes for the ways a flag specification can be rejected.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SpecErrorCode {
    /// The string does not follow `TYPE:b1,b2,...[;tail=T]`.
    Syntax,
    /// Rank below the minimum for the Lie type.
    RankTooSmall,
    /// A tail whose size violates the per-type lower bound.
    TailBound,
    /// Structurally impossible spec (empty block list, zero block, tail on type A, K = G).
    Structure,
}

impl SpecErrorCode {
    pub fn code(self) -> u32 {
        match self {
            SpecErrorCode::Syntax => 10,
            SpecErrorCode::RankTooSmall => 11,
            SpecErrorCode::TailBound => 12,
            SpecErrorCode::Structure => 13,
        }
    }
}

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid spec (code {}): {message}", code.code())]
    InvalidSpec {
        code: SpecErrorCode,
        message: String,
    },

    #[error("domain error: {0}")]
    Domain(String),

    #[error("incomplete metric: {0}")]
    IncompleteMetric(String),

    #[error("metric must be strictly positive: {0}")]
    NotPositive(String),

    #[error("unsupported shape: {0}")]
    UnsupportedShape(String),

    #[error("explicit and generated systems disagree on {} equation(s): {}", failures.len(), failures.join(", "))]
    EquivalenceFailure { failures: Vec<String> },

    #[error("unsupported format `{0}`")]
    UnsupportedFormat(String),
}

impl Error {
    pub(crate) fn spec(code: SpecErrorCode, message: impl Into<String>) -> Self {
        Error::InvalidSpec {
            code,
            message: message.into(),
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
