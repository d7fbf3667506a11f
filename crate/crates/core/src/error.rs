use thiserror::Error;

use crate::word::Letter;

/// Failure to parse one of the text formats accepted by the library.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("cannot parse {what} `{input}`: {reason}")]
pub struct ParseError {
    pub what: &'static str,
    pub input: String,
    pub reason: String,
}

impl ParseError {
    pub(crate) fn new(what: &'static str, input: &str, reason: impl Into<String>) -> Self {
        Self {
            what,
            input: input.to_string(),
            reason: reason.into(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("index {index} is outside the index budget of {budget} letters")]
    ResourceLimit { index: usize, budget: usize },

    #[error("a periodic word needs a nonempty period")]
    EmptyPeriod,

    #[error("occurrence {n} of `{letter}` not found within the first {searched} letters")]
    OccurrenceNotFound {
        letter: Letter,
        n: usize,
        searched: usize,
    },

    #[error("position {index} is undetermined; only the first {determined} letters are known")]
    Undetermined { index: usize, determined: usize },

    #[error("no level-2 Fibonacci tile starts at position {position}")]
    MalformedSupertile { position: usize },

    #[error("substitution {substitution} has no fixed point starting with `{seed}`")]
    NoFixedPoint { substitution: String, seed: Letter },

    #[error("invalid parameter: {0}")]
    Parameter(String),

    #[error("matrix {0} is not primitive")]
    NonPrimitive(String),

    #[error("matrix {0} is singular")]
    SingularMatrix(String),

    #[error("frequency normalizer vanishes")]
    DegenerateNormalizer,

    #[error("invalid frequency vector: {0}")]
    InvalidFrequencies(String),

    #[error("operands live in different quadratic fields")]
    FieldMismatch,

    #[error("relative position data has no value for n = {0}")]
    ProviderExhausted(usize),

    #[error("series index must be at least 1, got {0}")]
    ZeroIndex(usize),

    #[error(transparent)]
    Parse(#[from] ParseError),
}

impl Error {
    /// True for errors caused by the index budget running out.
    pub fn is_budget(&self) -> bool {
        matches!(
            self,
            Error::ResourceLimit { .. } | Error::OccurrenceNotFound { .. }
        )
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
