use thiserror::Error;

use crate::matroid::AxiomReport;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("the universe must contain at least one element")]
    EmptyUniverse,

    #[error("element labels must be nonempty")]
    EmptyLabel,

    #[error("element `{0}` is listed more than once")]
    DuplicateElement(String),

    #[error("element `{0}` is not in the universe")]
    UnknownElement(String),

    #[error("universe has {size} elements; masks hold at most {max}")]
    UniverseTooWide { size: usize, max: usize },

    #[error("exhaustive cap must be between 1 and {max}, got {requested}")]
    InvalidCap { requested: usize, max: usize },

    #[error("universe has {size} elements, above the exhaustive cap of {cap}")]
    CapExceeded { size: usize, cap: usize },

    #[error("operands belong to different universes")]
    UniverseMismatch,

    #[error("mask {mask:#x} has bits outside a universe of {size} elements")]
    MaskOutOfRange { mask: u64, size: usize },

    #[error("invalid partition: {0}")]
    InvalidPartition(String),

    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("{0}")]
    AxiomFailure(AxiomReport),

    #[error("theorem violated ({theorem}): {detail}")]
    TheoremViolation {
        theorem: &'static str,
        detail: String,
    },

    #[error("{what} must be in {min}..={max}, got {value}")]
    OutOfRange {
        what: &'static str,
        value: usize,
        min: usize,
        max: usize,
    },
}

impl Error {
    pub(crate) fn theorem(theorem: &'static str, detail: impl Into<String>) -> Self {
        Error::TheoremViolation {
            theorem,
            detail: detail.into(),
        }
    }

    /// True for errors that signal a violated axiom or theorem rather than bad input.
    pub fn is_check_failure(&self) -> bool {
        matches!(
            self,
            Error::AxiomFailure(_) | Error::TheoremViolation { .. }
        )
    }
}
