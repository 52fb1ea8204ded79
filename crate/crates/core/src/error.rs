use thiserror::Error;

/// Errors produced by every module of the crate.
///
/// Each variant maps onto one CLI exit status through [`Error::exit_code`].
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("invalid label: {0}")]
    InvalidLabel(String),

    #[error("singular torus element: {0}")]
    SingularElement(String),

    #[error("resource limit exceeded: {0}")]
    ResourceLimit(String),

    #[error("numerical failure: {0}")]
    NumericalFailure(String),

    #[error("invariant violation: {0}")]
    InvariantViolation(String),

    #[error("out of scope: {0}")]
    OutOfScope(String),

    #[error("degenerate space: {0}")]
    DegenerateSpace(String),

    #[error("cut system rule '{rule}' violated: {detail}")]
    CutSystem { rule: &'static str, detail: String },

    #[error("file not found: {0}")]
    FileNotFound(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error("malformed JSON: {0}")]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    /// Short machine-readable kind, used in JSON error records.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::InvalidInput(_) => "invalid-input",
            Error::InvalidLabel(_) => "invalid-label",
            Error::SingularElement(_) => "singular-element",
            Error::ResourceLimit(_) => "resource-limit",
            Error::NumericalFailure(_) => "numerical-failure",
            Error::InvariantViolation(_) => "invariant-violation",
            Error::OutOfScope(_) => "out-of-scope",
            Error::DegenerateSpace(_) => "degenerate-space",
            Error::CutSystem { .. } => "cut-system",
            Error::FileNotFound(_) => "file-not-found",
            Error::Io(_) => "io",
            Error::Json(_) => "invalid-input",
        }
    }

    /// 1 for invariant violations, 3 for resource caps, 2 for everything the
    /// caller can fix by changing the input.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::InvariantViolation(_) | Error::NumericalFailure(_) => 1,
            Error::ResourceLimit(_) => 3,
            _ => 2,
        }
    }
}
