use thiserror::Error;

/// Errors raised anywhere in the crate.
#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension error: {0}")]
    Dimension(String),

    #[error("validation error: {0}")]
    Validation(String),

    /// A matrix or parameter set that should describe a quantum state does not.
    #[error("not a state: {0}")]
    NotAState(String),

    #[error("invalid argument: {0}")]
    Argument(String),

    /// The analytic X-state path needs `<σz_i> = <σz_j>`.
    #[error("unsupported asymmetry: <σz_i> = {sz_i} differs from <σz_j> = {sz_j}")]
    UnsupportedAsymmetry { sz_i: f64, sz_j: f64 },

    /// The sufficient condition for the σx measurement to be optimal fails.
    #[error("condition violated: {0}")]
    ConditionViolated(String),

    #[error("unsupported: {0}")]
    Unsupported(String),

    /// The regime has no closed form to evaluate.
    #[error("not provided: {0}")]
    NotProvided(String),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("singularity: {0}")]
    Singularity(String),

    #[error("resource limit: {0}")]
    Resource(String),

    #[error("underflow: {0}")]
    Underflow(String),

    #[error("internal error: {0}")]
    Internal(String),

    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}

impl Error {
    /// Numeric-domain failures map to exit status 3, everything else the user
    /// can fix by changing input maps to 2.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Domain(_)
            | Error::Singularity(_)
            | Error::Underflow(_)
            | Error::NotAState(_)
            | Error::ConditionViolated(_)
            | Error::Internal(_) => 3,
            Error::Io(_) => 1,
            _ => 2,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
