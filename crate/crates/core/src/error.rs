use thiserror::Error;

/// Errors raised by the library.
///
/// Variants fall into three families used by the command-line front end to
/// pick an exit code: input problems (`Parse`, `Scope`, `Usage`, `EmptyWord`,
/// `UnknownLetter`), resource exhaustion (`Resource`), and structural
/// problems (everything else).
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("parse error at {line}:{column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },

    #[error("scope error: {0}")]
    Scope(String),

    #[error("usage error: {0}")]
    Usage(String),

    #[error("words must be nonempty")]
    EmptyWord,

    #[error("unknown letter `{0}`")]
    UnknownLetter(String),

    #[error("resource limit exceeded: {0}")]
    Resource(String),

    #[error("alphabet mismatch: {0}")]
    AlphabetMismatch(String),

    #[error("invalid automaton: {0}")]
    InvalidAutomaton(String),

    #[error("structure error: {0}")]
    Structure(String),

    #[error("formula is not syntactically restricted: {0}")]
    NotRestricted(String),

    #[error("unsupported input: {0}")]
    Unsupported(String),
}

impl Error {
    pub fn is_resource(&self) -> bool {
        matches!(self, Error::Resource(_))
    }

    pub fn is_input(&self) -> bool {
        matches!(
            self,
            Error::Parse { .. }
                | Error::Scope(_)
                | Error::Usage(_)
                | Error::EmptyWord
                | Error::UnknownLetter(_)
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;
