use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("syntax error at {line}:{col}: {msg}")]
    Syntax { line: usize, col: usize, msg: String },

    #[error("symbol `{0}` is not in the alphabet")]
    UnknownSymbol(String),

    #[error("invalid alphabet: {0}")]
    InvalidAlphabet(String),

    #[error("position {pos} out of range for a string of length {len}")]
    PositionOutOfRange { pos: usize, len: usize },

    #[error("vector `{vector}` references `{referenced}`, which is defined later")]
    ForwardReference { vector: String, referenced: String },

    #[error("unknown vector `{0}`")]
    UnknownVector(String),

    #[error("program has no `output:` line")]
    MissingOutput,

    #[error("invalid program: {0}")]
    InvalidProgram(String),

    #[error("invalid automaton: {0}")]
    InvalidAutomaton(String),

    #[error("invalid model: {0}")]
    InvalidModel(String),

    #[error("unsupported input: {0}")]
    Unsupported(String),

    #[error("{what} exceeded the cap of {cap}")]
    CapExceeded { what: &'static str, cap: usize },

    #[error("alphabet mismatch: {0}")]
    AlphabetMismatch(String),

    #[error("homomorphism check failed: {0}")]
    Homomorphism(String),

    #[error("internal inconsistency: {0}")]
    Inconsistency(String),

    #[error("{0}")]
    Io(String),
}

impl Error {
    pub(crate) fn syntax(line: usize, col: usize, msg: impl Into<String>) -> Self {
        Error::Syntax { line, col, msg: msg.into() }
    }

    /// Errors caused by malformed input text or files rather than by the
    /// computation itself.
    pub fn is_input_error(&self) -> bool {
        matches!(
            self,
            Error::Syntax { .. }
                | Error::UnknownSymbol(_)
                | Error::InvalidAlphabet(_)
                | Error::ForwardReference { .. }
                | Error::UnknownVector(_)
                | Error::MissingOutput
                | Error::InvalidProgram(_)
                | Error::InvalidAutomaton(_)
                | Error::InvalidModel(_)
                | Error::Io(_)
        )
    }
}
