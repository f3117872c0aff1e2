use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("alphabet mismatch")]
    AlphabetMismatch,
    #[error("unknown generator `{0}`")]
    UnknownGenerator(String),
    #[error("invalid alphabet: {0}")]
    InvalidAlphabet(String),
    #[error("invalid word `{0}`")]
    InvalidWord(String),
    #[error("invalid monoid: {0}")]
    InvalidMonoid(String),
    #[error("wrong monoid kind: {0}")]
    WrongKind(String),
    #[error("syntax error at line {line}, column {col}: {msg}")]
    Syntax {
        line: usize,
        col: usize,
        msg: String,
    },
    #[error("sort error: {0}")]
    Sort(String),
    #[error("unbound free variable `{0}`")]
    Unbound(String),
    #[error("invalid parameter: {0}")]
    Param(String),
    #[error("interpretation error: {0}")]
    Interpretation(String),
    #[error("malformed code {0}")]
    MalformedCode(u128),
    #[error("index {index} out of range for length {len}")]
    OutOfRange { index: usize, len: usize },
    #[error("value overflow")]
    Overflow,
}

pub type Result<T> = std::result::Result<T, Error>;
