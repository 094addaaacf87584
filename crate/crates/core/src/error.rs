use thiserror::Error;

/// Errors surfaced by the library.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    /// A caller broke an operation's precondition.
    #[error("contract violation: {0}")]
    Contract(String),

    /// A structural invariant the driver relies on does not hold. Signals a
    /// bug, never bad input.
    #[error("internal invariant violated: {0}")]
    Invariant(String),

    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },

    /// The brute-force oracle refuses formulas above its variable cap.
    #[error("oracle refused: {vars} variables exceed the cap of {cap}")]
    OracleCap { vars: usize, cap: usize },

    #[error("generation error: {0}")]
    Generation(String),
}

pub type Result<T> = std::result::Result<T, Error>;
