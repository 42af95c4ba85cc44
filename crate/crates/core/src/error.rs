use thiserror::Error;

/// Errors raised across the library.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// Operands were built against different variable orders, or a list that
    /// must be triangular is not.
    #[error("structural error: {0}")]
    Structure(String),

    /// An operation was applied outside its mathematical domain.
    #[error("domain error: {0}")]
    Domain(String),

    /// Text input could not be parsed.
    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },

    /// A configured budget (steps, degree, digits) was exhausted.
    #[error("resource budget exhausted: {0}")]
    Budget(String),

    /// A precondition of an operation does not hold.
    #[error("precondition violated: {0}")]
    Precondition(String),

    /// The independent oracle cannot decide the given instance.
    #[error("oracle inapplicable: {0}")]
    OracleInapplicable(String),

    /// The comparator could not separate two expressions at its precision cap.
    #[error("undecided at precision cap: {0}")]
    Undecided(String),

    /// A pair of catalog groups is missing from the containment fact table.
    #[error("unknown pair in fact table: {0}")]
    UnknownPair(String),
}

pub type Result<T> = std::result::Result<T, Error>;
