use thiserror::Error;

/// Errors produced by network construction, parsing and analysis.
#[derive(Debug, Error)]
pub enum CrnError {
    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("invalid network: {0}")]
    Invalid(String),
    #[error("domain error: {0}")]
    Domain(String),
    #[error("configuration error: {0}")]
    Config(String),
    #[error("unbound rate symbol `{0}`")]
    UnboundRate(String),
    #[error("{what} count {count} exceeds cap {cap}")]
    CapExceeded {
        what: &'static str,
        count: u128,
        cap: u128,
    },
    #[error("numerical failure: {0}")]
    Numeric(String),
}

impl CrnError {
    pub fn parse(line: usize, column: usize, message: impl Into<String>) -> Self {
        CrnError::Parse {
            line,
            column,
            message: message.into(),
        }
    }
}

pub type Result<T> = std::result::Result<T, CrnError>;
