use std::path::PathBuf;

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("self-loop at line {line}")]
    SelfLoop { line: usize },

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("invalid argument: {0}")]
    Argument(String),

    #[error("operation requires the {expected} variant")]
    Variant { expected: &'static str },

    #[error("profile is outside the all-served set: {0}")]
    Domain(String),

    #[error("graph has {n} nodes, exceeding the enumeration limit of {max_n}")]
    Size { n: usize, max_n: usize },

    #[error("best-response dynamics needed {passes} passes (bound is 3)")]
    PassBound { passes: usize },

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}
