use thiserror::Error;

use crate::scenario::Violation;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("interval [{lo}, {hi}) has an endpoint outside [-1, 1]")]
    OutOfRange { lo: String, hi: String },

    #[error("malformed interval: lo = {lo} exceeds hi = {hi}")]
    MalformedPair { lo: String, hi: String },

    #[error("invalid scenario: {}", join_violations(.0))]
    InvalidScenario(Vec<Violation>),

    #[error("indicator tie for {quantity}: branches disagree ({first} vs {second})")]
    AmbiguousCorner {
        quantity: &'static str,
        first: String,
        second: String,
    },

    #[error("grid density {density} leaves non-integral block dimensions; try {suggested}")]
    NonIntegralGrid { density: u64, suggested: u64 },

    #[error("singular values cluster near the rank threshold in {context}")]
    IllConditioned { context: String },

    #[error("invalid range: {0}")]
    BadRange(String),

    #[error("{field}: {message}")]
    Parse { field: String, message: String },

    #[error("{path}: {message}")]
    Io { path: String, message: String },
}

fn join_violations(violations: &[Violation]) -> String {
    violations
        .iter()
        .map(ToString::to_string)
        .collect::<Vec<_>>()
        .join("; ")
}
