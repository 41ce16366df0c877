use thiserror::Error;

use crate::report::Counterexample;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("length mismatch: {left} bits vs {right} bits")]
    LengthMismatch { left: usize, right: usize },

    #[error("{what} {value} is outside its domain")]
    Domain { what: &'static str, value: f64 },

    #[error("infeasible parameters: {0}")]
    Infeasible(String),

    #[error("prefix length {j} is beyond the materialized horizon {horizon}")]
    OutOfHorizon { j: usize, horizon: usize },

    #[error("enumeration needs {needed} steps, above the cap of {cap}")]
    ScaleExceeded { needed: u128, cap: u128 },

    #[error("construction failed after {attempts} attempts{}", last_suffix(.last))]
    ConstructionFailed {
        attempts: usize,
        last: Option<Box<Counterexample>>,
    },

    #[error("degenerate parameters: {0}")]
    Degenerate(String),

    #[error("{what} index {index} out of range (limit {limit})")]
    IndexOutOfRange {
        what: &'static str,
        index: usize,
        limit: usize,
    },

    #[error("word is not a codeword")]
    NotACodeword,

    #[error("invalid plan: {0}")]
    PlanInvalid(String),

    #[error("invalid channel spec: {0}")]
    SpecInvalid(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("no trials requested")]
    NoTrials,
}

fn last_suffix(last: &Option<Box<Counterexample>>) -> String {
    match last {
        Some(c) => format!("; last counterexample: {c}"),
        None => String::new(),
    }
}

impl Error {
    pub fn parse(msg: impl Into<String>) -> Self {
        Error::Parse(msg.into())
    }
}
