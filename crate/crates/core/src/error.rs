use std::fmt;

use serde::Serialize;

/// Which conditioning event a rejected coupling attempt violated.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Violation {
    /// An extra independent a-set meets the r added blocks.
    U1,
    /// An extra independent a-set lies entirely inside the smaller vertex set.
    U2,
    /// Both kinds of extra set were present.
    Both,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::U1 => f.write_str("U1 (extra a-set touching the added blocks)"),
            Violation::U2 => f.write_str("U2 (extra a-set inside V)"),
            Violation::Both => f.write_str("U1 and U2"),
        }
    }
}

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("budget exhausted during {what}; last candidate {last}")]
    BudgetExhausted { what: String, last: String },

    #[error("hypothesis violated: Poi(B) = {mass:e} is not below delta = {delta:e}")]
    HypothesisViolated { mass: f64, delta: f64 },

    #[error("rejection sampling gave up after {attempts} attempts; last rejection: {last}")]
    RejectionExhausted { attempts: u64, last: Violation },

    #[error("reference sampler stalled: {accepted} of {attempts} draws accepted")]
    ReferenceStalled { accepted: u64, attempts: u64 },

    #[error("malformed input: {0}")]
    Format(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    /// Process exit status the CLI uses for this error.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Domain(_) | Error::HypothesisViolated { .. } | Error::Format(_) => 2,
            Error::BudgetExhausted { .. }
            | Error::RejectionExhausted { .. }
            | Error::ReferenceStalled { .. } => 3,
            Error::Io(_) | Error::Json(_) => 1,
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
