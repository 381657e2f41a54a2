use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("invalid graph: {0}")]
    InvalidGraph(String),

    #[error("invalid permutation: {0}")]
    InvalidPermutation(String),

    #[error("invalid step {step}: {msg}")]
    InvalidStep { step: usize, msg: String },

    #[error("graph is not connected")]
    Disconnected,

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("search budget exhausted after {states} states (lower bound {lower_bound})")]
    BudgetExhausted { lower_bound: usize, states: usize },
}

impl Error {
    pub(crate) fn parse(line: usize, msg: impl Into<String>) -> Self {
        Error::Parse { line, msg: msg.into() }
    }

    pub(crate) fn input(msg: impl Into<String>) -> Self {
        Error::InvalidInput(msg.into())
    }

    pub fn is_budget(&self) -> bool {
        matches!(self, Error::BudgetExhausted { .. })
    }
}
