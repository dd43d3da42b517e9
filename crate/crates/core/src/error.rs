use thiserror::Error;

use crate::dl::ParseError;
use crate::proof::Proof;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("tableau exceeded its limit of {limit} nodes")]
    ResourceLimit { limit: usize },

    #[error("parse error: {0}")]
    Parse(#[from] ParseError),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("not entailed: {0}")]
    NotEntailed(String),

    #[error("no proof of {0} from the admissible leaves")]
    NoProof(String),

    /// Cooperative cancellation. Carries the best proof found so far, if any.
    #[error("cancelled{}", if .best.is_some() { " (partial proof available)" } else { "" })]
    Cancelled { best: Option<Box<Proof>> },

    #[error("budget exceeded: {0}")]
    BudgetExceeded(String),

    #[error("cyclic definers: {}", .0.join(", "))]
    CyclicDefiner(Vec<String>),

    #[error("goal must be an atomic inclusion A ⊑ B or A ⊑ ⊥, got {0}")]
    NotAtomicGoal(String),

    #[error("no final clause yields {0}")]
    GoalNotDerived(String),

    #[error("schema violation at {pointer}: {message}")]
    Schema { pointer: String, message: String },
}

impl Error {
    pub fn cancelled(best: Option<Proof>) -> Self {
        Error::Cancelled { best: best.map(Box::new) }
    }
}
