use thiserror::Error;

use crate::logic::Var;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("syntax error at byte {offset}: {message}")]
    Syntax { offset: usize, message: String },

    #[error("unknown symbol {symbol:?} at byte {offset}")]
    UnknownSymbol { offset: usize, symbol: char },

    #[error("variable {0} is not defined by the assignment")]
    UndefinedVariable(Var),

    #[error("{count} distinct variables exceed the enumeration limit of {limit}")]
    TooManyVariables { count: usize, limit: usize },

    #[error("attempt budget of {budget} exhausted while {what}")]
    BudgetExhausted { what: &'static str, budget: usize },

    #[error("invalid split spec: {0}")]
    InvalidSpec(String),

    #[error("label mismatch: stored {stored}, computed {computed} for {sequent}")]
    LabelMismatch {
        stored: bool,
        computed: bool,
        sequent: String,
    },

    #[error("degenerate input: {0}")]
    Degenerate(String),

    #[error("unknown {kind} {name:?}; available: {available}")]
    UnknownStrategy {
        kind: &'static str,
        name: String,
        available: String,
    },

    #[error("training diverged at epoch {epoch}: non-finite loss")]
    Diverged { epoch: usize },

    #[error("malformed dataset line {line}: {message}")]
    Format { line: usize, message: String },

    #[error("checkpoint: {0}")]
    Checkpoint(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}
