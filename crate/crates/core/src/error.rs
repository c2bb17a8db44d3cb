use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("field error: {0}")]
    Field(String),
    #[error("division by zero")]
    DivisionByZero,
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("singular matrix")]
    Singular,
    #[error("invalid system: {0}")]
    InvalidSystem(String),
    #[error("bound parameters out of range: {0}")]
    BoundParams(String),
    #[error("group closure exceeded the order cap of {0}")]
    GroupTooLarge(usize),
    #[error("orbit mismatch at representative {index}: {detail}")]
    OrbitMismatch { index: usize, detail: String },
    #[error("construction failed: {0}")]
    Construction(String),
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("search budget exhausted after {nodes} nodes")]
    BudgetExhausted { nodes: u64 },
    #[error("infeasible: {0}")]
    Infeasible(String),
    #[error("oracle failure: {0}")]
    Oracle(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
