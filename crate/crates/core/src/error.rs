use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("{0} is not an odd prime")]
    NotOddPrime(u64),
    #[error("{value} is not a unit modulo {p}")]
    NotUnit { value: i128, p: u64 },
    #[error("arithmetic overflow in {0}")]
    Overflow(&'static str),
    #[error("invalid form: {0}")]
    InvalidForm(String),
    #[error("index {index} out of range for rank {rank}")]
    IndexOutOfRange { index: usize, rank: usize },
    #[error("negative target {0}")]
    NegativeTarget(i128),
    #[error("{what} budget exceeded (limit {limit})")]
    BudgetExceeded { what: &'static str, limit: u128 },
    #[error("space not universal at p = {0}")]
    SpaceNotUniversal(u64),
    #[error("gamma tail already covered")]
    TailCovered,
    #[error("stability is defined for rank at least 3, got {0}")]
    RankTooSmall(usize),
    #[error("fixture {name}: {msg}")]
    Fixture { name: String, msg: String },
    #[error("internal invariant violated: {0}")]
    Internal(String),
    #[error("{0}")]
    Domain(String),
}

pub type Result<T> = std::result::Result<T, Error>;
