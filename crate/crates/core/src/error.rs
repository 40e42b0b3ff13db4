use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum QuistError {
    #[error("input contains no instances")]
    EmptyInput,
    #[error("instance {id} has a non-finite value ({value})")]
    NonFiniteValue { id: usize, value: f64 },
    #[error("instance ids must be exactly 0..{n}; found {id}")]
    InvalidIds { id: usize, n: usize },
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
    #[error("empty range [{lo}, {hi})")]
    EmptyRange { lo: usize, hi: usize },
}
