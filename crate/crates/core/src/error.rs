use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("parse error: {0}")]
    Parse(String),

    #[error("shape mismatch: {0}")]
    Shape(String),

    #[error("not full column rank")]
    RankDeficient,

    #[error("matrix is singular")]
    Singular,

    #[error("vertices are not affinely independent")]
    AffinelyDependent,

    #[error("enumeration budget exceeded: candidate box has {size} points (budget {budget})")]
    BudgetExceeded { size: u128, budget: u64 },

    #[error("integer overflow in candidate enumeration")]
    Overflow,

    #[error(
        "relative volume unsupported: polytope has dimension {dim} in ambient dimension {ambient}"
    )]
    RelativeVolume { dim: usize, ambient: usize },

    #[error("{0}")]
    Domain(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
