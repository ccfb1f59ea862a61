//! Error type shared by every module.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("backend mismatch: operands must share one scalar backend")]
    BackendMismatch,
    #[error("size cap exceeded: {0}")]
    CapsExceeded(String),
    #[error("operation requires the exact rational backend")]
    RationalRequired,
    #[error("zero polynomial has no roots to query")]
    ZeroPolynomial,
    #[error("polynomial is not real-rooted: {0}")]
    NotRealRooted(String),
    #[error("degree mismatch: {0}")]
    DegreeMismatch(String),
    #[error("polynomial is not homogeneous")]
    Inhomogeneous,
    #[error("polynomial vanishes at the given direction")]
    VanishesAtDirection,
    #[error("hyperbolicity counterexample at x = {0}")]
    NotHyperbolic(String),
    #[error("vector outside the required cone: {0}")]
    OutsideCone(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("infeasible parameters: {0}")]
    Infeasible(String),
    #[error("budget exceeded: {0}")]
    BudgetExceeded(String),
    #[error("query undecidable within float tolerance of the boundary")]
    BoundaryUndecided,
    #[error("division by zero: {0}")]
    DivisionByZero(String),
    #[error("negative radicand: {0}")]
    NegativeRadicand(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("malformed input: {0}")]
    Malformed(String),
    #[error("basis exchange axiom fails: {0}")]
    ExchangeFailure(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
