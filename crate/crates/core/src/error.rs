use thiserror::Error;

/// Errors raised across the crate.
#[derive(Debug, Error)]
pub enum Error {
    /// An input violates a documented invariant (ordering, parity, wall, range).
    #[error("invalid input: {0}")]
    Invalid(String),

    /// A numerical argument lies outside the domain of the function.
    #[error("domain error: {0}")]
    Domain(String),

    #[error("brute-force enumeration budget exceeded: p*m = {work} > {budget}")]
    BudgetExceeded { work: u64, budget: u64 },

    #[error("no watermelon exists for p = {p}, n = {n}, wall = {wall}")]
    ZeroCount { p: usize, n: u64, wall: bool },

    #[error("Jacobi iteration did not converge after {sweeps} sweeps (off-diagonal norm {off_norm:e})")]
    NoConvergence { sweeps: usize, off_norm: f64 },

    #[error("matrix dimension {dim} exceeds the cap {cap}")]
    DimensionCap { dim: usize, cap: usize },

    #[error("drift is singular at x = {x:?}")]
    SingularDrift { x: Vec<f64> },

    #[error("step halving exhausted at t = {time}: position {position:?}, smallest gap {gap:e}")]
    HalvingExhausted {
        time: f64,
        position: Vec<f64>,
        gap: f64,
    },

    #[error("parse error: {0}")]
    Parse(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Invalid(msg.into()))
}

pub(crate) fn domain<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Domain(msg.into()))
}
