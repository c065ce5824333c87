use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid parameters: {0}")]
    InvalidParams(String),

    #[error("packet must start on the physical side of the wall (x0 <= 0), got x0 = {0}")]
    WrongSide(f64),

    #[error("degenerate mirror solution (z0 = 0); use the special_solutions module")]
    Degenerate,

    #[error("collision time undefined: requires x0 < 0 and p0 > 0")]
    NoCollision,

    #[error("invalid grid: {0}")]
    InvalidGrid(String),

    #[error(
        "wavefunction tail not captured at x = {at}: |psi| = {edge:e} exceeds {limit:e}; widen the grid (suggested x_min <= {suggested})"
    )]
    TailNotCaptured {
        at: f64,
        edge: f64,
        limit: f64,
        suggested: f64,
    },

    #[error("finite-difference momentum not converged: estimated error {estimate:e} > tolerance {tolerance:e}; refine the grid")]
    NotConverged { estimate: f64, tolerance: f64 },

    #[error("grid mismatch between states")]
    GridMismatch,

    #[error("non-finite value encountered: {0}")]
    NonFinite(String),
}

pub type Result<T> = std::result::Result<T, Error>;
