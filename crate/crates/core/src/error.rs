use thiserror::Error;

use crate::period::{Counters, Method};

/// Errors raised by the simulation library.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid dimension: {0}")]
    InvalidDimension(String),

    #[error("value out of domain: {0}")]
    Domain(String),

    #[error("invalid input: {0}")]
    Input(String),

    /// Fisher value too small to divide by in the geodesic equation.
    #[error("fisher value {fisher:e} at sample {index} is below the division guard")]
    DegenerateFisher { index: usize, fisher: f64 },

    #[error("resource limit exceeded: {needed} amplitudes requested, cap is {cap}")]
    Resource { needed: u128, cap: u64 },

    #[error("{method} budget exhausted after {} attempts", counters.attempts)]
    BudgetExhausted { method: Method, counters: Counters },

    #[error("internal invariant violated: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;
