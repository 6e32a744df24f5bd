// SPDX-License-Identifier: MIT OR Apache-2.0

use thiserror::Error;

/// Errors reported by the solver library.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// The input signal violates a structural requirement (too short,
    /// non-increasing grid, non-finite values, length mismatch).
    #[error("invalid signal: {0}")]
    InvalidSignal(String),

    /// An argument is outside the domain of the operation.
    #[error("invalid input: {0}")]
    InvalidInput(String),

    /// The operation was called in a state where it is not defined,
    /// e.g. querying an empty envelope or an out-of-range index pair.
    #[error("usage error: {0}")]
    Usage(String),

    /// The requested number of segments cannot be realized on the grid.
    #[error("infeasible segment budget {requested}: must lie in 1..={max}")]
    InfeasibleBudget { requested: usize, max: usize },

    /// The penalty must be finite and nonnegative.
    #[error("invalid penalty {0}: must be finite and >= 0")]
    InvalidPenalty(f64),

    /// Exhaustive enumeration would visit more subsets than the guard allows.
    #[error("exhaustive search over {subsets} breakpoint subsets exceeds the limit of {limit}")]
    SearchTooLarge { subsets: u128, limit: u128 },

    /// An internal invariant was violated. Indicates a bug.
    #[error("internal invariant violated: {0}")]
    Internal(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
