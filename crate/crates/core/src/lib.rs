// SPDX-License-Identifier: MIT OR Apache-2.0

//! Exact least-squares approximation of a one-dimensional signal by a
//! continuous piecewise-linear function with few breakpoints.
//!
//! Breakpoints are chosen from the sample grid and the function values at the
//! breakpoints are free. Two problems are solved exactly:
//!
//! * **budgeted**: least squared error with exactly `M` segments
//!   ([`solve_constrained`], which returns all `m <= M` at once);
//! * **penalized**: squared error plus `zeta` per segment ([`solve_regularized`]).
//!
//! Both run a dynamic program whose value functions are piecewise quadratic
//! and are stored exactly as minimal lower envelopes of quadratics
//! ([`envelope`]). Segment costs are quadratic forms in the two endpoint
//! values, evaluated in O(1) from prefix moments ([`cost`]). The [`oracle`]
//! module is an independent exhaustive solver for small inputs.
//!
//! ```
//! use segfit::{solve_constrained, Signal, SolverOptions};
//!
//! let signal = Signal::discrete(vec![2.0, 1.0, 0.0, 1.0, 2.0]).unwrap();
//! let solution = solve_constrained(&signal, 2, &SolverOptions::default()).unwrap();
//! let fit = solution.best();
//! assert_eq!(fit.indices, vec![0, 2, 4]);
//! assert!(fit.objective.abs() < 1e-12);
//! ```
//!
//! A guide with the derivations lives in the `book/` directory of the repository.

#![forbid(unsafe_code)]
// `!(x > 0.0)` is used on purpose: it also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cost;
pub mod envelope;
mod error;
pub mod oracle;
pub mod solver;

pub use cost::{compute_moments, eval_qf, transition_cost, Moments, QuadraticForm2, Signal, SignalKind, TransitionCosts};
pub use envelope::{intersect, Crossing, Envelope, EnvelopeMin, Interval, Quadratic};
pub use error::{Error, Result};
pub use solver::{
    evaluate_fit, instrumentation_report, minimize_out, recover, solve_constrained, solve_constrained_costs,
    solve_regularized, solve_regularized_costs, ConstrainedSolution, Diagnostics, FitResult,
    InstrumentationReport, Penalty, RegularizedSolution, SolverOptions, StageTable, SuccessorOrder,
};

// `cargo test --doc` also runs every code block of the guide.
#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../README.md")]
    mod readme {}
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/segment-costs.md")]
    mod segment_costs {}
    #[doc = include_str!("../../../book/src/envelopes.md")]
    mod envelopes {}
    #[doc = include_str!("../../../book/src/dynamic-program.md")]
    mod dynamic_program {}
    #[doc = include_str!("../../../book/src/penalized.md")]
    mod penalized {}
    #[doc = include_str!("../../../book/src/discrete-signals.md")]
    mod discrete_signals {}
    #[doc = include_str!("../../../book/src/envelope-lengths.md")]
    mod envelope_lengths {}
    #[doc = include_str!("../../../book/src/verification.md")]
    mod verification {}
    #[doc = include_str!("../../../book/src/cli.md")]
    mod cli {}
}
