//! Error type shared by every fallible operation in the crate.

use num_complex::Complex64;
use thiserror::Error;

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;

/// Failure modes of evaluation, inversion, and continuation.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// An argument fell outside an operation's domain.
    #[error("argument {value} outside domain {domain}")]
    Domain { value: f64, domain: &'static str },

    /// The hypergeometric series did not reach the truncation threshold
    /// within the term cap.
    #[error("series for x = {x} did not converge within {max_terms} terms")]
    SeriesDivergence { x: f64, max_terms: usize },

    /// An iteration (Newton, AGM) exhausted its budget. Signals an
    /// implementation bug, not a domain limit.
    #[error("iteration failed to converge: {context}")]
    NoConvergence { context: &'static str },

    /// The flow came within the guard threshold of the singular set p = 0.
    #[error("singularity guard tripped at u = {u}: |p| = {abs_p:.3e}")]
    Singularity { u: Complex64, abs_p: f64 },

    /// The adaptive integrator's step size underflowed, which happens only
    /// when the solution blows up at finite u.
    #[error("integration step underflow near u = {u}")]
    StepUnderflow { u: Complex64 },
}
