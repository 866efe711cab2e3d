//! Error type shared by all numeric routines.

use num_complex::Complex64;
use thiserror::Error;

/// Failure modes of the numeric routines.
///
/// `Inconclusive` deserves a note: probes that return a full
/// [`Verdict`](crate::verdict::Verdict) encode indecision in the verdict
/// itself, while lower-level operations whose *output* cannot be produced at
/// all (for example a zero that cannot be resolved within root-finding
/// tolerance) surface it as this error.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// Evaluation was requested outside the radius on which the truncation
    /// is certified.
    #[error("evaluation at |z| = {requested:.6} outside certified radius {certified:.6}")]
    OutOfDomain { requested: f64, certified: f64 },

    /// A point that must lie in the closed unit disk does not.
    #[error("point with modulus {modulus:.6} lies outside the closed unit disk")]
    OutOfDisk { modulus: f64 },

    /// A derivative (or coefficient) beyond the truncation order was
    /// requested.
    #[error("order {requested} exceeds truncation order {order}")]
    OrderExceeded { requested: usize, order: usize },

    /// A composition's inner map sends the domain outside the region on
    /// which the outer function is certified.
    #[error("inner map range estimate {estimate:.6} leaves certified domain of radius {certified:.6}")]
    RangeViolation { estimate: f64, certified: f64 },

    /// A hypothesis of the statement being exercised fails for the inputs.
    #[error("hypothesis violated: {0}")]
    HypothesisViolated(String),

    /// The inputs are valid but the operation is not implemented for them.
    #[error("unsupported: {0}")]
    Unsupported(String),

    /// The numerics cannot decide within the configured tolerances.
    #[error("inconclusive: {0}")]
    Inconclusive(String),

    /// A polynomial root sits inside the boundary tolerance band around the
    /// unit circle, where inside/outside factorization is ill-posed.
    #[error("root {root} sits within the boundary tolerance of the unit circle")]
    BoundaryRoot { root: Complex64 },

    /// The weighted subspace degenerates to a shifted unweighted one, so the
    /// zero-set criterion does not apply.
    #[error("weighted subspace collapses to a shifted unweighted space; criterion not applicable")]
    CollapseDetected,

    /// Norms fell below the floating-point floor before the requested number
    /// of iterations.
    #[error("norm underflow at iteration {step}; reduce n_max")]
    Underflow { step: usize },

    /// Malformed input (failed constructor validation).
    #[error("invalid input: {0}")]
    InvalidInput(String),
}

pub type Result<T> = std::result::Result<T, Error>;
