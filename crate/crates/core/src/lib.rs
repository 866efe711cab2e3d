//! Numerical toolkit for composition operators `C_φ f = f ∘ φ` acting on
//! Hardy spaces `H^p` of the unit disk, and for the invariant-subspace
//! structure they generate.
//!
//! The crate is organized bottom-up:
//!
//! * [`series`] — truncated Taylor series with certified truncation metadata,
//!   circle quadrature, Hardy norms and sup-norm estimates;
//! * [`maps`] — analytic self-maps of the disk (rotations, monomials, Möbius
//!   transformations, polynomials, compositions), fixed points and orbits;
//! * [`roots`] — complex polynomial root finding (companion matrix plus
//!   Newton polishing and multiplicity clustering);
//! * [`inner`] — inner functions: Blaschke products together with atomic
//!   singular factors, their zeros, compositions and quotients;
//! * [`func`] — a small closure-free representation of Hardy-space elements
//!   that mixes exact structured evaluation with truncated series;
//! * [`subspace`] — membership tests for the weighted subspaces
//!   `H^p_{α,β} = {f : f(0)β = f'(0)α}`, their inner-function multiples
//!   `J·H^p_{α,β}` and Beurling-type subspaces `θ·H^p`;
//! * [`compop`] — the composition operator itself: application, matrix
//!   truncations, norm-bound and compactness probes, invertibility between
//!   point-vanishing subspaces;
//! * [`checkers`] — two-leg invariance verdicts (a structural criterion leg
//!   cross-checked by a brute-force generator battery);
//! * [`deddens`] — boundedness probes for the Deddens algebra
//!   `{T : ‖C_φ^n T f‖ ≤ M‖C_φ^n f‖}` and its invariant subspaces.
//!
//! Everything is plain `f64`/[`Complex64`] arithmetic; no interval or
//! arbitrary-precision machinery. The crate is honest about that: estimates
//! carry the grid and truncation order they were computed with, tail bounds
//! are propagated conservatively, and probes report `Inconclusive` rather
//! than guessing when the numerics cannot decide.

pub mod checkers;
pub mod compop;
pub mod deddens;
pub mod error;
pub mod func;
pub mod inner;
pub mod maps;
pub mod roots;
pub mod series;
pub mod subspace;
pub mod tol;
pub mod verdict;

mod jet;

pub use error::{Error, Result};
pub use num_complex::Complex64;
pub use series::{DiskGrid, HardyExponent, TailBound, TaylorSeries};
pub use verdict::{Leg, LegStatus, Truncation, Verdict};

/// Default seed for randomized batteries. The CLI overrides it through the
/// `HIL_SEED` environment variable; library callers pass their own.
pub const DEFAULT_SEED: u64 = 0x4849_4c00;

/// Resolution and tolerance knobs shared by the verdict-producing probes.
///
/// `Default` reproduces the documented defaults: truncation order 256, the
/// four-radius grid `0.9, 0.99, 0.999, 0.9999` with 4096 angles, generator
/// batteries up to degree 12, identity tolerance `1e-9` and sup-norm slack
/// `1e-6`.
#[derive(Debug, Clone)]
pub struct ProbeOptions {
    /// Truncation order for series work.
    pub order: usize,
    /// Evaluation grid for norms and sup estimates.
    pub grid: DiskGrid,
    /// Highest monomial degree used in direct generator batteries.
    pub battery_degree: usize,
    /// Relative tolerance for coefficient identities (membership tests).
    pub tol_eq: f64,
    /// Additive slack allowed on sup-norm / Schur-property checks.
    pub tol_sup: f64,
    /// Seed for randomized batteries.
    pub seed: u64,
}

impl Default for ProbeOptions {
    fn default() -> Self {
        ProbeOptions {
            order: series::DEFAULT_ORDER,
            grid: DiskGrid::default(),
            battery_degree: 12,
            tol_eq: tol::EQ_REL,
            tol_sup: tol::SCHUR_SLACK,
            seed: DEFAULT_SEED,
        }
    }
}

impl ProbeOptions {
    /// Options with a custom truncation order, everything else default.
    pub fn with_order(order: usize) -> Self {
        ProbeOptions { order, ..Self::default() }
    }
}
