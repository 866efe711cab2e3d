//! Numeric tolerances shared across the crate.
//!
//! Every comparison in the library points at one of these named constants so
//! the provenance of a verdict is auditable. All identity-style comparisons
//! are relative: `|lhs − rhs| ≤ tol · (1 + |lhs| + |rhs|)`.

/// Relative tolerance for coefficient identities (membership tests, collapse
/// detection, intertwining checks).
pub const EQ_REL: f64 = 1e-9;

/// Tolerance for deciding that two disk maps are the same map, by
/// coefficient comparison of their series truncations.
pub const MAP_EQ: f64 = 1e-10;

/// Round-trip tolerance for exact algebra (involutions, antiderivative /
/// derivative inverses).
pub const EXACT: f64 = 1e-12;

/// Additive slack allowed on the self-map certificate
/// `sup |φ| ≤ 1 + SUP_SLACK` over the evaluation grid.
pub const SUP_SLACK: f64 = 1e-9;

/// Additive slack allowed when testing that a quotient lies in the Schur
/// class (`sup |q| ≤ 1 + SCHUR_SLACK`).
pub const SCHUR_SLACK: f64 = 1e-6;

/// Distance from the unit circle within which a computed root is snapped to
/// the boundary (and treated as a boundary object, never an interior zero).
pub const BOUNDARY_SNAP: f64 = 1e-8;

/// Radius used to cluster polynomial roots into multiplicity groups.
pub const ROOT_CLUSTER: f64 = 1e-7;

/// Absolute tolerance used when matching points against the zero set of an
/// inner function.
pub const ZERO_MATCH: f64 = 1e-9;

/// A matching distance between `ZERO_MATCH` and this bound is reported as
/// `Inconclusive` instead of being rounded either way.
pub const ZERO_MATCH_GRAY: f64 = 1e-6;
