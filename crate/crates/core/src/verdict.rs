//! Two-leg verdicts.
//!
//! Most invariance questions in this crate are answered twice: once through
//! the structural criterion the theory supplies (the *criterion leg*) and
//! once by brute force on a battery of generators (the *direct leg*). A
//! [`Verdict`] packages both legs, the numeric evidence behind each, and the
//! truncation/grid metadata the computation depended on, so a reader can
//! judge how much to trust it.

/// Outcome of one leg of a verdict.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LegStatus {
    Holds,
    Fails,
    /// The numerics could not decide within tolerance.
    Inconclusive,
}

impl LegStatus {
    pub fn is_conclusive(self) -> bool {
        !matches!(self, LegStatus::Inconclusive)
    }
}

/// One leg: a status, named numeric evidence, and an optional witness
/// describing a concrete failure.
#[derive(Debug, Clone)]
pub struct Leg {
    pub status: LegStatus,
    /// Named scalars backing the status (residuals, sup estimates, counts).
    pub evidence: Vec<(String, f64)>,
    /// Human-readable description of the violating object, if any.
    pub witness: Option<String>,
}

impl Leg {
    pub fn holds() -> Self {
        Leg { status: LegStatus::Holds, evidence: Vec::new(), witness: None }
    }

    pub fn fails(witness: impl Into<String>) -> Self {
        Leg { status: LegStatus::Fails, evidence: Vec::new(), witness: Some(witness.into()) }
    }

    pub fn inconclusive(reason: impl Into<String>) -> Self {
        Leg {
            status: LegStatus::Inconclusive,
            evidence: Vec::new(),
            witness: Some(reason.into()),
        }
    }

    /// Attach a named evidence value.
    pub fn with(mut self, name: &str, value: f64) -> Self {
        self.evidence.push((name.to_string(), value));
        self
    }
}

/// Resolution metadata: how coarse the computation behind a verdict was.
#[derive(Debug, Clone)]
pub struct Truncation {
    /// Series truncation order.
    pub order: usize,
    /// Grid radii used for norms and sup estimates.
    pub radii: Vec<f64>,
    /// Angular sample count per circle.
    pub angles: usize,
    /// Named tolerances the decision depended on.
    pub tolerances: Vec<(String, f64)>,
}

impl Truncation {
    pub fn from_options(opts: &crate::ProbeOptions) -> Self {
        Truncation {
            order: opts.order,
            radii: opts.grid.radii().to_vec(),
            angles: opts.grid.angles(),
            tolerances: vec![
                ("tol_eq".to_string(), opts.tol_eq),
                ("tol_sup".to_string(), opts.tol_sup),
            ],
        }
    }

    /// Record an extra tolerance the verdict used.
    pub fn with_tol(mut self, name: &str, value: f64) -> Self {
        self.tolerances.push((name.to_string(), value));
        self
    }
}

/// A claim, the criterion leg that decides it, an optional direct
/// (brute-force) leg, and the resolution the computation ran at.
#[derive(Debug, Clone)]
pub struct Verdict {
    /// What is being decided, in words.
    pub claim: String,
    /// The structural criterion leg.
    pub criterion: Leg,
    /// The brute-force cross-check, when one was run.
    pub direct: Option<Leg>,
    pub truncation: Truncation,
}

impl Verdict {
    /// Overall status: the criterion leg is the decision; the direct leg is
    /// corroboration.
    pub fn status(&self) -> LegStatus {
        self.criterion.status
    }

    /// Whether the two legs agree. `Some(..)` only when both legs exist and
    /// both are conclusive; agreement is never claimed through an
    /// inconclusive leg.
    pub fn agreement(&self) -> Option<bool> {
        let direct = self.direct.as_ref()?;
        if self.criterion.status.is_conclusive() && direct.status.is_conclusive() {
            Some(self.criterion.status == direct.status)
        } else {
            None
        }
    }
}
