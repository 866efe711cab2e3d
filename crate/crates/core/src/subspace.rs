//! Weighted and shift-invariant subspace membership.
//!
//! The subspaces handled here:
//!
//! * `H^p_{α,β} = { f : f(0)β = f'(0)α }` for an admissible pair
//!   (`|α|² + |β|² = 1`, `α ≠ 0`), spanned by `{α + βz, z², z³, ...}`;
//! * `J·H^p_{α,β}` for an inner function `J`;
//! * `z^n H^p` and `θ·H^p` (shift-invariant ranges of inner functions);
//! * `{ f : f(a) = 0 }` for an interior point `a`.
//!
//! Membership is decided through derivative identities at the origin plus a
//! structural divisibility probe (zero coverage and quotient boundedness) —
//! never through bare series division, which amplifies truncation noise at
//! the zeros. Tolerances are relative to the magnitudes being compared.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::func::HpFunction;
use crate::inner::InnerFunction;
use crate::jet;
use crate::series::{samples_p_mean_log, HardyExponent, TaylorSeries};
use crate::tol;
use crate::verdict::{Leg, LegStatus, Truncation, Verdict};
use crate::ProbeOptions;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// Dead/live classification bands for relative coefficient magnitudes.
const DEAD_BAND: f64 = 1e-9;
const LIVE_BAND: f64 = 1e-6;

/// A weight pair `(α, β)` with `|α|² + |β|² = 1` and `α ≠ 0`. The
/// constructor normalizes and rejects vanishing `α`.
#[derive(Debug, Clone, Copy)]
pub struct AdmissiblePair {
    alpha: Complex64,
    beta: Complex64,
}

impl AdmissiblePair {
    pub fn new(alpha: Complex64, beta: Complex64) -> Result<Self> {
        let n = (alpha.norm_sqr() + beta.norm_sqr()).sqrt();
        if !(n.is_finite() && n > 0.0) {
            return Err(Error::InvalidInput("pair must be finite and nonzero".into()));
        }
        let alpha = alpha / n;
        let beta = beta / n;
        if alpha.norm() < 1e-12 {
            return Err(Error::InvalidInput(
                "the first weight must be nonzero (the subspace degenerates otherwise)".into(),
            ));
        }
        Ok(AdmissiblePair { alpha, beta })
    }

    /// The pair `(1, 0)`: functions with vanishing first derivative.
    pub fn classic() -> Self {
        AdmissiblePair { alpha: ONE, beta: ZERO }
    }

    pub fn alpha(&self) -> Complex64 {
        self.alpha
    }

    pub fn beta(&self) -> Complex64 {
        self.beta
    }

    /// The span `{α + βz, z², z³, ..., z^max_degree}` of polynomial
    /// generators of the subspace.
    pub fn generators(&self, max_degree: usize) -> Vec<TaylorSeries> {
        let mut out = vec![TaylorSeries::polynomial(&[self.alpha, self.beta])];
        for k in 2..=max_degree {
            out.push(TaylorSeries::monomial(k));
        }
        out
    }
}

/// Which subspace a membership or invariance question is about.
#[derive(Debug, Clone)]
pub enum SubspaceSpec {
    /// `H^p_{α,β}`.
    Hab(AdmissiblePair),
    /// `J · H^p_{α,β}`.
    JHab { inner: InnerFunction, pair: AdmissiblePair },
    /// `z^n H^p`.
    ZnHp(usize),
    /// `θ · H^p`.
    ThetaHp(InnerFunction),
    /// `{ f : f(a) = 0 }` for an interior point.
    PointZero(Complex64),
}

fn basic_truncation(order: usize) -> Truncation {
    Truncation {
        order,
        radii: vec![],
        angles: 0,
        tolerances: vec![("tol_eq".into(), tol::EQ_REL)],
    }
}

// ----------------------------------------------------------------------
// Membership in H^p_{α,β}
// ----------------------------------------------------------------------

/// `f ∈ H^p_{α,β}` iff `f(0)β = f'(0)α`, within a tolerance relative to
/// `1 + |f(0)| + |f'(0)|`.
pub fn member_hab(f: &HpFunction, pair: &AdmissiblePair) -> Result<Verdict> {
    let jet = f.jet(ZERO, 1)?;
    let lhs = jet[0] * pair.beta;
    let rhs = jet[1] * pair.alpha;
    let residual = (lhs - rhs).norm();
    let scale = 1.0 + jet[0].norm() + jet[1].norm();
    let leg = if residual <= tol::EQ_REL * scale {
        Leg::holds()
    } else {
        Leg::fails(format!(
            "f(0)β = {lhs} differs from f'(0)α = {rhs} beyond tolerance"
        ))
    }
    .with("residual", residual)
    .with("scale", scale);
    Ok(Verdict {
        claim: "membership in the weighted subspace f(0)β = f'(0)α".into(),
        criterion: leg,
        direct: None,
        truncation: basic_truncation(1),
    })
}

/// `f ∈ z^n H^p` iff `f` vanishes to order `n` at the origin.
pub fn member_zn_hp(f: &HpFunction, n: usize) -> Result<Verdict> {
    let leg = match f.vanishes_to_order(ZERO, n) {
        Ok(true) => Leg::holds(),
        Ok(false) => Leg::fails(format!("a coefficient below order {n} is live")),
        Err(Error::Inconclusive(reason)) => Leg::inconclusive(reason),
        Err(e) => return Err(e),
    };
    Ok(Verdict {
        claim: format!("membership in z^{n} H^p"),
        criterion: leg,
        direct: None,
        truncation: basic_truncation(n),
    })
}

/// `f(a) = 0` membership for an interior point.
pub fn member_point_zero(f: &HpFunction, a: Complex64) -> Result<Verdict> {
    let jet = f.jet(a, 1)?;
    let scale = 1.0 + jet[0].norm() + jet[1].norm();
    let residual = jet[0].norm();
    let leg = if residual <= tol::EQ_REL * scale {
        Leg::holds()
    } else {
        Leg::fails(format!("f({a}) = {} is nonzero", jet[0]))
    }
    .with("residual", residual)
    .with("scale", scale);
    Ok(Verdict {
        claim: format!("membership in the subspace vanishing at {a}"),
        criterion: leg,
        direct: None,
        truncation: basic_truncation(1),
    })
}

// ----------------------------------------------------------------------
// Divisibility probe (shared by the inner-multiple memberships)
// ----------------------------------------------------------------------

/// Caps the angular sampling of the boundedness probe; membership batteries
/// call this thousands of times.
const PROBE_ANGLES: usize = 512;

/// Structural divisibility of `f` by `θ`: every zero of `θ` covered with
/// multiplicity, and `sup |f/θ|` on the grid moderate relative to `sup |f|`.
/// The sup comparison has a factor-1000 dead zone on each side; landing
/// between the bands is reported as inconclusive rather than guessed.
fn divisibility_probe(f: &HpFunction, theta: &InnerFunction, opts: &ProbeOptions) -> Result<Leg> {
    let mut evidence: Vec<(String, f64)> = Vec::new();
    for (w, m) in theta.zeros_report() {
        match f.vanishes_to_order(w, m) {
            Ok(true) => {}
            Ok(false) => {
                return Ok(Leg::fails(format!(
                    "zero of the inner factor at {w} (multiplicity {m}) is not covered by f"
                )))
            }
            Err(Error::Inconclusive(reason)) => return Ok(Leg::inconclusive(reason)),
            Err(e) => return Err(e),
        }
    }
    let angles = opts.grid.angles().min(PROBE_ANGLES);
    let mut sup_q = f64::NEG_INFINITY;
    let mut sup_f = f64::NEG_INFINITY;
    for r in crate::func::clamp_radii(opts.grid.radii(), f.certified_radius()) {
        for j in 0..angles {
            let t = 2.0 * std::f64::consts::PI * j as f64 / angles as f64;
            let z = Complex64::from_polar(r, t);
            let theta_log = theta.eval_log_modulus(z)?;
            let f_log = f.log_modulus(z)?;
            sup_f = sup_f.max(f_log);
            if theta_log < -700.0 {
                // Both numerator and denominator are far below representable
                // magnitudes (deep inside a singular mass's shadow); the
                // ratio is bounded mathematically but meaningless in f64.
                continue;
            }
            sup_q = sup_q.max(f_log - theta_log);
        }
    }
    let bound_log = (1e3 * (1.0 + sup_f.exp())).ln();
    evidence.push(("sup_log_quotient".into(), sup_q));
    evidence.push(("bound_log".into(), bound_log));
    let mut leg = if sup_q <= bound_log {
        Leg::holds()
    } else if sup_q > bound_log + (1e3f64).ln() {
        Leg::fails(format!(
            "the quotient's sampled sup (log {sup_q:.3}) exceeds the boundedness budget (log {bound_log:.3})"
        ))
    } else {
        Leg::inconclusive("the quotient's sup sits between the bounded and unbounded bands")
    };
    leg.evidence.extend(evidence);
    Ok(leg)
}

// ----------------------------------------------------------------------
// Membership in θ·H^p
// ----------------------------------------------------------------------

/// `f ∈ θ H^p`: zeros of `θ` covered (with multiplicity), `|f/θ|` bounded
/// on the grid, and — when `θ` has no singular part — the quotient's p-mean
/// on the outermost circle within `(1 + 10⁻³)` of `f`'s (the inner factor
/// has unit boundary modulus, so the norms must match in the limit).
pub fn member_theta_hp(
    f: &HpFunction,
    theta: &InnerFunction,
    p: HardyExponent,
    opts: &ProbeOptions,
) -> Result<Verdict> {
    let mut leg = divisibility_probe(f, theta, opts)?;
    if leg.status == LegStatus::Holds && !theta.has_atoms() {
        // The norm comparison needs the true outermost circle, where the
        // inner factor's modulus is already within ~10⁻³ of 1; it would
        // condemn honest members if run on a shrunk certificate.
        let r = opts.grid.outermost();
        if f.certified_radius() >= r {
            let angles = opts.grid.angles().min(PROBE_ANGLES);
            let mut q_logs = Vec::with_capacity(angles);
            let mut f_logs = Vec::with_capacity(angles);
            for j in 0..angles {
                let t = 2.0 * std::f64::consts::PI * j as f64 / angles as f64;
                let z = Complex64::from_polar(r, t);
                let f_log = f.log_modulus(z)?;
                f_logs.push(f_log);
                q_logs.push(f_log - theta.eval_log_modulus(z)?);
            }
            let lm_q = samples_p_mean_log(&q_logs, p);
            let lm_f = samples_p_mean_log(&f_logs, p);
            let ratio = ((lm_q - lm_f) / p.value()).exp();
            leg = leg.with("outermost_norm_ratio", ratio);
            if !(ratio <= 1.0 + 1e-3) {
                leg.status = LegStatus::Fails;
                leg.witness = Some(format!(
                    "the quotient's p-mean on the outermost circle exceeds f's by the factor {ratio}"
                ));
            }
        } else {
            leg = leg.with("norm_ratio_skipped_at_radius", f.certified_radius());
        }
    }
    Ok(Verdict {
        claim: "membership in the shift-invariant range of the inner function".into(),
        criterion: leg,
        direct: None,
        truncation: Truncation::from_options(opts).with_tol("norm_ratio_slack", 1e-3),
    })
}

// ----------------------------------------------------------------------
// Membership in J·H^p_{α,β}
// ----------------------------------------------------------------------

/// `f ∈ J·H^p_{α,β}`.
///
/// Criterion leg — the derivative identity at the origin: with `n` the
/// origin multiplicity of `J` and `c_k`, `j_k` the Taylor coefficients of
/// `f` and `J`,
///
/// * coefficients of `f` below order `n` must be dead, and
/// * `c_{n+1} α j_n = (β j_n + α j_{n+1}) c_n`
///
/// (for `n = 0` this is `J(0)f'(0)α = J(0)f(0)β + J'(0)f(0)α`). The branch
/// where both `c_n` and `c_{n+1}` are dead makes the identity vacuous; the
/// verdict flags it in the evidence (`identity_vacuous = 1`).
///
/// Direct leg — structural: `J`'s zeros must be covered and `f/J` bounded;
/// the first two live quotient coefficients must satisfy the plain pair
/// condition `g(0)β = g'(0)α`.
pub fn member_j_hab(
    f: &HpFunction,
    j_inner: &InnerFunction,
    pair: &AdmissiblePair,
    opts: &ProbeOptions,
) -> Result<Verdict> {
    let n = j_inner.origin_mult();
    let cf = f.jet(ZERO, n + 1)?;
    let jj = j_inner.jet(ZERO, n + 1)?;
    let scale_f = cf.iter().map(|c| c.norm()).fold(0.0f64, f64::max);

    // Origin vanishing below order n.
    let mut criterion = Leg::holds();
    if scale_f > 0.0 {
        for (k, c) in cf.iter().enumerate().take(n) {
            let rel = c.norm() / scale_f;
            if rel > LIVE_BAND {
                criterion = Leg::fails(format!(
                    "coefficient {k} of f is live but the inner factor vanishes to order {n}"
                ));
                break;
            } else if rel > DEAD_BAND {
                criterion = Leg::inconclusive(format!(
                    "coefficient {k} of f sits between the live and dead bands"
                ));
                break;
            }
        }
    }

    // The identity itself.
    if criterion.status == LegStatus::Holds {
        let lhs = cf[n + 1] * pair.alpha * jj[n];
        let rhs = (pair.beta * jj[n] + pair.alpha * jj[n + 1]) * cf[n];
        let residual = (lhs - rhs).norm();
        let scale = 1.0 + lhs.norm() + rhs.norm();
        let vacuous = scale_f == 0.0
            || (cf[n].norm() <= DEAD_BAND * scale_f && cf[n + 1].norm() <= DEAD_BAND * scale_f);
        criterion = if residual <= tol::EQ_REL * scale {
            Leg::holds()
        } else {
            Leg::fails(format!(
                "the origin identity fails: c_{}·α·j_{n} = {lhs} vs (β·j_{n} + α·j_{})·c_{n} = {rhs}",
                n + 1,
                n + 1,
            ))
        }
        .with("residual", residual)
        .with("scale", scale)
        .with("identity_vacuous", if vacuous { 1.0 } else { 0.0 });
    }

    // Direct leg: divisibility plus the quotient's own pair condition.
    let mut direct = divisibility_probe(f, j_inner, opts)?;
    if direct.status == LegStatus::Holds {
        // Quotient jet at the origin, stripped of the shared z^n factor.
        let fs: Vec<Complex64> = cf[n..].to_vec();
        let js: Vec<Complex64> = jj[n..].to_vec();
        if js[0].norm() == 0.0 {
            return Err(Error::InvalidInput(
                "inner factor's leading origin coefficient vanished; inconsistent structure".into(),
            ));
        }
        let g = jet::jdiv(&fs, &js)?;
        let lhs = g[0] * pair.beta;
        let rhs = g[1] * pair.alpha;
        let residual = (lhs - rhs).norm();
        let scale = 1.0 + g[0].norm() + g[1].norm();
        if residual > tol::EQ_REL * scale {
            direct.status = LegStatus::Fails;
            direct.witness =
                Some("the quotient violates the pair condition g(0)β = g'(0)α".into());
        }
        direct = direct.with("quotient_pair_residual", residual);
    }

    Ok(Verdict {
        claim: "membership in the inner multiple of the weighted subspace".into(),
        criterion,
        direct: Some(direct),
        truncation: Truncation::from_options(opts),
    })
}

// ----------------------------------------------------------------------
// Collapse of J·H^p_{α,β}
// ----------------------------------------------------------------------

/// Does `J·H^p_{α,β}` collapse onto the monomial-shifted space
/// `z^n H^p_{1,0}` (inside `J·H^p`)? The scalar criterion, with `n` the
/// origin multiplicity of `J` and `j_k` its coefficients, is
///
/// ```text
/// β j_n + α j_{n+1} = 0
/// ```
///
/// (`J(0)β + J'(0)α = 0` when `n = 0`). The direct leg multiplies eight
/// battery functions through `J` — four inside the weighted subspace, four
/// outside — and checks that membership of `J·g` in `z^n H^p_{1,0}` agrees
/// with membership of `g` in `H^p_{α,β}` exactly when the scalar criterion
/// says it should.
///
/// Note the battery draws from `J·H^p` only: multiples of `J` are the
/// functions for which the two sides can be compared; a function outside
/// `J·H^p` belongs to neither side once divisibility is accounted for.
pub fn collapse_check(
    j_inner: &InnerFunction,
    pair: &AdmissiblePair,
    opts: &ProbeOptions,
) -> Result<Verdict> {
    let n = j_inner.origin_mult();
    let jj = j_inner.jet(ZERO, n + 1)?;
    let lhs = pair.beta * jj[n];
    let rhs = pair.alpha * jj[n + 1];
    let residual = (lhs + rhs).norm();
    let scale = 1.0 + lhs.norm() + rhs.norm();
    let collapses = residual <= tol::EQ_REL * scale;
    let criterion = if collapses {
        Leg::holds()
    } else {
        Leg::fails(format!(
            "β j_{n} + α j_{} = {} is nonzero",
            n + 1,
            lhs + rhs
        ))
    }
    .with("residual", residual)
    .with("scale", scale);

    // Battery: membership agreement on eight multiples of J.
    let a = pair.alpha;
    let b = pair.beta;
    let battery: Vec<(&str, TaylorSeries)> = vec![
        ("α+βz", TaylorSeries::polynomial(&[a, b])),
        ("z²", TaylorSeries::monomial(2)),
        ("z³", TaylorSeries::monomial(3)),
        ("α+βz+z²", TaylorSeries::polynomial(&[a, b, ONE])),
        ("1", TaylorSeries::one()),
        ("z", TaylorSeries::monomial(1)),
        ("z(α+βz)", TaylorSeries::polynomial(&[ZERO, a, b])),
        ("z+z³", TaylorSeries::polynomial(&[ZERO, ONE, ZERO, ONE])),
    ];
    let mut direct = Leg::holds();
    let mut agreements = 0usize;
    for (label, g) in &battery {
        let f = HpFunction::inner_times(j_inner.clone(), g.clone());
        // Left: g ∈ H^p_{α,β} (membership of J·g in J·H^p_{α,β}).
        let left = member_hab(&HpFunction::series(g.clone()), pair)?.status();
        // Right: J·g ∈ z^n H^p_{1,0}: dead below order n, and c_{n+1} dead.
        let cf = f.jet(ZERO, n + 1)?;
        let scale_f = cf.iter().map(|c| c.norm()).fold(0.0f64, f64::max).max(1e-300);
        let mut right = LegStatus::Holds;
        for c in cf.iter().take(n).chain(std::iter::once(&cf[n + 1])) {
            let rel = c.norm() / scale_f;
            if rel > LIVE_BAND {
                right = LegStatus::Fails;
                break;
            } else if rel > DEAD_BAND {
                right = LegStatus::Inconclusive;
                break;
            }
        }
        if right == LegStatus::Inconclusive || !left.is_conclusive() {
            direct = Leg::inconclusive(format!("battery function {label} was undecidable"));
            break;
        }
        // Under collapse the sides must agree on every battery function;
        // without collapse the weighted members (left holds) must escape.
        let agree = left == right;
        if agree {
            agreements += 1;
        }
        if collapses && !agree {
            direct = Leg::fails(format!(
                "battery function {label}: weighted membership and shifted membership disagree despite the scalar criterion"
            ));
            break;
        }
    }
    if direct.status == LegStatus::Holds {
        if collapses {
            direct = Leg::holds();
        } else if agreements < battery.len() {
            // Disagreement found, as the failed criterion predicts.
            direct = Leg::fails("battery found functions separating the two sides".to_string());
        } else {
            direct = Leg::inconclusive(
                "criterion fails but the battery could not separate the sides".to_string(),
            );
        }
    }
    let agreement_fraction = agreements as f64 / battery.len() as f64;
    direct = direct.with("battery_agreement_fraction", agreement_fraction);

    Ok(Verdict {
        claim: "collapse of the weighted inner multiple onto the monomial-shifted space".into(),
        criterion,
        direct: Some(direct),
        truncation: Truncation::from_options(opts),
    })
}

// ----------------------------------------------------------------------
// Dispatcher
// ----------------------------------------------------------------------

/// Membership of `f` in the given subspace.
pub fn member_of(
    f: &HpFunction,
    spec: &SubspaceSpec,
    p: HardyExponent,
    opts: &ProbeOptions,
) -> Result<Verdict> {
    match spec {
        SubspaceSpec::Hab(pair) => member_hab(f, pair),
        SubspaceSpec::JHab { inner, pair } => member_j_hab(f, inner, pair, opts),
        SubspaceSpec::ZnHp(n) => member_zn_hp(f, *n),
        SubspaceSpec::ThetaHp(theta) => member_theta_hp(f, theta, p, opts),
        SubspaceSpec::PointZero(a) => member_point_zero(f, *a),
    }
}
