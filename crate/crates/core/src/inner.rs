//! Inner functions: unit-modulus boundary factors of disk functions.
//!
//! An [`InnerFunction`] is stored structurally as
//!
//! ```text
//! θ(z) = λ · z^m0 · Π_j [ (conj(a_j)/|a_j|) (a_j - z)/(1 - conj(a_j) z) ]^{m_j}
//!          · Π_i exp( -c_i (w_i + z)/(w_i - z) ),     w_i = e^{i t_i},
//! ```
//!
//! i.e. a unimodular constant, an origin zero, finitely many disk-zero
//! factors, and finitely many boundary point masses. Keeping the structure
//! (rather than a truncated series) makes zero multiplicities, local jets,
//! log-moduli near the boundary, and compositions exact where the theory
//! needs them to be exact.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::jet;
use crate::maps::DiskSelfMap;
use crate::roots::{polynomial_roots, PolyRoots, MAX_DEGREE};
use crate::series::{TailBound, TaylorSeries};
use crate::tol;

const ONE: Complex64 = Complex64::new(1.0, 0.0);
const ZERO: Complex64 = Complex64::new(0.0, 0.0);

/// A zero of the disk-interior part, `0 < |a| < 1`.
#[derive(Debug, Clone, Copy)]
pub struct BlaschkeZero {
    pub a: Complex64,
    pub mult: usize,
}

/// A boundary point mass at `e^{it}` with weight `c > 0`.
#[derive(Debug, Clone, Copy)]
pub struct SingularAtom {
    pub t: f64,
    pub c: f64,
}

impl SingularAtom {
    pub fn boundary_point(&self) -> Complex64 {
        Complex64::from_polar(1.0, self.t)
    }
}

/// A finitely-described inner function. See the module docs for the shape.
#[derive(Debug, Clone)]
pub struct InnerFunction {
    lambda: Complex64,
    origin_mult: usize,
    zeros: Vec<BlaschkeZero>,
    atoms: Vec<SingularAtom>,
}

impl InnerFunction {
    /// Validating constructor. The front factor must be unimodular (within
    /// 1e-10, then normalized), zeros interior and away from the origin
    /// (origin zeros go through `origin_mult`), weights positive. Duplicate
    /// zero locations (within 1e-12) are merged.
    pub fn new(
        lambda: Complex64,
        origin_mult: usize,
        zeros: Vec<BlaschkeZero>,
        atoms: Vec<SingularAtom>,
    ) -> Result<Self> {
        let n = lambda.norm();
        if (n - 1.0).abs() > tol::MAP_EQ {
            return Err(Error::InvalidInput(format!(
                "front factor must be unimodular, |λ| = {n}"
            )));
        }
        let lambda = lambda / n;
        let mut merged: Vec<BlaschkeZero> = Vec::new();
        for z in zeros {
            if z.mult == 0 {
                continue;
            }
            let m = z.a.norm();
            if m == 0.0 {
                return Err(Error::InvalidInput(
                    "zeros at the origin go through origin_mult, not the zero list".into(),
                ));
            }
            if m >= 1.0 {
                return Err(Error::InvalidInput(format!(
                    "zero must be interior, |a| = {m}"
                )));
            }
            match merged.iter_mut().find(|e| (e.a - z.a).norm() <= 1e-12) {
                Some(e) => e.mult += z.mult,
                None => merged.push(z),
            }
        }
        let mut norm_atoms = Vec::new();
        for at in atoms {
            if !(at.c > 0.0 && at.c.is_finite()) {
                return Err(Error::InvalidInput(format!(
                    "atom weight must be positive and finite, got {}",
                    at.c
                )));
            }
            if !at.t.is_finite() {
                return Err(Error::InvalidInput("atom angle must be finite".into()));
            }
            let t = at.t.rem_euclid(2.0 * std::f64::consts::PI);
            norm_atoms.push(SingularAtom { t, c: at.c });
        }
        Ok(InnerFunction { lambda, origin_mult, zeros: merged, atoms: norm_atoms })
    }

    /// A single interior-zero factor.
    pub fn blaschke_factor(a: Complex64) -> Result<Self> {
        Self::new(ONE, 0, vec![BlaschkeZero { a, mult: 1 }], vec![])
    }

    /// `z^k`.
    pub fn monomial(k: usize) -> Self {
        InnerFunction { lambda: ONE, origin_mult: k, zeros: vec![], atoms: vec![] }
    }

    /// A single boundary point mass `exp(-c (w + z)/(w - z))`, `w = e^{it}`.
    pub fn atom(t: f64, c: f64) -> Result<Self> {
        Self::new(ONE, 0, vec![], vec![SingularAtom { t, c }])
    }

    pub fn lambda(&self) -> Complex64 {
        self.lambda
    }

    pub fn origin_mult(&self) -> usize {
        self.origin_mult
    }

    pub fn zeros(&self) -> &[BlaschkeZero] {
        &self.zeros
    }

    pub fn atoms(&self) -> &[SingularAtom] {
        &self.atoms
    }

    pub fn has_atoms(&self) -> bool {
        !self.atoms.is_empty()
    }

    /// Total zero count with multiplicity (degree of the rational part).
    pub fn degree_bound(&self) -> usize {
        self.origin_mult + self.zeros.iter().map(|z| z.mult).sum::<usize>()
    }

    /// All zeros with multiplicities, origin included.
    pub fn zeros_report(&self) -> Vec<(Complex64, usize)> {
        let mut out = Vec::with_capacity(self.zeros.len() + 1);
        if self.origin_mult > 0 {
            out.push((ZERO, self.origin_mult));
        }
        out.extend(self.zeros.iter().map(|z| (z.a, z.mult)));
        out
    }

    fn check_interior(z: Complex64) -> Result<()> {
        if z.norm() > 1.0 - 1e-12 {
            return Err(Error::OutOfDisk { modulus: z.norm() });
        }
        Ok(())
    }

    // ------------------------------------------------------------------
    // Pointwise evaluation
    // ------------------------------------------------------------------

    /// Direct evaluation at an interior point.
    pub fn eval(&self, z: Complex64) -> Result<Complex64> {
        Self::check_interior(z)?;
        let mut acc = self.lambda * z.powu(self.origin_mult as u32);
        for bz in &self.zeros {
            let u = bz.a.conj() / bz.a.norm();
            let factor = u * (bz.a - z) / (ONE - bz.a.conj() * z);
            acc *= factor.powu(bz.mult as u32);
        }
        for at in &self.atoms {
            let w = at.boundary_point();
            acc *= (-(at.c) * (w + z) / (w - z)).exp();
        }
        Ok(acc)
    }

    /// `ln |θ(z)|`, computed factor by factor so that values far below the
    /// f64 underflow threshold (heavy atoms near their boundary point) stay
    /// finite. Returns `-inf` exactly at a zero.
    pub fn eval_log_modulus(&self, z: Complex64) -> Result<f64> {
        Self::check_interior(z)?;
        let mut acc = 0.0f64;
        if self.origin_mult > 0 {
            acc += self.origin_mult as f64 * z.norm().ln();
        }
        for bz in &self.zeros {
            let num = (bz.a - z).norm();
            let den = (ONE - bz.a.conj() * z).norm();
            acc += bz.mult as f64 * (num.ln() - den.ln());
        }
        for at in &self.atoms {
            let w = at.boundary_point();
            acc -= at.c * ((w + z) / (w - z)).re;
        }
        Ok(acc)
    }

    /// Local expansion `[θ(w), θ'(w), θ''(w)/2, ...]` at an interior point,
    /// assembled exactly from the factors' jets.
    pub fn jet(&self, w: Complex64, k: usize) -> Result<Vec<Complex64>> {
        Self::check_interior(w)?;
        let len = k + 1;
        let mut acc = vec![ZERO; len];
        acc[0] = self.lambda;
        if self.origin_mult > 0 {
            let mut mono = vec![ZERO; self.origin_mult + 1];
            mono[self.origin_mult] = ONE;
            let mj = jet::taylor_shift(&mono, w, k);
            acc = jet::jmul(&acc, &mj);
            acc.resize(len, ZERO);
        }
        for bz in &self.zeros {
            let u = bz.a.conj() / bz.a.norm();
            let mut num = vec![ZERO; len];
            num[0] = u * (bz.a - w);
            if len > 1 {
                num[1] = -u;
            }
            let mut den = vec![ZERO; len];
            den[0] = ONE - bz.a.conj() * w;
            if len > 1 {
                den[1] = -bz.a.conj();
            }
            let factor = jet::jdiv(&num, &den)?;
            for _ in 0..bz.mult {
                acc = jet::jmul(&acc, &factor);
                acc.resize(len, ZERO);
            }
        }
        for at in &self.atoms {
            let w0 = at.boundary_point();
            let mut num = vec![ZERO; len];
            num[0] = -(at.c) * (w0 + w);
            if len > 1 {
                num[1] = Complex64::new(-at.c, 0.0);
            }
            let mut den = vec![ZERO; len];
            den[0] = w0 - w;
            if len > 1 {
                den[1] = -ONE;
            }
            let exponent = jet::jdiv(&num, &den)?;
            let factor = jet::jexp(&exponent);
            acc = jet::jmul(&acc, &factor);
            acc.resize(len, ZERO);
        }
        Ok(acc)
    }

    // ------------------------------------------------------------------
    // Series
    // ------------------------------------------------------------------

    /// Maclaurin series with *exact* retained coefficients and the rigorous
    /// inner-function tail `r^(N+1) / sqrt(1 - r^2)` (Cauchy–Schwarz against
    /// the coefficient bound `sum |θ_k|^2 <= 1`).
    pub fn to_series(&self, order: usize, radius: f64) -> Result<TaylorSeries> {
        if !(radius > 0.0 && radius < 1.0) {
            return Err(Error::InvalidInput(format!(
                "series radius must lie in (0, 1), got {radius}"
            )));
        }
        let mut acc = vec![self.lambda];
        for bz in &self.zeros {
            let factor = blaschke_coeffs(bz.a, order);
            for _ in 0..bz.mult {
                acc = conv_trunc(&acc, &factor, order);
            }
        }
        for at in &self.atoms {
            let factor = atom_coeffs(at, order);
            acc = conv_trunc(&acc, &factor, order);
        }
        // The origin factor shifts everything up.
        if self.origin_mult > 0 {
            let mut shifted = vec![ZERO; (self.origin_mult + acc.len()).min(order + 1)];
            for (k, v) in acc.iter().enumerate() {
                if self.origin_mult + k <= order {
                    shifted[self.origin_mult + k] = *v;
                }
            }
            acc = shifted;
        }
        acc.resize(order + 1, ZERO);
        let tail = radius.powi(order as i32 + 1) / (1.0 - radius * radius).sqrt();
        TaylorSeries::with_certificate(acc, radius, TailBound::Known(tail))
    }

    // ------------------------------------------------------------------
    // Zero structure
    // ------------------------------------------------------------------

    /// Multiplicity of the zero at an interior point, decided structurally
    /// against the stored zero set. Points that land in the gray band
    /// between the match tolerance (1e-9) and its 1000x cushion (1e-6) are
    /// refused as numerically ambiguous.
    pub fn mult_at(&self, w: Complex64) -> Result<usize> {
        Self::check_interior(w)?;
        let mut mult = 0usize;
        let mut gray = false;
        if w.norm() <= tol::ZERO_MATCH {
            mult += self.origin_mult;
        } else if w.norm() <= tol::ZERO_MATCH_GRAY && self.origin_mult > 0 {
            gray = true;
        }
        for bz in &self.zeros {
            let d = (bz.a - w).norm();
            if d <= tol::ZERO_MATCH {
                mult += bz.mult;
            } else if d <= tol::ZERO_MATCH_GRAY {
                gray = true;
            }
        }
        if gray {
            return Err(Error::Inconclusive(format!(
                "point {w} sits in the gray band around a stored zero; \
                 cannot distinguish a hit from a near miss"
            )));
        }
        Ok(mult)
    }

    // ------------------------------------------------------------------
    // Composition and quotients
    // ------------------------------------------------------------------

    /// `θ ∘ φ` as an analytic representation: exact rational form (with its
    /// numerator roots) when `θ` has no atoms, `φ` is rational, and the
    /// total degree stays within [`MAX_DEGREE`]; otherwise a certified
    /// series on a radius shrunk until the range of `φ` fits.
    pub fn compose_with_map(&self, phi: &DiskSelfMap, order: usize) -> Result<AnalyticRep> {
        if !self.has_atoms() {
            if let Some((p, q)) = phi.as_rational() {
                let dphi = p.len().max(q.len()) - 1;
                let deg = self.degree_bound() * dphi;
                if deg <= MAX_DEGREE {
                    return self.compose_rational(&p, &q);
                }
            }
        }
        // Series fallback: certify θ on 0.9, shrink the inner radius until
        // the range of φ stays below it.
        let theta_series = self.to_series(order, 0.9)?;
        let phi_series = phi.series_within(order, 0.9)?;
        Ok(AnalyticRep::Series(theta_series.compose(&phi_series)?))
    }

    fn compose_rational(&self, p: &[Complex64], q: &[Complex64]) -> Result<AnalyticRep> {
        // θ ∘ (P/Q), denominators cleared:
        //   num = λ P^m0 Π u_j (a_j Q - P)^{m_j}
        //   den = Q^m0 Π (Q - conj(a_j) P)^{m_j}
        let p_s = TaylorSeries::polynomial(p);
        let q_s = TaylorSeries::polynomial(q);
        let mut num = TaylorSeries::constant(self.lambda);
        let mut den = TaylorSeries::one();
        for _ in 0..self.origin_mult {
            num = &num * &p_s;
            den = &den * &q_s;
        }
        for bz in &self.zeros {
            let u = bz.a.conj() / bz.a.norm();
            let nf = &q_s.scale(bz.a) - &p_s;
            let df = &q_s - &p_s.scale(bz.a.conj());
            for _ in 0..bz.mult {
                num = (&num * &nf).scale(u);
                den = &den * &df;
            }
        }
        let zeros = polynomial_roots(num.coeffs())?;
        Ok(AnalyticRep::Rational { num, den, zeros })
    }

    /// Structural analyticity of the quotient `(θ ∘ φ) / θ`: every zero of
    /// `θ` (with multiplicity) must be matched by at least that multiplicity
    /// in `θ ∘ φ`, computed as `mult_θ(φ(w)) · ord_w(φ - φ(w))` from exact
    /// jets — no series, no cancellation.
    pub fn quotient_analysis(&self, phi: &DiskSelfMap) -> Result<QuotientAnalysis> {
        use crate::verdict::LegStatus;

        // Constant maps: θ∘φ is the constant θ(c).
        if let crate::maps::MapKind::Constant(c) = phi.kind() {
            let hit = self.mult_at(*c)? > 0;
            if hit {
                // θ∘φ ≡ 0, the quotient is identically zero: analytic.
                return Ok(QuotientAnalysis {
                    analytic: LegStatus::Holds,
                    identically_zero: true,
                    per_zero: vec![],
                });
            }
            let analytic = if self.degree_bound() == 0 { LegStatus::Holds } else { LegStatus::Fails };
            return Ok(QuotientAnalysis { analytic, identically_zero: false, per_zero: vec![] });
        }

        let mut per_zero = Vec::new();
        let mut status = LegStatus::Holds;
        for (w, need) in self.zeros_report() {
            let image = phi.eval(w)?;
            let image_mult = self.mult_at(image)?;
            let avail = if image_mult == 0 {
                0
            } else {
                // ord_w(φ - φ(w)): first live jet coefficient past order 0.
                let jet = phi.jet(w, need + 1)?;
                let scale = jet.iter().map(|c| c.norm()).fold(0.0f64, f64::max).max(1e-300);
                let mut ord = None;
                let mut gray = false;
                for (k, c) in jet.iter().enumerate().skip(1) {
                    let m = c.norm() / scale;
                    if m > 1e-9 {
                        ord = Some(k);
                        break;
                    } else if m > 1e-12 {
                        gray = true;
                    }
                }
                match ord {
                    Some(k) => image_mult.saturating_mul(k),
                    None if gray => {
                        return Err(Error::Inconclusive(format!(
                            "local order of the map at {w} is numerically ambiguous"
                        )))
                    }
                    // No live coefficient up to need+1: the local order
                    // already exceeds what is required.
                    None => need + 1,
                }
            };
            if avail < need {
                status = LegStatus::Fails;
            }
            per_zero.push(ZeroCoverage { zero: w, needed: need, available: avail });
        }
        Ok(QuotientAnalysis { analytic: status, identically_zero: false, per_zero })
    }

    /// `ln |θ(φ(z))| - ln |θ(z)|` — the log-modulus of the quotient,
    /// underflow-free. Points where `ln |θ(z)|` drops below -500 (essentially
    /// exact zeros) are rejected rather than turned into spurious infinities.
    pub fn quotient_log_modulus(&self, phi: &DiskSelfMap, z: Complex64) -> Result<f64> {
        let denom = self.eval_log_modulus(z)?;
        if denom < -500.0 {
            return Err(Error::Inconclusive(format!(
                "log-modulus {denom:.1} at {z}: the quotient denominator is numerically a zero"
            )));
        }
        let numer = self.eval_log_modulus(phi.eval(z)?)?;
        Ok(numer - denom)
    }

    /// Series of the quotient `(θ ∘ φ)/θ` by coefficient recurrence.
    /// The retained coefficients are accurate to the conditioning of the
    /// division; no tail is certified.
    pub fn quotient_series(&self, phi: &DiskSelfMap, order: usize) -> Result<TaylorSeries> {
        let comp = match self.compose_with_map(phi, order)? {
            AnalyticRep::Rational { num, den, .. } => divide_series(&num, &den, order, 0)?,
            AnalyticRep::Series(s) => s,
        };
        let theta = self.to_series(order, 0.9)?;
        divide_series(&comp, &theta, order, self.origin_mult)
    }

    /// Divide an exact polynomial by the finite interior-zero part of this
    /// inner function, verifying the zero sets match. Returns the zero-free
    /// cofactor `g = f / (inner part)`, which has the same boundary modulus
    /// as `f`.
    pub fn divide_out_of(f: &TaylorSeries) -> Result<(InnerFunction, TaylorSeries)> {
        riesz_factor(f)
    }
}

/// Per-zero coverage record from [`InnerFunction::quotient_analysis`].
#[derive(Debug, Clone)]
pub struct ZeroCoverage {
    pub zero: Complex64,
    /// Multiplicity the quotient's denominator demands.
    pub needed: usize,
    /// Multiplicity the composed function provides (saturating).
    pub available: usize,
}

/// Structural analyticity report for `(θ ∘ φ)/θ`.
#[derive(Debug, Clone)]
pub struct QuotientAnalysis {
    pub analytic: crate::verdict::LegStatus,
    /// The composition is identically zero (constant map landing on a zero).
    pub identically_zero: bool,
    pub per_zero: Vec<ZeroCoverage>,
}

/// Analytic representation of a composed inner function.
#[derive(Debug, Clone)]
pub enum AnalyticRep {
    /// Exact rational form `num/den` with the numerator's roots.
    Rational { num: TaylorSeries, den: TaylorSeries, zeros: PolyRoots },
    /// Certified series on a (possibly shrunk) radius.
    Series(TaylorSeries),
}

impl AnalyticRep {
    pub fn evaluate(&self, z: Complex64) -> Result<Complex64> {
        match self {
            AnalyticRep::Rational { num, den, .. } => {
                Ok(num.evaluate(z)? / den.evaluate(z)?)
            }
            AnalyticRep::Series(s) => s.evaluate(z),
        }
    }

    /// Order of vanishing at the origin, structurally where possible.
    pub fn vanishing_order_at_origin(&self, tol_coeff: f64) -> Option<usize> {
        match self {
            AnalyticRep::Rational { num, .. } => num.vanishing_order(tol_coeff),
            AnalyticRep::Series(s) => s.vanishing_order(tol_coeff),
        }
    }
}

// ----------------------------------------------------------------------
// Exact coefficient builders
// ----------------------------------------------------------------------

/// Exact product coefficients up to `order` (each retained coefficient of
/// the product needs only retained coefficients of the factors).
fn conv_trunc(a: &[Complex64], b: &[Complex64], order: usize) -> Vec<Complex64> {
    let len = (a.len() + b.len() - 1).min(order + 1);
    let mut out = vec![ZERO; len];
    for (i, ai) in a.iter().enumerate() {
        if i >= len {
            break;
        }
        for (j, bj) in b.iter().enumerate() {
            if i + j >= len {
                break;
            }
            out[i + j] += ai * bj;
        }
    }
    out
}

/// Coefficients of one interior-zero factor:
/// `c_0 = u a`, `c_k = u conj(a)^(k-1) (|a|^2 - 1)` with `u = conj(a)/|a|`.
fn blaschke_coeffs(a: Complex64, order: usize) -> Vec<Complex64> {
    let u = a.conj() / a.norm();
    let mut out = Vec::with_capacity(order + 1);
    out.push(u * a);
    let defect = Complex64::new(a.norm_sqr() - 1.0, 0.0);
    let mut pw = ONE;
    for _ in 1..=order {
        out.push(u * defect * pw);
        pw *= a.conj();
    }
    out
}

/// Coefficients of one atom factor `exp(-c (w+z)/(w-z))` via the series
/// exponential recurrence `k E_k = sum j W_j E_{k-j}` applied to the
/// exponent's exact coefficients `W_0 = -c`, `W_k = -2 c w^{-k}`.
fn atom_coeffs(at: &SingularAtom, order: usize) -> Vec<Complex64> {
    let w = at.boundary_point();
    let winv = ONE / w;
    let mut exponent = Vec::with_capacity(order + 1);
    exponent.push(Complex64::new(-at.c, 0.0));
    let mut pw = winv;
    for _ in 1..=order {
        exponent.push(Complex64::new(-2.0 * at.c, 0.0) * pw);
        pw *= winv;
    }
    jet::jexp(&exponent)
}

/// Series division `a / b` to `order`, where both sides are divisible by
/// `z^strip` (checked against a coefficient band before stripping).
fn divide_series(
    a: &TaylorSeries,
    b: &TaylorSeries,
    order: usize,
    strip: usize,
) -> Result<TaylorSeries> {
    let scale_a = a.coeffs().iter().map(|c| c.norm()).fold(0.0f64, f64::max).max(1e-300);
    for k in 0..strip {
        if a.coeff(k).norm() > 1e-6 * scale_a {
            return Err(Error::Inconclusive(format!(
                "numerator coefficient {k} is live but the denominator vanishes to order {strip}"
            )));
        }
    }
    let an: Vec<Complex64> = (strip..=strip + order).map(|k| a.coeff(k)).collect();
    let bn: Vec<Complex64> = (strip..=strip + order).map(|k| b.coeff(k)).collect();
    if bn[0].norm() == 0.0 {
        return Err(Error::InvalidInput("division by a series with no live leading coefficient".into()));
    }
    let q = jet::jdiv(&an, &bn)?;
    TaylorSeries::with_certificate(q, a.domain_radius().min(b.domain_radius()), TailBound::Unknown)
}

// ----------------------------------------------------------------------
// Inner–outer factoring of polynomials
// ----------------------------------------------------------------------

/// Split an exact polynomial into its inner part (zeros inside the disk,
/// as an [`InnerFunction`]) and the zero-free-in-the-disk cofactor with the
/// same boundary modulus. Roots within 1e-8 of the unit circle are refused:
/// whether they belong to the inner factor is numerically undecidable.
pub fn riesz_factor(f: &TaylorSeries) -> Result<(InnerFunction, TaylorSeries)> {
    if !f.is_exact() {
        return Err(Error::Unsupported(
            "inner/outer splitting is implemented for exact polynomials".into(),
        ));
    }
    let roots = polynomial_roots(f.coeffs())?;
    let mut origin_mult = 0usize;
    let mut zeros: Vec<BlaschkeZero> = Vec::new();
    let mut g = f.clone();
    for &(z, m) in &roots.roots {
        let dist = (z.norm() - 1.0).abs();
        if dist <= tol::BOUNDARY_SNAP {
            return Err(Error::BoundaryRoot { root: z });
        }
        if z.norm() > 1.0 {
            continue;
        }
        if z.norm() <= tol::ZERO_MATCH {
            origin_mult += m;
            for _ in 0..m {
                // Divide by z: shift down, dropping the (zero) constant term.
                let mut c = g.coeffs().to_vec();
                c.remove(0);
                g = TaylorSeries::polynomial(&c);
            }
        } else {
            zeros.push(BlaschkeZero { a: z, mult: m });
            let u = z.conj() / z.norm();
            for _ in 0..m {
                // g /= u (a - z)/(1 - conj(a) z):
                // divide synthetically by (a - w), multiply by (1 - conj(a) w)/u.
                let c = g.coeffs().to_vec();
                let n = c.len() - 1;
                // Synthetic division of g by (w - a), then negate: (a - w) = -(w - a).
                let mut quotient = vec![ZERO; n];
                let mut acc = c[n];
                for i in (0..n).rev() {
                    quotient[i] = acc;
                    acc = c[i] + acc * z;
                }
                // acc is the remainder g(a); it should be zero to rounding.
                let q = TaylorSeries::polynomial(&quotient).scale(-ONE / u);
                let lin = TaylorSeries::polynomial(&[ONE, -z.conj()]);
                g = &q * &lin;
            }
        }
    }
    let inner = InnerFunction::new(ONE, origin_mult, zeros, vec![])?;
    Ok((inner, g))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn atom_value_and_log_modulus_at_the_origin() {
        let lam = 0.35f64;
        let theta = InnerFunction::atom(0.0, lam).unwrap();
        let v = theta.eval(ZERO).unwrap();
        assert_abs_diff_eq!(v.re, (-lam).exp(), epsilon = 1e-15);
        assert_abs_diff_eq!(v.im, 0.0, epsilon = 1e-15);
        assert_abs_diff_eq!(theta.eval_log_modulus(ZERO).unwrap(), -lam, epsilon = 1e-15);
        // Near the boundary mass the modulus collapses but the log stays finite.
        let near = c(0.99999, 0.0);
        let lm = theta.eval_log_modulus(near).unwrap();
        assert!(lm < -1e4);
        assert!(lm.is_finite());
    }

    #[test]
    fn series_matches_pointwise_values_within_the_tail() {
        let theta = InnerFunction::new(
            ONE,
            1,
            vec![BlaschkeZero { a: c(0.5, 0.0), mult: 1 }, BlaschkeZero { a: c(-0.3, 0.4), mult: 2 }],
            vec![SingularAtom { t: 1.2, c: 0.7 }],
        )
        .unwrap();
        let s = theta.to_series(128, 0.9).unwrap();
        let eps = s.tail().value();
        assert!(eps < 1e-5);
        for &z in &[c(0.3, 0.2), c(-0.6, 0.5), c(0.0, 0.85)] {
            let direct = theta.eval(z).unwrap();
            let via = s.evaluate(z).unwrap();
            assert!((via - direct).norm() <= eps + 1e-12, "err {}", (via - direct).norm());
        }
    }

    #[test]
    fn modulus_is_at_most_one_inside() {
        let theta = InnerFunction::new(
            Complex64::from_polar(1.0, 2.1),
            2,
            vec![BlaschkeZero { a: c(0.2, -0.6), mult: 1 }],
            vec![SingularAtom { t: 3.0, c: 0.2 }],
        )
        .unwrap();
        for j in 0..64 {
            let t = 2.0 * std::f64::consts::PI * j as f64 / 64.0;
            for &r in &[0.3, 0.8, 0.999] {
                let lm = theta.eval_log_modulus(Complex64::from_polar(r, t)).unwrap();
                assert!(lm <= 1e-12);
            }
        }
    }

    #[test]
    fn jets_agree_with_series_coefficients() {
        let theta = InnerFunction::new(
            ONE,
            0,
            vec![BlaschkeZero { a: c(0.5, 0.1), mult: 2 }],
            vec![SingularAtom { t: 0.5, c: 0.4 }],
        )
        .unwrap();
        let j = theta.jet(ZERO, 6).unwrap();
        let s = theta.to_series(64, 0.9).unwrap();
        for k in 0..=6 {
            assert!((j[k] - s.coeff(k)).norm() < 1e-13);
        }
        // Jet at the double zero: two dead coefficients, then live.
        let jz = theta.jet(c(0.5, 0.1), 3).unwrap();
        assert!(jz[0].norm() < 1e-15);
        assert!(jz[1].norm() < 1e-15);
        assert!(jz[2].norm() > 1e-3);
    }

    #[test]
    fn multiplicity_querying_with_gray_band() {
        let theta = InnerFunction::new(
            ONE,
            1,
            vec![BlaschkeZero { a: c(0.5, 0.0), mult: 2 }],
            vec![],
        )
        .unwrap();
        assert_eq!(theta.mult_at(c(0.5, 0.0)).unwrap(), 2);
        assert_eq!(theta.mult_at(ZERO).unwrap(), 1);
        assert_eq!(theta.mult_at(c(-0.5, 0.0)).unwrap(), 0);
        assert_eq!(theta.mult_at(c(0.5 + 1e-12, 0.0)).unwrap(), 2);
        assert!(matches!(theta.mult_at(c(0.5 + 1e-7, 0.0)), Err(Error::Inconclusive(_))));
        assert_eq!(theta.mult_at(c(0.5 + 1e-3, 0.0)).unwrap(), 0);
    }

    #[test]
    fn rational_composition_finds_preimage_zeros() {
        // θ = one zero at a; φ = z^2: θ∘φ has zeros at ±sqrt(a).
        let a = c(0.39, 0.22);
        let theta = InnerFunction::blaschke_factor(a).unwrap();
        let phi = DiskSelfMap::monomial(2).unwrap();
        let rep = theta.compose_with_map(&phi, 64).unwrap();
        match rep {
            AnalyticRep::Rational { zeros, num, den } => {
                let sq = a.sqrt();
                assert_eq!(zeros.degree(), 2);
                for target in [sq, -sq] {
                    assert!(
                        zeros.roots.iter().any(|&(z, _)| (z - target).norm() < 1e-9),
                        "missing preimage zero {target}"
                    );
                }
                // And the rational rep evaluates to θ(φ(z)).
                for &z in &[c(0.5, 0.3), c(-0.2, 0.7)] {
                    let direct = theta.eval(phi.eval(z).unwrap()).unwrap();
                    let via = num.evaluate(z).unwrap() / den.evaluate(z).unwrap();
                    assert!((via - direct).norm() < 1e-12);
                }
            }
            AnalyticRep::Series(_) => panic!("expected the rational path"),
        }
    }

    #[test]
    fn series_composition_fallback_under_atoms() {
        let theta = InnerFunction::atom(0.0, 0.3).unwrap();
        let phi = DiskSelfMap::polynomial(&[ZERO, c(0.5, 0.0)]).unwrap();
        let rep = theta.compose_with_map(&phi, 96).unwrap();
        match rep {
            AnalyticRep::Series(s) => {
                for &z in &[c(0.2, 0.1), c(-0.4, 0.3)] {
                    let direct = theta.eval(phi.eval(z).unwrap()).unwrap();
                    let via = s.evaluate(z).unwrap();
                    assert!((via - direct).norm() < 1e-9);
                }
            }
            AnalyticRep::Rational { .. } => panic!("atoms cannot take the rational path"),
        }
    }

    #[test]
    fn quotient_analysis_distinguishes_covered_from_uncovered_zeros() {
        // θ = z: quotient (φ(z))/z analytic iff φ(0) = 0.
        let theta = InnerFunction::monomial(1);
        let fixing = DiskSelfMap::polynomial(&[ZERO, c(0.5, 0.0)]).unwrap();
        let analysis = theta.quotient_analysis(&fixing).unwrap();
        assert_eq!(analysis.analytic, crate::verdict::LegStatus::Holds);

        let moving = DiskSelfMap::mobius_involution(c(0.4, 0.0)).unwrap();
        let analysis = theta.quotient_analysis(&moving).unwrap();
        assert_eq!(analysis.analytic, crate::verdict::LegStatus::Fails);
        assert_eq!(analysis.per_zero[0].available, 0);

        // θ = z^2 against φ = z^2: ord_0(φ) = 2, mult available = 1 * 2...
        // here image mult of 0 is 2 (θ's own origin), ord is 2, so 4 >= 2.
        let theta2 = InnerFunction::monomial(2);
        let sq = DiskSelfMap::monomial(2).unwrap();
        let analysis = theta2.quotient_analysis(&sq).unwrap();
        assert_eq!(analysis.analytic, crate::verdict::LegStatus::Holds);
        assert!(analysis.per_zero[0].available >= analysis.per_zero[0].needed);
    }

    #[test]
    fn quotient_series_reproduces_the_composition() {
        // θ = z * blaschke(1/2); φ = z/2 fixes the origin and covers the zero
        // structure... θ(0.25) != 0, so (θ∘φ)/θ is NOT analytic here — use a
        // map that sends zeros onto zeros: φ = z * (z - adjusted)… Simplest
        // honest case: θ = z^2, φ = z/2: q = (z/2)^2/z^2 = 1/4 constant.
        let theta = InnerFunction::monomial(2);
        let phi = DiskSelfMap::polynomial(&[ZERO, c(0.5, 0.0)]).unwrap();
        let q = theta.quotient_series(&phi, 32).unwrap();
        assert_abs_diff_eq!(q.coeff(0).re, 0.25, epsilon = 1e-12);
        for k in 1..=5 {
            assert!(q.coeff(k).norm() < 1e-12);
        }
    }

    #[test]
    fn polynomial_inner_outer_split_oracle() {
        // f = (z - 1/2)(z - 2): inner zero at 1/2, cofactor (2 - z)(1 - z/2).
        let f = TaylorSeries::polynomial_real(&[1.0, -2.5, 1.0]);
        let (inner, g) = riesz_factor(&f).unwrap();
        assert_eq!(inner.origin_mult(), 0);
        assert_eq!(inner.zeros().len(), 1);
        assert!((inner.zeros()[0].a - c(0.5, 0.0)).norm() < 1e-10);
        let expect = [2.0, -2.0, 0.5];
        for (k, &e) in expect.iter().enumerate() {
            assert_abs_diff_eq!(g.coeff(k).re, e, epsilon = 1e-10);
            assert_abs_diff_eq!(g.coeff(k).im, 0.0, epsilon = 1e-10);
        }
        // Boundary roots are refused.
        let f = TaylorSeries::polynomial_real(&[0.5, -1.5, 1.0]); // (z-1)(z-1/2)
        assert!(matches!(riesz_factor(&f), Err(Error::BoundaryRoot { .. })));
        // Origin zeros land in origin_mult.
        let f = TaylorSeries::polynomial_real(&[0.0, 0.0, 1.0, -0.5]); // z^2(1 - z/2)... roots 0,0,2
        let (inner, g) = riesz_factor(&f).unwrap();
        assert_eq!(inner.origin_mult(), 2);
        assert!(inner.zeros().is_empty());
        assert_abs_diff_eq!(g.coeff(0).re, 1.0, epsilon = 1e-10);
        assert_abs_diff_eq!(g.coeff(1).re, -0.5, epsilon = 1e-10);
    }

    #[test]
    fn riesz_split_preserves_the_quadratic_mean() {
        use crate::series::{hardy_norm, DiskGrid, HardyExponent};
        let f = TaylorSeries::polynomial(&[c(1.0, 0.5), c(-2.5, 0.0), c(1.0, -0.3)]);
        let (inner, g) = riesz_factor(&f).unwrap();
        assert!(inner.degree_bound() > 0, "test case should have an interior zero");
        let grid = DiskGrid::new(vec![0.9999], 4096).unwrap();
        let nf = hardy_norm(&f, HardyExponent::TWO, &grid).unwrap().value;
        let ng = hardy_norm(&g, HardyExponent::TWO, &grid).unwrap().value;
        // |inner| = 1 on the boundary, so the norms agree in the limit.
        assert_abs_diff_eq!(nf, ng, epsilon = 2e-3 * nf.max(1.0));
    }

    #[test]
    fn constructor_validation() {
        assert!(InnerFunction::new(c(2.0, 0.0), 0, vec![], vec![]).is_err());
        assert!(InnerFunction::new(ONE, 0, vec![BlaschkeZero { a: ZERO, mult: 1 }], vec![]).is_err());
        assert!(
            InnerFunction::new(ONE, 0, vec![BlaschkeZero { a: c(1.0, 0.0), mult: 1 }], vec![])
                .is_err()
        );
        assert!(InnerFunction::new(ONE, 0, vec![], vec![SingularAtom { t: 0.0, c: -1.0 }]).is_err());
        // Duplicate zeros merge.
        let theta = InnerFunction::new(
            ONE,
            0,
            vec![
                BlaschkeZero { a: c(0.5, 0.0), mult: 1 },
                BlaschkeZero { a: c(0.5, 0.0), mult: 2 },
            ],
            vec![],
        )
        .unwrap();
        assert_eq!(theta.zeros().len(), 1);
        assert_eq!(theta.zeros()[0].mult, 3);
    }
}
