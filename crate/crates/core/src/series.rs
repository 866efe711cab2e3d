//! Truncated Taylor series with certified tails, and circle-based norms.
//!
//! A [`TaylorSeries`] stores finitely many Maclaurin coefficients together
//! with a `domain_radius` and a [`TailBound`]: when the bound is
//! `Known(eps)`, the stored truncation differs from the represented function
//! by at most `eps` everywhere on the closed disk of that radius. Arithmetic
//! propagates the bounds (sums add them, products and compositions combine
//! them with sup/Lipschitz estimates plus the mass of any discarded
//! coefficients); `Unknown` is contagious. Exact polynomials carry
//! `Known(0.0)` and never truncate.
//!
//! Circle evaluation is an inverse FFT over folded coefficients; the p-th
//! mean routines come in plain and log-space versions, the latter factoring
//! out the max modulus so that functions dipping below `1e-308` on part of
//! the circle still produce finite answers.

use num_complex::Complex64;
use rustfft::FftPlanner;

use crate::error::{Error, Result};

/// Default truncation order (highest retained power).
pub const DEFAULT_ORDER: usize = 256;
/// Default angular resolution for circle sampling.
pub const DEFAULT_ANGLES: usize = 4096;
/// Default radii ladder for norm/sup scans.
pub const DEFAULT_RADII: [f64; 4] = [0.9, 0.99, 0.999, 0.9999];

/// Hard cap on factorial-weighted derivative extraction; `171!` overflows f64.
const MAX_DERIVATIVE_ORDER: usize = 170;

/// Relative slack applied to domain-radius comparisons so that a radius that
/// round-trips through arithmetic is not rejected by one ulp.
const RADIUS_SLACK: f64 = 1.0 + 1e-12;

/// Certified bound on `sup_{|z| <= domain_radius} |f(z) - truncation(z)|`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum TailBound {
    Known(f64),
    Unknown,
}

impl TailBound {
    pub fn is_exact(self) -> bool {
        matches!(self, TailBound::Known(eps) if eps == 0.0)
    }

    /// The bound as a float, infinite when unknown.
    pub fn value(self) -> f64 {
        match self {
            TailBound::Known(eps) => eps,
            TailBound::Unknown => f64::INFINITY,
        }
    }

    fn add(self, other: TailBound) -> TailBound {
        match (self, other) {
            (TailBound::Known(a), TailBound::Known(b)) => TailBound::Known(a + b),
            _ => TailBound::Unknown,
        }
    }

    fn plus(self, extra: f64) -> TailBound {
        match self {
            TailBound::Known(a) => TailBound::Known(a + extra),
            TailBound::Unknown => TailBound::Unknown,
        }
    }

    fn scale(self, factor: f64) -> TailBound {
        match self {
            TailBound::Known(a) => TailBound::Known(a * factor),
            TailBound::Unknown => TailBound::Unknown,
        }
    }
}

/// A truncated Maclaurin expansion, valid on `|z| <= domain_radius` up to
/// the stored tail bound.
#[derive(Debug, Clone)]
pub struct TaylorSeries {
    coeffs: Vec<Complex64>,
    domain_radius: f64,
    tail: TailBound,
}

impl TaylorSeries {
    // ------------------------------------------------------------------
    // Constructors
    // ------------------------------------------------------------------

    /// An exact polynomial, certified with zero tail on the closed unit disk.
    pub fn polynomial(coeffs: &[Complex64]) -> Self {
        let mut c: Vec<Complex64> = coeffs.to_vec();
        while c.len() > 1 && c.last().map_or(false, |v| v.norm() == 0.0) {
            c.pop();
        }
        if c.is_empty() {
            c.push(Complex64::new(0.0, 0.0));
        }
        TaylorSeries { coeffs: c, domain_radius: 1.0, tail: TailBound::Known(0.0) }
    }

    /// A polynomial with real coefficients.
    pub fn polynomial_real(coeffs: &[f64]) -> Self {
        let c: Vec<Complex64> = coeffs.iter().map(|&x| Complex64::new(x, 0.0)).collect();
        Self::polynomial(&c)
    }

    /// A truncation certified by the caller: the represented function is
    /// within `tail` of the stored coefficients on `|z| <= radius`.
    pub fn with_certificate(coeffs: Vec<Complex64>, radius: f64, tail: TailBound) -> Result<Self> {
        if !(radius > 0.0 && radius <= 1.0) {
            return Err(Error::InvalidInput(format!(
                "certificate radius must lie in (0, 1], got {radius}"
            )));
        }
        if coeffs.is_empty() {
            return Err(Error::InvalidInput("empty coefficient vector".into()));
        }
        if let TailBound::Known(eps) = tail {
            if !(eps >= 0.0 && eps.is_finite()) {
                return Err(Error::InvalidInput(format!("tail bound must be finite and >= 0, got {eps}")));
            }
        }
        Ok(TaylorSeries { coeffs, domain_radius: radius, tail })
    }

    /// The same series, certified only on the (possibly) smaller radius.
    /// The carried tail bound stays valid: the remainder mass only shrinks
    /// as the radius decreases.
    pub fn restricted(mut self, radius: f64) -> Self {
        if radius < self.domain_radius {
            self.domain_radius = radius;
        }
        self
    }

    pub fn zero() -> Self {
        Self::polynomial_real(&[0.0])
    }

    pub fn one() -> Self {
        Self::polynomial_real(&[1.0])
    }

    pub fn constant(c: Complex64) -> Self {
        Self::polynomial(&[c])
    }

    /// The identity `z`.
    pub fn variable() -> Self {
        Self::polynomial_real(&[0.0, 1.0])
    }

    /// `z^k`.
    pub fn monomial(k: usize) -> Self {
        let mut c = vec![Complex64::new(0.0, 0.0); k + 1];
        c[k] = Complex64::new(1.0, 0.0);
        TaylorSeries { coeffs: c, domain_radius: 1.0, tail: TailBound::Known(0.0) }
    }

    /// `1/(1 - z)` truncated at [`DEFAULT_ORDER`], certified on radius 0.9.
    pub fn geometric() -> Self {
        Self::geometric_with_radius(0.9, DEFAULT_ORDER).expect("0.9 is a valid radius")
    }

    /// `1/(1 - z)` truncated at `order`, certified on `|z| <= radius < 1`
    /// with the closed-form tail `radius^(order+1) / (1 - radius)`.
    pub fn geometric_with_radius(radius: f64, order: usize) -> Result<Self> {
        Self::geometric_with_ratio(Complex64::new(1.0, 0.0), radius, order)
    }

    /// `1/(1 - w z) = sum_k w^k z^k` truncated at `order`, certified on
    /// `|z| <= radius` provided `|w| * radius < 1`.
    pub fn geometric_with_ratio(w: Complex64, radius: f64, order: usize) -> Result<Self> {
        if !(radius > 0.0 && radius <= 1.0) {
            return Err(Error::InvalidInput(format!("radius must lie in (0, 1], got {radius}")));
        }
        let q = w.norm() * radius;
        if q >= 1.0 {
            return Err(Error::InvalidInput(format!(
                "geometric ratio modulus {q} >= 1 on the requested radius"
            )));
        }
        let mut coeffs = Vec::with_capacity(order + 1);
        let mut pw = Complex64::new(1.0, 0.0);
        for _ in 0..=order {
            coeffs.push(pw);
            pw *= w;
        }
        let tail = q.powi(order as i32 + 1) / (1.0 - q);
        Ok(TaylorSeries { coeffs, domain_radius: radius, tail: TailBound::Known(tail) })
    }

    // ------------------------------------------------------------------
    // Accessors
    // ------------------------------------------------------------------

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    pub fn coeff(&self, k: usize) -> Complex64 {
        self.coeffs.get(k).copied().unwrap_or(Complex64::new(0.0, 0.0))
    }

    /// Highest retained power.
    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn domain_radius(&self) -> f64 {
        self.domain_radius
    }

    pub fn tail(&self) -> TailBound {
        self.tail
    }

    pub fn is_exact(&self) -> bool {
        self.tail.is_exact()
    }

    /// Truncation order when the series is inexact; exact polynomials are
    /// unbounded and return `None`.
    fn inexact_order(&self) -> Option<usize> {
        if self.is_exact() {
            None
        } else {
            Some(self.order())
        }
    }

    /// `sum_{k > keep} |c_k| r^k`: the certified mass of coefficients above
    /// `keep` on the circle of radius `r`.
    fn mass_above(&self, keep: usize, r: f64) -> f64 {
        let mut mass = 0.0;
        for (k, c) in self.coeffs.iter().enumerate().skip(keep + 1) {
            mass += c.norm() * r.powi(k as i32);
        }
        mass
    }

    fn check_radius(&self, r: f64) -> Result<()> {
        if r > self.domain_radius * RADIUS_SLACK {
            return Err(Error::OutOfDomain { requested: r, certified: self.domain_radius });
        }
        Ok(())
    }

    // ------------------------------------------------------------------
    // Pointwise evaluation
    // ------------------------------------------------------------------

    /// Horner evaluation of the stored truncation at `z`, which must lie in
    /// the certified disk. The result is within the tail bound of the
    /// represented function.
    pub fn evaluate(&self, z: Complex64) -> Result<Complex64> {
        self.check_radius(z.norm())?;
        let mut acc = Complex64::new(0.0, 0.0);
        for c in self.coeffs.iter().rev() {
            acc = acc * z + c;
        }
        Ok(acc)
    }

    /// `f^(k)(0) = k! * c_k`. Orders above 170 overflow the factorial and
    /// are rejected; orders beyond an inexact truncation are unknowable.
    pub fn derivative_at_zero(&self, k: usize) -> Result<Complex64> {
        if k > MAX_DERIVATIVE_ORDER {
            return Err(Error::Unsupported(format!(
                "derivative order {k} exceeds {MAX_DERIVATIVE_ORDER} (factorial overflows f64)"
            )));
        }
        if k >= self.coeffs.len() {
            if self.is_exact() {
                return Ok(Complex64::new(0.0, 0.0));
            }
            return Err(Error::OrderExceeded { requested: k, order: self.order() });
        }
        let mut fact = 1.0f64;
        for j in 2..=k {
            fact *= j as f64;
        }
        Ok(self.coeffs[k] * fact)
    }

    /// Order of vanishing at the origin of the stored truncation: the first
    /// index with `|c_k| > tol`, or `None` if all stored coefficients are
    /// below it.
    pub fn vanishing_order(&self, tol: f64) -> Option<usize> {
        self.coeffs.iter().position(|c| c.norm() > tol)
    }

    // ------------------------------------------------------------------
    // Linear structure
    // ------------------------------------------------------------------

    pub fn scale(&self, factor: Complex64) -> TaylorSeries {
        TaylorSeries {
            coeffs: self.coeffs.iter().map(|c| c * factor).collect(),
            domain_radius: self.domain_radius,
            tail: self.tail.scale(factor.norm()),
        }
    }

    fn add_impl(&self, other: &TaylorSeries, sign: f64) -> TaylorSeries {
        let len = self.coeffs.len().max(other.coeffs.len());
        let mut coeffs = vec![Complex64::new(0.0, 0.0); len];
        for (k, slot) in coeffs.iter_mut().enumerate() {
            let a = self.coeffs.get(k).copied().unwrap_or_default();
            let b = other.coeffs.get(k).copied().unwrap_or_default();
            *slot = a + b * sign;
        }
        TaylorSeries {
            coeffs,
            domain_radius: self.domain_radius.min(other.domain_radius),
            tail: self.tail.add(other.tail),
        }
    }

    // ------------------------------------------------------------------
    // Multiplication and composition
    // ------------------------------------------------------------------

    /// Product. With any inexact factor the result is truncated at the
    /// smallest inexact truncation order `W`; the mass of discarded
    /// coefficients joins the tail bound, along with sup-weighted
    /// cross-terms from the factors' own tails.
    pub fn mul(&self, other: &TaylorSeries) -> TaylorSeries {
        let radius = self.domain_radius.min(other.domain_radius);
        let full = self.order() + other.order();
        let keep = match (self.inexact_order(), other.inexact_order()) {
            (None, None) => full,
            (Some(a), None) => a,
            (None, Some(b)) => b,
            (Some(a), Some(b)) => a.min(b),
        };
        let keep = keep.min(full);
        let mut coeffs = vec![Complex64::new(0.0, 0.0); keep + 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if i > keep {
                break;
            }
            let jmax = (keep - i).min(other.order());
            for (j, b) in other.coeffs.iter().enumerate().take(jmax + 1) {
                coeffs[i + j] += a * b;
            }
        }
        // Discarded convolution mass, bounded by the product of the factors'
        // coefficient masses above the split.
        let mut discard = 0.0;
        if keep < full {
            let sum_a: f64 =
                self.coeffs.iter().enumerate().map(|(k, c)| c.norm() * radius.powi(k as i32)).sum();
            let sum_b: f64 =
                other.coeffs.iter().enumerate().map(|(k, c)| c.norm() * radius.powi(k as i32)).sum();
            // Every discarded product term a_i b_j (i + j > keep) appears in
            // sum_a * sum_b exactly once, so the crude bound is safe.
            let kept: f64 = {
                let mut s = 0.0;
                for (i, a) in self.coeffs.iter().enumerate() {
                    if i > keep {
                        break;
                    }
                    let jmax = (keep - i).min(other.order());
                    for (j, b) in other.coeffs.iter().enumerate().take(jmax + 1) {
                        s += a.norm() * b.norm() * radius.powi((i + j) as i32);
                    }
                }
                s
            };
            discard = (sum_a * sum_b - kept).max(0.0);
        }
        // Tail cross-terms: |f g - Tf Tg| <= sup|Tf| eps_g + sup|Tg| eps_f + eps_f eps_g.
        let tail = match (self.tail, other.tail) {
            (TailBound::Known(ea), TailBound::Known(eb)) => {
                if ea == 0.0 && eb == 0.0 {
                    TailBound::Known(discard)
                } else {
                    let sup_a = self.coeff_mass(radius);
                    let sup_b = other.coeff_mass(radius);
                    TailBound::Known(sup_a * eb + sup_b * ea + ea * eb + discard)
                }
            }
            _ => TailBound::Unknown,
        };
        TaylorSeries { coeffs, domain_radius: radius, tail }
    }

    /// `sum_k |c_k| r^k`, an upper bound for the truncation's sup norm on
    /// the circle of radius `r`.
    pub fn coeff_mass(&self, r: f64) -> f64 {
        self.coeffs.iter().enumerate().map(|(k, c)| c.norm() * r.powi(k as i32)).sum()
    }

    /// Composition `self ∘ inner` by Horner's scheme. The range of `inner`
    /// over its certified disk must stay inside the certified disk of
    /// `self`; otherwise [`Error::RangeViolation`] is returned. The result
    /// is certified on `inner`'s radius with a tail combining both inputs'
    /// tails (outer tail verbatim, inner tail through a Lipschitz bound on
    /// the outer truncation) and any discarded coefficient mass.
    pub fn compose(&self, inner: &TaylorSeries) -> Result<TaylorSeries> {
        let r_out = inner.domain_radius;
        // Range check: sup of |inner| over its certified circle.
        let probe = 1024.min(DEFAULT_ANGLES);
        let values = inner.values_on_circle(r_out, probe)?;
        let mut sup_inner = values.iter().map(|v| v.norm()).fold(0.0f64, f64::max);
        sup_inner += inner.tail.value().min(f64::MAX);
        if sup_inner > self.domain_radius * RADIUS_SLACK {
            return Err(Error::RangeViolation { estimate: sup_inner, certified: self.domain_radius });
        }

        let keep = match (self.inexact_order(), inner.inexact_order()) {
            (None, None) => self.order().saturating_mul(inner.order().max(1)),
            (Some(a), None) => a,
            (None, Some(b)) => b,
            (Some(a), Some(b)) => a.min(b),
        };

        let mut acc = TaylorSeries::constant(*self.coeffs.last().expect("nonempty"));
        acc.domain_radius = r_out;
        for c in self.coeffs.iter().rev().skip(1) {
            acc = acc.mul(inner);
            if acc.coeffs.len() > keep + 1 {
                let discard = acc.mass_above(keep, r_out);
                acc.coeffs.truncate(keep + 1);
                acc.tail = acc.tail.plus(discard);
            }
            acc.coeffs[0] += c;
        }

        // Outer tail passes through unchanged; inner tail is amplified by a
        // Lipschitz bound for the outer truncation on the inner's range.
        let tail = match (self.tail, inner.tail) {
            (TailBound::Known(ef), TailBound::Known(eg)) => {
                let lip: f64 = self
                    .coeffs
                    .iter()
                    .enumerate()
                    .skip(1)
                    .map(|(k, c)| k as f64 * c.norm() * sup_inner.powi(k as i32 - 1))
                    .sum();
                acc.tail.plus(ef + lip * eg)
            }
            _ => TailBound::Unknown,
        };
        Ok(TaylorSeries { coeffs: acc.coeffs, domain_radius: r_out, tail })
    }

    // ------------------------------------------------------------------
    // Calculus
    // ------------------------------------------------------------------

    /// Antiderivative vanishing at the origin. A known tail integrates to
    /// `tail * radius` along radii.
    pub fn antiderivative(&self) -> TaylorSeries {
        let mut coeffs = Vec::with_capacity(self.coeffs.len() + 1);
        coeffs.push(Complex64::new(0.0, 0.0));
        for (k, c) in self.coeffs.iter().enumerate() {
            coeffs.push(c / (k as f64 + 1.0));
        }
        TaylorSeries {
            coeffs,
            domain_radius: self.domain_radius,
            tail: self.tail.scale(self.domain_radius),
        }
    }

    /// Termwise derivative. Exact inputs stay exact; a merely bounded tail
    /// does not survive differentiation on the same radius, so inexact
    /// inputs degrade to [`TailBound::Unknown`].
    pub fn derivative(&self) -> TaylorSeries {
        let coeffs: Vec<Complex64> = if self.coeffs.len() == 1 {
            vec![Complex64::new(0.0, 0.0)]
        } else {
            self.coeffs.iter().enumerate().skip(1).map(|(k, c)| c * k as f64).collect()
        };
        let tail = if self.is_exact() { TailBound::Known(0.0) } else { TailBound::Unknown };
        TaylorSeries { coeffs, domain_radius: self.domain_radius, tail }
    }

    // ------------------------------------------------------------------
    // Circle evaluation
    // ------------------------------------------------------------------

    /// Values of the stored truncation at the `m` equally spaced points
    /// `r e^{2 pi i j / m}`, `j = 0..m`, via an inverse FFT over the
    /// coefficients folded modulo `m`.
    pub fn values_on_circle(&self, r: f64, m: usize) -> Result<Vec<Complex64>> {
        self.check_radius(r)?;
        if m == 0 {
            return Err(Error::InvalidInput("need at least one sample point".into()));
        }
        if m < 16 {
            let mut out = Vec::with_capacity(m);
            for j in 0..m {
                let theta = 2.0 * std::f64::consts::PI * j as f64 / m as f64;
                let z = Complex64::from_polar(r, theta);
                out.push(self.evaluate(z)?);
            }
            return Ok(out);
        }
        let mut buf = vec![Complex64::new(0.0, 0.0); m];
        let mut scale = 1.0f64;
        for (k, c) in self.coeffs.iter().enumerate() {
            buf[k % m] += c * scale;
            scale *= r;
        }
        // Unnormalized inverse FFT computes X[j] = sum_k x[k] e^{+2 pi i jk/m},
        // which is exactly the folded evaluation above.
        let mut planner = FftPlanner::new();
        let fft = planner.plan_fft_inverse(m);
        fft.process(&mut buf);
        Ok(buf)
    }
}

impl std::ops::Add for &TaylorSeries {
    type Output = TaylorSeries;
    fn add(self, rhs: &TaylorSeries) -> TaylorSeries {
        self.add_impl(rhs, 1.0)
    }
}

impl std::ops::Sub for &TaylorSeries {
    type Output = TaylorSeries;
    fn sub(self, rhs: &TaylorSeries) -> TaylorSeries {
        self.add_impl(rhs, -1.0)
    }
}

impl std::ops::Mul for &TaylorSeries {
    type Output = TaylorSeries;
    fn mul(self, rhs: &TaylorSeries) -> TaylorSeries {
        TaylorSeries::mul(self, rhs)
    }
}

impl std::ops::Neg for &TaylorSeries {
    type Output = TaylorSeries;
    fn neg(self) -> TaylorSeries {
        self.scale(Complex64::new(-1.0, 0.0))
    }
}

// ----------------------------------------------------------------------
// Grids and exponents
// ----------------------------------------------------------------------

/// A ladder of circles for norm and sup scans: strictly increasing radii in
/// `(0, 1)` and a shared angular resolution.
#[derive(Debug, Clone)]
pub struct DiskGrid {
    radii: Vec<f64>,
    angles: usize,
}

impl DiskGrid {
    pub fn new(radii: Vec<f64>, angles: usize) -> Result<Self> {
        if radii.is_empty() {
            return Err(Error::InvalidInput("grid needs at least one radius".into()));
        }
        for w in radii.windows(2) {
            if w[1] <= w[0] {
                return Err(Error::InvalidInput(format!(
                    "grid radii must be strictly increasing, got {} then {}",
                    w[0], w[1]
                )));
            }
        }
        for &r in &radii {
            if !(r > 0.0 && r < 1.0) {
                return Err(Error::InvalidInput(format!("grid radius must lie in (0, 1), got {r}")));
            }
        }
        if angles < 16 {
            return Err(Error::InvalidInput(format!("need at least 16 angles, got {angles}")));
        }
        Ok(DiskGrid { radii, angles })
    }

    pub fn radii(&self) -> &[f64] {
        &self.radii
    }

    pub fn angles(&self) -> usize {
        self.angles
    }

    pub fn outermost(&self) -> f64 {
        *self.radii.last().expect("validated nonempty")
    }
}

impl Default for DiskGrid {
    fn default() -> Self {
        DiskGrid { radii: DEFAULT_RADII.to_vec(), angles: DEFAULT_ANGLES }
    }
}

/// Integrability exponent `p` with `0 < p < infinity`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HardyExponent(f64);

impl HardyExponent {
    pub const TWO: HardyExponent = HardyExponent(2.0);

    pub fn new(p: f64) -> Result<Self> {
        if !(p.is_finite() && p > 0.0) {
            return Err(Error::InvalidInput(format!("exponent must be finite and positive, got {p}")));
        }
        Ok(HardyExponent(p))
    }

    pub fn value(self) -> f64 {
        self.0
    }
}

// ----------------------------------------------------------------------
// Means, norms, sups
// ----------------------------------------------------------------------

/// Mean of `v^p` over raw modulus samples.
pub fn samples_p_mean(mods: &[f64], p: HardyExponent) -> f64 {
    let m = mods.len() as f64;
    mods.iter().map(|v| v.powf(p.value())).sum::<f64>() / m
}

/// `ln` of the mean of `e^(p L)` over raw log-modulus samples, with the max
/// factored out so that means far below the f64 underflow threshold stay
/// finite. Returns `-inf` when every sample is `-inf`.
pub fn samples_p_mean_log(logs: &[f64], p: HardyExponent) -> f64 {
    let lmax = logs.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if lmax == f64::NEG_INFINITY {
        return f64::NEG_INFINITY;
    }
    let m = logs.len() as f64;
    let scaled: f64 = logs.iter().map(|&l| (p.value() * (l - lmax)).exp()).sum::<f64>() / m;
    p.value() * lmax + scaled.ln()
}

/// Mean of `|f|^p` over `m` equally spaced samples of the circle `|z| = r`.
pub fn p_mean(f: &TaylorSeries, r: f64, p: HardyExponent, angles: usize) -> Result<f64> {
    let values = f.values_on_circle(r, angles)?;
    let mods: Vec<f64> = values.iter().map(|v| v.norm()).collect();
    Ok(samples_p_mean(&mods, p))
}

/// `ln` of the mean of `|f|^p`; see [`samples_p_mean_log`].
pub fn p_mean_log(f: &TaylorSeries, r: f64, p: HardyExponent, angles: usize) -> Result<f64> {
    let values = f.values_on_circle(r, angles)?;
    let logs: Vec<f64> = values.iter().map(|v| v.norm().ln()).collect();
    Ok(samples_p_mean_log(&logs, p))
}

/// Per-radius integral means and their sup over the grid.
#[derive(Debug, Clone)]
pub struct NormReport {
    pub p: f64,
    /// `(radius, mean(|f|^p)^(1/p))` per grid circle.
    pub per_radius: Vec<(f64, f64)>,
    /// Sup of the per-radius values.
    pub value: f64,
}

/// The `H^p` norm estimate: sup over the grid radii of the p-th root of the
/// circle mean of `|f|^p`. The means increase with the radius, so the sup
/// sits on the outermost circle; all circles are reported.
pub fn hardy_norm(f: &TaylorSeries, p: HardyExponent, grid: &DiskGrid) -> Result<NormReport> {
    let mut per_radius = Vec::with_capacity(grid.radii().len());
    let mut value = 0.0f64;
    for &r in grid.radii() {
        let mean = p_mean(f, r, p, grid.angles())?;
        let root = mean.powf(1.0 / p.value());
        per_radius.push((r, root));
        value = value.max(root);
    }
    Ok(NormReport { p: p.value(), per_radius, value })
}

/// Log-space per-radius means and norm.
#[derive(Debug, Clone)]
pub struct LogNormReport {
    pub p: f64,
    /// `(radius, ln mean(|f|^p))` per grid circle.
    pub per_radius_log: Vec<(f64, f64)>,
    /// `ln` of the norm estimate: sup of `(ln mean)/p`.
    pub log_value: f64,
}

/// Log-space variant of [`hardy_norm`], immune to `|f|^p` underflow.
pub fn hardy_norm_log(f: &TaylorSeries, p: HardyExponent, grid: &DiskGrid) -> Result<LogNormReport> {
    let mut per_radius_log = Vec::with_capacity(grid.radii().len());
    let mut log_value = f64::NEG_INFINITY;
    for &r in grid.radii() {
        let lm = p_mean_log(f, r, p, grid.angles())?;
        per_radius_log.push((r, lm));
        log_value = log_value.max(lm / p.value());
    }
    Ok(LogNormReport { p: p.value(), per_radius_log, log_value })
}

/// A grid-sampled sup estimate on one circle.
#[derive(Debug, Clone)]
pub struct SupReport {
    pub radius: f64,
    pub angles: usize,
    /// Max sampled modulus, plus the tail bound when one is known.
    pub value: f64,
    /// Whether the tail bound was known and included.
    pub tail_included: bool,
}

/// Max modulus over `angles` samples of the circle `|z| = r`, inflated by
/// the tail bound when known. A grid estimate of the truncation can only
/// undershoot the true sup between samples; callers compare against it with
/// explicit slack.
pub fn sup_norm_estimate(f: &TaylorSeries, r: f64, angles: usize) -> Result<SupReport> {
    let values = f.values_on_circle(r, angles)?;
    let base = values.iter().map(|v| v.norm()).fold(0.0f64, f64::max);
    match f.tail() {
        TailBound::Known(eps) => Ok(SupReport { radius: r, angles, value: base + eps, tail_included: true }),
        TailBound::Unknown => Ok(SupReport { radius: r, angles, value: base, tail_included: false }),
    }
}

/// Sup of the residual of the integration-by-parts identity
/// `V(u v^(n)) = B - B(0) + (-1)^n V(u^(n) v)` on the circle `|z| = r`,
/// where `V` integrates from the origin and
/// `B = sum_{j=1..n} (-1)^(j+1) u^(j-1) v^(n-j)`.
/// Zero (to rounding) for any analytic `u`, `v`.
pub fn ibp_residual(u: &TaylorSeries, v: &TaylorSeries, n: usize, r: f64, angles: usize) -> Result<f64> {
    if n == 0 {
        return Err(Error::InvalidInput("integration by parts needs n >= 1".into()));
    }
    // Derivative ladders u^(0..=n), v^(0..=n).
    let mut du = vec![u.clone()];
    let mut dv = vec![v.clone()];
    for k in 0..n {
        du.push(du[k].derivative());
        dv.push(dv[k].derivative());
    }
    let lhs = (u * &dv[n]).antiderivative();
    let mut boundary = TaylorSeries::zero();
    for j in 1..=n {
        let term = &du[j - 1] * &dv[n - j];
        boundary = if j % 2 == 1 { &boundary + &term } else { &boundary - &term };
    }
    let b0 = boundary.coeff(0);
    let swapped = (&du[n] * v).antiderivative();
    let sign = if n % 2 == 0 { 1.0 } else { -1.0 };

    let lv = lhs.values_on_circle(r, angles)?;
    let bv = boundary.values_on_circle(r, angles)?;
    let sv = swapped.values_on_circle(r, angles)?;
    let mut worst = 0.0f64;
    for i in 0..angles {
        let rhs = (bv[i] - b0) + sv[i] * sign;
        worst = worst.max((lv[i] - rhs).norm());
    }
    Ok(worst)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn geometric_composed_with_half_z_has_powers_of_half() {
        // 1/(1 - z/2) = sum 2^-k z^k.
        let f = TaylorSeries::geometric_with_radius(0.9, 64).unwrap();
        let g = TaylorSeries::polynomial_real(&[0.0, 0.5]);
        let h = f.compose(&g).unwrap();
        for k in 0..=10 {
            assert_abs_diff_eq!(h.coeff(k).re, 0.5f64.powi(k as i32), epsilon = 1e-12);
            assert_abs_diff_eq!(h.coeff(k).im, 0.0, epsilon = 1e-12);
        }
        // Tail must be known and honest at a sample point.
        let eps = match h.tail() {
            TailBound::Known(e) => e,
            TailBound::Unknown => panic!("composition of certified series lost its tail"),
        };
        // The result is certified on g's disk (the polynomial's unit disk).
        let z = c(0.3, 0.4);
        let exact = 1.0 / (1.0 - z * 0.5);
        let got = h.evaluate(z).unwrap();
        assert!((got - exact).norm() <= eps + 1e-12);
    }

    #[test]
    fn binomial_fifth_power_second_derivative() {
        // f = (1+z)^5, f''(0) = 2! * C(5,2) = 20.
        let one_plus_z = TaylorSeries::polynomial_real(&[1.0, 1.0]);
        let mut f = TaylorSeries::one();
        for _ in 0..5 {
            f = &f * &one_plus_z;
        }
        let d2 = f.derivative_at_zero(2).unwrap();
        assert_abs_diff_eq!(d2.re, 20.0, epsilon = 1e-12);
        assert!(f.is_exact());
        assert_eq!(f.order(), 5);
    }

    #[test]
    fn derivative_order_limits() {
        let f = TaylorSeries::polynomial_real(&[1.0, 2.0]);
        assert!(matches!(f.derivative_at_zero(200), Err(Error::Unsupported(_))));
        // Exact polynomial: high orders are exactly zero.
        assert_eq!(f.derivative_at_zero(7).unwrap(), c(0.0, 0.0));
        // Inexact series: orders beyond the truncation are unknowable.
        let g = TaylorSeries::geometric_with_radius(0.5, 10).unwrap();
        assert!(matches!(g.derivative_at_zero(50), Err(Error::OrderExceeded { .. })));
    }

    #[test]
    fn quadratic_mean_of_one_plus_z_reaches_sqrt_two() {
        // mean |1+z|^2 on |z|=r is 1 + r^2, so the norm tends to sqrt(2).
        let f = TaylorSeries::polynomial_real(&[1.0, 1.0]);
        let grid = DiskGrid::new(vec![0.9, 0.99, 0.9999], 256).unwrap();
        let report = hardy_norm(&f, HardyExponent::TWO, &grid).unwrap();
        assert_abs_diff_eq!(report.value, 2.0f64.sqrt(), epsilon = 1e-4);
        // Monotone in r.
        assert!(report.per_radius[0].1 < report.per_radius[1].1);
        assert!(report.per_radius[1].1 < report.per_radius[2].1);
    }

    #[test]
    fn log_mean_matches_plain_mean_when_no_underflow() {
        let f = TaylorSeries::polynomial(&[c(0.3, 0.1), c(0.0, 0.0), c(-0.7, 0.2)]);
        let p = HardyExponent::new(0.5).unwrap();
        let plain = p_mean(&f, 0.9, p, 512).unwrap();
        let logged = p_mean_log(&f, 0.9, p, 512).unwrap();
        assert_abs_diff_eq!(logged, plain.ln(), epsilon = 1e-12);
    }

    #[test]
    fn circle_values_match_pointwise_evaluation() {
        let f = TaylorSeries::polynomial(&[c(1.0, -0.5), c(0.25, 0.1), c(0.0, 0.0), c(-0.3, 0.7)]);
        let m = 64;
        let values = f.values_on_circle(0.75, m).unwrap();
        for j in 0..m {
            let theta = 2.0 * std::f64::consts::PI * j as f64 / m as f64;
            let z = Complex64::from_polar(0.75, theta);
            let direct = f.evaluate(z).unwrap();
            assert!((values[j] - direct).norm() < 1e-12);
        }
    }

    #[test]
    fn folded_fft_handles_series_longer_than_sample_count() {
        let f = TaylorSeries::geometric_with_radius(0.9, 200).unwrap();
        let m = 64; // shorter than the series
        let values = f.values_on_circle(0.8, m).unwrap();
        for j in [0usize, 7, 33] {
            let theta = 2.0 * std::f64::consts::PI * j as f64 / m as f64;
            let z = Complex64::from_polar(0.8, theta);
            let direct = f.evaluate(z).unwrap();
            assert!((values[j] - direct).norm() < 1e-10);
        }
    }

    #[test]
    fn integration_by_parts_identity_is_exact_for_polynomials() {
        // u = z, v = z^2, n = 1: V(u v') = 2 z^3 / 3.
        let u = TaylorSeries::variable();
        let v = TaylorSeries::monomial(2);
        let res = ibp_residual(&u, &v, 1, 0.9, 128).unwrap();
        assert!(res < 1e-12, "residual {res}");
        let lhs = (&u * &v.derivative()).antiderivative();
        assert_abs_diff_eq!(lhs.coeff(3).re, 2.0 / 3.0, epsilon = 1e-15);

        // Higher order, fuller coefficients.
        let u = TaylorSeries::polynomial(&[c(0.2, 0.3), c(-1.0, 0.1), c(0.0, -0.4), c(0.5, 0.0)]);
        let v = TaylorSeries::polynomial(&[c(1.0, 0.0), c(0.7, -0.2), c(-0.1, 0.9)]);
        let res = ibp_residual(&u, &v, 2, 0.95, 128).unwrap();
        assert!(res < 1e-12, "residual {res}");
    }

    #[test]
    fn product_tail_is_honest() {
        // Square a truncated geometric series and compare against 1/(1-z)^2.
        let g = TaylorSeries::geometric_with_radius(0.5, 10).unwrap();
        let sq = &g * &g;
        let eps = match sq.tail() {
            TailBound::Known(e) => e,
            TailBound::Unknown => panic!("product of certified series lost its tail"),
        };
        assert!(eps.is_finite() && eps > 0.0);
        for z in [c(0.4, 0.0), c(0.0, 0.45), c(-0.3, 0.3)] {
            let exact = (1.0 / (1.0 - z)).powi(2);
            let got = sq.evaluate(z).unwrap();
            assert!(
                (got - exact).norm() <= eps * 1.0000001,
                "z={z}, err={}, tail={eps}",
                (got - exact).norm()
            );
        }
    }

    #[test]
    fn exact_polynomials_multiply_without_truncation() {
        let a = TaylorSeries::monomial(40);
        let b = TaylorSeries::monomial(25);
        let prod = &a * &b;
        assert_eq!(prod.order(), 65);
        assert!(prod.is_exact());
        assert_abs_diff_eq!(prod.coeff(65).re, 1.0, epsilon = 0.0);
    }

    #[test]
    fn composition_rejects_range_violations() {
        let f = TaylorSeries::geometric_with_radius(0.9, 32).unwrap();
        let g = TaylorSeries::constant(c(0.95, 0.0));
        match f.compose(&g) {
            Err(Error::RangeViolation { estimate, certified }) => {
                assert!(estimate > 0.94);
                assert_abs_diff_eq!(certified, 0.9, epsilon = 0.0);
            }
            other => panic!("expected a range violation, got {other:?}"),
        }
    }

    #[test]
    fn antiderivative_then_derivative_round_trips() {
        let f = TaylorSeries::polynomial(&[c(0.5, 0.1), c(-0.2, 0.0), c(0.0, 0.3), c(1.0, -1.0)]);
        let back = f.antiderivative().derivative();
        assert_eq!(back.order(), f.order());
        for k in 0..=f.order() {
            assert!((back.coeff(k) - f.coeff(k)).norm() < 1e-15);
        }
        assert!(back.is_exact());
    }

    #[test]
    fn evaluation_outside_the_certificate_is_rejected() {
        let f = TaylorSeries::geometric_with_radius(0.5, 10).unwrap();
        assert!(matches!(f.evaluate(c(0.7, 0.0)), Err(Error::OutOfDomain { .. })));
        assert!(f.evaluate(c(0.49, 0.0)).is_ok());
    }

    #[test]
    fn grid_validation_catches_bad_input() {
        assert!(DiskGrid::new(vec![0.9, 0.8], 64).is_err());
        assert!(DiskGrid::new(vec![0.9, 1.0], 64).is_err());
        assert!(DiskGrid::new(vec![0.5], 8).is_err());
        assert!(DiskGrid::new(vec![], 64).is_err());
        assert!(DiskGrid::new(vec![0.5, 0.9], 64).is_ok());
        assert!(HardyExponent::new(0.0).is_err());
        assert!(HardyExponent::new(f64::INFINITY).is_err());
        assert!(HardyExponent::new(0.37).is_ok());
    }

    #[test]
    fn geometric_ratio_tail_is_honest() {
        let w = c(0.3, -0.8); // |w| < 1
        let f = TaylorSeries::geometric_with_ratio(w, 0.9, 48).unwrap();
        let eps = f.tail().value();
        for z in [c(0.6, 0.3), c(-0.85, 0.2), c(0.0, 0.89)] {
            let exact = 1.0 / (1.0 - w * z);
            let got = f.evaluate(z).unwrap();
            assert!((got - exact).norm() <= eps + 1e-14);
        }
    }

    #[test]
    fn vanishing_order_reports_first_live_coefficient() {
        let f = TaylorSeries::polynomial(&[c(0.0, 0.0), c(1e-12, 0.0), c(0.7, 0.0)]);
        assert_eq!(f.vanishing_order(1e-9), Some(2));
        assert_eq!(f.vanishing_order(1e-14), Some(1));
        assert_eq!(TaylorSeries::zero().vanishing_order(1e-9), None);
    }
}
