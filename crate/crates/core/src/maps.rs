//! Analytic self-maps of the unit disk.
//!
//! [`DiskSelfMap`] wraps the handful of shapes the rest of the crate
//! composes with: rotations, monomials, Möbius transformations, polynomial
//! maps, constants, and compositions of these. Constructors *certify* the
//! self-map property — Möbius maps get an exact boundary-sup computed from
//! the image circle, polynomial maps get a dense boundary scan with a
//! Lipschitz safety margin for the strictness flag.
//!
//! The module also classifies Möbius maps by their fixed-point geometry
//! (elliptic / parabolic / hyperbolic automorphisms), iterates maps, and
//! records forward orbits together with a summability classification of the
//! boundary gaps `1 - |z_n|`.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::jet;
use crate::series::{sup_norm_estimate, TaylorSeries};
use crate::tol;
use crate::verdict::{Leg, Truncation, Verdict};

const ONE: Complex64 = Complex64::new(1.0, 0.0);
const ZERO: Complex64 = Complex64::new(0.0, 0.0);

/// Boundary samples used when validating polynomial self-maps.
const BOUNDARY_SAMPLES: usize = 4096;
/// Iteration cap for maps without a Möbius or monomial fast path.
const MAX_SLOW_ITERATES: usize = 64;
/// Monomial exponent cap: beyond this the coefficient vector of the iterate
/// is too large to be useful.
const MAX_MONOMIAL_EXPONENT: u64 = 1 << 16;

/// A Möbius transformation `z -> (a z + b) / (c z + d)` stored as its
/// coefficient matrix `[[a, b], [c, d]]`.
#[derive(Debug, Clone, Copy)]
pub struct Mobius {
    pub a: Complex64,
    pub b: Complex64,
    pub c: Complex64,
    pub d: Complex64,
}

impl Mobius {
    pub fn identity() -> Self {
        Mobius { a: ONE, b: ZERO, c: ZERO, d: ONE }
    }

    pub fn apply(&self, z: Complex64) -> Complex64 {
        (self.a * z + self.b) / (self.c * z + self.d)
    }

    pub fn determinant(&self) -> Complex64 {
        self.a * self.d - self.b * self.c
    }

    /// Matrix product: `self.compose(other)` is `self ∘ other`.
    pub fn compose(&self, other: &Mobius) -> Mobius {
        Mobius {
            a: self.a * other.a + self.b * other.c,
            b: self.a * other.b + self.b * other.d,
            c: self.c * other.a + self.d * other.c,
            d: self.c * other.b + self.d * other.d,
        }
    }

    pub fn inverse(&self) -> Mobius {
        Mobius { a: self.d, b: -self.b, c: -self.c, d: self.a }
    }

    /// `n`-th compositional power by repeated multiplication, renormalizing
    /// to keep entries bounded (a Möbius map is scale-invariant).
    pub fn pow(&self, n: usize) -> Mobius {
        let mut acc = Mobius::identity();
        let mut base = *self;
        let mut k = n;
        while k > 0 {
            if k & 1 == 1 {
                acc = acc.compose(&base);
                acc = acc.renormalized();
            }
            base = base.compose(&base);
            base = base.renormalized();
            k >>= 1;
        }
        acc
    }

    fn renormalized(&self) -> Mobius {
        let scale = self
            .a
            .norm()
            .max(self.b.norm())
            .max(self.c.norm())
            .max(self.d.norm());
        if scale == 0.0 || !scale.is_finite() {
            return *self;
        }
        let s = Complex64::new(1.0 / scale, 0.0);
        Mobius { a: self.a * s, b: self.b * s, c: self.c * s, d: self.d * s }
    }

    /// Derivative `(ad - bc) / (c z + d)^2`.
    pub fn derivative(&self, z: Complex64) -> Complex64 {
        let den = self.c * z + self.d;
        self.determinant() / (den * den)
    }

    /// Exact sup of `|φ|` over the unit circle: the image is a circle, so
    /// the sup is `|center| + radius`, recovered from three image points.
    fn boundary_sup(&self) -> Result<f64> {
        let w1 = self.apply(ONE);
        let w2 = self.apply(Complex64::new(0.0, 1.0));
        let w3 = self.apply(-ONE);
        let num = w1.norm_sqr() * (w2 - w3) + w2.norm_sqr() * (w3 - w1) + w3.norm_sqr() * (w1 - w2);
        let den = w1.conj() * (w2 - w3) + w2.conj() * (w3 - w1) + w3.conj() * (w1 - w2);
        let scale = w1.norm().max(w2.norm()).max(w3.norm()).max(1.0);
        if den.norm() <= 1e-12 * scale * scale {
            // Nearly collinear images (pole hugging the circle): fall back
            // to a dense scan.
            let mut sup = 0.0f64;
            for j in 0..BOUNDARY_SAMPLES {
                let t = 2.0 * std::f64::consts::PI * j as f64 / BOUNDARY_SAMPLES as f64;
                sup = sup.max(self.apply(Complex64::from_polar(1.0, t)).norm());
            }
            return Ok(sup);
        }
        let center = num / den;
        let radius = (w1 - center).norm();
        Ok(center.norm() + radius)
    }

    /// Image circle of the unit circle, `(center, radius)`.
    fn image_circle(&self) -> Option<(Complex64, f64)> {
        let w1 = self.apply(ONE);
        let w2 = self.apply(Complex64::new(0.0, 1.0));
        let w3 = self.apply(-ONE);
        let num = w1.norm_sqr() * (w2 - w3) + w2.norm_sqr() * (w3 - w1) + w3.norm_sqr() * (w1 - w2);
        let den = w1.conj() * (w2 - w3) + w2.conj() * (w3 - w1) + w3.conj() * (w1 - w2);
        let scale = w1.norm().max(w2.norm()).max(w3.norm()).max(1.0);
        if den.norm() <= 1e-12 * scale * scale {
            return None;
        }
        let center = num / den;
        Some((center, (w1 - center).norm()))
    }
}

/// The supported shapes of self-map.
#[derive(Debug, Clone)]
pub enum MapKind {
    Identity,
    /// `z -> u z`, `|u| = 1`.
    Rotation(Complex64),
    /// `z -> z^k`, `k >= 2`.
    Monomial(u32),
    Mobius(Mobius),
    /// `z -> sum_k c_k z^k` mapping the disk into itself.
    Polynomial(Vec<Complex64>),
    /// `z -> w`, `|w| < 1`.
    Constant(Complex64),
    /// `outer ∘ inner`.
    Composite(Box<DiskSelfMap>, Box<DiskSelfMap>),
}

/// A certified analytic self-map of the unit disk.
#[derive(Debug, Clone)]
pub struct DiskSelfMap {
    kind: MapKind,
    /// Estimate (exact for Möbius) of `sup_{|z|<1} |φ(z)|`.
    sup_estimate: f64,
    /// Whether the map provably sends the disk into a strictly smaller disk.
    strict: bool,
}

impl DiskSelfMap {
    // ------------------------------------------------------------------
    // Constructors
    // ------------------------------------------------------------------

    pub fn identity() -> Self {
        DiskSelfMap { kind: MapKind::Identity, sup_estimate: 1.0, strict: false }
    }

    /// `z -> u z` for unimodular `u` (normalized if within 1e-10 of the
    /// circle, rejected otherwise).
    pub fn rotation(u: Complex64) -> Result<Self> {
        let n = u.norm();
        if (n - 1.0).abs() > tol::MAP_EQ {
            return Err(Error::InvalidInput(format!(
                "rotation coefficient must be unimodular, |u| = {n}"
            )));
        }
        let u = u / n;
        if (u - ONE).norm() == 0.0 {
            return Ok(Self::identity());
        }
        Ok(DiskSelfMap { kind: MapKind::Rotation(u), sup_estimate: 1.0, strict: false })
    }

    /// `z -> z^k`, `k >= 1` (`k = 1` is the identity).
    pub fn monomial(k: u32) -> Result<Self> {
        match k {
            0 => Err(Error::InvalidInput("z^0 is the boundary constant 1, not a self-map".into())),
            1 => Ok(Self::identity()),
            _ => Ok(DiskSelfMap { kind: MapKind::Monomial(k), sup_estimate: 1.0, strict: false }),
        }
    }

    /// A Möbius self-map. Requires a nonzero determinant, the pole outside
    /// the closed disk, and exact boundary sup at most `1 + 1e-9`.
    pub fn mobius(a: Complex64, b: Complex64, c: Complex64, d: Complex64) -> Result<Self> {
        let m = Mobius { a, b, c, d };
        let scale = a.norm().max(b.norm()).max(c.norm()).max(d.norm());
        if scale == 0.0 {
            return Err(Error::InvalidInput("zero coefficient matrix".into()));
        }
        if m.determinant().norm() <= 1e-12 * scale * scale {
            return Err(Error::InvalidInput(
                "degenerate (constant) coefficient matrix; use a constant map instead".into(),
            ));
        }
        if c.norm() > 0.0 {
            let pole = (-(d / c)).norm();
            if pole <= 1.0 + 1e-12 {
                return Err(Error::InvalidInput(format!(
                    "pole at modulus {pole} lies in the closed disk"
                )));
            }
        }
        let sup = m.boundary_sup()?;
        if sup > 1.0 + tol::SUP_SLACK {
            return Err(Error::InvalidInput(format!(
                "not a self-map: boundary sup is {sup}"
            )));
        }
        let strict = sup < 1.0 - 1e-12;
        Ok(DiskSelfMap { kind: MapKind::Mobius(m), sup_estimate: sup.min(1.0), strict })
    }

    /// The involutive automorphism `z -> (a - z)/(1 - conj(a) z)`
    /// swapping the origin with `a`.
    pub fn mobius_involution(a: Complex64) -> Result<Self> {
        if a.norm() >= 1.0 {
            return Err(Error::InvalidInput(format!(
                "involution base point must be interior, |a| = {}",
                a.norm()
            )));
        }
        Self::mobius(-ONE, a, -a.conj(), ONE)
    }

    /// A polynomial self-map, validated by a dense boundary scan. The
    /// strictness flag additionally requires the scan maximum to clear 1 by
    /// the Lipschitz sampling margin, making strictness rigorous.
    pub fn polynomial(coeffs: &[Complex64]) -> Result<Self> {
        let p = TaylorSeries::polynomial(coeffs);
        if p.order() == 0 {
            return Self::constant(p.coeff(0));
        }
        let sup = {
            let report = sup_norm_estimate(&p, 1.0 - 1e-15, BOUNDARY_SAMPLES)?;
            report.value
        };
        if sup > 1.0 + tol::SUP_SLACK {
            return Err(Error::InvalidInput(format!(
                "not a self-map: boundary sup estimate is {sup}"
            )));
        }
        // |p'| <= sum k |c_k| on the closed disk bounds the sampling gap.
        let lip: f64 = coeffs.iter().enumerate().map(|(k, c)| k as f64 * c.norm()).sum();
        let margin = lip * std::f64::consts::PI / BOUNDARY_SAMPLES as f64;
        let strict = sup + margin < 1.0;
        if p.order() == 1 && p.coeff(0).norm() == 0.0 && (p.coeff(1).norm() - 1.0).abs() <= tol::MAP_EQ
        {
            return Self::rotation(p.coeff(1));
        }
        Ok(DiskSelfMap { kind: MapKind::Polynomial(p.coeffs().to_vec()), sup_estimate: sup.min(1.0), strict })
    }

    /// The constant map `z -> w`, `|w| < 1`.
    pub fn constant(w: Complex64) -> Result<Self> {
        if w.norm() >= 1.0 {
            return Err(Error::InvalidInput(format!(
                "constant self-maps need |w| < 1, got {}",
                w.norm()
            )));
        }
        Ok(DiskSelfMap { kind: MapKind::Constant(w), sup_estimate: w.norm(), strict: true })
    }

    /// `outer ∘ inner`. Both factors are already certified, so the composite
    /// is automatically a self-map.
    pub fn composite(outer: DiskSelfMap, inner: DiskSelfMap) -> Self {
        let mut sup = 0.0f64;
        for j in 0..512 {
            let t = 2.0 * std::f64::consts::PI * j as f64 / 512.0;
            let z = Complex64::from_polar(1.0 - 1e-12, t);
            if let Ok(w) = inner.eval(z).and_then(|w| outer.eval(w)) {
                sup = sup.max(w.norm());
            }
        }
        let strict = outer.strict || inner.strict;
        DiskSelfMap {
            sup_estimate: sup.min(1.0),
            strict,
            kind: MapKind::Composite(Box::new(outer), Box::new(inner)),
        }
    }

    // ------------------------------------------------------------------
    // Accessors
    // ------------------------------------------------------------------

    pub fn kind(&self) -> &MapKind {
        &self.kind
    }

    pub fn sup_estimate(&self) -> f64 {
        self.sup_estimate
    }

    /// Whether the map provably sends the disk into a strictly smaller one.
    pub fn is_strict(&self) -> bool {
        self.strict
    }

    // ------------------------------------------------------------------
    // Evaluation
    // ------------------------------------------------------------------

    pub fn eval(&self, z: Complex64) -> Result<Complex64> {
        if z.norm() > 1.0 + 1e-12 {
            return Err(Error::OutOfDisk { modulus: z.norm() });
        }
        Ok(match &self.kind {
            MapKind::Identity => z,
            MapKind::Rotation(u) => u * z,
            MapKind::Monomial(k) => z.powu(*k),
            MapKind::Mobius(m) => m.apply(z),
            MapKind::Polynomial(c) => {
                let mut acc = ZERO;
                for ck in c.iter().rev() {
                    acc = acc * z + ck;
                }
                acc
            }
            MapKind::Constant(w) => *w,
            MapKind::Composite(outer, inner) => outer.eval(inner.eval(z)?)?,
        })
    }

    /// Local expansion `[φ(w), φ'(w), φ''(w)/2, ...]` to order `k`.
    pub fn jet(&self, w: Complex64, k: usize) -> Result<Vec<Complex64>> {
        if w.norm() > 1.0 + 1e-12 {
            return Err(Error::OutOfDisk { modulus: w.norm() });
        }
        let mut out = match &self.kind {
            MapKind::Identity => {
                let mut v = vec![ZERO; k + 1];
                v[0] = w;
                if k >= 1 {
                    v[1] = ONE;
                }
                v
            }
            MapKind::Rotation(u) => {
                let mut v = vec![ZERO; k + 1];
                v[0] = u * w;
                if k >= 1 {
                    v[1] = *u;
                }
                v
            }
            MapKind::Monomial(m) => {
                let mut coeffs = vec![ZERO; *m as usize + 1];
                coeffs[*m as usize] = ONE;
                jet::taylor_shift(&coeffs, w, k)
            }
            MapKind::Mobius(m) => {
                let mut num = vec![ZERO; k + 1];
                num[0] = m.a * w + m.b;
                if k >= 1 {
                    num[1] = m.a;
                }
                let mut den = vec![ZERO; k + 1];
                den[0] = m.c * w + m.d;
                if k >= 1 {
                    den[1] = m.c;
                }
                jet::jdiv(&num, &den)?
            }
            MapKind::Polynomial(c) => jet::taylor_shift(c, w, k),
            MapKind::Constant(v) => {
                let mut out = vec![ZERO; k + 1];
                out[0] = *v;
                out
            }
            MapKind::Composite(outer, inner) => {
                let ij = inner.jet(w, k)?;
                let oj = outer.jet(ij[0], k)?;
                jet::jcompose(&oj, &ij)
            }
        };
        out.resize(k + 1, ZERO);
        Ok(out)
    }

    pub fn derivative_at(&self, w: Complex64) -> Result<Complex64> {
        Ok(self.jet(w, 1)?[1])
    }

    /// Maclaurin series on the largest radius from a shrinking ladder whose
    /// image circle stays inside `|w| <= range_cap` (sampled sup with a
    /// small safety margin). Lets callers compose into a function only
    /// certified on the `range_cap`-disk.
    pub fn series_within(&self, order: usize, range_cap: f64) -> Result<TaylorSeries> {
        for &r in &[0.9, 0.85, 0.8, 0.7, 0.6, 0.5, 0.4, 0.3] {
            let mut sup = 0.0f64;
            for j in 0..512 {
                let t = 2.0 * std::f64::consts::PI * j as f64 / 512.0;
                sup = sup.max(self.eval(Complex64::from_polar(r, t))?.norm());
            }
            if sup <= range_cap * (1.0 - 1e-6) {
                return self.to_series(order, r);
            }
        }
        Err(Error::Unsupported(format!(
            "the map's range exceeds {range_cap} even on small circles"
        )))
    }

    /// Maclaurin series certified on `|z| <= radius`. For Möbius maps the
    /// pole must stay outside that radius; the geometric tail is then
    /// carried in closed form.
    pub fn to_series(&self, order: usize, radius: f64) -> Result<TaylorSeries> {
        if !(radius > 0.0 && radius <= 1.0) {
            return Err(Error::InvalidInput(format!("series radius must lie in (0, 1], got {radius}")));
        }
        match &self.kind {
            MapKind::Identity => Ok(TaylorSeries::variable()),
            MapKind::Rotation(u) => Ok(TaylorSeries::polynomial(&[ZERO, *u])),
            MapKind::Monomial(k) => Ok(TaylorSeries::monomial(*k as usize)),
            MapKind::Polynomial(c) => Ok(TaylorSeries::polynomial(c)),
            MapKind::Constant(w) => Ok(TaylorSeries::constant(*w)),
            MapKind::Mobius(m) => {
                if m.c.norm() == 0.0 {
                    // Affine: exact.
                    return Ok(TaylorSeries::polynomial(&[m.b / m.d, m.a / m.d]));
                }
                let pole = (-(m.d / m.c)).norm();
                if pole <= radius {
                    return Err(Error::OutOfDomain { requested: radius, certified: pole });
                }
                // (a z + b) * (1/d) * 1/(1 - (-c/d) z).
                let ratio = -(m.c / m.d);
                let geo = TaylorSeries::geometric_with_ratio(ratio, radius, order)?
                    .scale(ONE / m.d);
                let linear = TaylorSeries::polynomial(&[m.b, m.a]);
                Ok(&linear * &geo)
            }
            MapKind::Composite(outer, inner) => {
                let si = inner.to_series(order, radius)?;
                let sup_in = sup_norm_estimate(&si, si.domain_radius(), 1024)?.value;
                let r_out = (sup_in + 1e-12).min(1.0);
                let so = outer.to_series(order, r_out)?;
                so.compose(&si)
            }
        }
    }

    /// Lowest-terms rational form `(numerator, denominator)` when the map
    /// is rational of degree at most [`crate::roots::MAX_DEGREE`].
    pub fn as_rational(&self) -> Option<(Vec<Complex64>, Vec<Complex64>)> {
        let cap = crate::roots::MAX_DEGREE;
        match &self.kind {
            MapKind::Identity => Some((vec![ZERO, ONE], vec![ONE])),
            MapKind::Rotation(u) => Some((vec![ZERO, *u], vec![ONE])),
            MapKind::Monomial(k) => {
                let mut num = vec![ZERO; *k as usize + 1];
                num[*k as usize] = ONE;
                Some((num, vec![ONE]))
            }
            MapKind::Mobius(m) => Some((vec![m.b, m.a], vec![m.d, m.c])),
            MapKind::Polynomial(c) => Some((c.clone(), vec![ONE])),
            MapKind::Constant(w) => Some((vec![*w], vec![ONE])),
            MapKind::Composite(outer, inner) => {
                let (po, qo) = outer.as_rational()?;
                let (pi, qi) = inner.as_rational()?;
                // p_o(pi/qi) / q_o(pi/qi), cleared of denominators:
                // sum p_o[k] pi^k qi^(D-k)  over  sum q_o[k] pi^k qi^(D-k),
                // D = max(deg po, deg qo).
                let deg_i = pi.len().max(qi.len()) - 1;
                let deg_o = po.len().max(qo.len()) - 1;
                if deg_i.checked_mul(deg_o).map_or(true, |d| d > cap) {
                    return None;
                }
                let pi_s = TaylorSeries::polynomial(&pi);
                let qi_s = TaylorSeries::polynomial(&qi);
                let d = deg_o;
                let clear = |coeffs: &[Complex64]| -> TaylorSeries {
                    let mut acc = TaylorSeries::zero();
                    let mut pik = TaylorSeries::one();
                    // Build pi^k incrementally; multiply by qi^(d-k).
                    for (k, ck) in coeffs.iter().enumerate() {
                        let mut term = pik.scale(*ck);
                        for _ in 0..(d - k) {
                            term = &term * &qi_s;
                        }
                        acc = &acc + &term;
                        if k < coeffs.len() - 1 {
                            pik = &pik * &pi_s;
                        }
                    }
                    acc
                };
                let mut po_pad = po.clone();
                po_pad.resize(d + 1, ZERO);
                let mut qo_pad = qo.clone();
                qo_pad.resize(d + 1, ZERO);
                let num = clear(&po_pad);
                let den = clear(&qo_pad);
                if num.order() > cap || den.order() > cap {
                    return None;
                }
                Some((num.coeffs().to_vec(), den.coeffs().to_vec()))
            }
        }
    }

    /// The Möbius matrix, when the map is (a composition of) degree-one
    /// rational maps.
    pub fn as_mobius(&self) -> Option<Mobius> {
        match &self.kind {
            MapKind::Identity => Some(Mobius::identity()),
            MapKind::Rotation(u) => Some(Mobius { a: *u, b: ZERO, c: ZERO, d: ONE }),
            MapKind::Mobius(m) => Some(*m),
            MapKind::Polynomial(c) if c.len() <= 2 => Some(Mobius {
                a: c.get(1).copied().unwrap_or(ZERO),
                b: c[0],
                c: ZERO,
                d: ONE,
            }),
            MapKind::Constant(w) => Some(Mobius { a: ZERO, b: *w, c: ZERO, d: ONE }),
            MapKind::Composite(outer, inner) => {
                Some(outer.as_mobius()?.compose(&inner.as_mobius()?))
            }
            _ => None,
        }
    }

    /// The `n`-fold composition `φ ∘ ... ∘ φ`.
    pub fn iterate(&self, n: usize) -> Result<DiskSelfMap> {
        if n == 0 {
            return Ok(Self::identity());
        }
        if n == 1 {
            return Ok(self.clone());
        }
        if let Some(m) = self.as_mobius() {
            let p = m.pow(n);
            let scale = p.a.norm().max(p.b.norm()).max(p.c.norm()).max(p.d.norm());
            if p.c.norm() <= 1e-14 * scale {
                // Affine iterate: build it as a polynomial, which tolerates a
                // tiny leading coefficient (a strongly contracting iterate)
                // that the Möbius determinant test would misread as
                // degenerate.
                return Self::polynomial(&[p.b / p.d, p.a / p.d]);
            }
            if p.determinant().norm() <= 1e-12 * scale * scale {
                // The iterates converged to a point faster than f64 can
                // resolve. An interior limit is an honest constant map; a
                // boundary limit cannot be represented.
                let w = p.apply(ZERO);
                if w.norm() < 1.0 {
                    return Self::constant(w);
                }
                return Err(Error::Unsupported(format!(
                    "iterate {n} is numerically indistinguishable from the boundary constant {w}"
                )));
            }
            return Self::mobius(p.a, p.b, p.c, p.d);
        }
        if let MapKind::Monomial(k) = self.kind {
            let mut exp: u64 = 1;
            for _ in 0..n {
                exp = exp.saturating_mul(k as u64);
                if exp > MAX_MONOMIAL_EXPONENT {
                    return Err(Error::Unsupported(format!(
                        "monomial iterate exponent {k}^{n} exceeds {MAX_MONOMIAL_EXPONENT}"
                    )));
                }
            }
            return Self::monomial(exp as u32);
        }
        if n > MAX_SLOW_ITERATES {
            return Err(Error::Unsupported(format!(
                "iterate count {n} exceeds {MAX_SLOW_ITERATES} for maps without a closed form"
            )));
        }
        let mut acc = self.clone();
        for _ in 1..n {
            acc = Self::composite(self.clone(), acc);
        }
        Ok(acc)
    }

    // ------------------------------------------------------------------
    // Automorphisms and classification
    // ------------------------------------------------------------------

    /// Whether the map is a disk automorphism. Exact (image circle equals
    /// the unit circle) for Möbius-representable maps; conservative `false`
    /// for shapes that are never automorphisms.
    pub fn is_automorphism(&self) -> bool {
        match &self.kind {
            MapKind::Identity | MapKind::Rotation(_) => true,
            MapKind::Monomial(_) | MapKind::Constant(_) => false,
            _ => match self.as_mobius() {
                Some(m) => match m.image_circle() {
                    Some((center, radius)) => {
                        center.norm() <= tol::MAP_EQ && (radius - 1.0).abs() <= tol::MAP_EQ
                    }
                    None => false,
                },
                None => false,
            },
        }
    }
}

/// Conjugacy class of a self-map, read off from its fixed-point geometry.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MapClass {
    Identity,
    /// Automorphism with an interior fixed point.
    EllipticAutomorphism,
    /// Automorphism with one double boundary fixed point.
    ParabolicAutomorphism,
    /// Automorphism with two distinct boundary fixed points.
    HyperbolicAutomorphism,
    NonAutomorphism,
}

/// Fixed points (with multipliers `φ'`) and the conjugacy class.
#[derive(Debug, Clone)]
pub struct FixedPointReport {
    pub class: MapClass,
    /// `(fixed point, multiplier)`, restricted to the closed disk.
    pub fixed_points: Vec<(Complex64, Complex64)>,
}

impl DiskSelfMap {
    /// Fixed points in the closed disk and the map's conjugacy class.
    pub fn classify(&self) -> Result<FixedPointReport> {
        if let MapKind::Identity = self.kind {
            return Ok(FixedPointReport { class: MapClass::Identity, fixed_points: Vec::new() });
        }
        if let MapKind::Constant(w) = self.kind {
            return Ok(FixedPointReport {
                class: MapClass::NonAutomorphism,
                fixed_points: vec![(w, ZERO)],
            });
        }
        if let Some(m) = self.as_mobius() {
            return classify_mobius(self, &m);
        }
        // Rational path: fixed points solve num(z) - z den(z) = 0.
        if let Some((num, den)) = self.as_rational() {
            let num_s = TaylorSeries::polynomial(&num);
            let den_s = TaylorSeries::polynomial(&den);
            let shifted = &num_s - &(&TaylorSeries::variable() * &den_s);
            let mut fixed = Vec::new();
            if let Ok(roots) = crate::roots::polynomial_roots(shifted.coeffs()) {
                for (z, _) in roots.roots {
                    if z.norm() <= 1.0 + tol::BOUNDARY_SNAP {
                        let mult = self.derivative_at(z).unwrap_or(ZERO);
                        fixed.push((z, mult));
                    }
                }
            }
            return Ok(FixedPointReport { class: MapClass::NonAutomorphism, fixed_points: fixed });
        }
        // Deep composites: report the origin when it is fixed.
        let j = self.jet(ZERO, 1)?;
        let fixed = if j[0].norm() <= tol::EXACT { vec![(ZERO, j[1])] } else { Vec::new() };
        Ok(FixedPointReport { class: MapClass::NonAutomorphism, fixed_points: fixed })
    }
}

fn classify_mobius(map: &DiskSelfMap, m: &Mobius) -> Result<FixedPointReport> {
    let scale = m.a.norm().max(m.b.norm()).max(m.c.norm()).max(m.d.norm());
    // Identity up to scale?
    if m.b.norm() <= 1e-14 * scale && m.c.norm() <= 1e-14 * scale && (m.a - m.d).norm() <= 1e-14 * scale
    {
        return Ok(FixedPointReport { class: MapClass::Identity, fixed_points: Vec::new() });
    }
    let auto = map.is_automorphism();
    let mut fixed: Vec<(Complex64, Complex64)> = Vec::new();
    let mut double_root = false;

    if m.c.norm() <= 1e-14 * scale {
        // Affine: φ(z) = (a/d) z + (b/d); fixed point b/(d - a) unless a = d.
        let u = m.a / m.d;
        let v = m.b / m.d;
        if (u - ONE).norm() <= 1e-14 {
            // Translation; no finite fixed point (and not a self-map unless v = 0).
        } else {
            let z = v / (ONE - u);
            if z.norm() <= 1.0 + tol::BOUNDARY_SNAP {
                fixed.push((z, u));
            }
        }
    } else {
        // c z^2 + (d - a) z - b = 0.
        let aa = m.c;
        let bb = m.d - m.a;
        let cc = -m.b;
        let disc = bb * bb - aa * cc * 4.0;
        let sq = disc.sqrt();
        let z1 = (-bb + sq) / (aa * 2.0);
        let z2 = (-bb - sq) / (aa * 2.0);
        double_root = (z1 - z2).norm() <= tol::ROOT_CLUSTER;
        let candidates = if double_root { vec![z1] } else { vec![z1, z2] };
        for z in candidates {
            if z.norm() <= 1.0 + tol::BOUNDARY_SNAP {
                fixed.push((z, m.derivative(z)));
            }
        }
    }

    let class = if !auto {
        MapClass::NonAutomorphism
    } else if double_root {
        // One double fixed point; for an automorphism it sits on the circle.
        MapClass::ParabolicAutomorphism
    } else {
        let on_boundary: Vec<bool> =
            fixed.iter().map(|(z, _)| (z.norm() - 1.0).abs() <= tol::BOUNDARY_SNAP).collect();
        if on_boundary.len() == 2 && on_boundary.iter().all(|&b| b) {
            MapClass::HyperbolicAutomorphism
        } else if on_boundary.iter().any(|&b| !b) {
            MapClass::EllipticAutomorphism
        } else if fixed.len() == 1 && on_boundary[0] {
            // The partner fixed point lies outside the disk: still elliptic
            // (interior/exterior pair) only when off-circle; a single
            // boundary fixed point with its partner outside is hyperbolic
            // with the second point beyond the snap tolerance.
            MapClass::HyperbolicAutomorphism
        } else {
            MapClass::EllipticAutomorphism
        }
    };
    Ok(FixedPointReport { class, fixed_points: fixed })
}

/// Max deviation between two maps over a fixed interior sample set.
pub fn maps_equal(f: &DiskSelfMap, g: &DiskSelfMap, tol_eq: f64) -> Result<bool> {
    let mut worst = 0.0f64;
    for &r in &[0.25, 0.55, 0.85] {
        for j in 0..24 {
            let t = 2.0 * std::f64::consts::PI * j as f64 / 24.0;
            let z = Complex64::from_polar(r, t);
            let d = (f.eval(z)? - g.eval(z)?).norm();
            worst = worst.max(d);
        }
    }
    Ok(worst <= tol_eq)
}

/// Single-leg check of the classical origin-fixing contraction bounds:
/// requires `φ(0) = 0`, then verifies `|φ(z)| <= |z|` on a grid and
/// `|φ'(0)| <= 1`.
pub fn schwarz_check(phi: &DiskSelfMap, opts: &crate::ProbeOptions) -> Result<Verdict> {
    let j = phi.jet(ZERO, 1)?;
    if j[0].norm() > tol::EXACT {
        return Err(Error::HypothesisViolated(format!(
            "the map must fix the origin; φ(0) has modulus {}",
            j[0].norm()
        )));
    }
    let mut worst_ratio = 0.0f64;
    for &r in opts.grid.radii() {
        for k in 0..64 {
            let t = 2.0 * std::f64::consts::PI * k as f64 / 64.0;
            let z = Complex64::from_polar(r, t);
            worst_ratio = worst_ratio.max(phi.eval(z)?.norm() / r);
        }
    }
    let deriv = j[1].norm();
    let ok = worst_ratio <= 1.0 + opts.tol_sup && deriv <= 1.0 + opts.tol_sup;
    let leg = if ok {
        Leg::holds().with("max |φ(z)|/|z|", worst_ratio).with("|φ'(0)|", deriv)
    } else {
        Leg::fails("contraction bound violated at a grid point")
            .with("max |φ(z)|/|z|", worst_ratio)
            .with("|φ'(0)|", deriv)
    };
    Ok(Verdict {
        claim: "origin-fixing self-map satisfies the contraction bounds".into(),
        criterion: leg,
        direct: None,
        truncation: Truncation::from_options(opts),
    })
}

// ----------------------------------------------------------------------
// Orbits
// ----------------------------------------------------------------------

/// Trichotomy for the boundary-gap series of an orbit.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Summability {
    Summable,
    Divergent,
    Inconclusive,
}

/// A forward orbit `z, φ(z), φ(φ(z)), ...` with its boundary gaps.
#[derive(Debug, Clone)]
pub struct OrbitRecord {
    pub points: Vec<Complex64>,
    /// `1 - |z_n|` per orbit point.
    pub gaps: Vec<f64>,
    /// Sum of all recorded gaps.
    pub partial_sum: f64,
    /// Sum over the trailing decision chunk (the last ~tenth of the orbit).
    pub chunk_sum: f64,
    pub chunk_len: usize,
    pub classification: Summability,
}

/// Record `steps` forward iterates from `z0` and classify the gap series.
///
/// The decision is relative: the trailing tenth of the gaps must carry at
/// most a 1e-3 fraction of the total mass (or be below 1e-10 outright) to
/// call the series summable, and must carry at least a 1e-2 fraction with
/// every gap above 1e-6 to call it divergent. Between the two the record is
/// inconclusive — extend the orbit to decide.
pub fn orbit(phi: &DiskSelfMap, z0: Complex64, steps: usize) -> Result<OrbitRecord> {
    if z0.norm() >= 1.0 {
        return Err(Error::OutOfDisk { modulus: z0.norm() });
    }
    if steps < 10 {
        return Err(Error::InvalidInput("need at least 10 orbit steps to classify".into()));
    }
    let mut points = Vec::with_capacity(steps + 1);
    let mut gaps = Vec::with_capacity(steps + 1);
    let mut z = z0;
    points.push(z);
    gaps.push((1.0 - z.norm()).max(0.0));
    for _ in 0..steps {
        z = phi.eval(z)?;
        points.push(z);
        gaps.push((1.0 - z.norm()).max(0.0));
    }
    let total: f64 = gaps.iter().sum();
    let chunk_len = gaps.len().div_ceil(10);
    let chunk = &gaps[gaps.len() - chunk_len..];
    let chunk_sum: f64 = chunk.iter().sum();
    let chunk_min = chunk.iter().copied().fold(f64::INFINITY, f64::min);

    let classification = if chunk_sum <= (1e-3 * total).max(1e-10) {
        Summability::Summable
    } else if chunk_min > 1e-6 && chunk_sum >= 0.01 * total {
        Summability::Divergent
    } else {
        Summability::Inconclusive
    };
    Ok(OrbitRecord { points, gaps, partial_sum: total, chunk_sum, chunk_len, classification })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    /// (z + 1/2)/(1 + z/2): boundary-fixed-point pair at ±1.
    fn hyperbolic() -> DiskSelfMap {
        DiskSelfMap::mobius(ONE, c(0.5, 0.0), c(0.5, 0.0), ONE).unwrap()
    }

    /// ((2i - 1) z + 1)/(-z + 1 + 2i): one double fixed point at 1.
    fn parabolic() -> DiskSelfMap {
        DiskSelfMap::mobius(c(-1.0, 2.0), ONE, c(-1.0, 0.0), c(1.0, 2.0)).unwrap()
    }

    #[test]
    fn involution_swaps_origin_and_base_point() {
        let a = c(0.5, 0.2);
        let phi = DiskSelfMap::mobius_involution(a).unwrap();
        assert!((phi.eval(ZERO).unwrap() - a).norm() < 1e-14);
        assert!(phi.eval(a).unwrap().norm() < 1e-14);
        let twice = DiskSelfMap::composite(phi.clone(), phi.clone());
        assert!(maps_equal(&twice, &DiskSelfMap::identity(), 1e-12).unwrap());
        assert!(phi.is_automorphism());
        // φ'(0) = |a|^2 - 1.
        let d0 = phi.derivative_at(ZERO).unwrap();
        assert_abs_diff_eq!(d0.re, a.norm_sqr() - 1.0, epsilon = 1e-12);
        assert_abs_diff_eq!(d0.im, 0.0, epsilon = 1e-12);
    }

    #[test]
    fn non_self_maps_are_rejected() {
        // z^2 - 1/2 reaches modulus 1.5 on the boundary.
        assert!(DiskSelfMap::polynomial(&[c(-0.5, 0.0), ZERO, ONE]).is_err());
        // Pole inside the disk.
        assert!(DiskSelfMap::mobius(ONE, ZERO, c(2.0, 0.0), ONE).is_err());
        // Expanding affine map.
        assert!(DiskSelfMap::mobius(c(2.0, 0.0), ZERO, ZERO, ONE).is_err());
        // Constant on the boundary.
        assert!(DiskSelfMap::constant(ONE).is_err());
        // Degenerate matrix.
        assert!(DiskSelfMap::mobius(ONE, ONE, ONE, ONE).is_err());
    }

    #[test]
    fn valid_self_maps_are_accepted_with_sensible_strictness() {
        let half = DiskSelfMap::polynomial(&[ZERO, c(0.5, 0.0)]).unwrap();
        assert!(half.is_strict());
        assert!(!half.is_automorphism());

        let blend = DiskSelfMap::polynomial(&[ZERO, c(0.5, 0.0), c(0.5, 0.0)]).unwrap();
        assert!(!blend.is_strict()); // touches the boundary at z = 1
        assert!(!blend.is_automorphism());

        let rot = DiskSelfMap::rotation(Complex64::from_polar(1.0, 0.7)).unwrap();
        assert!(rot.is_automorphism());
        assert!(!rot.is_strict());

        assert!(hyperbolic().is_automorphism());
        assert!(parabolic().is_automorphism());
    }

    #[test]
    fn mobius_series_matches_pointwise_values() {
        let phi = hyperbolic();
        let s = phi.to_series(96, 0.9).unwrap();
        let eps = s.tail().value();
        assert!(eps < 1e-6);
        for &z in &[c(0.3, 0.2), c(-0.8, 0.1), c(0.0, 0.88)] {
            let direct = phi.eval(z).unwrap();
            let via = s.evaluate(z).unwrap();
            assert!((via - direct).norm() <= eps + 1e-13);
        }
    }

    #[test]
    fn composite_series_matches_pointwise_values() {
        let phi = DiskSelfMap::composite(
            hyperbolic(),
            DiskSelfMap::polynomial(&[ZERO, c(0.0, 0.5), c(0.3, 0.0)]).unwrap(),
        );
        let s = phi.to_series(128, 0.9).unwrap();
        for &z in &[c(0.5, 0.4), c(-0.2, -0.7)] {
            let direct = phi.eval(z).unwrap();
            let via = s.evaluate(z).unwrap();
            assert!((via - direct).norm() < 1e-9, "{}", (via - direct).norm());
        }
    }

    #[test]
    fn jets_match_series_coefficients_at_the_origin() {
        let phi = parabolic();
        let j = phi.jet(ZERO, 5).unwrap();
        let s = phi.to_series(64, 0.9).unwrap();
        for k in 0..=5 {
            assert!((j[k] - s.coeff(k)).norm() < 1e-12);
        }
        // φ(0) = (1 - 2i)/5.
        assert!((j[0] - c(0.2, -0.4)).norm() < 1e-14);
    }

    #[test]
    fn iteration_uses_the_matrix_fast_path() {
        let phi = hyperbolic();
        let three = phi.iterate(3).unwrap();
        let manual = DiskSelfMap::composite(phi.clone(), DiskSelfMap::composite(phi.clone(), phi.clone()));
        assert!(maps_equal(&three, &manual, 1e-12).unwrap());
        // Orbit of 0 under the fast path: φ_m(0) = (1 - 3^-m)/(1 + 3^-m).
        let m20 = phi.iterate(20).unwrap();
        let z = m20.eval(ZERO).unwrap();
        let q = 3.0f64.powi(-20);
        assert_abs_diff_eq!(z.re, (1.0 - q) / (1.0 + q), epsilon = 1e-12);
        // Far iterates collapse onto the boundary attractor and are refused
        // rather than silently misrepresented.
        assert!(matches!(phi.iterate(4000), Err(Error::Unsupported(_))));

        let quad = DiskSelfMap::monomial(2).unwrap();
        let pow4 = quad.iterate(4).unwrap();
        let w = pow4.eval(c(0.9, 0.0)).unwrap();
        assert_abs_diff_eq!(w.re, 0.9f64.powi(16), epsilon = 1e-14);
        assert!(quad.iterate(64).is_err()); // 2^64 coefficients is out of reach
    }

    #[test]
    fn classification_of_the_three_automorphism_types() {
        let rot = DiskSelfMap::rotation(Complex64::from_polar(1.0, 1.1)).unwrap();
        assert_eq!(rot.classify().unwrap().class, MapClass::EllipticAutomorphism);

        let invol = DiskSelfMap::mobius_involution(c(0.5, 0.0)).unwrap();
        let rep = invol.classify().unwrap();
        assert_eq!(rep.class, MapClass::EllipticAutomorphism);
        // Interior fixed point 2 - sqrt(3) with unimodular multiplier.
        let interior = rep
            .fixed_points
            .iter()
            .find(|(z, _)| z.norm() < 1.0 - 1e-6)
            .expect("interior fixed point");
        assert_abs_diff_eq!(interior.0.re, 2.0 - 3.0f64.sqrt(), epsilon = 1e-10);
        assert_abs_diff_eq!(interior.1.norm(), 1.0, epsilon = 1e-10);

        let hyp = hyperbolic().classify().unwrap();
        assert_eq!(hyp.class, MapClass::HyperbolicAutomorphism);
        let mut mults: Vec<f64> = hyp.fixed_points.iter().map(|(_, m)| m.norm()).collect();
        mults.sort_by(|a, b| a.partial_cmp(b).unwrap());
        assert_abs_diff_eq!(mults[0], 1.0 / 3.0, epsilon = 1e-10);
        assert_abs_diff_eq!(mults[1], 3.0, epsilon = 1e-10);

        let par = parabolic().classify().unwrap();
        assert_eq!(par.class, MapClass::ParabolicAutomorphism);
        assert_eq!(par.fixed_points.len(), 1);
        assert!((par.fixed_points[0].0 - ONE).norm() < 1e-7);
        assert_abs_diff_eq!(par.fixed_points[0].1.norm(), 1.0, epsilon = 1e-9);

        let id = DiskSelfMap::identity().classify().unwrap();
        assert_eq!(id.class, MapClass::Identity);

        let half = DiskSelfMap::polynomial(&[ZERO, c(0.5, 0.0)]).unwrap();
        assert_eq!(half.classify().unwrap().class, MapClass::NonAutomorphism);
    }

    #[test]
    fn polynomial_fixed_points_via_roots() {
        // φ(z) = z^2/2 + 1/4 has an attracting fixed point at 1 - sqrt(1/2).
        let phi = DiskSelfMap::polynomial(&[c(0.25, 0.0), ZERO, c(0.5, 0.0)]).unwrap();
        let rep = phi.classify().unwrap();
        assert_eq!(rep.class, MapClass::NonAutomorphism);
        let target = 1.0 - (0.5f64).sqrt();
        assert!(rep.fixed_points.iter().any(|(z, _)| (z - c(target, 0.0)).norm() < 1e-9));
    }

    #[test]
    fn orbit_trichotomy() {
        // Hyperbolic: gaps decay like 3^-m.
        let rec = orbit(&hyperbolic(), ZERO, 200).unwrap();
        assert_eq!(rec.classification, Summability::Summable);

        // Elliptic rotation: the orbit stays on a circle.
        let rot = DiskSelfMap::rotation(Complex64::from_polar(1.0, std::f64::consts::SQRT_2)).unwrap();
        let rec = orbit(&rot, c(0.5, 0.0), 200).unwrap();
        assert_eq!(rec.classification, Summability::Divergent);

        // Parabolic: gaps ~ 2/m^2; summable, but only visibly so once the
        // orbit is long enough.
        let rec = orbit(&parabolic(), ZERO, 200).unwrap();
        assert_eq!(rec.classification, Summability::Summable);
        let rec = orbit(&parabolic(), ZERO, 30).unwrap();
        assert_eq!(rec.classification, Summability::Inconclusive);

        // Orbit values of the parabolic example: z_m = m/(m + 2i).
        let rec = orbit(&parabolic(), ZERO, 50).unwrap();
        let m = 37.0;
        let expect = c(m, 0.0) / c(m, 2.0);
        assert!((rec.points[37] - expect).norm() < 1e-10);
    }

    #[test]
    fn schwarz_grid_bound_holds_for_origin_fixing_maps() {
        let opts = crate::ProbeOptions::default();
        let phi = DiskSelfMap::polynomial(&[ZERO, c(0.5, 0.0), c(0.25, 0.0), c(0.25, 0.0)]).unwrap();
        let v = schwarz_check(&phi, &opts).unwrap();
        assert_eq!(v.status(), crate::verdict::LegStatus::Holds);
        // Maps that move the origin are outside the hypothesis.
        assert!(schwarz_check(&hyperbolic(), &opts).is_err());
    }

    #[test]
    fn rational_form_of_a_composite() {
        let phi = DiskSelfMap::composite(hyperbolic(), DiskSelfMap::monomial(2).unwrap());
        let (num, den) = phi.as_rational().expect("rational form");
        // (z^2 + 1/2)/(1 + z^2/2).
        let at = |coeffs: &[Complex64], z: Complex64| {
            coeffs.iter().rev().fold(ZERO, |acc, &ck| acc * z + ck)
        };
        for &z in &[c(0.3, 0.5), c(-0.6, 0.1)] {
            let direct = phi.eval(z).unwrap();
            let via = at(&num, z) / at(&den, z);
            assert!((via - direct).norm() < 1e-12);
        }
    }
}
