//! Disk-function representations shared by the membership and operator
//! layers.
//!
//! Most computations want one of three shapes: a truncated Maclaurin series,
//! the structural product `θ(z) · g(z)` of an inner function and a series,
//! or the exact composite `(θ ∘ φ) · φ^j` — the image of `θ · z^j` under a
//! composition operator. [`HpFunction`] unifies them so that checkers can
//! evaluate, take jets, and measure moduli without caring which shape they
//! hold. The structural shapes keep boundary behaviour exact (their
//! log-moduli never underflow, and they are valid on the whole open disk),
//! which matters near singular masses and on the outermost probe circles.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::inner::InnerFunction;
use crate::jet;
use crate::maps::DiskSelfMap;
use crate::series::{samples_p_mean, samples_p_mean_log, DiskGrid, HardyExponent, TaylorSeries};

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

/// A function in a Hardy class: a certified series, a structural product
/// `θ · factor`, or the structural composite `(θ ∘ φ) · φ^power`.
#[derive(Debug, Clone)]
pub enum HpFunction {
    Series(TaylorSeries),
    InnerTimes { inner: InnerFunction, factor: TaylorSeries },
    Composed { inner: InnerFunction, map: DiskSelfMap, power: usize },
}

impl HpFunction {
    pub fn series(s: TaylorSeries) -> Self {
        HpFunction::Series(s)
    }

    pub fn polynomial(coeffs: &[Complex64]) -> Self {
        HpFunction::Series(TaylorSeries::polynomial(coeffs))
    }

    /// `θ(z) · factor(z)` kept structural, so the inner part stays exact on
    /// the whole disk. With an exact polynomial factor this shape is valid
    /// on every probe circle.
    pub fn inner_times(inner: InnerFunction, factor: TaylorSeries) -> Self {
        HpFunction::InnerTimes { inner, factor }
    }

    /// `θ(z) · z^power` — the generators of the shift-invariant family.
    pub fn inner_times_monomial(inner: InnerFunction, power: usize) -> Self {
        HpFunction::InnerTimes { inner, factor: TaylorSeries::monomial(power) }
    }

    /// `(θ ∘ φ)(z) · φ(z)^power`.
    pub fn composed(inner: InnerFunction, map: DiskSelfMap, power: usize) -> Self {
        HpFunction::Composed { inner, map, power }
    }

    /// Radius up to which this representation may be evaluated: the series
    /// certificate for series shapes, the factor's own certificate for
    /// structural products, the whole open disk for composites.
    pub fn certified_radius(&self) -> f64 {
        match self {
            HpFunction::Series(s) => s.domain_radius(),
            HpFunction::InnerTimes { factor, .. } => factor.domain_radius().min(1.0),
            HpFunction::Composed { .. } => 1.0,
        }
    }

    /// Precompose with a map: `f ∘ φ`. Composite shapes stay structural;
    /// the others go through series composition.
    pub fn apply_map(&self, phi: &DiskSelfMap) -> Result<HpFunction> {
        match self {
            HpFunction::Series(s) => {
                // Low-degree polynomials must not shorten the symbol's
                // expansion: a stubby truncation carries a tail bound large
                // enough to fail the composition range check.
                let order = s.order().max(crate::series::DEFAULT_ORDER);
                let phi_series = phi.series_within(order, s.domain_radius())?;
                Ok(HpFunction::Series(s.compose(&phi_series)?))
            }
            HpFunction::InnerTimes { inner, factor } => {
                let theta = inner.to_series(factor.order().max(64), 0.9)?;
                let phi_series = phi.series_within(factor.order().max(64), 0.9)?;
                let composed = (&theta * factor).compose(&phi_series)?;
                Ok(HpFunction::Series(composed))
            }
            HpFunction::Composed { inner, map, power } => Ok(HpFunction::Composed {
                inner: inner.clone(),
                map: DiskSelfMap::composite(map.clone(), phi.clone()),
                power: *power,
            }),
        }
    }

    pub fn eval(&self, z: Complex64) -> Result<Complex64> {
        match self {
            HpFunction::Series(s) => s.evaluate(z),
            HpFunction::InnerTimes { inner, factor } => {
                Ok(inner.eval(z)? * factor.evaluate(z)?)
            }
            HpFunction::Composed { inner, map, power } => {
                let w = map.eval(z)?;
                Ok(inner.eval(w)? * w.powu(*power as u32))
            }
        }
    }

    /// `ln |f(z)|`, exact (underflow-free) for structural shapes; `-inf` at
    /// a zero is legitimate.
    pub fn log_modulus(&self, z: Complex64) -> Result<f64> {
        match self {
            HpFunction::Series(s) => Ok(s.evaluate(z)?.norm().ln()),
            HpFunction::InnerTimes { inner, factor } => {
                Ok(inner.eval_log_modulus(z)? + factor.evaluate(z)?.norm().ln())
            }
            HpFunction::Composed { inner, map, power } => {
                let w = map.eval(z)?;
                Ok(inner.eval_log_modulus(w)? + *power as f64 * w.norm().ln())
            }
        }
    }

    /// Local expansion `[f(w), f'(w), f''(w)/2, ...]`.
    pub fn jet(&self, w: Complex64, k: usize) -> Result<Vec<Complex64>> {
        match self {
            HpFunction::Series(s) => jet::series_jet(s, w, k),
            HpFunction::InnerTimes { inner, factor } => {
                let ij = inner.jet(w, k)?;
                let fj = jet::series_jet(factor, w, k)?;
                let mut acc = jet::jmul(&ij, &fj);
                acc.resize(k + 1, ZERO);
                Ok(acc)
            }
            HpFunction::Composed { inner, map, power } => {
                let mj = map.jet(w, k)?;
                let ij = inner.jet(mj[0], k)?;
                let mut acc = jet::jcompose(&ij, &mj);
                acc.resize(k + 1, ZERO);
                for _ in 0..*power {
                    acc = jet::jmul(&acc, &mj);
                    acc.resize(k + 1, ZERO);
                }
                Ok(acc)
            }
        }
    }

    /// Does `f` vanish to order at least `m` at `w`? Decided from the jet
    /// with a relative band: coefficients below 1e-9 of the jet's scale are
    /// dead, between 1e-9 and 1e-6 is refused as ambiguous.
    pub fn vanishes_to_order(&self, w: Complex64, m: usize) -> Result<bool> {
        if m == 0 {
            return Ok(true);
        }
        let jet = self.jet(w, m)?;
        let scale = jet.iter().map(|c| c.norm()).fold(0.0f64, f64::max);
        if scale == 0.0 {
            return Ok(true);
        }
        let mut gray = false;
        for c in jet.iter().take(m) {
            let rel = c.norm() / scale;
            if rel > 1e-6 {
                return Ok(false);
            }
            if rel > 1e-9 {
                gray = true;
            }
        }
        if gray {
            return Err(Error::Inconclusive(format!(
                "jet coefficients at {w} sit in the gray band between live and dead"
            )));
        }
        Ok(true)
    }

    /// Values on the circle of radius `r` at `m` equispaced angles.
    pub fn circle_values(&self, r: f64, m: usize) -> Result<Vec<Complex64>> {
        match self {
            HpFunction::Series(s) => s.values_on_circle(r, m),
            _ => (0..m)
                .map(|j| {
                    let t = 2.0 * std::f64::consts::PI * j as f64 / m as f64;
                    self.eval(Complex64::from_polar(r, t))
                })
                .collect(),
        }
    }

    /// Log-moduli on the circle of radius `r` (exact for structural shapes).
    pub fn log_circle_values(&self, r: f64, m: usize) -> Result<Vec<f64>> {
        (0..m)
            .map(|j| {
                let t = 2.0 * std::f64::consts::PI * j as f64 / m as f64;
                self.log_modulus(Complex64::from_polar(r, t))
            })
            .collect()
    }

    /// Hardy-class p-norm estimate: sup over the grid's radii (clamped to
    /// the certified radius) of the p-mean on each circle, computed in log
    /// space so heavy singular factors cannot underflow.
    pub fn p_norm(&self, p: HardyExponent, grid: &DiskGrid) -> Result<f64> {
        let mut best = f64::NEG_INFINITY;
        for r in clamp_radii(grid.radii(), self.certified_radius()) {
            let logs = self.log_circle_values(r, grid.angles())?;
            best = best.max(samples_p_mean_log(&logs, p));
        }
        Ok((best / p.value()).exp())
    }

    /// Plain-arithmetic p-mean on one circle (for cross-checks against the
    /// log-space path).
    pub fn p_mean_on_circle(&self, p: HardyExponent, r: f64, m: usize) -> Result<f64> {
        let vals = self.circle_values(r, m)?;
        let mods: Vec<f64> = vals.iter().map(|v| v.norm()).collect();
        Ok(samples_p_mean(&mods, p))
    }

    /// Truncated series form. Structural shapes are composed through a
    /// radius ladder, so the certificate may live on a shrunk disk.
    pub fn to_series(&self, order: usize) -> Result<TaylorSeries> {
        match self {
            HpFunction::Series(s) => Ok(s.clone()),
            HpFunction::InnerTimes { inner, factor } => {
                Ok(&inner.to_series(order, 0.9)? * factor)
            }
            HpFunction::Composed { inner, map, power } => {
                let theta = inner.to_series(order, 0.9)?;
                let phi = map.series_within(order, 0.9)?;
                let mut acc = theta.compose(&phi)?;
                for _ in 0..*power {
                    acc = &acc * &phi;
                }
                Ok(acc)
            }
        }
    }
}

/// Grid radii that stay within a representation's certificate; falls back
/// to the certificate radius itself when the whole grid is outside.
pub fn clamp_radii(radii: &[f64], certified: f64) -> Vec<f64> {
    let kept: Vec<f64> = radii.iter().copied().filter(|&r| r <= certified).collect();
    if kept.is_empty() {
        vec![certified]
    } else {
        kept
    }
}
