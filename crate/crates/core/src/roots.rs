//! Polynomial root extraction.
//!
//! Roots come from the complex companion-matrix eigenproblem, then get three
//! Newton polishing steps, greedy clustering into multiple roots, and a
//! multiplicity-aware re-polish (`z -> z - m p/p'`, which restores quadratic
//! convergence at an m-fold root). Degrees are capped: past a few dozen the
//! companion eigenproblem stops being trustworthy without balancing
//! machinery out of scope here.

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::tol;

/// Largest supported polynomial degree.
pub const MAX_DEGREE: usize = 64;

/// Roots with multiplicities, plus the worst normalized residual
/// `|p(root)| / max_k |c_k|` over the reported roots.
#[derive(Debug, Clone)]
pub struct PolyRoots {
    pub roots: Vec<(Complex64, usize)>,
    pub residual: f64,
}

impl PolyRoots {
    /// Total root count with multiplicity.
    pub fn degree(&self) -> usize {
        self.roots.iter().map(|&(_, m)| m).sum()
    }
}

fn poly_eval(coeffs: &[Complex64], z: Complex64) -> Complex64 {
    let mut acc = Complex64::new(0.0, 0.0);
    for c in coeffs.iter().rev() {
        acc = acc * z + c;
    }
    acc
}

/// Guarded Newton refinement with step `mult * p / p'`. Steps that jump
/// further than the cluster scale or fail to reduce `|p|` are rejected —
/// near an m-fold root `p/p'` is a quotient of two near-zero values whose
/// rounding noise must not be amplified into a wild correction.
fn polish(p: &[Complex64], dp: &[Complex64], z: &mut Complex64, mult: f64) {
    for _ in 0..3 {
        let pv = poly_eval(p, *z);
        let dv = poly_eval(dp, *z);
        if dv.norm() < 1e-300 {
            return;
        }
        let step = pv * mult / dv;
        if !step.norm().is_finite() || step.norm() > 0.1 {
            return;
        }
        let cand = *z - step;
        if poly_eval(p, cand).norm() < pv.norm() {
            *z = cand;
        } else {
            return;
        }
    }
}

fn poly_derivative(coeffs: &[Complex64]) -> Vec<Complex64> {
    if coeffs.len() <= 1 {
        return vec![Complex64::new(0.0, 0.0)];
    }
    coeffs.iter().enumerate().skip(1).map(|(k, c)| c * k as f64).collect()
}

/// All complex roots of `sum_k coeffs[k] z^k` with multiplicities.
pub fn polynomial_roots(coeffs: &[Complex64]) -> Result<PolyRoots> {
    // Trim trailing zero coefficients to find the true degree.
    let mut c: Vec<Complex64> = coeffs.to_vec();
    while c.len() > 1 && c.last().map_or(false, |v| v.norm() == 0.0) {
        c.pop();
    }
    if c.iter().all(|v| v.norm() == 0.0) {
        return Err(Error::InvalidInput("the zero polynomial has no well-defined roots".into()));
    }
    let n = c.len() - 1;
    if n == 0 {
        return Ok(PolyRoots { roots: Vec::new(), residual: 0.0 });
    }
    if n > MAX_DEGREE {
        return Err(Error::Unsupported(format!(
            "degree {n} exceeds the supported maximum {MAX_DEGREE}"
        )));
    }

    // Exact zero low-order coefficients give exact roots at the origin.
    let origin_mult = c.iter().position(|v| v.norm() > 0.0).unwrap_or(0);
    let reduced = &c[origin_mult..];
    let m = reduced.len() - 1;

    let mut raw: Vec<Complex64> = Vec::with_capacity(m);
    if m > 0 {
        let lead = reduced[m];
        let mut comp = DMatrix::<Complex64>::zeros(m, m);
        for i in 1..m {
            comp[(i, i - 1)] = Complex64::new(1.0, 0.0);
        }
        for i in 0..m {
            comp[(i, m - 1)] = -reduced[i] / lead;
        }
        let eig = comp
            .eigenvalues()
            .ok_or_else(|| Error::Inconclusive("companion eigenvalue iteration failed".into()))?;
        raw.extend(eig.iter().copied());
    }

    // Newton polish on the reduced polynomial; steps are only accepted when
    // they reduce |p|, so a root that is already at rounding level is left
    // alone instead of being kicked by a noise/noise quotient.
    let dred = poly_derivative(reduced);
    for z in raw.iter_mut() {
        polish(reduced, &dred, z, 1.0);
    }

    // Greedy clustering into multiple roots.
    raw.sort_by(|a, b| {
        a.re.partial_cmp(&b.re).unwrap().then(a.im.partial_cmp(&b.im).unwrap())
    });
    let mut clusters: Vec<(Complex64, usize)> = Vec::new();
    'outer: for z in raw {
        for (center, count) in clusters.iter_mut() {
            if (z - *center).norm() <= tol::ROOT_CLUSTER {
                // Running mean keeps the center stable.
                let k = *count as f64;
                *center = (*center * k + z) / (k + 1.0);
                *count += 1;
                continue 'outer;
            }
        }
        clusters.push((z, 1));
    }

    // Multiplicity-aware re-polish of clustered roots: the step `m p / p'`
    // restores quadratic convergence at an m-fold root.
    for (center, count) in clusters.iter_mut() {
        if *count > 1 {
            polish(reduced, &dred, center, *count as f64);
        }
    }

    let mut roots = Vec::with_capacity(clusters.len() + 1);
    if origin_mult > 0 {
        roots.push((Complex64::new(0.0, 0.0), origin_mult));
    }
    roots.extend(clusters);

    let max_coeff = c.iter().map(|v| v.norm()).fold(0.0f64, f64::max);
    let residual = roots
        .iter()
        .map(|&(z, _)| poly_eval(&c, z).norm() / max_coeff)
        .fold(0.0f64, f64::max);

    Ok(PolyRoots { roots, residual })
}
