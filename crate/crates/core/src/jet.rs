//! Pointwise Taylor jets.
//!
//! A *jet* of order `k` at a point `w` is the coefficient vector
//! `[f(w), f'(w)/1!, f''(w)/2!, ...]` of the local expansion
//! `f(z) = sum_j a_j (z - w)^j`. Jets give exact low-order local data —
//! multiplicities, local factors, images of points — in `O(k^2)` without
//! composing global series, which is both faster and free of truncation
//! error in the retained orders.
//!
//! All jet arithmetic truncates at the shorter input: coefficient `m` of a
//! product or quotient needs both inputs up to order `m`.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::series::TaylorSeries;

/// Cauchy product of two jets, truncated to the shorter length.
pub(crate) fn jmul(a: &[Complex64], b: &[Complex64]) -> Vec<Complex64> {
    let len = a.len().min(b.len());
    let mut out = vec![Complex64::new(0.0, 0.0); len];
    for m in 0..len {
        let mut s = Complex64::new(0.0, 0.0);
        for i in 0..=m {
            s += a[i] * b[m - i];
        }
        out[m] = s;
    }
    out
}

/// Jet quotient `a / b`; requires `b[0] != 0`.
pub(crate) fn jdiv(a: &[Complex64], b: &[Complex64]) -> Result<Vec<Complex64>> {
    let len = a.len().min(b.len());
    if len == 0 {
        return Ok(Vec::new());
    }
    if b[0].norm() == 0.0 {
        return Err(Error::InvalidInput("jet division by a jet with zero constant term".into()));
    }
    let mut out = vec![Complex64::new(0.0, 0.0); len];
    for m in 0..len {
        let mut s = a[m];
        for i in 1..=m {
            s -= b[i] * out[m - i];
        }
        out[m] = s / b[0];
    }
    Ok(out)
}

/// Jet exponential: if `a` is the jet of `w(z)` then the result is the jet
/// of `exp(w(z))`, via the recurrence `k E_k = sum_{j=1..k} j a_j E_{k-j}`.
pub(crate) fn jexp(a: &[Complex64]) -> Vec<Complex64> {
    if a.is_empty() {
        return Vec::new();
    }
    let mut out = vec![Complex64::new(0.0, 0.0); a.len()];
    out[0] = a[0].exp();
    for k in 1..a.len() {
        let mut s = Complex64::new(0.0, 0.0);
        for j in 1..=k {
            s += a[j] * (j as f64) * out[k - j];
        }
        out[k] = s / (k as f64);
    }
    out
}

/// Jet of `f ∘ g` at the base point of `inner`, given `outer` = jet of `f`
/// at `inner[0]` and `inner` = jet of `g`. Horner in the zero-constant part
/// of `inner`.
pub(crate) fn jcompose(outer: &[Complex64], inner: &[Complex64]) -> Vec<Complex64> {
    let len = outer.len().min(inner.len());
    if len == 0 {
        return Vec::new();
    }
    let mut shifted = inner[..len].to_vec();
    shifted[0] = Complex64::new(0.0, 0.0);
    let mut acc = vec![Complex64::new(0.0, 0.0); len];
    acc[0] = outer[len - 1];
    for j in (0..len - 1).rev() {
        acc = jmul(&acc, &shifted);
        acc.resize(len, Complex64::new(0.0, 0.0));
        acc[0] += outer[j];
    }
    acc
}

/// Jet of the polynomial `sum_i coeffs[i] z^i` at `w`, to order `k`, by
/// repeated synthetic division (Horner–Ruffini).
pub(crate) fn taylor_shift(coeffs: &[Complex64], w: Complex64, k: usize) -> Vec<Complex64> {
    let mut work: Vec<Complex64> = coeffs.to_vec();
    let mut out = Vec::with_capacity(k + 1);
    for _ in 0..=k {
        if work.is_empty() {
            out.push(Complex64::new(0.0, 0.0));
            continue;
        }
        if work.len() == 1 {
            out.push(work[0]);
            work.clear();
            continue;
        }
        let n = work.len() - 1;
        let mut quotient = vec![Complex64::new(0.0, 0.0); n];
        let mut acc = work[n];
        for i in (0..n).rev() {
            quotient[i] = acc;
            acc = work[i] + acc * w;
        }
        out.push(acc);
        work = quotient;
    }
    out
}

/// Jet of a stored series truncation at `w` (which must lie in the
/// certified disk). Exact for exact series; for certified truncations the
/// tail is not differentiated and therefore not tracked here — callers use
/// jets for structural (digit-level) decisions inside the certified disk.
pub(crate) fn series_jet(f: &TaylorSeries, w: Complex64, k: usize) -> Result<Vec<Complex64>> {
    if w.norm() > f.domain_radius() * (1.0 + 1e-12) {
        return Err(Error::OutOfDomain { requested: w.norm(), certified: f.domain_radius() });
    }
    Ok(taylor_shift(f.coeffs(), w, k))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn close(a: &[Complex64], b: &[Complex64], tol: f64) {
        assert_eq!(a.len(), b.len());
        for (x, y) in a.iter().zip(b) {
            assert!((x - y).norm() < tol, "{x} vs {y}");
        }
    }

    #[test]
    fn shift_of_binomial_fifth_power() {
        // (1+z)^5 at w = 1: (2 + (z-1))^5, coefficients C(5,j) 2^(5-j).
        let coeffs: Vec<Complex64> = [1.0, 5.0, 10.0, 10.0, 5.0, 1.0]
            .iter()
            .map(|&x| c(x, 0.0))
            .collect();
        let jet = taylor_shift(&coeffs, c(1.0, 0.0), 5);
        let expect: Vec<Complex64> =
            [32.0, 80.0, 80.0, 40.0, 10.0, 1.0].iter().map(|&x| c(x, 0.0)).collect();
        close(&jet, &expect, 1e-12);
    }

    #[test]
    fn division_inverts_multiplication() {
        let b = [c(1.3, -0.2), c(0.4, 0.9), c(-0.7, 0.1), c(0.0, 0.3)];
        let q = [c(0.5, 0.5), c(-1.1, 0.0), c(0.2, -0.2), c(0.9, 0.4)];
        let a = jmul(&b, &q);
        let back = jdiv(&a, &b).unwrap();
        close(&back, &q, 1e-12);
        assert!(jdiv(&a, &[c(0.0, 0.0), c(1.0, 0.0)]).is_err());
    }

    #[test]
    fn exponential_of_the_identity_jet() {
        // exp(z) at 0: coefficients 1/j!.
        let a = [c(0.0, 0.0), c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(0.0, 0.0)];
        let e = jexp(&a);
        let expect: Vec<Complex64> =
            [1.0, 1.0, 0.5, 1.0 / 6.0, 1.0 / 24.0].iter().map(|&x| c(x, 0.0)).collect();
        close(&e, &expect, 1e-12);
    }

    #[test]
    fn exponential_respects_offsets() {
        // exp(1 + 2(z-w)) has jet e * [1, 2, 2, 4/3].
        let a = [c(1.0, 0.0), c(2.0, 0.0), c(0.0, 0.0), c(0.0, 0.0)];
        let e = jexp(&a);
        let base = std::f64::consts::E;
        let expect = [c(base, 0.0), c(2.0 * base, 0.0), c(2.0 * base, 0.0), c(4.0 * base / 3.0, 0.0)];
        close(&e, &expect, 1e-12);
    }

    #[test]
    fn composition_of_square_with_shift() {
        // f = z^2, g = 1 + z near 0: jet of (1+z)^2 is [1, 2, 1].
        let g = [c(1.0, 0.0), c(1.0, 0.0), c(0.0, 0.0)];
        // outer: jet of z^2 at w = g[0] = 1: [1, 2, 1].
        let outer = taylor_shift(&[c(0.0, 0.0), c(0.0, 0.0), c(1.0, 0.0)], c(1.0, 0.0), 2);
        let composed = jcompose(&outer, &g);
        close(&composed, &[c(1.0, 0.0), c(2.0, 0.0), c(1.0, 0.0)], 1e-12);
    }

    #[test]
    fn series_jet_matches_direct_shift() {
        let f = TaylorSeries::polynomial_real(&[1.0, -2.0, 0.0, 3.0]);
        let jet = series_jet(&f, c(0.3, 0.4), 3).unwrap();
        // Evaluate both representations at a nearby point.
        let z = c(0.35, 0.42);
        let dz = z - c(0.3, 0.4);
        let via_jet: Complex64 = jet
            .iter()
            .rev()
            .fold(Complex64::new(0.0, 0.0), |acc, &a| acc * dz + a);
        let direct = f.evaluate(z).unwrap();
        assert!((via_jet - direct).norm() < 1e-12);
        assert!(series_jet(&f, c(1.5, 0.0), 2).is_err());
    }
}
