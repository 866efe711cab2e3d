//! Structural invariants of the certified series arithmetic.

use hil_core::series::{p_mean, TaylorSeries};
use hil_core::{Complex64, HardyExponent};
use proptest::prelude::*;

fn cplx() -> impl Strategy<Value = Complex64> {
    (-1.0..1.0f64, -1.0..1.0f64).prop_map(|(re, im)| Complex64::new(re, im))
}

fn poly(max_len: usize) -> impl Strategy<Value = TaylorSeries> {
    prop::collection::vec(cplx(), 1..=max_len).prop_map(|c| TaylorSeries::polynomial(&c))
}

/// A polynomial self-map with coefficient mass at most `cap` (hence a
/// strict self-map of the disk) and no constant term.
fn contraction_coeffs(max_deg: usize, cap: f64) -> impl Strategy<Value = Vec<Complex64>> {
    prop::collection::vec(cplx(), 1..=max_deg).prop_map(move |tail| {
        let mass: f64 = tail.iter().map(|c| c.norm()).sum();
        let scale = if mass > cap { cap / mass } else { 1.0 };
        let mut coeffs = vec![Complex64::new(0.0, 0.0)];
        coeffs.extend(tail.into_iter().map(|c| c * scale));
        coeffs
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    /// Circle means of |f|² at radius r reproduce Σ|aₖ|² r^{2k}. The
    /// sample count exceeds twice the degree, so the discrete mean is the
    /// exact coefficient sum up to rounding.
    #[test]
    fn squared_mean_matches_coefficient_sum(f in poly(16)) {
        let r = 1.0 - 1e-8;
        let mean = p_mean(&f, r, HardyExponent::TWO, 4096).unwrap();
        let direct: f64 = (0..=f.order())
            .map(|k| f.coeff(k).norm_sqr() * r.powi(2 * k as i32))
            .sum();
        let scale = 1.0 + direct;
        prop_assert!((mean - direct).abs() <= 1e-6 * scale, "mean {mean} vs {direct}");
    }

    /// Integral p-means grow with the radius.
    #[test]
    fn means_grow_with_radius(f in poly(12), p in prop::sample::select(vec![1.0, 2.0, 4.0])) {
        let p = HardyExponent::new(p).unwrap();
        let lo = p_mean(&f, 0.5, p, 2048).unwrap();
        let hi = p_mean(&f, 0.9, p, 2048).unwrap();
        prop_assert!(lo <= hi * (1.0 + 1e-9) + 1e-12, "lo {lo} hi {hi}");
    }

    /// Composition of polynomial maps is associative at the level of
    /// exact coefficients.
    #[test]
    fn composition_is_associative(
        f in poly(8),
        g in contraction_coeffs(3, 0.8),
        h in contraction_coeffs(3, 0.8),
    ) {
        let g = TaylorSeries::polynomial(&g);
        let h = TaylorSeries::polynomial(&h);
        let left = f.compose(&g).unwrap().compose(&h).unwrap();
        let right = f.compose(&g.compose(&h).unwrap()).unwrap();
        let top = left.order().max(right.order());
        let scale = (0..=top).map(|k| left.coeff(k).norm()).fold(1.0f64, f64::max);
        for k in 0..=top {
            let dev = (left.coeff(k) - right.coeff(k)).norm();
            prop_assert!(dev <= 1e-10 * scale, "coeff {k}: dev {dev} (scale {scale})");
        }
    }

    /// Differentiating the antiderivative gives the function back;
    /// integrating the derivative drops only the constant term.
    #[test]
    fn antiderivative_roundtrip(f in poly(14)) {
        let back = f.antiderivative().derivative();
        for k in 0..=f.order() {
            prop_assert!((back.coeff(k) - f.coeff(k)).norm() <= 1e-12);
        }
        let shifted = f.derivative().antiderivative();
        prop_assert!(shifted.coeff(0).norm() <= 1e-15);
        for k in 1..=f.order() {
            prop_assert!((shifted.coeff(k) - f.coeff(k)).norm() <= 1e-12);
        }
    }
}
