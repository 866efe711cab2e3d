//! Composition-operator algebra, two-leg agreement across the checker
//! catalog, and boundedness/decay properties of the operator probes.

use hil_core::checkers::{
    check_atomic_singular_hab, check_beurling, check_hab, check_j_hab, check_zn_hab_monomial,
};
use hil_core::compop::CompositionOperator;
use hil_core::deddens::geometric_decay_probe;
use hil_core::inner::InnerFunction;
use hil_core::maps::DiskSelfMap;
use hil_core::series::{p_mean, TaylorSeries};
use hil_core::subspace::AdmissiblePair;
use hil_core::{Complex64, HardyExponent, Leg, LegStatus, ProbeOptions, Verdict};
use nalgebra::DVector;
use proptest::prelude::*;
use rand::Rng;
use rand::SeedableRng;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

fn cx(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn ev(leg: &Leg, key: &str) -> Option<f64> {
    leg.evidence.iter().find(|(k, _)| k == key).map(|(_, v)| *v)
}

fn contraction_coeffs(max_deg: usize, cap: f64, fix_origin: bool) -> impl Strategy<Value = Vec<Complex64>> {
    (
        prop::collection::vec((-1.0..1.0f64, -1.0..1.0f64), 1..=max_deg),
        (-1.0..1.0f64, -1.0..1.0f64),
    )
        .prop_map(move |(tail, head)| {
            let head = if fix_origin { ZERO } else { cx(head.0, head.1) * 0.3 };
            let mass: f64 = tail.iter().map(|(re, im)| cx(*re, *im).norm()).sum();
            let budget = cap - head.norm();
            let scale = if mass > budget { budget / mass } else { 1.0 };
            let mut coeffs = vec![head];
            coeffs.extend(tail.into_iter().map(|(re, im)| cx(re, im) * scale));
            coeffs
        })
}

fn poly_series(max_len: usize) -> impl Strategy<Value = TaylorSeries> {
    prop::collection::vec((-1.0..1.0f64, -1.0..1.0f64), 1..=max_len)
        .prop_map(|c| TaylorSeries::polynomial(&c.into_iter().map(|(re, im)| cx(re, im)).collect::<Vec<_>>()))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    /// Applying the operator twice equals applying the operator of the
    /// second iterate: coefficients agree exactly for polynomial data.
    #[test]
    fn operator_iteration_is_composition(
        f in poly_series(9),
        phi_coeffs in contraction_coeffs(3, 0.8, false),
    ) {
        let phi = DiskSelfMap::polynomial(&phi_coeffs).unwrap();
        let op = CompositionOperator::new(phi.clone());
        let op2 = CompositionOperator::new(phi.iterate(2).unwrap());

        let twice = op.apply(&op.apply(&f).unwrap()).unwrap();
        let direct = op2.apply(&f).unwrap();
        let top = twice.order().max(direct.order());
        let scale = (0..=top).map(|k| direct.coeff(k).norm()).fold(1.0f64, f64::max);
        for k in 0..=top {
            let dev = (twice.coeff(k) - direct.coeff(k)).norm();
            prop_assert!(dev <= 1e-10 * scale, "coeff {k}: dev {dev}");
        }
    }

    /// The truncated matrix acts on coefficient vectors exactly like the
    /// operator itself, up to the truncation row.
    #[test]
    fn matrix_action_matches_operator(
        f in poly_series(12),
        phi_coeffs in contraction_coeffs(3, 0.8, false),
    ) {
        let n = 24usize;
        let phi = DiskSelfMap::polynomial(&phi_coeffs).unwrap();
        let op = CompositionOperator::new(phi);
        let matrix = op.matrix_truncation(n).unwrap();

        let mut vec = DVector::from_element(n, ZERO);
        for k in 0..=f.order().min(n - 1) {
            vec[k] = f.coeff(k);
        }
        let image = &matrix * vec;
        let applied = op.apply(&f).unwrap();
        let scale = (0..n).map(|k| applied.coeff(k).norm()).fold(1.0f64, f64::max);
        for k in 0..n {
            let dev = (image[k] - applied.coeff(k)).norm();
            prop_assert!(dev <= 1e-10 * scale, "row {k}: dev {dev}");
        }
    }

    /// A symbol fixing the origin never increases the squared circle mean
    /// at any radius (subordination).
    #[test]
    fn origin_fixing_symbols_contract_means(
        f in poly_series(10),
        phi_coeffs in contraction_coeffs(4, 0.8, true),
    ) {
        let phi = DiskSelfMap::polynomial(&phi_coeffs).unwrap();
        let op = CompositionOperator::new(phi);
        let composed = op.apply(&f).unwrap();
        let before = p_mean(&f, 0.999, HardyExponent::TWO, 4096).unwrap();
        let after = p_mean(&composed, 0.999, HardyExponent::TWO, 4096).unwrap();
        prop_assert!(after <= before * (1.0 + 1e-6) + 1e-12, "mean grew: {before} -> {after}");
    }
}

// ----------------------------------------------------------------------
// Two-leg agreement across the checker catalog
// ----------------------------------------------------------------------

fn pair_catalog() -> Vec<AdmissiblePair> {
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(2026);
    let mut pairs = vec![
        AdmissiblePair::new(ONE, ZERO).unwrap(),
        AdmissiblePair::new(cx(0.6, 0.0), cx(0.8, 0.0)).unwrap(),
        AdmissiblePair::new(cx(1.0, 0.0), cx(0.0, 1.0)).unwrap(),
    ];
    while pairs.len() < 8 {
        let alpha = cx(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0));
        let beta = cx(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0));
        if alpha.norm() > 0.2 {
            pairs.push(AdmissiblePair::new(alpha, beta).unwrap());
        }
    }
    pairs
}

fn map_catalog() -> Vec<DiskSelfMap> {
    let half = cx(0.5, 0.0);
    vec![
        DiskSelfMap::identity(),
        DiskSelfMap::rotation(cx(0.0, 1.0)).unwrap(),
        DiskSelfMap::monomial(2).unwrap(),
        DiskSelfMap::polynomial(&[ZERO, half]).unwrap(),
        DiskSelfMap::polynomial(&[ZERO, cx(0.3, 0.0), ZERO, cx(0.25, 0.0)]).unwrap(),
        DiskSelfMap::polynomial(&[cx(0.2, 0.1), cx(0.4, 0.0)]).unwrap(),
        DiskSelfMap::mobius_involution(cx(0.3, 0.0)).unwrap(),
        DiskSelfMap::mobius_involution(cx(0.1, 0.4)).unwrap(),
        DiskSelfMap::mobius(ONE, half, half, ONE).unwrap(),
        DiskSelfMap::constant(cx(0.2, 0.1)).unwrap(),
        DiskSelfMap::composite(
            DiskSelfMap::rotation(cx(0.0, -1.0)).unwrap(),
            DiskSelfMap::mobius_involution(cx(0.25, -0.2)).unwrap(),
        ),
    ]
}

fn theta_catalog() -> Vec<InnerFunction> {
    vec![
        InnerFunction::monomial(1),
        InnerFunction::monomial(2),
        InnerFunction::blaschke_factor(cx(0.5, 0.0)).unwrap(),
        InnerFunction::new(
            ONE,
            1,
            vec![hil_core::inner::BlaschkeZero { a: cx(0.5, 0.0), mult: 1 }],
            vec![],
        )
        .unwrap(),
        InnerFunction::new(
            ONE,
            0,
            vec![
                hil_core::inner::BlaschkeZero { a: cx(0.3, 0.0), mult: 1 },
                hil_core::inner::BlaschkeZero { a: cx(-0.4, 0.0), mult: 1 },
            ],
            vec![],
        )
        .unwrap(),
        InnerFunction::atom(0.0, 0.7).unwrap(),
        InnerFunction::new(
            ONE,
            1,
            vec![],
            vec![hil_core::inner::SingularAtom { t: std::f64::consts::PI, c: 0.5 }],
        )
        .unwrap(),
    ]
}

/// Whenever both legs of a verdict are conclusive they must agree; this
/// sweeps every checker over a catalog of subspaces and symbols.
#[test]
fn checker_legs_never_disagree() {
    let opts = ProbeOptions::default();
    let pairs = pair_catalog();
    let maps = map_catalog();
    let thetas = theta_catalog();

    let mut conclusive = 0usize;
    let mut total = 0usize;
    let mut tally = |label: String, v: &Verdict| {
        total += 1;
        assert_ne!(v.agreement(), Some(false), "{label}: legs disagree ({v:?})");
        if v.agreement() == Some(true) {
            conclusive += 1;
        }
    };

    for (pi, pair) in pairs.iter().enumerate() {
        for (mi, phi) in maps.iter().enumerate() {
            let v = check_hab(pair, phi, &opts).unwrap();
            tally(format!("pair[{pi}] map[{mi}] weighted"), &v);
        }
    }

    for n in 1..=3usize {
        for k in 1..=4u32 {
            for (pi, pair) in pairs.iter().enumerate().skip(1) {
                let v = check_zn_hab_monomial(n, k, pair, &opts).unwrap();
                tally(format!("monomial n={n} k={k} pair[{pi}]"), &v);
            }
        }
    }

    for (ti, theta) in thetas.iter().enumerate() {
        for (mi, phi) in maps.iter().enumerate() {
            let v = check_beurling(theta, phi, &opts).unwrap();
            tally(format!("divisor[{ti}] map[{mi}] beurling"), &v);
        }
    }

    let j_divisors = [
        InnerFunction::blaschke_factor(cx(0.5, 0.0)).unwrap(),
        InnerFunction::monomial(2),
        InnerFunction::new(
            ONE,
            0,
            vec![
                hil_core::inner::BlaschkeZero { a: cx(0.3, 0.0), mult: 1 },
                hil_core::inner::BlaschkeZero { a: cx(0.0, 0.4), mult: 1 },
            ],
            vec![],
        )
        .unwrap(),
    ];
    for (ji, j_inner) in j_divisors.iter().enumerate() {
        for (pi, pair) in pairs.iter().enumerate().take(4) {
            for (mi, phi) in maps.iter().enumerate().take(6) {
                match check_j_hab(j_inner, pair, phi, &opts) {
                    Ok(v) => tally(format!("J[{ji}] pair[{pi}] map[{mi}]"), &v),
                    Err(hil_core::Error::CollapseDetected) => {}
                    Err(e) => panic!("J[{ji}] pair[{pi}] map[{mi}]: {e}"),
                }
            }
        }
    }

    for lambda in [0.25, 0.5, 1.0] {
        for (pi, pair) in pairs.iter().enumerate().take(6) {
            for phi in [&maps[0], &maps[3], &maps[6]] {
                let v = check_atomic_singular_hab(lambda, pair, phi, &opts).unwrap();
                tally(format!("atom λ={lambda} pair[{pi}]"), &v);
            }
        }
    }

    assert!(total >= 350, "catalog shrank to {total} verdicts");
    assert!(
        conclusive * 2 >= total,
        "only {conclusive}/{total} verdicts conclusive on both legs"
    );
}

/// The identity symbol leaves every subspace invariant, across all checkers.
#[test]
fn identity_symbol_is_universally_invariant() {
    let opts = ProbeOptions::default();
    let id = DiskSelfMap::identity();

    for pair in pair_catalog() {
        let v = check_hab(&pair, &id, &opts).unwrap();
        assert_eq!(v.criterion.status, LegStatus::Holds);
    }
    for theta in theta_catalog() {
        let v = check_beurling(&theta, &id, &opts).unwrap();
        assert_eq!(v.criterion.status, LegStatus::Holds);
    }
    // The monomial-image checker requires β ≠ 0; the first catalog entry
    // is the classic (1, 0) pair, so skip it.
    for pair in pair_catalog().into_iter().skip(1).take(4) {
        for n in 1..=3 {
            let v = check_zn_hab_monomial(n, 1, &pair, &opts).unwrap();
            assert_eq!(v.criterion.status, LegStatus::Holds, "n={n}");
        }
    }
}

/// Invariance of the monomial-shifted subspaces is monotone in the shift
/// order: once the image criterion holds at n, it holds at n+1.
#[test]
fn monomial_shift_invariance_is_monotone() {
    let opts = ProbeOptions::default();
    for pair in pair_catalog().into_iter().skip(1).take(5) {
        for k in 1..=5u32 {
            let mut previous = None;
            for n in 1..=4usize {
                let v = check_zn_hab_monomial(n, k, &pair, &opts).unwrap();
                let holds = v.criterion.status == LegStatus::Holds;
                if previous == Some(true) {
                    assert!(holds, "invariance lost going to n={n}, k={k}");
                }
                previous = Some(holds);
            }
        }
    }
}

/// A Holds verdict from the divisor checker comes with a certified small
/// sup of the log-quotient whenever the sup leg was exercised.
#[test]
fn beurling_holds_implies_schur_quotient() {
    let opts = ProbeOptions::default();
    let cases: Vec<(InnerFunction, DiskSelfMap)> = vec![
        (InnerFunction::monomial(1), DiskSelfMap::monomial(2).unwrap()),
        (InnerFunction::monomial(2), DiskSelfMap::monomial(3).unwrap()),
        (
            InnerFunction::monomial(1),
            DiskSelfMap::polynomial(&[ZERO, cx(0.5, 0.0)]).unwrap(),
        ),
        (
            InnerFunction::atom(0.0, 0.7).unwrap(),
            DiskSelfMap::identity(),
        ),
    ];
    for (theta, phi) in cases {
        let v = check_beurling(&theta, &phi, &opts).unwrap();
        assert_eq!(v.criterion.status, LegStatus::Holds);
        if let Some(sup_log) = ev(&v.criterion, "sup_log_quotient") {
            assert!(
                sup_log <= opts.tol_sup + 1e-12,
                "certified sup {sup_log} above tolerance"
            );
        }
    }
}

// ----------------------------------------------------------------------
// Operator probes: vanishing orders, exchange identity, decay rates
// ----------------------------------------------------------------------

/// Composition (with an origin-fixing symbol), multiplication, and
/// integration never lower the vanishing order at the origin; integration
/// raises it by exactly one.
#[test]
fn probe_operators_respect_vanishing_order() {
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(314);
    let h = TaylorSeries::polynomial(&[ONE, cx(0.5, 0.0)]);
    for trial in 0..100 {
        let v = rng.random_range(0..=5usize);
        let deg = rng.random_range(0..=5usize);
        let mut coeffs = vec![ZERO; v];
        for j in 0..=deg {
            let c = cx(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0));
            coeffs.push(if j == 0 { c + cx(0.5, 0.0) } else { c });
        }
        let f = TaylorSeries::polynomial(&coeffs);

        let phi = DiskSelfMap::polynomial(&[ZERO, cx(0.6, 0.0), cx(0.2, 0.0)]).unwrap();
        let composed = f.compose(&phi.to_series(64, 0.9).unwrap()).unwrap();
        for k in 0..v {
            assert!(
                composed.coeff(k).norm() <= 1e-12,
                "trial {trial}: composition leaked to order {k}"
            );
        }

        let product = &f * &h;
        for k in 0..v {
            assert!(product.coeff(k).norm() <= 1e-12);
        }

        let primitive = f.antiderivative();
        for k in 0..=v {
            assert!(primitive.coeff(k).norm() <= 1e-15);
        }
        let expected = f.coeff(v) / Complex64::new(v as f64 + 1.0, 0.0);
        assert!(
            (primitive.coeff(v + 1) - expected).norm() <= 1e-15,
            "trial {trial}: integration moved the leading term incorrectly"
        );
    }
}

/// The exchange identity between integration and composition holds for
/// random polynomial data: (Vf)∘φⁿ = V((φⁿ)'·(f∘φⁿ)).
#[test]
fn integration_exchange_identity() {
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(2718);
    for trial in 0..40 {
        let deg = rng.random_range(0..=12usize);
        let coeffs: Vec<Complex64> = (0..=deg)
            .map(|_| cx(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)))
            .collect();
        let f = TaylorSeries::polynomial(&coeffs);

        let raw: Vec<Complex64> = (0..3)
            .map(|_| cx(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)))
            .collect();
        let mass: f64 = raw.iter().map(|c| c.norm()).sum();
        let mut phi_coeffs = vec![ZERO];
        phi_coeffs.extend(raw.iter().map(|c| c * (0.8 / mass.max(0.8))));
        let phi = DiskSelfMap::polynomial(&phi_coeffs).unwrap();

        let n = 1 + trial % 6;
        let phi_n = phi.iterate(n).unwrap().to_series(256, 0.9).unwrap();
        let lhs = f.antiderivative().compose(&phi_n).unwrap();
        let rhs = (&phi_n.derivative() * &f.compose(&phi_n).unwrap()).antiderivative();

        let top = lhs.order().max(rhs.order());
        let scale = (0..=top).map(|k| lhs.coeff(k).norm()).fold(1.0f64, f64::max);
        for k in 0..=top {
            let dev = (lhs.coeff(k) - rhs.coeff(k)).norm();
            assert!(dev <= 1e-8 * scale, "trial {trial}, coeff {k}: dev {dev}");
        }
    }
}

/// For linear symbols δz the measured decay rate of the gap between
/// consecutive vanishing-order levels matches (m−k)·p·log δ within 5%.
#[test]
fn decay_rate_matches_linear_symbol_prediction() {
    let opts = ProbeOptions::default();
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(1618);
    let f = TaylorSeries::polynomial(&[ONE, cx(0.3, 0.2), cx(-0.1, 0.4)]);
    for _ in 0..6 {
        let delta = rng.random_range(0.25..0.75);
        let m = rng.random_range(2..=4usize);
        let k = rng.random_range(0..m);
        let phi = DiskSelfMap::polynomial(&[ZERO, cx(delta, 0.0)]).unwrap();
        let v = geometric_decay_probe(&phi, m, k, &f, HardyExponent::TWO, 40, &opts).unwrap();
        assert_eq!(v.criterion.status, LegStatus::Holds, "δ={delta}, m={m}, k={k}");
        let expected = ev(&v.criterion, "expected_log_rate").unwrap();
        let fitted = ev(&v.criterion, "fitted_log_rate").unwrap();
        assert!(
            (fitted - expected).abs() <= 0.05 * expected.abs(),
            "δ={delta}, m={m}, k={k}: fitted {fitted} vs expected {expected}"
        );
    }
}
