//! Serialize/reparse round-trips for every job-input shape: the reparsed
//! object must agree with the original pointwise well below reporting
//! tolerances.

use hil_cli::schema::{
    inner_to_json, map_to_json, pair_to_json, parse_inner, parse_map, parse_pair,
};
use hil_core::inner::{BlaschkeZero, InnerFunction, SingularAtom};
use hil_core::maps::DiskSelfMap;
use hil_core::subspace::AdmissiblePair;
use hil_core::Complex64;

fn cx(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// 64 deterministic sample points spread over |z| <= 0.9.
fn sample_points() -> Vec<Complex64> {
    (0..64)
        .map(|k| {
            let r = 0.9 * ((k as f64) + 1.0) / 64.0;
            let t = 2.0 * std::f64::consts::PI * (k as f64) / 64.0 + 0.37;
            Complex64::from_polar(r, t)
        })
        .collect()
}

fn map_catalog() -> Vec<DiskSelfMap> {
    let rot = DiskSelfMap::rotation(cx(0.0, 1.0)).unwrap();
    let half = DiskSelfMap::polynomial(&[cx(0.0, 0.0), cx(0.5, 0.0)]).unwrap();
    vec![
        DiskSelfMap::identity(),
        rot.clone(),
        DiskSelfMap::monomial(3).unwrap(),
        DiskSelfMap::mobius(cx(1.0, 0.0), cx(0.5, 0.0), cx(0.5, 0.0), cx(1.0, 0.0)).unwrap(),
        DiskSelfMap::polynomial(&[cx(0.1, 0.05), cx(0.3, 0.0), cx(0.0, 0.25)]).unwrap(),
        DiskSelfMap::constant(cx(0.2, -0.3)).unwrap(),
        DiskSelfMap::composite(rot, half),
    ]
}

#[test]
fn maps_survive_serialize_reparse() {
    let pts = sample_points();
    for phi in map_catalog() {
        let v = map_to_json(&phi);
        let back = parse_map(&v, "roundtrip").unwrap_or_else(|e| panic!("{v}: {e}"));
        for &z in &pts {
            let a = phi.eval(z).unwrap();
            let b = back.eval(z).unwrap();
            assert!(
                (a - b).norm() <= 1e-12,
                "map {v} drifts at {z}: {a} vs {b}"
            );
        }
    }
}

#[test]
fn inner_functions_survive_serialize_reparse() {
    let thetas = vec![
        InnerFunction::monomial(2),
        InnerFunction::blaschke_factor(cx(0.5, 0.0)).unwrap(),
        InnerFunction::new(
            cx(0.0, 1.0),
            1,
            vec![
                BlaschkeZero { a: cx(0.3, 0.2), mult: 2 },
                BlaschkeZero { a: cx(-0.4, 0.0), mult: 1 },
            ],
            vec![SingularAtom { t: 0.0, c: 0.7 }, SingularAtom { t: 1.2, c: 0.3 }],
        )
        .unwrap(),
        InnerFunction::atom(std::f64::consts::PI, 1.5).unwrap(),
    ];
    let pts = sample_points();
    for theta in thetas {
        let v = inner_to_json(&theta);
        let back = parse_inner(&v, "roundtrip").unwrap_or_else(|e| panic!("{v}: {e}"));
        for &z in &pts {
            let a = theta.eval(z).unwrap();
            let b = back.eval(z).unwrap();
            assert!(
                (a - b).norm() <= 1e-12,
                "inner {v} drifts at {z}: {a} vs {b}"
            );
        }
    }
}

#[test]
fn pairs_survive_serialize_reparse() {
    let pairs = vec![
        AdmissiblePair::new(cx(1.0, 0.0), cx(0.0, 0.0)).unwrap(),
        AdmissiblePair::new(cx(0.6, 0.0), cx(0.8, 0.0)).unwrap(),
        AdmissiblePair::new(cx(0.5, 0.5), cx(-0.5, 0.5)).unwrap(),
    ];
    for pair in pairs {
        let v = pair_to_json(&pair);
        let back = parse_pair(&v, "roundtrip").unwrap_or_else(|e| panic!("{v}: {e}"));
        assert!((pair.alpha() - back.alpha()).norm() <= 1e-12);
        assert!((pair.beta() - back.beta()).norm() <= 1e-12);
    }
}

#[test]
fn compose_lists_fold_leftmost_applied_last() {
    // ["rotation i", "monomial 2"] must mean z ↦ i·(z²).
    let v: serde_json::Value =
        serde_json::from_str(r#"{"compose":[{"rotation":[0,1]},{"monomial":2}]}"#).unwrap();
    let phi = parse_map(&v, "test").unwrap();
    let z = cx(0.5, 0.2);
    let expected = cx(0.0, 1.0) * z * z;
    assert!((phi.eval(z).unwrap() - expected).norm() <= 1e-14);
}

#[test]
fn schema_violations_point_at_the_offending_field() {
    let bad_pair: serde_json::Value =
        serde_json::from_str(r#"{"alpha":[0.6,0],"beta":[0.6,0]}"#).unwrap();
    let e = parse_pair(&bad_pair, "--pair").unwrap_err();
    assert!(e.to_string().contains("--pair"), "{e}");
    assert!(e.to_string().contains("|alpha|"), "{e}");

    let bad_map: serde_json::Value = serde_json::from_str(r#"{"warp":[0,1]}"#).unwrap();
    let e = parse_map(&bad_map, "--phi").unwrap_err();
    assert!(e.to_string().contains("--phi"), "{e}");

    let bad_inner: serde_json::Value =
        serde_json::from_str(r#"{"m0":1,"spikes":[]}"#).unwrap();
    let e = parse_inner(&bad_inner, "--theta").unwrap_err();
    assert!(e.to_string().contains("spikes"), "{e}");
}
