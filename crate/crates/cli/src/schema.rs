//! JSON schemas for the objects the CLI accepts and echoes.
//!
//! Complex numbers are always two-element arrays `[re, im]`.
//!
//! Disk self-maps are one-key objects (the bare string `"identity"` is also
//! accepted):
//!
//! * `{"identity": true}`
//! * `{"rotation": [re, im]}` — `z ↦ uz`, `|u| = 1`
//! * `{"monomial": k}` — `z ↦ z^k`
//! * `{"mobius": {"a": [..], "b": [..], "c": [..], "d": [..]}}` — `(az+b)/(cz+d)`
//! * `{"poly": [[re, im], …]}` — coefficients from degree 0 upward
//! * `{"constant": [re, im]}`
//! * `{"compose": [map, …]}` — function composition, leftmost applied last
//!
//! Inner functions are objects with optional fields: `lambda` (unimodular
//! constant, default 1), `m0` (origin zero multiplicity, default 0),
//! `blaschke` (list of `{"a": [re, im], "mult": m}`) and `atoms` (list of
//! `{"t": radians, "c": weight}` boundary point masses).
//!
//! Admissible pairs are `{"alpha": [re, im], "beta": [re, im]}` and must
//! satisfy `|alpha|² + |beta|² = 1` within 1e-9, with `alpha ≠ 0`.

use hil_core::inner::{BlaschkeZero, InnerFunction, SingularAtom};
use hil_core::maps::{DiskSelfMap, MapKind};
use hil_core::subspace::AdmissiblePair;
use hil_core::Complex64;
use serde_json::{json, Value};

/// A schema violation, carrying a path to the offending field.
#[derive(Debug, Clone)]
pub struct SchemaError {
    pub path: String,
    pub message: String,
}

impl std::fmt::Display for SchemaError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "at {}: {}", self.path, self.message)
    }
}

impl std::error::Error for SchemaError {}

fn err(path: &str, message: impl Into<String>) -> SchemaError {
    SchemaError { path: path.to_string(), message: message.into() }
}

fn core_err(path: &str, e: hil_core::Error) -> SchemaError {
    err(path, e.to_string())
}

pub fn parse_complex(v: &Value, path: &str) -> Result<Complex64, SchemaError> {
    let arr = v.as_array().ok_or_else(|| err(path, "expected a [re, im] pair"))?;
    if arr.len() != 2 {
        return Err(err(path, format!("expected 2 entries, got {}", arr.len())));
    }
    let re = arr[0].as_f64().ok_or_else(|| err(&format!("{path}[0]"), "expected a number"))?;
    let im = arr[1].as_f64().ok_or_else(|| err(&format!("{path}[1]"), "expected a number"))?;
    Ok(Complex64::new(re, im))
}

pub fn complex_to_json(z: Complex64) -> Value {
    json!([z.re, z.im])
}

/// Parse a JSON string into a value, reporting the flag name on failure.
pub fn parse_json_arg(raw: &str, path: &str) -> Result<Value, SchemaError> {
    serde_json::from_str(raw).map_err(|e| err(path, format!("invalid JSON: {e}")))
}

// ----------------------------------------------------------------------
// Disk self-maps
// ----------------------------------------------------------------------

pub fn parse_map(v: &Value, path: &str) -> Result<DiskSelfMap, SchemaError> {
    if let Some(s) = v.as_str() {
        if s == "identity" {
            return Ok(DiskSelfMap::identity());
        }
        return Err(err(path, format!("unknown map literal {s:?}")));
    }
    let obj = v
        .as_object()
        .ok_or_else(|| err(path, "expected a one-key map object or \"identity\""))?;
    if obj.len() != 1 {
        return Err(err(path, format!("expected exactly one key, got {}", obj.len())));
    }
    let (key, payload) = obj.iter().next().expect("length checked");
    let sub = format!("{path}.{key}");
    match key.as_str() {
        "identity" => Ok(DiskSelfMap::identity()),
        "rotation" => {
            let u = parse_complex(payload, &sub)?;
            DiskSelfMap::rotation(u).map_err(|e| core_err(&sub, e))
        }
        "monomial" => {
            let k = payload
                .as_u64()
                .ok_or_else(|| err(&sub, "expected a nonnegative integer exponent"))?;
            let k = u32::try_from(k).map_err(|_| err(&sub, "exponent out of range"))?;
            DiskSelfMap::monomial(k).map_err(|e| core_err(&sub, e))
        }
        "mobius" => {
            let m = payload.as_object().ok_or_else(|| err(&sub, "expected {a, b, c, d}"))?;
            let coeff = |name: &str| -> Result<Complex64, SchemaError> {
                let field = m
                    .get(name)
                    .ok_or_else(|| err(&format!("{sub}.{name}"), "missing coefficient"))?;
                parse_complex(field, &format!("{sub}.{name}"))
            };
            let (a, b, c, d) = (coeff("a")?, coeff("b")?, coeff("c")?, coeff("d")?);
            for extra in m.keys() {
                if !matches!(extra.as_str(), "a" | "b" | "c" | "d") {
                    return Err(err(&format!("{sub}.{extra}"), "unknown field"));
                }
            }
            DiskSelfMap::mobius(a, b, c, d).map_err(|e| core_err(&sub, e))
        }
        "poly" => {
            let arr = payload.as_array().ok_or_else(|| err(&sub, "expected a coefficient list"))?;
            let coeffs = arr
                .iter()
                .enumerate()
                .map(|(i, c)| parse_complex(c, &format!("{sub}[{i}]")))
                .collect::<Result<Vec<_>, _>>()?;
            if coeffs.is_empty() {
                return Err(err(&sub, "need at least one coefficient"));
            }
            DiskSelfMap::polynomial(&coeffs).map_err(|e| core_err(&sub, e))
        }
        "constant" => {
            let w = parse_complex(payload, &sub)?;
            DiskSelfMap::constant(w).map_err(|e| core_err(&sub, e))
        }
        "compose" => {
            let arr = payload.as_array().ok_or_else(|| err(&sub, "expected a list of maps"))?;
            if arr.is_empty() {
                return Err(err(&sub, "need at least one map to compose"));
            }
            let parts = arr
                .iter()
                .enumerate()
                .map(|(i, m)| parse_map(m, &format!("{sub}[{i}]")))
                .collect::<Result<Vec<_>, _>>()?;
            let mut acc = parts.last().expect("nonempty").clone();
            for outer in parts.iter().rev().skip(1) {
                acc = DiskSelfMap::composite(outer.clone(), acc);
            }
            Ok(acc)
        }
        other => Err(err(path, format!("unknown map kind {other:?}"))),
    }
}

pub fn map_to_json(phi: &DiskSelfMap) -> Value {
    match phi.kind() {
        MapKind::Identity => json!({"identity": true}),
        MapKind::Rotation(u) => json!({"rotation": complex_to_json(*u)}),
        MapKind::Monomial(k) => json!({"monomial": k}),
        MapKind::Mobius(m) => json!({"mobius": {
            "a": complex_to_json(m.a),
            "b": complex_to_json(m.b),
            "c": complex_to_json(m.c),
            "d": complex_to_json(m.d),
        }}),
        MapKind::Polynomial(coeffs) => {
            json!({"poly": coeffs.iter().map(|c| complex_to_json(*c)).collect::<Vec<_>>()})
        }
        MapKind::Constant(w) => json!({"constant": complex_to_json(*w)}),
        MapKind::Composite(outer, inner) => {
            json!({"compose": [map_to_json(outer), map_to_json(inner)]})
        }
    }
}

// ----------------------------------------------------------------------
// Inner functions
// ----------------------------------------------------------------------

pub fn parse_inner(v: &Value, path: &str) -> Result<InnerFunction, SchemaError> {
    let obj = v.as_object().ok_or_else(|| err(path, "expected an inner-function object"))?;
    for key in obj.keys() {
        if !matches!(key.as_str(), "lambda" | "m0" | "blaschke" | "atoms") {
            return Err(err(&format!("{path}.{key}"), "unknown field"));
        }
    }
    let lambda = match obj.get("lambda") {
        Some(l) => parse_complex(l, &format!("{path}.lambda"))?,
        None => Complex64::new(1.0, 0.0),
    };
    let m0 = match obj.get("m0") {
        Some(m) => m
            .as_u64()
            .ok_or_else(|| err(&format!("{path}.m0"), "expected a nonnegative integer"))?
            as usize,
        None => 0,
    };
    let zeros = match obj.get("blaschke") {
        Some(list) => {
            let arr = list
                .as_array()
                .ok_or_else(|| err(&format!("{path}.blaschke"), "expected a list"))?;
            arr.iter()
                .enumerate()
                .map(|(i, entry)| {
                    let zp = format!("{path}.blaschke[{i}]");
                    let zo = entry.as_object().ok_or_else(|| err(&zp, "expected {a, mult}"))?;
                    let a = parse_complex(
                        zo.get("a").ok_or_else(|| err(&format!("{zp}.a"), "missing zero"))?,
                        &format!("{zp}.a"),
                    )?;
                    let mult = zo
                        .get("mult")
                        .and_then(Value::as_u64)
                        .ok_or_else(|| err(&format!("{zp}.mult"), "expected a positive integer"))?
                        as usize;
                    for extra in zo.keys() {
                        if !matches!(extra.as_str(), "a" | "mult") {
                            return Err(err(&format!("{zp}.{extra}"), "unknown field"));
                        }
                    }
                    Ok(BlaschkeZero { a, mult })
                })
                .collect::<Result<Vec<_>, _>>()?
        }
        None => Vec::new(),
    };
    let atoms = match obj.get("atoms") {
        Some(list) => {
            let arr = list
                .as_array()
                .ok_or_else(|| err(&format!("{path}.atoms"), "expected a list"))?;
            arr.iter()
                .enumerate()
                .map(|(i, entry)| {
                    let ap = format!("{path}.atoms[{i}]");
                    let ao = entry.as_object().ok_or_else(|| err(&ap, "expected {t, c}"))?;
                    let t = ao
                        .get("t")
                        .and_then(Value::as_f64)
                        .ok_or_else(|| err(&format!("{ap}.t"), "expected an angle in radians"))?;
                    let c = ao
                        .get("c")
                        .and_then(Value::as_f64)
                        .ok_or_else(|| err(&format!("{ap}.c"), "expected a positive weight"))?;
                    for extra in ao.keys() {
                        if !matches!(extra.as_str(), "t" | "c") {
                            return Err(err(&format!("{ap}.{extra}"), "unknown field"));
                        }
                    }
                    Ok(SingularAtom { t, c })
                })
                .collect::<Result<Vec<_>, _>>()?
        }
        None => Vec::new(),
    };
    InnerFunction::new(lambda, m0, zeros, atoms).map_err(|e| core_err(path, e))
}

pub fn inner_to_json(theta: &InnerFunction) -> Value {
    json!({
        "lambda": complex_to_json(theta.lambda()),
        "m0": theta.origin_mult(),
        "blaschke": theta
            .zeros()
            .iter()
            .map(|z| json!({"a": complex_to_json(z.a), "mult": z.mult}))
            .collect::<Vec<_>>(),
        "atoms": theta
            .atoms()
            .iter()
            .map(|a| json!({"t": a.t, "c": a.c}))
            .collect::<Vec<_>>(),
    })
}

// ----------------------------------------------------------------------
// Admissible pairs
// ----------------------------------------------------------------------

pub fn parse_pair(v: &Value, path: &str) -> Result<AdmissiblePair, SchemaError> {
    let obj = v.as_object().ok_or_else(|| err(path, "expected {alpha, beta}"))?;
    for key in obj.keys() {
        if !matches!(key.as_str(), "alpha" | "beta") {
            return Err(err(&format!("{path}.{key}"), "unknown field"));
        }
    }
    let alpha = parse_complex(
        obj.get("alpha").ok_or_else(|| err(&format!("{path}.alpha"), "missing"))?,
        &format!("{path}.alpha"),
    )?;
    let beta = parse_complex(
        obj.get("beta").ok_or_else(|| err(&format!("{path}.beta"), "missing"))?,
        &format!("{path}.beta"),
    )?;
    let mass = alpha.norm_sqr() + beta.norm_sqr();
    if (mass - 1.0).abs() > 1e-9 {
        return Err(err(
            path,
            format!("admissible pairs satisfy |alpha|² + |beta|² = 1, got {mass}"),
        ));
    }
    AdmissiblePair::new(alpha, beta).map_err(|e| core_err(path, e))
}

pub fn pair_to_json(pair: &AdmissiblePair) -> Value {
    json!({
        "alpha": complex_to_json(pair.alpha()),
        "beta": complex_to_json(pair.beta()),
    })
}

/// Parse a nonempty coefficient list `[[re, im], …]` (degree 0 upward).
pub fn parse_coeffs(v: &Value, path: &str) -> Result<Vec<Complex64>, SchemaError> {
    let arr = v
        .as_array()
        .ok_or_else(|| err(path, "expected a list of [re, im] coefficients"))?;
    if arr.is_empty() {
        return Err(err(path, "expected at least one coefficient"));
    }
    arr.iter()
        .enumerate()
        .map(|(i, c)| parse_complex(c, &format!("{path}[{i}]")))
        .collect()
}
