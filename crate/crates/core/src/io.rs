//! JSON formats: fans, motive expressions, gradings, and the canonical JSON
//! rendering of every value type.
//!
//! Output objects use sorted keys and big integers are written as plain JSON
//! numbers of arbitrary length, so re-serializing parsed output is byte-identical.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use num_bigint::BigInt;
use serde_json::{json, Map, Number, Value};
use thiserror::Error;

use crate::ffcount::CongruenceReport;
use crate::motive::{HodgeReport, MeasureValue, MotiveError, MotiveExpr, SmoothProjectiveLeaf};
use crate::ring::{LPoly, Laurent1, MultiSeries, Poly2};
use crate::toric::{Fan, FanError, FanSpec, Grading};

#[derive(Debug, Error)]
pub enum IoError {
    #[error("{path}: {source}")]
    Read {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("malformed JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error("{at}: {msg}")]
    Schema { at: String, msg: String },
    #[error(transparent)]
    Fan(#[from] FanError),
    #[error(transparent)]
    Motive(#[from] MotiveError),
}

fn schema(at: &str, msg: impl Into<String>) -> IoError {
    IoError::Schema {
        at: at.to_string(),
        msg: msg.into(),
    }
}

pub fn read_json(path: &Path) -> Result<Value, IoError> {
    let text = std::fs::read_to_string(path).map_err(|source| IoError::Read {
        path: path.to_path_buf(),
        source,
    })?;
    Ok(serde_json::from_str(&text)?)
}

fn field<'a>(obj: &'a Map<String, Value>, key: &str, at: &str) -> Result<&'a Value, IoError> {
    obj.get(key).ok_or_else(|| schema(at, format!("missing key `{key}`")))
}

fn as_u32(v: &Value, at: &str) -> Result<u32, IoError> {
    v.as_u64()
        .and_then(|x| u32::try_from(x).ok())
        .ok_or_else(|| schema(at, "expected a non-negative integer"))
}

fn as_i64(v: &Value, at: &str) -> Result<i64, IoError> {
    v.as_i64().ok_or_else(|| schema(at, "expected an integer"))
}

fn as_array<'a>(v: &'a Value, at: &str) -> Result<&'a Vec<Value>, IoError> {
    v.as_array().ok_or_else(|| schema(at, "expected an array"))
}

fn as_object<'a>(v: &'a Value, at: &str) -> Result<&'a Map<String, Value>, IoError> {
    v.as_object().ok_or_else(|| schema(at, "expected an object"))
}

fn as_bigint(v: &Value, at: &str) -> Result<BigInt, IoError> {
    match v {
        Value::Number(n) => n
            .to_string()
            .parse()
            .map_err(|_| schema(at, "expected an integer coefficient")),
        Value::String(s) => s.parse().map_err(|_| schema(at, "expected an integer coefficient")),
        _ => Err(schema(at, "expected an integer coefficient")),
    }
}

/// Reads `{"dim": n, "rays": [[...]], "cones": [[...]]}` without validating it.
pub fn fan_spec_from_json(v: &Value) -> Result<FanSpec, IoError> {
    let obj = as_object(v, "fan")?;
    let dim = as_u32(field(obj, "dim", "fan")?, "fan.dim")? as usize;
    let rays = as_array(field(obj, "rays", "fan")?, "fan.rays")?
        .iter()
        .enumerate()
        .map(|(i, r)| {
            let at = format!("fan.rays[{i}]");
            as_array(r, &at)?.iter().map(|x| as_i64(x, &at)).collect()
        })
        .collect::<Result<Vec<Vec<i64>>, _>>()?;
    let cones = as_array(field(obj, "cones", "fan")?, "fan.cones")?
        .iter()
        .enumerate()
        .map(|(i, c)| {
            let at = format!("fan.cones[{i}]");
            as_array(c, &at)?
                .iter()
                .map(|x| as_u32(x, &at).map(|x| x as usize))
                .collect()
        })
        .collect::<Result<Vec<Vec<usize>>, _>>()?;
    Ok(FanSpec { dim, rays, cones })
}

pub fn fan_from_json(v: &Value) -> Result<Fan, IoError> {
    Ok(fan_spec_from_json(v)?.validate()?)
}

pub fn fan_to_json(f: &Fan) -> Value {
    json!({ "dim": f.dim(), "rays": f.rays(), "cones": f.cones() })
}

pub fn read_fan(path: &Path) -> Result<Fan, IoError> {
    fan_from_json(&read_json(path)?)
}

/// Grading file: `"free"`, `"uniform"`, or
/// `{"arity": r, "classes": [{"cone": [..], "exp": [..]}, ...]}`.
pub fn grading_from_json(v: &Value) -> Result<Grading, IoError> {
    match v {
        Value::String(s) if s == "free" => Ok(Grading::Free),
        Value::String(s) if s == "uniform" => Ok(Grading::Uniform),
        Value::Object(obj) => {
            let arity = as_u32(field(obj, "arity", "grading")?, "grading.arity")? as usize;
            let mut classes = BTreeMap::new();
            for (i, c) in as_array(field(obj, "classes", "grading")?, "grading.classes")?
                .iter()
                .enumerate()
            {
                let at = format!("grading.classes[{i}]");
                let c = as_object(c, &at)?;
                let cone: Vec<usize> = as_array(field(c, "cone", &at)?, &at)?
                    .iter()
                    .map(|x| as_u32(x, &at).map(|x| x as usize))
                    .collect::<Result<_, _>>()?;
                let exp: Vec<u32> = as_array(field(c, "exp", &at)?, &at)?
                    .iter()
                    .map(|x| as_u32(x, &at))
                    .collect::<Result<_, _>>()?;
                if classes.insert(cone, exp).is_some() {
                    return Err(schema(&at, "cone listed twice"));
                }
            }
            Ok(Grading::ByCone { arity, classes })
        }
        _ => Err(schema("grading", "expected \"free\", \"uniform\" or an object")),
    }
}

/// Parses an expression tree. `base` resolves relative `"path"` references of
/// toric leaves.
pub fn expr_from_json(v: &Value, base: Option<&Path>) -> Result<MotiveExpr, IoError> {
    parse_expr(v, base, "$")
}

pub fn read_expr(path: &Path) -> Result<MotiveExpr, IoError> {
    expr_from_json(&read_json(path)?, path.parent())
}

fn parse_expr(v: &Value, base: Option<&Path>, at: &str) -> Result<MotiveExpr, IoError> {
    let obj = as_object(v, at)?;
    if let Some(op) = obj.get("op") {
        let op = op.as_str().ok_or_else(|| schema(at, "`op` must be a string"))?;
        let args = as_array(field(obj, "args", at)?, at)?
            .iter()
            .enumerate()
            .map(|(i, a)| parse_expr(a, base, &format!("{at}.args[{i}]")))
            .collect::<Result<Vec<_>, _>>()?;
        let got = args.len();
        let arity_err = |want: &str| schema(at, format!("`{op}` takes {want}, got {got}"));
        let mut args = args.into_iter();
        return match op {
            "disjoint_union" | "product" => {
                let first = args.next().ok_or_else(|| arity_err("at least one argument"))?;
                Ok(args.fold(first, |acc, x| {
                    if op == "product" {
                        acc.times(x)
                    } else {
                        acc.union(x)
                    }
                }))
            }
            "difference" => match (args.next(), args.next(), args.next()) {
                (Some(a), Some(b), None) => Ok(a.minus(b)),
                _ => Err(arity_err("two arguments")),
            },
            "cone" => match (args.next(), args.next()) {
                (Some(a), None) => Ok(a.cone()),
                _ => Err(arity_err("one argument")),
            },
            other => Err(schema(at, format!("unknown op `{other}`"))),
        };
    }

    let leaf = field(obj, "leaf", at)?
        .as_str()
        .ok_or_else(|| schema(at, "`leaf` must be a string"))?;
    let n = || as_u32(field(obj, "n", at)?, &format!("{at}.n"));
    Ok(match leaf {
        "point" => MotiveExpr::Point,
        "affine_space" => MotiveExpr::affine_space(n()?),
        "torus" => MotiveExpr::torus(n()?)?,
        "proj_space" => MotiveExpr::proj_space(n()?),
        "grassmannian" => MotiveExpr::grassmannian(as_u32(field(obj, "k", at)?, at)?, n()?)?,
        "cellular" => {
            let cells = as_array(field(obj, "cells", at)?, at)?
                .iter()
                .map(|x| as_u32(x, at))
                .collect::<Result<Vec<_>, _>>()?;
            MotiveExpr::cellular(cells)?
        }
        "toric_fan" => {
            let fan = match (obj.get("fan"), obj.get("path")) {
                (Some(f), _) => fan_from_json(f)?,
                (None, Some(Value::String(p))) => {
                    let path = base.map_or_else(|| PathBuf::from(p), |b| b.join(p));
                    read_fan(&path)?
                }
                _ => return Err(schema(at, "toric_fan needs `fan` or `path`")),
            };
            MotiveExpr::toric(fan)
        }
        "elliptic" => MotiveExpr::elliptic(),
        "custom" => {
            let name = obj.get("name").and_then(Value::as_str).unwrap_or("custom");
            let countable = obj.get("countable").and_then(Value::as_bool).unwrap_or(false);
            let e_poly = match field(obj, "e_poly", at)? {
                Value::String(s) => s.parse::<Poly2>().map_err(|e| schema(at, e.to_string()))?,
                Value::Array(terms) => {
                    let mut parsed = Vec::with_capacity(terms.len());
                    for t in terms {
                        let t = as_array(t, at)?;
                        if t.len() != 3 {
                            return Err(schema(at, "e_poly terms are [p, q, coeff]"));
                        }
                        parsed.push((as_u32(&t[0], at)?, as_u32(&t[1], at)?, as_bigint(&t[2], at)?));
                    }
                    Poly2::from_terms(parsed)
                }
                _ => return Err(schema(at, "e_poly must be a list of [p, q, coeff] or a string")),
            };
            MotiveExpr::leaf(SmoothProjectiveLeaf::new(name, e_poly, countable)?)
        }
        other => return Err(schema(at, format!("unknown leaf `{other}`"))),
    })
}

pub fn bigint_to_json(x: &BigInt) -> Value {
    let n: Number = serde_json::from_str(&x.to_string()).expect("integer literal is a JSON number");
    Value::Number(n)
}

pub fn poly_to_json(p: &Poly2) -> Value {
    let terms: Vec<Value> = p
        .sorted_terms()
        .into_iter()
        .map(|((a, b), c)| json!([a, b, bigint_to_json(c)]))
        .collect();
    json!({ "text": p.to_string(), "terms": terms })
}

pub fn laurent_to_json(p: &Laurent1) -> Value {
    let terms: Vec<Value> = p.terms().map(|(e, c)| json!([e, bigint_to_json(c)])).collect();
    json!({ "text": p.to_string(), "terms": terms })
}

pub fn lpoly_to_json(p: &LPoly) -> Value {
    let coeffs: Vec<Value> = p.coeffs().iter().map(bigint_to_json).collect();
    json!({ "text": p.to_string(), "coeffs": coeffs })
}

pub fn series_to_json(s: &MultiSeries) -> Value {
    let terms: Vec<Value> = s
        .sorted_terms()
        .into_iter()
        .map(|(e, c)| json!({ "exp": e, "coeff": bigint_to_json(c) }))
        .collect();
    json!({
        "arity": s.arity(),
        "order": s.order(),
        "text": s.to_string(),
        "terms": terms,
    })
}

pub fn measure_value_to_json(v: &MeasureValue) -> Value {
    match v {
        MeasureValue::Integer(x) => json!({ "kind": "integer", "value": bigint_to_json(x) }),
        MeasureValue::Poly(p) => json!({ "kind": "poly2", "value": poly_to_json(p) }),
        MeasureValue::Laurent(p) => json!({ "kind": "laurent", "value": laurent_to_json(p) }),
        MeasureValue::LPoly(p) => json!({ "kind": "lpoly", "value": lpoly_to_json(p) }),
    }
}

pub fn congruence_to_json(r: &CongruenceReport) -> Value {
    json!({
        "q": bigint_to_json(&r.q),
        "m": r.m,
        "actual": r.actual.as_ref().map(bigint_to_json),
        "expected_mod_q": bigint_to_json(&r.expected_mod_q),
        "expected_mod_q_minus_1": bigint_to_json(&r.expected_mod_q_minus_1),
        "holds_mod_q": r.holds_mod_q,
        "holds_mod_q_minus_1": r.holds_mod_q_minus_1,
        "note": r.note,
        "passed": r.passed(),
    })
}

pub fn hodge_report_to_json(r: &HodgeReport) -> Value {
    json!({
        "antidiagonal_ok": r.antidiagonal_ok,
        "offending_antidiagonals": r.offending_antidiagonals.iter()
            .map(|(i, c)| json!([i, bigint_to_json(c)])).collect::<Vec<_>>(),
        "diagonal_ok": r.diagonal_ok,
        "diagonal_sum": bigint_to_json(&r.diagonal_sum),
        "axis_ok": r.axis_ok,
        "offending_axis": r.offending_axis.iter()
            .map(|((p, q), c)| json!([p, q, bigint_to_json(c)])).collect::<Vec<_>>(),
    })
}

/// Canonical text form of a JSON document: pretty-printed, sorted keys, trailing newline.
pub fn render_json(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("JSON values always serialize");
    s.push('\n');
    s
}
