//! Scenario files and output formatting.
//!
//! A scenario file is one JSON object:
//!
//! ```json
//! {
//!   "l_t1": 1, "l_t2": 1, "l_r1": "1/2", "l_r2": 1,
//!   "psi_t11": [[0, 1]], "psi_r12": [["0", "2/5"]],
//!   "label": "example"
//! }
//! ```
//!
//! Numbers may be JSON numbers or strings holding `"p/q"` or a decimal.
//! Omitted supports are empty; unknown keys are rejected.

use std::path::Path;

use serde_json::{json, Map, Value};

use crate::dof_region::{DofRegion, Point};
use crate::error::{Error, Result};
use crate::interval_set::IntervalSet;
use crate::scalar::Scalar;
use crate::scenario::{RawScenario, Scenario, LENGTH_FIELDS, SUPPORT_FIELDS};
use crate::Rational;

fn parse_error(field: impl Into<String>, message: impl Into<String>) -> Error {
    Error::Parse {
        field: field.into(),
        message: message.into(),
    }
}

fn parse_number(field: &str, v: &Value) -> Result<Rational> {
    let text = match v {
        Value::Number(n) => n.to_string(),
        Value::String(s) => s.clone(),
        other => {
            return Err(parse_error(
                field,
                format!("expected a number, got {other}"),
            ))
        }
    };
    Rational::parse_literal(&text)
        .ok_or_else(|| parse_error(field, format!("cannot parse {text:?} as a rational")))
}

fn parse_pairs(field: &str, v: &Value) -> Result<Vec<(Rational, Rational)>> {
    let items = v
        .as_array()
        .ok_or_else(|| parse_error(field, "expected a list of [lo, hi] pairs"))?;
    items
        .iter()
        .enumerate()
        .map(|(i, item)| {
            let name = format!("{field}[{i}]");
            match item.as_array().map(Vec::as_slice) {
                Some([lo, hi]) => Ok((parse_number(&name, lo)?, parse_number(&name, hi)?)),
                _ => Err(parse_error(name, "expected a [lo, hi] pair")),
            }
        })
        .collect()
}

pub fn raw_scenario_from_json(v: &Value) -> Result<RawScenario> {
    let obj = v
        .as_object()
        .ok_or_else(|| parse_error("scenario", "expected a JSON object"))?;
    if let Some(key) = obj.keys().find(|k| {
        !LENGTH_FIELDS.contains(&k.as_str())
            && !SUPPORT_FIELDS.contains(&k.as_str())
            && *k != "label"
    }) {
        return Err(parse_error(key.as_str(), "unknown field"));
    }
    let mut lengths = Vec::with_capacity(4);
    for name in LENGTH_FIELDS {
        let v = obj.get(name).ok_or_else(|| parse_error(name, "missing"))?;
        lengths.push(parse_number(name, v)?);
    }
    let mut supports = Vec::with_capacity(8);
    for name in SUPPORT_FIELDS {
        supports.push(match obj.get(name) {
            Some(v) => parse_pairs(name, v)?,
            None => Vec::new(),
        });
    }
    let label = match obj.get("label") {
        None | Some(Value::Null) => String::new(),
        Some(Value::String(s)) => s.clone(),
        Some(_) => return Err(parse_error("label", "expected a string")),
    };
    Ok(RawScenario {
        lengths: lengths.try_into().expect("four lengths"),
        supports: supports.try_into().expect("eight supports"),
        label,
    })
}

pub fn scenario_from_json(v: &Value) -> Result<Scenario> {
    raw_scenario_from_json(v)?
        .build()
        .map_err(Error::InvalidScenario)
}

pub fn parse_scenario(text: &str) -> Result<Scenario> {
    let v: Value =
        serde_json::from_str(text).map_err(|e| parse_error("scenario", e.to_string()))?;
    scenario_from_json(&v)
}

pub fn read_scenario(path: &Path) -> Result<Scenario> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::Io {
        path: path.display().to_string(),
        message: e.to_string(),
    })?;
    parse_scenario(&text).map_err(|e| match e {
        Error::Parse { field, message } => Error::Parse {
            field: format!("{}: {field}", path.display()),
            message,
        },
        other => other,
    })
}

pub fn exact<S: Scalar>(x: &S) -> Value {
    Value::String(x.to_string())
}

/// Decimal rendering used next to every exact value.
pub fn approx<S: Scalar>(x: &S) -> String {
    format!("{:.6}", x.to_f64())
}

pub fn interval_set_json<S: Scalar>(set: &IntervalSet<S>) -> Value {
    Value::Array(
        set.pieces()
            .iter()
            .map(|(lo, hi)| json!([exact(lo), exact(hi)]))
            .collect(),
    )
}

pub fn scenario_to_json<S: Scalar>(s: &Scenario<S>) -> Value {
    let mut obj = Map::new();
    for (name, l) in LENGTH_FIELDS.iter().zip(s.lengths()) {
        obj.insert((*name).into(), exact(l));
    }
    for (name, set) in SUPPORT_FIELDS.iter().zip(s.supports()) {
        obj.insert((*name).into(), interval_set_json(set));
    }
    obj.insert("label".into(), Value::String(s.label.clone()));
    Value::Object(obj)
}

pub fn point_json<S: Scalar>(p: &Point<S>) -> Value {
    json!([exact(&p.d1), exact(&p.d2)])
}

pub fn region_json<S: Scalar>(r: &DofRegion<S>) -> Value {
    Value::Array(r.vertices().iter().map(point_json).collect())
}

/// Splits `"lo,hi;lo,hi"` into an interval set. The empty string is the empty set.
pub fn parse_interval_list(field: &str, text: &str) -> Result<IntervalSet> {
    let text = text.trim();
    if text.is_empty() {
        return Ok(IntervalSet::empty());
    }
    let pairs = text
        .split(';')
        .map(|piece| {
            let (lo, hi) = piece
                .split_once(',')
                .ok_or_else(|| parse_error(field, format!("expected lo,hi in {piece:?}")))?;
            let num = |t: &str| {
                Rational::parse_literal(t)
                    .ok_or_else(|| parse_error(field, format!("cannot parse {t:?} as a rational")))
            };
            Ok((num(lo)?, num(hi)?))
        })
        .collect::<Result<Vec<_>>>()?;
    IntervalSet::normalize(pairs)
}

pub fn parse_rational(field: &str, text: &str) -> Result<Rational> {
    Rational::parse_literal(text)
        .ok_or_else(|| parse_error(field, format!("cannot parse {text:?} as a rational")))
}

pub fn parse_rational_list(field: &str, text: &str) -> Result<Vec<Rational>> {
    text.split(',').map(|t| parse_rational(field, t)).collect()
}
