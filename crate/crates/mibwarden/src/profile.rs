//! Generator profiles as JSON.
//!
//! Every field is optional and falls back to the default profile:
//!
//! ```json
//! {
//!   "attribute_names": ["ifInOctets", "..."],
//!   "centers": [[...], ...],          // 8 rows, one per class
//!   "spreads": [[...], ...],
//!   "class_counts": {"Normal": 600, "TcpSyn": 960},
//!   "feature_noise": 0.03
//! }
//! ```
//!
//! `class_counts` may also be an array of 8 counts in canonical order;
//! classes missing from the object form keep their default count.

use serde_json::{Map, Value};

use mibwarden_core::{SynthProfile, TrafficClass};

use crate::error::{Error, Result};

const FIELDS: [&str; 5] = ["attribute_names", "centers", "spreads", "class_counts", "feature_noise"];

fn field_error(field: &str, message: impl std::fmt::Display) -> Error {
    Error::Config(format!("profile field `{field}`: {message}"))
}

fn number(field: &str, v: &Value) -> Result<f64> {
    v.as_f64().ok_or_else(|| field_error(field, format!("expected a number, found {v}")))
}

fn count(field: &str, v: &Value) -> Result<usize> {
    v.as_u64()
        .and_then(|n| usize::try_from(n).ok())
        .ok_or_else(|| field_error(field, format!("expected a non-negative integer, found {v}")))
}

fn array<'a>(field: &str, v: &'a Value) -> Result<&'a Vec<Value>> {
    v.as_array().ok_or_else(|| field_error(field, "expected an array"))
}

fn matrix(field: &str, v: &Value) -> Result<Vec<Vec<f64>>> {
    array(field, v)?.iter().map(|row| array(field, row)?.iter().map(|x| number(field, x)).collect()).collect()
}

pub fn parse_profile(text: &str) -> Result<SynthProfile> {
    let root: Value =
        serde_json::from_str(text).map_err(|e| Error::Config(format!("profile is not valid JSON: {e}")))?;
    let obj: &Map<String, Value> =
        root.as_object().ok_or_else(|| Error::Config("profile must be a JSON object".into()))?;
    if let Some(unknown) = obj.keys().find(|k| !FIELDS.contains(&k.as_str())) {
        return Err(field_error(unknown, format!("unknown field, expected one of {}", FIELDS.join(", "))));
    }

    let mut p = SynthProfile::default();
    if let Some(v) = obj.get("attribute_names") {
        p.attribute_names = array("attribute_names", v)?
            .iter()
            .map(|n| n.as_str().map(str::to_string).ok_or_else(|| field_error("attribute_names", "expected strings")))
            .collect::<Result<_>>()?;
    }
    if let Some(v) = obj.get("centers") {
        p.centers = matrix("centers", v)?;
    }
    if let Some(v) = obj.get("spreads") {
        p.spreads = matrix("spreads", v)?;
    }
    if let Some(v) = obj.get("class_counts") {
        match v {
            Value::Array(items) => {
                if items.len() != TrafficClass::COUNT {
                    return Err(field_error("class_counts", "expected 8 counts"));
                }
                for (slot, item) in p.class_counts.iter_mut().zip(items) {
                    *slot = count("class_counts", item)?;
                }
            }
            Value::Object(map) => {
                for (name, n) in map {
                    let c = TrafficClass::parse_loose(name)
                        .ok_or_else(|| field_error("class_counts", format!("unknown class `{name}`")))?;
                    p.class_counts[c.index()] = count("class_counts", n)?;
                }
            }
            _ => return Err(field_error("class_counts", "expected an object or an array")),
        }
    }
    if let Some(v) = obj.get("feature_noise") {
        p.feature_noise = number("feature_noise", v)?;
    }
    p.validate().map_err(|e| Error::Config(format!("invalid profile: {e}")))?;
    Ok(p)
}
