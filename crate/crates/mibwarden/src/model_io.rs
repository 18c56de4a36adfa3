//! Line-oriented text format for trained models.
//!
//! ```text
//! learner=jrip
//! schema=9c1f0e5a7b3d2c41
//! attributes=ifInOctets,ifOutOctets
//! params=folds=3,min_covered=2,optimizations=2,seed=1
//! rule: a0 > 1250.5 && a1 <= 80 => UdpFlood
//! default: Normal
//! ```
//!
//! The four header lines come first, in this order. Body lines follow:
//! `attr:<i> cuts:<c1,...>` declares bin cuts (OneR, decision table),
//! `rule: ... => <Class>` lines keep their priority order, `cell: <b1,...>
//! => <Class>` fills the decision table, and `default: <Class>` ends the
//! file. Conditions are `a<i> <= t`, `a<i> > t` or `bin(a<i>) = b`.
//! Numbers use the shortest text that reads back to the same `f64`.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use mibwarden_core::{fingerprint, BinCuts, Condition, DecisionTableCore, LearnerId, Rule, RuleModel, TrafficClass};

use crate::error::{Error, Result};

const ORIGIN: &str = "model";

pub fn serialize_model(m: &RuleModel) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "learner={}", m.learner);
    let _ = writeln!(out, "schema={:016x}", m.schema_fingerprint);
    let _ = writeln!(out, "attributes={}", m.attributes.join(","));
    let params: Vec<String> = m.params.iter().map(|(k, v)| format!("{k}={v}")).collect();
    let _ = writeln!(out, "params={}", params.join(","));
    let bins = m.table.as_ref().map_or(&m.bins, |t| &t.bins);
    for b in bins {
        let cuts: Vec<String> = b.cuts.iter().map(f64::to_string).collect();
        let _ = writeln!(out, "attr:{} cuts:{}", b.attribute_index, cuts.join(","));
    }
    for r in &m.rules {
        let conds: Vec<String> = r.conditions.iter().map(condition_text).collect();
        let _ = writeln!(out, "rule: {} => {}", conds.join(" && "), r.consequent);
    }
    if let Some(t) = &m.table {
        for (key, class) in &t.cells {
            let key: Vec<String> = key.iter().map(usize::to_string).collect();
            let _ = writeln!(out, "cell: {} => {}", key.join(","), class);
        }
    }
    let _ = writeln!(out, "default: {}", m.default_class);
    out
}

fn condition_text(c: &Condition) -> String {
    match *c {
        Condition::Le { attribute, threshold } => format!("a{attribute} <= {threshold}"),
        Condition::Gt { attribute, threshold } => format!("a{attribute} > {threshold}"),
        Condition::InBin { attribute, bin } => format!("bin(a{attribute}) = {bin}"),
    }
}

struct Lines<'a> {
    lines: Vec<&'a str>,
    next: usize,
}

impl<'a> Lines<'a> {
    /// Next non-blank line with its 1-based number.
    fn take(&mut self) -> Option<(usize, &'a str)> {
        while self.next < self.lines.len() {
            let line = self.lines[self.next].trim();
            self.next += 1;
            if !line.is_empty() {
                return Some((self.next, line));
            }
        }
        None
    }

    fn last_line(&self) -> usize {
        self.lines.len().max(1)
    }

    fn header(&mut self, key: &str) -> Result<(usize, &'a str)> {
        let (n, line) =
            self.take().ok_or_else(|| err(self.last_line(), format!("truncated model: missing `{key}=` header")))?;
        line.strip_prefix(key)
            .and_then(|rest| rest.strip_prefix('='))
            .map(|v| (n, v))
            .ok_or_else(|| err(n, format!("expected `{key}=` header")))
    }
}

fn err(line: usize, message: impl Into<String>) -> Error {
    Error::format(ORIGIN, line, message)
}

fn class(n: usize, s: &str) -> Result<TrafficClass> {
    TrafficClass::parse_loose(s.trim()).ok_or_else(|| err(n, format!("unknown class `{}`", s.trim())))
}

fn attribute(n: usize, s: &str) -> Result<usize> {
    s.trim()
        .strip_prefix('a')
        .and_then(|i| i.parse().ok())
        .ok_or_else(|| err(n, format!("bad attribute reference `{s}`")))
}

fn number<T: std::str::FromStr>(n: usize, s: &str) -> Result<T> {
    s.trim().parse().map_err(|_| err(n, format!("bad number `{}`", s.trim())))
}

fn list<T: std::str::FromStr>(n: usize, s: &str) -> Result<Vec<T>> {
    let s = s.trim();
    if s.is_empty() {
        return Ok(Vec::new());
    }
    s.split(',').map(|x| number(n, x)).collect()
}

fn parse_condition(n: usize, s: &str) -> Result<Condition> {
    let s = s.trim();
    if let Some(rest) = s.strip_prefix("bin(") {
        let (attr, bin) = rest.split_once(") =").ok_or_else(|| err(n, format!("bad bin condition `{s}`")))?;
        return Ok(Condition::InBin { attribute: attribute(n, attr)?, bin: number(n, bin)? });
    }
    if let Some((attr, t)) = s.split_once(" <= ") {
        return Ok(Condition::Le { attribute: attribute(n, attr)?, threshold: number(n, t)? });
    }
    if let Some((attr, t)) = s.split_once(" > ") {
        return Ok(Condition::Gt { attribute: attribute(n, attr)?, threshold: number(n, t)? });
    }
    Err(err(n, format!("bad condition `{s}`")))
}

fn rhs(n: usize, s: &str) -> Result<(&str, TrafficClass)> {
    let (lhs, c) = s.rsplit_once("=>").ok_or_else(|| err(n, "missing `=> <Class>`"))?;
    Ok((lhs.trim(), class(n, c)?))
}

pub fn parse_model(text: &str) -> Result<RuleModel> {
    let mut lines = Lines { lines: text.lines().collect(), next: 0 };

    let (n, learner) = lines.header("learner")?;
    let learner: LearnerId = learner.parse().map_err(|_| err(n, format!("unknown learner `{learner}`")))?;
    let (n, schema) = lines.header("schema")?;
    let schema_fingerprint =
        u64::from_str_radix(schema, 16).map_err(|_| err(n, format!("bad schema fingerprint `{schema}`")))?;
    let (n_attrs, attrs) = lines.header("attributes")?;
    let attributes: Vec<String> =
        if attrs.is_empty() { Vec::new() } else { attrs.split(',').map(str::to_string).collect() };
    if fingerprint(&attributes) != schema_fingerprint {
        return Err(err(n_attrs, "attribute names do not match the schema fingerprint"));
    }
    let (n, params) = lines.header("params")?;
    let params = if params.is_empty() {
        Vec::new()
    } else {
        params
            .split(',')
            .map(|kv| {
                kv.split_once('=')
                    .map(|(k, v)| (k.to_string(), v.to_string()))
                    .ok_or_else(|| err(n, format!("bad parameter `{kv}`")))
            })
            .collect::<Result<Vec<_>>>()?
    };

    let mut bins = Vec::new();
    let mut rules = Vec::new();
    let mut cells = BTreeMap::new();
    let default_class = loop {
        let (n, line) =
            lines.take().ok_or_else(|| err(lines.last_line(), "truncated model: missing `default:` line"))?;
        if let Some(rest) = line.strip_prefix("attr:") {
            let (index, cuts) = rest.split_once(" cuts:").ok_or_else(|| err(n, "expected `attr:<i> cuts:<...>`"))?;
            let cuts = BinCuts::new(number(n, index)?, list(n, cuts)?).map_err(|e| err(n, e.to_string()))?;
            bins.push(cuts);
        } else if let Some(rest) = line.strip_prefix("rule:") {
            let (lhs, consequent) = rhs(n, rest)?;
            let conditions = if lhs.is_empty() {
                Vec::new()
            } else {
                lhs.split("&&").map(|c| parse_condition(n, c)).collect::<Result<Vec<_>>>()?
            };
            rules.push(Rule::new(conditions, consequent));
        } else if let Some(rest) = line.strip_prefix("cell:") {
            let (key, class) = rhs(n, rest)?;
            if cells.insert(list::<usize>(n, key)?, class).is_some() {
                return Err(err(n, "duplicate cell"));
            }
        } else if let Some(rest) = line.strip_prefix("default:") {
            break class(n, rest)?;
        } else {
            return Err(err(n, format!("unrecognized line `{line}`")));
        }
    };
    if let Some((n, _)) = lines.take() {
        return Err(err(n, "content after `default:` line"));
    }

    let (bins, table) = if learner == LearnerId::DTable {
        let table = DecisionTableCore {
            selected_attributes: bins.iter().map(|b| b.attribute_index).collect(),
            bins,
            cells,
            majority_class: default_class,
        };
        (Vec::new(), Some(table))
    } else {
        if !cells.is_empty() {
            return Err(err(lines.last_line(), "`cell:` lines are only valid for dtable models"));
        }
        (bins, None)
    };
    let model = RuleModel { learner, attributes, schema_fingerprint, params, bins, rules, table, default_class };
    model.validate().map_err(|e| err(lines.last_line(), e.to_string()))?;
    Ok(model)
}
