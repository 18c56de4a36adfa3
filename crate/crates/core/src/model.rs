use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use crate::class::TrafficClass;
use crate::dataset::{fingerprint, Dataset, MibRecord};
use crate::discretize::{bin_of, BinCuts};
use crate::error::{CoreError, CoreResult};

#[derive(Copy, Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum LearnerId {
    ZeroR,
    OneR,
    JRip,
    Part,
    DTable,
}

impl LearnerId {
    /// Canonical learner order.
    pub const ALL: [LearnerId; 5] =
        [LearnerId::ZeroR, LearnerId::OneR, LearnerId::JRip, LearnerId::Part, LearnerId::DTable];

    pub fn as_str(self) -> &'static str {
        match self {
            LearnerId::ZeroR => "zeror",
            LearnerId::OneR => "oner",
            LearnerId::JRip => "jrip",
            LearnerId::Part => "part",
            LearnerId::DTable => "dtable",
        }
    }
}

impl fmt::Display for LearnerId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for LearnerId {
    type Err = CoreError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        LearnerId::ALL
            .into_iter()
            .find(|l| l.as_str().eq_ignore_ascii_case(s))
            .ok_or(CoreError::InvalidParameter("unknown learner id"))
    }
}

/// One antecedent atom of a rule.
#[derive(Copy, Clone, Debug, PartialEq)]
pub enum Condition {
    Le {
        attribute: usize,
        threshold: f64,
    },
    Gt {
        attribute: usize,
        threshold: f64,
    },
    /// Value falls in bin `bin` of the model's cuts for `attribute`.
    InBin {
        attribute: usize,
        bin: usize,
    },
}

impl Condition {
    pub fn attribute(&self) -> usize {
        match *self {
            Condition::Le { attribute, .. } | Condition::Gt { attribute, .. } | Condition::InBin { attribute, .. } => {
                attribute
            }
        }
    }

    pub fn matches(&self, values: &[f64], bins: &[BinCuts]) -> bool {
        match *self {
            Condition::Le { attribute, threshold } => values[attribute] <= threshold,
            Condition::Gt { attribute, threshold } => values[attribute] > threshold,
            Condition::InBin { attribute, bin } => bins
                .iter()
                .find(|b| b.attribute_index == attribute)
                .is_some_and(|cuts| bin_of(cuts, values[attribute]) == bin),
        }
    }
}

/// Conjunction of conditions implying a class. An empty conjunction
/// matches everything.
#[derive(Clone, Debug, PartialEq)]
pub struct Rule {
    pub conditions: Vec<Condition>,
    pub consequent: TrafficClass,
}

impl Rule {
    pub fn new(conditions: Vec<Condition>, consequent: TrafficClass) -> Rule {
        Rule { conditions, consequent }
    }

    pub fn matches(&self, values: &[f64], bins: &[BinCuts]) -> bool {
        self.conditions.iter().all(|c| c.matches(values, bins))
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct DecisionTableCore {
    pub selected_attributes: Vec<usize>,
    /// One entry per selected attribute, same order.
    pub bins: Vec<BinCuts>,
    /// Bin-id tuple over the selected attributes to the cell's class.
    pub cells: BTreeMap<Vec<usize>, TrafficClass>,
    pub majority_class: TrafficClass,
}

impl DecisionTableCore {
    pub fn key(&self, values: &[f64]) -> Vec<usize> {
        self.bins.iter().map(|b| bin_of(b, values[b.attribute_index])).collect()
    }

    pub fn lookup(&self, values: &[f64]) -> TrafficClass {
        self.cells.get(&self.key(values)).copied().unwrap_or(self.majority_class)
    }
}

/// A trained classifier: ordered rules (first match wins) or a decision
/// table, plus a default class. Prediction is total.
#[derive(Clone, Debug, PartialEq)]
pub struct RuleModel {
    pub learner: LearnerId,
    pub attributes: Vec<String>,
    pub schema_fingerprint: u64,
    /// Training parameters in emission order.
    pub params: Vec<(String, String)>,
    /// Cuts referenced by `InBin` conditions.
    pub bins: Vec<BinCuts>,
    pub rules: Vec<Rule>,
    pub table: Option<DecisionTableCore>,
    pub default_class: TrafficClass,
}

impl RuleModel {
    pub(crate) fn skeleton(learner: LearnerId, ds: &Dataset, default_class: TrafficClass) -> RuleModel {
        RuleModel {
            learner,
            attributes: ds.attribute_names(),
            schema_fingerprint: ds.fingerprint(),
            params: Vec::new(),
            bins: Vec::new(),
            rules: Vec::new(),
            table: None,
            default_class,
        }
    }

    pub(crate) fn with_param<V: fmt::Display>(mut self, key: &str, value: V) -> RuleModel {
        self.params.push((key.into(), alloc::format!("{value}")));
        self
    }

    pub fn param(&self, key: &str) -> Option<&str> {
        self.params.iter().find(|(k, _)| k == key).map(|(_, v)| v.as_str())
    }

    /// Structural checks for models built outside the learners (parsed
    /// from text, assembled by hand).
    pub fn validate(&self) -> CoreResult<()> {
        if fingerprint(&self.attributes) != self.schema_fingerprint {
            return Err(CoreError::SchemaMismatch {
                expected: self.schema_fingerprint,
                found: fingerprint(&self.attributes),
            });
        }
        let width = self.attributes.len();
        let bad_attr = CoreError::InvalidParameter("attribute index outside schema");
        for b in self.bins.iter().chain(self.table.iter().flat_map(|t| t.bins.iter())) {
            if b.attribute_index >= width {
                return Err(bad_attr);
            }
        }
        for rule in &self.rules {
            for c in &rule.conditions {
                if c.attribute() >= width {
                    return Err(bad_attr);
                }
                if let Condition::InBin { attribute, bin } = *c {
                    let cuts = self
                        .bins
                        .iter()
                        .find(|b| b.attribute_index == attribute)
                        .ok_or(CoreError::InvalidParameter("bin condition without cuts"))?;
                    if bin >= cuts.num_bins() {
                        return Err(CoreError::InvalidParameter("bin id outside cuts"));
                    }
                }
            }
        }
        if let Some(t) = &self.table {
            if t.selected_attributes.len() != t.bins.len()
                || t.selected_attributes.iter().zip(&t.bins).any(|(a, b)| *a != b.attribute_index)
            {
                return Err(CoreError::InvalidParameter("table bins do not follow selected attributes"));
            }
            if t.cells.keys().any(|k| k.len() != t.bins.len()) {
                return Err(CoreError::InvalidParameter("table key arity"));
            }
        }
        Ok(())
    }

    pub fn check_dataset(&self, ds: &Dataset) -> CoreResult<()> {
        if ds.fingerprint() != self.schema_fingerprint {
            return Err(CoreError::SchemaMismatch { expected: self.schema_fingerprint, found: ds.fingerprint() });
        }
        Ok(())
    }

    /// Classifies one value vector laid out in the model's schema order.
    pub fn predict(&self, values: &[f64]) -> CoreResult<TrafficClass> {
        if values.len() != self.attributes.len() {
            return Err(CoreError::RecordTooShort { needed: self.attributes.len(), found: values.len() });
        }
        if let Some(rule) = self.rules.iter().find(|r| r.matches(values, &self.bins)) {
            return Ok(rule.consequent);
        }
        if let Some(table) = &self.table {
            return Ok(table.lookup(values));
        }
        Ok(self.default_class)
    }

    pub fn predict_record(&self, record: &MibRecord) -> CoreResult<TrafficClass> {
        self.predict(&record.values)
    }

    /// Predictions for every record of `ds`, after a schema check.
    pub fn predict_all(&self, ds: &Dataset) -> CoreResult<Vec<TrafficClass>> {
        self.check_dataset(ds)?;
        ds.records().iter().map(|r| self.predict(&r.values)).collect()
    }
}
