//! Bench report: JSON for machines, aligned tables for people.
//!
//! The JSON carries no wall-clock data, so identical inputs give identical
//! bytes. Timings live beside it in [`Timings`] and only reach the tables.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::time::Duration;

use mibwarden_core::eval::EvalSummary;
use mibwarden_core::{LearnerId, TrafficClass};
use serde::{Deserialize, Serialize};

pub const REPORT_FORMAT: u32 = 1;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BenchReport {
    pub format: u32,
    pub seed: u64,
    pub split: f64,
    pub dataset: DatasetInfo,
    /// Canonical learner order.
    pub learners: Vec<LearnerReport>,
    pub ranking: Ranking,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DatasetInfo {
    pub provenance: String,
    pub attributes: Vec<String>,
    pub records: usize,
    pub train_records: usize,
    pub test_records: usize,
    pub class_counts: BTreeMap<String, usize>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LearnerReport {
    pub learner: String,
    pub params: BTreeMap<String, String>,
    pub rules: usize,
    /// Model trained on the train split, scored on the test split.
    pub holdout: EvalJson,
    /// Same model scored on the full dataset.
    pub resubstitution: EvalJson,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EvalJson {
    pub records: u64,
    pub accuracy: f64,
    pub weighted_precision: f64,
    pub weighted_recall: f64,
    pub weighted_f_measure: f64,
    pub per_class: Vec<ClassJson>,
    /// Rows actual, columns predicted, canonical class order.
    pub confusion_matrix: Vec<Vec<u64>>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ClassJson {
    pub class: String,
    pub tp: u64,
    pub fp: u64,
    #[serde(rename = "fn")]
    pub fn_: u64,
    pub tn: u64,
    pub precision: f64,
    pub recall: f64,
    pub f_measure: f64,
}

/// Learner ids, best first.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Ranking {
    pub holdout: Vec<String>,
    pub resubstitution: Vec<String>,
}

impl From<&EvalSummary> for EvalJson {
    fn from(s: &EvalSummary) -> EvalJson {
        EvalJson {
            records: s.matrix.total(),
            accuracy: s.accuracy,
            weighted_precision: s.weighted_precision,
            weighted_recall: s.weighted_recall,
            weighted_f_measure: s.weighted_f_measure,
            per_class: s
                .per_class
                .iter()
                .map(|m| ClassJson {
                    class: m.class.name().to_string(),
                    tp: m.tp,
                    fp: m.fp,
                    fn_: m.fn_,
                    tn: m.tn,
                    precision: m.precision,
                    recall: m.recall,
                    f_measure: m.f_measure,
                })
                .collect(),
            confusion_matrix: s.matrix.counts.iter().map(|row| row.to_vec()).collect(),
        }
    }
}

impl BenchReport {
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }

    pub fn learner(&self, id: LearnerId) -> Option<&LearnerReport> {
        self.learners.iter().find(|l| l.learner == id.as_str())
    }
}

#[derive(Copy, Clone, Debug, Default)]
pub struct Timings {
    pub train: Duration,
    pub test: Duration,
}

fn per_class_table(out: &mut String, title: &str, learners: &[(String, &EvalJson)]) {
    let _ = writeln!(out, "{title}");
    let _ = write!(out, "{:<12}", "class");
    for (name, _) in learners {
        let _ = write!(out, " | {:^20}", name);
    }
    let _ = writeln!(out);
    let _ = write!(out, "{:<12}", "");
    for _ in learners {
        let _ = write!(out, " | {:>6} {:>6} {:>6}", "P", "R", "F");
    }
    let _ = writeln!(out);
    for (k, class) in TrafficClass::ALL.iter().enumerate() {
        let _ = write!(out, "{:<12}", class.name());
        for (_, e) in learners {
            let c = &e.per_class[k];
            let _ = write!(out, " | {:>6.3} {:>6.3} {:>6.3}", c.precision, c.recall, c.f_measure);
        }
        let _ = writeln!(out);
    }
    let _ = write!(out, "{:<12}", "weighted");
    for (_, e) in learners {
        let _ =
            write!(out, " | {:>6.3} {:>6.3} {:>6.3}", e.weighted_precision, e.weighted_recall, e.weighted_f_measure);
    }
    let _ = writeln!(out);
}

/// Per-class tables for both evaluation modes and the accuracy ranking.
pub fn render_tables(report: &BenchReport, timings: &[Timings]) -> String {
    let mut out = String::new();
    let d = &report.dataset;
    let _ = writeln!(
        out,
        "dataset {} ({} records, {} train / {} test, split {}, seed {})\n",
        d.provenance, d.records, d.train_records, d.test_records, report.split, report.seed
    );
    for (mode, pick) in [("holdout", true), ("resubstitution", false)] {
        let rows: Vec<(String, &EvalJson)> = report
            .learners
            .iter()
            .map(|l| (l.learner.clone(), if pick { &l.holdout } else { &l.resubstitution }))
            .collect();
        per_class_table(&mut out, &format!("precision / recall / F-measure, {mode}"), &rows);
        let _ = writeln!(out);
    }

    let _ = writeln!(out, "accuracy ranking");
    let _ = writeln!(
        out,
        "{:>4}  {:<8} {:>9} {:>9} {:>8} {:>11} {:>10}",
        "rank", "learner", "holdout", "resubst.", "rules", "train (ms)", "test (ms)"
    );
    for (rank, id) in report.ranking.holdout.iter().enumerate() {
        let Some(pos) = report.learners.iter().position(|l| &l.learner == id) else { continue };
        let l = &report.learners[pos];
        let t = timings.get(pos).copied().unwrap_or_default();
        let _ = writeln!(
            out,
            "{:>4}  {:<8} {:>9.4} {:>9.4} {:>8} {:>11.1} {:>10.1}",
            rank + 1,
            l.learner,
            l.holdout.accuracy,
            l.resubstitution.accuracy,
            l.rules,
            t.train.as_secs_f64() * 1e3,
            t.test.as_secs_f64() * 1e3
        );
    }
    out
}
