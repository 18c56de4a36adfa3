//! Multiclass confusion matrices and the metrics derived from them.
//!
//! Per-class counts are one-vs-rest: for class `c`, `tp` is the diagonal
//! cell, `fp` the rest of column `c` (predicted `c`, actually something
//! else), `fn_` the rest of row `c`. Any ratio with a zero denominator is 0.

use alloc::vec::Vec;
use core::cmp::Ordering;

use crate::class::TrafficClass;
use crate::dataset::Dataset;
use crate::error::{CoreError, CoreResult};
use crate::model::{LearnerId, RuleModel};

const K: usize = TrafficClass::COUNT;

/// Rows are actual classes, columns predicted classes, both canonical order.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ConfusionMatrix {
    pub counts: [[u64; K]; K],
}

impl ConfusionMatrix {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_pairs<I: IntoIterator<Item = (TrafficClass, TrafficClass)>>(pairs: I) -> Self {
        let mut m = Self::new();
        for (actual, predicted) in pairs {
            m.add(actual, predicted);
        }
        m
    }

    pub fn add(&mut self, actual: TrafficClass, predicted: TrafficClass) {
        self.counts[actual.index()][predicted.index()] += 1;
    }

    pub fn get(&self, actual: TrafficClass, predicted: TrafficClass) -> u64 {
        self.counts[actual.index()][predicted.index()]
    }

    pub fn total(&self) -> u64 {
        self.counts.iter().flatten().sum()
    }

    pub fn correct(&self) -> u64 {
        (0..K).map(|i| self.counts[i][i]).sum()
    }

    /// Number of records whose actual class is `c`.
    pub fn support(&self, c: TrafficClass) -> u64 {
        self.counts[c.index()].iter().sum()
    }

    pub fn predicted(&self, c: TrafficClass) -> u64 {
        self.counts.iter().map(|row| row[c.index()]).sum()
    }
}

#[derive(Copy, Clone, Debug, PartialEq)]
pub struct ClassMetrics {
    pub class: TrafficClass,
    pub tp: u64,
    pub fp: u64,
    pub fn_: u64,
    pub tn: u64,
    pub precision: f64,
    pub recall: f64,
    pub f_measure: f64,
}

fn ratio(num: f64, den: f64) -> f64 {
    if den == 0.0 {
        0.0
    } else {
        num / den
    }
}

pub fn class_metrics(m: &ConfusionMatrix, class: TrafficClass) -> ClassMetrics {
    let tp = m.get(class, class);
    let fp = m.predicted(class) - tp;
    let fn_ = m.support(class) - tp;
    let tn = m.total() - tp - fp - fn_;
    let precision = ratio(tp as f64, (tp + fp) as f64);
    let recall = ratio(tp as f64, (tp + fn_) as f64);
    let f_measure = ratio(2.0 * precision * recall, precision + recall);
    ClassMetrics { class, tp, fp, fn_, tn, precision, recall, f_measure }
}

pub fn accuracy(m: &ConfusionMatrix) -> CoreResult<f64> {
    match m.total() {
        0 => Err(CoreError::EmptyMatrix),
        n => Ok(m.correct() as f64 / n as f64),
    }
}

/// Classifies every record of `test` with `model`.
pub fn confusion(model: &RuleModel, test: &Dataset) -> CoreResult<ConfusionMatrix> {
    let predictions = model.predict_all(test)?;
    let actual = test.labels()?;
    Ok(ConfusionMatrix::from_pairs(actual.into_iter().zip(predictions)))
}

/// Everything derived from one confusion matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct EvalSummary {
    pub learner: LearnerId,
    pub matrix: ConfusionMatrix,
    pub accuracy: f64,
    /// Canonical class order.
    pub per_class: Vec<ClassMetrics>,
    /// Support-weighted means over classes.
    pub weighted_precision: f64,
    pub weighted_recall: f64,
    pub weighted_f_measure: f64,
}

impl EvalSummary {
    pub fn from_matrix(learner: LearnerId, matrix: ConfusionMatrix) -> CoreResult<EvalSummary> {
        let accuracy = accuracy(&matrix)?;
        let per_class: Vec<ClassMetrics> = TrafficClass::ALL.iter().map(|&c| class_metrics(&matrix, c)).collect();
        let total = matrix.total() as f64;
        let weighted = |f: fn(&ClassMetrics) -> f64| {
            per_class.iter().map(|m| matrix.support(m.class) as f64 * f(m)).sum::<f64>() / total
        };
        Ok(EvalSummary {
            learner,
            accuracy,
            weighted_precision: weighted(|m| m.precision),
            weighted_recall: weighted(|m| m.recall),
            weighted_f_measure: weighted(|m| m.f_measure),
            per_class,
            matrix,
        })
    }
}

pub fn evaluate(model: &RuleModel, test: &Dataset) -> CoreResult<EvalSummary> {
    EvalSummary::from_matrix(model.learner, confusion(model, test)?)
}

/// Ranking order: accuracy descending, then weighted F-measure descending,
/// then canonical learner order.
pub fn ranking_order(a: &EvalSummary, b: &EvalSummary) -> Ordering {
    b.accuracy
        .total_cmp(&a.accuracy)
        .then(b.weighted_f_measure.total_cmp(&a.weighted_f_measure))
        .then(a.learner.cmp(&b.learner))
}

/// Learners ranked best first.
pub fn compare(summaries: &[EvalSummary]) -> Vec<LearnerId> {
    let mut sorted: Vec<&EvalSummary> = summaries.iter().collect();
    sorted.sort_by(|a, b| ranking_order(a, b));
    sorted.into_iter().map(|s| s.learner).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use TrafficClass::*;

    #[test]
    fn two_class_reference_counts() {
        // 8 Normal (6 right), 4 TcpSyn (3 right)
        let mut pairs = alloc::vec![(Normal, Normal); 6];
        pairs.extend([(Normal, TcpSyn), (Normal, TcpSyn), (TcpSyn, Normal)]);
        pairs.extend([(TcpSyn, TcpSyn); 3]);
        let m = ConfusionMatrix::from_pairs(pairs);
        assert_eq!(accuracy(&m).unwrap(), 0.75);
        let syn = class_metrics(&m, TcpSyn);
        assert_eq!((syn.tp, syn.fp, syn.fn_, syn.tn), (3, 2, 1, 6));
        assert_eq!(syn.precision, 0.6);
        assert_eq!(syn.recall, 0.75);
        assert!((syn.f_measure - 2.0 * 0.45 / 1.35).abs() < 1e-12);
    }

    #[test]
    fn absent_class_metrics_are_zero() {
        let m = ConfusionMatrix::from_pairs([(Normal, Normal)]);
        let s = class_metrics(&m, Slowpost);
        assert_eq!((s.precision, s.recall, s.f_measure), (0.0, 0.0, 0.0));
        assert_eq!(s.tn, 1);
    }

    #[test]
    fn empty_matrix_accuracy_is_an_error() {
        assert_eq!(accuracy(&ConfusionMatrix::new()), Err(CoreError::EmptyMatrix));
    }

    #[test]
    fn ranking_breaks_ties_by_f_then_learner() {
        let perfect = ConfusionMatrix::from_pairs([(Normal, Normal), (TcpSyn, TcpSyn)]);
        let half_a = ConfusionMatrix::from_pairs([(Normal, Normal), (TcpSyn, Normal)]);
        let s = |l, m: &ConfusionMatrix| EvalSummary::from_matrix(l, m.clone()).unwrap();
        let order = compare(&[
            s(LearnerId::DTable, &perfect),
            s(LearnerId::ZeroR, &half_a),
            s(LearnerId::OneR, &half_a),
            s(LearnerId::Part, &perfect),
        ]);
        assert_eq!(order, [LearnerId::Part, LearnerId::DTable, LearnerId::ZeroR, LearnerId::OneR]);
    }
}
