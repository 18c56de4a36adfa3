//! The five rule-based learners. Every learner produces a [`RuleModel`]
//! and is deterministic given its inputs and seed.
//!
//! [`RuleModel`]: crate::RuleModel

mod dtable;
mod oner;
mod part;
mod ripper;
mod zeror;

pub use dtable::{loo_accuracy, train_decision_table, DTableParams};
pub use oner::{single_attribute_errors, train_oner};
pub use part::{train_part, PartParams};
pub use ripper::{train_jrip, JripParams};
pub use zeror::train_zeror;

use alloc::vec::Vec;

use crate::class::TrafficClass;
use crate::dataset::Dataset;
use crate::error::{CoreError, CoreResult};

/// Labels as class indices, rejecting empty or partly unlabeled data.
pub(crate) fn label_indices(ds: &Dataset) -> CoreResult<Vec<usize>> {
    if ds.is_empty() {
        return Err(CoreError::EmptyInput);
    }
    Ok(ds.labels()?.into_iter().map(TrafficClass::index).collect())
}

pub(crate) fn counts_of(labels: &[usize], rows: impl IntoIterator<Item = usize>) -> [usize; TrafficClass::COUNT] {
    let mut counts = [0; TrafficClass::COUNT];
    for i in rows {
        counts[labels[i]] += 1;
    }
    counts
}
