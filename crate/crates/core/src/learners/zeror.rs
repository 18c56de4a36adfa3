use crate::class::TrafficClass;
use crate::dataset::Dataset;
use crate::error::CoreResult;
use crate::math::argmax;
use crate::model::{LearnerId, RuleModel};

use super::{counts_of, label_indices};

/// Predicts the plurality class of the training data for every record.
pub fn train_zeror(train: &Dataset) -> CoreResult<RuleModel> {
    let labels = label_indices(train)?;
    let counts = counts_of(&labels, 0..labels.len());
    let default = TrafficClass::ALL[argmax(&counts)];
    Ok(RuleModel::skeleton(LearnerId::ZeroR, train, default))
}
