use alloc::vec::Vec;

use crate::class::TrafficClass;
use crate::dataset::Dataset;
use crate::discretize::{bin_of, fit_oner_buckets, BinCuts};
use crate::error::{CoreError, CoreResult};
use crate::math::argmax;
use crate::model::{Condition, LearnerId, Rule, RuleModel};

use super::{counts_of, label_indices};

/// Buckets attribute `a` and returns the cuts, the majority class of each
/// bucket and the number of training records the bucket rule gets wrong.
fn bucket_rule(
    ds: &Dataset,
    labels: &[usize],
    a: usize,
    min_bucket: usize,
) -> CoreResult<(BinCuts, Vec<TrafficClass>, usize)> {
    let pairs: Vec<(f64, TrafficClass)> =
        ds.records().iter().zip(labels).map(|(r, &l)| (r.values[a], TrafficClass::ALL[l])).collect();
    let cuts = fit_oner_buckets(a, &pairs, min_bucket)?;
    let mut per_bin = alloc::vec![[0usize; TrafficClass::COUNT]; cuts.num_bins()];
    for (r, &l) in ds.records().iter().zip(labels) {
        per_bin[bin_of(&cuts, r.values[a])][l] += 1;
    }
    let mut errors = 0;
    let majorities = per_bin
        .iter()
        .map(|counts| {
            let m = argmax(counts);
            errors += counts.iter().sum::<usize>() - counts[m];
            TrafficClass::ALL[m]
        })
        .collect();
    Ok((cuts, majorities, errors))
}

/// Training errors of the bucket rule of every attribute, in schema order.
pub fn single_attribute_errors(train: &Dataset, min_bucket: usize) -> CoreResult<Vec<usize>> {
    let labels = label_indices(train)?;
    (0..train.num_attributes()).map(|a| bucket_rule(train, &labels, a, min_bucket).map(|(_, _, e)| e)).collect()
}

/// Holte's 1R: one bucketed rule per attribute, keep the attribute with the
/// fewest training errors (lowest index on ties).
pub fn train_oner(train: &Dataset, min_bucket: usize) -> CoreResult<RuleModel> {
    let labels = label_indices(train)?;
    if train.num_attributes() == 0 {
        return Err(CoreError::InvalidParameter("OneR needs at least one attribute"));
    }
    let mut best: Option<(BinCuts, Vec<TrafficClass>, usize)> = None;
    for a in 0..train.num_attributes() {
        let candidate = bucket_rule(train, &labels, a, min_bucket)?;
        if best.as_ref().is_none_or(|b| candidate.2 < b.2) {
            best = Some(candidate);
        }
    }
    let (cuts, majorities, _) = best.expect("at least one attribute");
    let counts = counts_of(&labels, 0..labels.len());
    let attribute = cuts.attribute_index;
    let mut model = RuleModel::skeleton(LearnerId::OneR, train, TrafficClass::ALL[argmax(&counts)])
        .with_param("min_bucket", min_bucket);
    model.rules = majorities
        .into_iter()
        .enumerate()
        .map(|(bin, class)| Rule::new(alloc::vec![Condition::InBin { attribute, bin }], class))
        .collect();
    model.bins.push(cuts);
    Ok(model)
}
