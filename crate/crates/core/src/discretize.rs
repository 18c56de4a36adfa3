//! Supervised binning of numeric attributes.
//!
//! Bins are half-open on the left: with cuts `c_0 < c_1 < ...`, bin `b`
//! covers `(c_{b-1}, c_b]`, bin 0 is everything `<= c_0` and the last bin
//! everything above the last cut.

use alloc::vec::Vec;

use crate::class::TrafficClass;
use crate::error::{CoreError, CoreResult};
use crate::math::{argmax, entropy, log2};

/// OneR's default minimum bucket size.
pub const DEFAULT_MIN_BUCKET: usize = 6;

#[derive(Clone, Debug, PartialEq)]
pub struct BinCuts {
    pub attribute_index: usize,
    pub cuts: Vec<f64>,
}

impl BinCuts {
    pub fn new(attribute_index: usize, cuts: Vec<f64>) -> CoreResult<BinCuts> {
        if cuts.iter().any(|c| !c.is_finite()) || cuts.windows(2).any(|w| w[0] >= w[1]) {
            return Err(CoreError::InvalidParameter("cuts must be finite and strictly increasing"));
        }
        Ok(BinCuts { attribute_index, cuts })
    }

    pub fn num_bins(&self) -> usize {
        self.cuts.len() + 1
    }

    #[inline]
    pub fn bin(&self, value: f64) -> usize {
        bin_of(self, value)
    }
}

/// Index of the bin holding `value`.
#[inline]
pub fn bin_of(cuts: &BinCuts, value: f64) -> usize {
    cuts.cuts.partition_point(|&c| c < value)
}

fn sorted_pairs(values: &[(f64, TrafficClass)]) -> Vec<(f64, usize)> {
    let mut v: Vec<(f64, usize)> = values.iter().map(|&(x, c)| (x, c.index())).collect();
    v.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
    v
}

/// Cut between two adjacent distinct values. Falls back to the lower value
/// when the midpoint rounds onto the upper one, which keeps the lower value
/// in the lower bin.
fn midpoint(lo: f64, hi: f64) -> f64 {
    let m = lo + (hi - lo) / 2.0;
    if m >= hi {
        lo
    } else {
        m
    }
}

/// Holte's 1R bucketing.
///
/// Walks the sorted values left to right. A bucket keeps absorbing values
/// until some class has `min_bucket` members, then keeps going while the next
/// value repeats the previous one or carries the bucket's majority class.
/// Adjacent buckets with the same majority are merged.
pub fn fit_oner_buckets(
    attribute_index: usize,
    values: &[(f64, TrafficClass)],
    min_bucket: usize,
) -> CoreResult<BinCuts> {
    if values.is_empty() {
        return Err(CoreError::EmptyInput);
    }
    if min_bucket == 0 {
        return Err(CoreError::InvalidParameter("min_bucket must be >= 1"));
    }
    let data = sorted_pairs(values);
    let n = data.len();

    // (first index after the bucket, majority class)
    let mut buckets: Vec<(usize, usize)> = Vec::new();
    let mut i = 0;
    while i < n {
        let mut counts = [0usize; TrafficClass::COUNT];
        loop {
            let c = data[i].1;
            counts[c] += 1;
            i += 1;
            if i >= n || counts[c] >= min_bucket {
                break;
            }
        }
        let majority = argmax(&counts);
        while i < n && (data[i].0 == data[i - 1].0 || data[i].1 == majority) {
            counts[data[i].1] += 1;
            i += 1;
        }
        let majority = argmax(&counts);
        match buckets.last_mut() {
            Some(last) if last.1 == majority => last.0 = i,
            _ => buckets.push((i, majority)),
        }
    }

    let cuts =
        buckets.iter().filter(|(end, _)| *end < n).map(|&(end, _)| midpoint(data[end - 1].0, data[end].0)).collect();
    Ok(BinCuts { attribute_index, cuts })
}

/// Entropy-based recursive splitting with the Fayyad–Irani MDL stopping rule.
pub fn fit_mdl_bins(attribute_index: usize, values: &[(f64, TrafficClass)]) -> CoreResult<BinCuts> {
    if values.is_empty() {
        return Err(CoreError::EmptyInput);
    }
    let data = sorted_pairs(values);
    let mut cuts = Vec::new();
    mdl_split(&data, &mut cuts);
    Ok(BinCuts { attribute_index, cuts })
}

fn class_counts(data: &[(f64, usize)]) -> [f64; TrafficClass::COUNT] {
    let mut counts = [0.0; TrafficClass::COUNT];
    for &(_, c) in data {
        counts[c] += 1.0;
    }
    counts
}

fn distinct_classes(counts: &[f64]) -> f64 {
    counts.iter().filter(|&&c| c > 0.0).count() as f64
}

/// Best boundary of a sorted slice: `(split index, weighted entropy)`.
/// The split index is the first element of the right part.
pub(crate) fn best_entropy_cut(data: &[(f64, usize)]) -> Option<(usize, f64)> {
    let n = data.len();
    let total = class_counts(data);
    let mut left = [0.0; TrafficClass::COUNT];
    let mut best: Option<(usize, f64)> = None;
    for i in 1..n {
        left[data[i - 1].1] += 1.0;
        if data[i - 1].0 >= data[i].0 {
            continue;
        }
        let mut right = total;
        for (r, l) in right.iter_mut().zip(left.iter()) {
            *r -= l;
        }
        let nl = i as f64;
        let nr = (n - i) as f64;
        let e = (nl * entropy(&left) + nr * entropy(&right)) / n as f64;
        match best {
            Some((_, b)) if e >= b - 1e-12 => {}
            _ => best = Some((i, e)),
        }
    }
    best
}

fn mdl_split(data: &[(f64, usize)], cuts: &mut Vec<f64>) {
    let n = data.len();
    if n < 2 {
        return;
    }
    let Some((split, split_entropy)) = best_entropy_cut(data) else {
        return;
    };
    let counts = class_counts(data);
    let left = class_counts(&data[..split]);
    let right = class_counts(&data[split..]);
    let h = entropy(&counts);
    let (h1, h2) = (entropy(&left), entropy(&right));
    let (k, k1, k2) = (distinct_classes(&counts), distinct_classes(&left), distinct_classes(&right));

    let gain = h - split_entropy;
    let delta = log2(libm::pow(3.0, k) - 2.0) - (k * h - k1 * h1 - k2 * h2);
    let threshold = (log2(n as f64 - 1.0) + delta) / n as f64;
    if gain <= threshold {
        return;
    }
    mdl_split(&data[..split], cuts);
    cuts.push(midpoint(data[split - 1].0, data[split].0));
    mdl_split(&data[split..], cuts);
}
