//! PART: a rule list read off a sequence of partial C4.5 trees.
//!
//! Each round grows a partial tree on the records not yet covered: splits
//! maximize gain ratio, subsets are expanded in order of increasing class
//! entropy, and expansion stops at the first subset that does not collapse
//! into a leaf. A node whose expanded children are all leaves is replaced by
//! a leaf when its pessimistic error estimate is no worse. The leaf with the
//! largest coverage becomes the next rule and its records are removed.

use alloc::boxed::Box;
use alloc::vec::Vec;

use crate::class::TrafficClass;
use crate::dataset::Dataset;
use crate::error::{CoreError, CoreResult};
use crate::math::{argmax, entropy, log2, normal_quantile};
use crate::model::{Condition, LearnerId, Rule, RuleModel};

use super::{counts_of, label_indices};

#[derive(Copy, Clone, Debug, PartialEq)]
pub struct PartParams {
    /// Confidence factor of the pessimistic error estimate, in (0, 0.5].
    pub confidence: f64,
    pub min_leaf: usize,
    pub seed: u64,
}

impl Default for PartParams {
    fn default() -> Self {
        PartParams { confidence: 0.25, min_leaf: 2, seed: 1 }
    }
}

type Counts = [f64; TrafficClass::COUNT];

struct Node {
    counts: Counts,
    split: Option<(usize, f64)>,
    sons: [Option<Box<Node>>; 2],
    /// Son followed when reading the rule off the tree.
    chosen: usize,
}

impl Node {
    fn leaf(counts: Counts) -> Node {
        Node { counts, split: None, sons: [None, None], chosen: 0 }
    }

    fn is_leaf(&self) -> bool {
        self.split.is_none()
    }

    fn total(&self) -> f64 {
        self.counts.iter().sum()
    }

    /// Negated coverage of the leaf the rule path reaches.
    fn size_of_branch(&self) -> f64 {
        match &self.sons[self.chosen] {
            Some(son) if !self.is_leaf() => son.size_of_branch(),
            _ => -self.total(),
        }
    }
}

struct Builder<'a> {
    ds: &'a Dataset,
    labels: &'a [usize],
    min_leaf: usize,
    num_classes: f64,
    confidence: f64,
    z: f64,
}

struct Split {
    attribute: usize,
    threshold: f64,
    gain: f64,
    ratio: f64,
}

impl Builder<'_> {
    fn value(&self, i: usize, a: usize) -> f64 {
        self.ds.records()[i].values[a]
    }

    fn counts(&self, rows: &[usize]) -> Counts {
        let mut c = [0.0; TrafficClass::COUNT];
        for &i in rows {
            c[self.labels[i]] += 1.0;
        }
        c
    }

    /// Upper confidence bound on the error count minus observed errors,
    /// as in C4.5.
    fn add_errs(&self, n: f64, e: f64) -> f64 {
        if e < 1.0 {
            let base = n * (1.0 - libm::pow(self.confidence, 1.0 / n));
            if e == 0.0 {
                return base;
            }
            return base + e * (self.add_errs(n, 1.0) - base);
        }
        if e + 0.5 >= n {
            return (n - e).max(0.0);
        }
        let z = self.z;
        let f = (e + 0.5) / n;
        let r = (f + z * z / (2.0 * n) + z * libm::sqrt(f / n - f * f / n + z * z / (4.0 * n * n))) / (1.0 + z * z / n);
        r * n - e
    }

    fn leaf_errors(&self, counts: &Counts) -> f64 {
        let total: f64 = counts.iter().sum();
        if total == 0.0 {
            return 0.0;
        }
        let wrong = total - counts[argmax(counts)];
        wrong + self.add_errs(total, wrong)
    }

    fn numeric_split(&self, rows: &[usize], a: usize, node_entropy: f64) -> Option<Split> {
        let n = rows.len() as f64;
        let mut min_split = 0.1 * n / self.num_classes;
        if min_split <= self.min_leaf as f64 {
            min_split = self.min_leaf as f64;
        } else if min_split > 25.0 {
            min_split = 25.0;
        }
        if n < 2.0 * min_split {
            return None;
        }
        let mut sorted = rows.to_vec();
        sorted.sort_by(|&x, &y| self.value(x, a).total_cmp(&self.value(y, a)));
        let total = self.counts(&sorted);
        let mut left = [0.0; TrafficClass::COUNT];
        let mut candidates = 0usize;
        let mut best: Option<(usize, f64)> = None;
        for s in 1..sorted.len() {
            left[self.labels[sorted[s - 1]]] += 1.0;
            if self.value(sorted[s - 1], a) >= self.value(sorted[s], a) {
                continue;
            }
            let nl = s as f64;
            let nr = n - nl;
            if nl < min_split || nr < min_split {
                continue;
            }
            let mut right = total;
            for (r, l) in right.iter_mut().zip(&left) {
                *r -= l;
            }
            let gain = node_entropy - (nl * entropy(&left) + nr * entropy(&right)) / n;
            candidates += 1;
            if gain > best.map_or(0.0, |b| b.1) {
                best = Some((s, gain));
            }
        }
        let (s, gain) = best?;
        // MDL correction for the choice among candidate thresholds.
        let gain = gain - log2(candidates as f64) / n;
        if gain <= 0.0 {
            return None;
        }
        let lo = self.value(sorted[s - 1], a);
        let hi = self.value(sorted[s], a);
        let mid = lo + (hi - lo) / 2.0;
        let threshold = if mid >= hi { lo } else { mid };
        let split_info = entropy(&[s as f64, n - s as f64]);
        let ratio = if split_info > 0.0 { gain / split_info } else { 0.0 };
        Some(Split { attribute: a, threshold, gain, ratio })
    }

    fn select_split(&self, rows: &[usize], counts: &Counts) -> Option<Split> {
        let n = rows.len() as f64;
        if n < 2.0 * self.min_leaf as f64 || counts[argmax(counts)] == n {
            return None;
        }
        let node_entropy = entropy(counts);
        let splits: Vec<Split> =
            (0..self.ds.num_attributes()).filter_map(|a| self.numeric_split(rows, a, node_entropy)).collect();
        if splits.is_empty() {
            return None;
        }
        let average = splits.iter().map(|s| s.gain).sum::<f64>() / splits.len() as f64;
        let mut best: Option<Split> = None;
        for s in splits {
            if s.gain >= average - 1e-3 && s.ratio > best.as_ref().map_or(0.0, |b| b.ratio) {
                best = Some(s);
            }
        }
        best
    }

    fn build(&self, rows: Vec<usize>) -> Node {
        let counts = self.counts(&rows);
        let Some(split) = self.select_split(&rows, &counts) else {
            return Node::leaf(counts);
        };
        let (a, t) = (split.attribute, split.threshold);
        let (le, gt): (Vec<usize>, Vec<usize>) = rows.iter().partition(|&&i| self.value(i, a) <= t);
        let mut subsets = [Some(le), Some(gt)];
        let mut node = Node { counts, split: Some((a, t)), sons: [None, None], chosen: 0 };

        // Expand subsets in order of increasing entropy until one of them
        // does not end up a leaf.
        loop {
            let mut pick: Option<(usize, f64)> = None;
            for (k, sub) in subsets.iter().enumerate() {
                if let Some(rows) = sub {
                    let e = if rows.is_empty() { f64::MAX } else { entropy(&self.counts(rows)) };
                    if pick.is_none_or(|p| e < p.1) {
                        pick = Some((k, e));
                    }
                }
            }
            let Some((k, _)) = pick else { break };
            let rows = subsets[k].take().expect("picked subset");
            let son = self.build(rows);
            let leaf = son.is_leaf();
            node.sons[k] = Some(Box::new(son));
            if !leaf {
                break;
            }
        }

        let all_leaves = node.sons.iter().all(|s| s.as_ref().is_some_and(|s| s.is_leaf()));
        if all_leaves {
            let tree: f64 = node.sons.iter().flatten().map(|s| self.leaf_errors(&s.counts)).sum();
            if self.leaf_errors(&node.counts) <= tree + 0.1 {
                return Node::leaf(node.counts);
            }
        }
        node.chosen = choose_last_index(&node, self.min_leaf as f64);
        node
    }
}

fn choose_last_index(node: &Node, min_leaf: f64) -> usize {
    let mut best = 0;
    let mut min = f64::MAX;
    for (k, son) in node.sons.iter().enumerate() {
        if let Some(son) = son {
            if son.total() >= min_leaf {
                let size = son.size_of_branch();
                if size < min {
                    min = size;
                    best = k;
                }
            }
        }
    }
    best
}

/// Conditions along the rule path and the class of the leaf it ends in.
fn read_rule(root: &Node) -> (Vec<Condition>, TrafficClass) {
    let mut conditions = Vec::new();
    let mut node = root;
    while let (Some((attribute, threshold)), Some(son)) = (node.split, node.sons[node.chosen].as_deref()) {
        conditions.push(if node.chosen == 0 {
            Condition::Le { attribute, threshold }
        } else {
            Condition::Gt { attribute, threshold }
        });
        node = son;
    }
    (conditions, TrafficClass::ALL[argmax(&node.counts)])
}

/// Trains a PART rule list. Every round removes at least one record, so
/// the number of rounds is bounded by the training-set size.
pub fn train_part(train: &Dataset, params: &PartParams) -> CoreResult<RuleModel> {
    let labels = label_indices(train)?;
    if !(params.confidence > 0.0 && params.confidence <= 0.5) {
        return Err(CoreError::InvalidParameter("confidence must lie in (0, 0.5]"));
    }
    if params.min_leaf == 0 {
        return Err(CoreError::InvalidParameter("min_leaf must be >= 1"));
    }
    let counts = counts_of(&labels, 0..labels.len());
    let builder = Builder {
        ds: train,
        labels: &labels,
        min_leaf: params.min_leaf,
        num_classes: counts.iter().filter(|&&c| c > 0).count() as f64,
        confidence: params.confidence,
        z: normal_quantile(1.0 - params.confidence),
    };

    let mut remaining: Vec<usize> = (0..labels.len()).collect();
    let mut rules = Vec::new();
    let mut default = TrafficClass::ALL[argmax(&counts)];
    while !remaining.is_empty() {
        let tree = builder.build(remaining.clone());
        let (conditions, class) = read_rule(&tree);
        if conditions.is_empty() {
            default = class;
            break;
        }
        remaining.retain(|&i| {
            let v = &train.records()[i].values;
            !conditions.iter().all(|c| c.matches(v, &[]))
        });
        rules.push(Rule::new(conditions, class));
    }

    let mut model = RuleModel::skeleton(LearnerId::Part, train, default)
        .with_param("confidence", params.confidence)
        .with_param("min_leaf", params.min_leaf)
        .with_param("seed", params.seed);
    model.rules = rules;
    Ok(model)
}
