//! Decision table with best-first forward attribute selection.
//!
//! All attributes are discretized with MDL bins first. Candidate subsets are
//! scored by leave-one-out accuracy of the table they induce.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::vec::Vec;

use crate::class::TrafficClass;
use crate::dataset::Dataset;
use crate::discretize::{bin_of, fit_mdl_bins, BinCuts};
use crate::error::{CoreError, CoreResult};
use crate::math::argmax;
use crate::model::{DecisionTableCore, LearnerId, RuleModel};

use super::{counts_of, label_indices};

/// Minimum merit improvement that resets the stale counter.
const MIN_IMPROVEMENT: f64 = 1e-5;

#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub struct DTableParams {
    /// Non-improving expansions tolerated before the search stops.
    pub max_stale: usize,
    pub seed: u64,
}

impl Default for DTableParams {
    fn default() -> Self {
        DTableParams { max_stale: 5, seed: 1 }
    }
}

type Counts = [usize; TrafficClass::COUNT];

struct Discretized {
    bins: Vec<BinCuts>,
    /// `ids[record][attribute]`
    ids: Vec<Vec<usize>>,
    labels: Vec<usize>,
    totals: Counts,
}

impl Discretized {
    fn new(ds: &Dataset) -> CoreResult<Discretized> {
        let labels = label_indices(ds)?;
        let bins = (0..ds.num_attributes())
            .map(|a| {
                let pairs: Vec<(f64, TrafficClass)> =
                    ds.records().iter().zip(&labels).map(|(r, &l)| (r.values[a], TrafficClass::ALL[l])).collect();
                fit_mdl_bins(a, &pairs)
            })
            .collect::<CoreResult<Vec<_>>>()?;
        let ids = ds
            .records()
            .iter()
            .map(|r| bins.iter().map(|b| bin_of(b, r.values[b.attribute_index])).collect())
            .collect();
        let totals = counts_of(&labels, 0..labels.len());
        Ok(Discretized { bins, ids, labels, totals })
    }

    fn key(&self, record: usize, subset: &[usize]) -> Vec<usize> {
        subset.iter().map(|&a| self.ids[record][a]).collect()
    }

    fn cells(&self, subset: &[usize]) -> BTreeMap<Vec<usize>, Counts> {
        let mut cells: BTreeMap<Vec<usize>, Counts> = BTreeMap::new();
        for (i, &l) in self.labels.iter().enumerate() {
            cells.entry(self.key(i, subset)).or_insert([0; TrafficClass::COUNT])[l] += 1;
        }
        cells
    }

    fn loo(&self, subset: &[usize]) -> f64 {
        let cells = self.cells(subset);
        let mut correct = 0usize;
        for (i, &l) in self.labels.iter().enumerate() {
            let mut cell = cells[&self.key(i, subset)];
            cell[l] -= 1;
            let predicted = if cell.iter().any(|&c| c > 0) {
                argmax(&cell)
            } else {
                let mut rest = self.totals;
                rest[l] -= 1;
                argmax(&rest)
            };
            if predicted == l {
                correct += 1;
            }
        }
        correct as f64 / self.labels.len() as f64
    }
}

/// Leave-one-out accuracy of the table over `subset` (attribute indices),
/// using the same MDL bins as training. A held-out record whose cell holds
/// nothing else is predicted as the majority of the remaining records.
pub fn loo_accuracy(train: &Dataset, subset: &[usize]) -> CoreResult<f64> {
    if subset.iter().any(|&a| a >= train.num_attributes()) {
        return Err(CoreError::InvalidParameter("attribute index outside schema"));
    }
    Ok(Discretized::new(train)?.loo(subset))
}

fn precedes(a: &[usize], b: &[usize]) -> bool {
    (a.len(), a) < (b.len(), b)
}

/// Best-first forward search from the empty subset. The open list is kept
/// sorted by merit, ties in insertion order.
fn search(d: &Discretized, width: usize, max_stale: usize) -> (Vec<usize>, f64) {
    let empty = Vec::new();
    let mut best = (empty.clone(), d.loo(&empty));
    let mut open: Vec<(f64, Vec<usize>)> = Vec::from([(best.1, empty.clone())]);
    let mut visited: BTreeSet<Vec<usize>> = BTreeSet::from([empty]);
    let mut stale = 0;
    while stale < max_stale && !open.is_empty() {
        let (_, parent) = open.remove(0);
        let mut improved = false;
        for a in 0..width {
            if parent.contains(&a) {
                continue;
            }
            let mut child = parent.clone();
            child.push(a);
            child.sort_unstable();
            if !visited.insert(child.clone()) {
                continue;
            }
            let merit = d.loo(&child);
            let at = open.partition_point(|(m, _)| *m >= merit);
            open.insert(at, (merit, child.clone()));
            if merit - best.1 > MIN_IMPROVEMENT {
                best = (child, merit);
                improved = true;
            } else if merit - best.1 >= -MIN_IMPROVEMENT && precedes(&child, &best.0) {
                // Equal merit: keep the smaller subset, then the one with
                // lower attribute indices. Not counted as progress.
                best = (child, merit);
            }
        }
        if improved {
            stale = 0;
        } else {
            stale += 1;
        }
    }
    best
}

pub fn train_decision_table(train: &Dataset, params: &DTableParams) -> CoreResult<RuleModel> {
    if params.max_stale == 0 {
        return Err(CoreError::InvalidParameter("max_stale must be >= 1"));
    }
    let d = Discretized::new(train)?;
    let (selected, merit) = search(&d, train.num_attributes(), params.max_stale);

    let majority = TrafficClass::ALL[argmax(&d.totals)];
    let cells = d.cells(&selected).into_iter().map(|(k, counts)| (k, TrafficClass::ALL[argmax(&counts)])).collect();
    let table = DecisionTableCore {
        bins: selected.iter().map(|&a| d.bins[a].clone()).collect(),
        selected_attributes: selected,
        cells,
        majority_class: majority,
    };

    let mut model = RuleModel::skeleton(LearnerId::DTable, train, majority)
        .with_param("search", "best_first")
        .with_param("max_stale", params.max_stale)
        .with_param("seed", params.seed)
        .with_param("loo", merit);
    model.table = Some(table);
    Ok(model)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dataset::MibRecord;
    use alloc::string::ToString;
    use alloc::vec;

    fn dataset(rows: &[(f64, f64, TrafficClass)]) -> Dataset {
        let records = rows.iter().map(|&(x, y, c)| MibRecord::labeled(vec![x, y], c)).collect();
        Dataset::new(vec!["x".to_string(), "y".to_string()], records, "t").unwrap()
    }

    #[test]
    fn picks_the_informative_attribute() {
        let mut rows = Vec::new();
        for i in 0..40 {
            let noise = (i * 7 % 13) as f64;
            rows.push((i as f64, noise, TrafficClass::Normal));
            rows.push((100.0 + i as f64, noise, TrafficClass::TcpSyn));
        }
        let ds = dataset(&rows);
        let m = train_decision_table(&ds, &DTableParams::default()).unwrap();
        let t = m.table.as_ref().unwrap();
        assert_eq!(t.selected_attributes, vec![0]);
        assert_eq!(m.param("loo"), Some("1"));
        for r in ds.records() {
            assert_eq!(m.predict(&r.values).unwrap(), r.label.unwrap());
        }
    }

    #[test]
    fn empty_subset_loo_is_held_out_majority() {
        // 3 Normal, 2 TcpSyn. Holding out a Normal leaves a 2-2 tie that goes
        // to Normal; holding out a TcpSyn leaves Normal ahead.
        let ds = dataset(&[
            (0.0, 0.0, TrafficClass::Normal),
            (0.0, 0.0, TrafficClass::Normal),
            (0.0, 0.0, TrafficClass::Normal),
            (0.0, 0.0, TrafficClass::TcpSyn),
            (0.0, 0.0, TrafficClass::TcpSyn),
        ]);
        assert_eq!(loo_accuracy(&ds, &[]).unwrap(), 0.6);
        assert!(loo_accuracy(&ds, &[2]).is_err());
    }

    #[test]
    fn extreme_values_land_in_the_outer_bin() {
        let mut rows = Vec::new();
        for i in 0..30 {
            rows.push((i as f64, 0.0, TrafficClass::Normal));
            rows.push((50.0 + i as f64, 0.0, TrafficClass::Normal));
            rows.push((200.0 + i as f64, 0.0, TrafficClass::UdpFlood));
        }
        let m = train_decision_table(&dataset(&rows), &DTableParams::default()).unwrap();
        let t = m.table.as_ref().unwrap();
        assert_eq!(t.majority_class, TrafficClass::Normal);
        assert_eq!(m.predict(&[1e9, 0.0]).unwrap(), TrafficClass::UdpFlood);
    }
}
