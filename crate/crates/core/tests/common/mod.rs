//! Independent reference implementations used as test oracles, plus small
//! dataset generators. Nothing here calls into the code it checks except for
//! plain data access.
#![allow(dead_code)]

use mibwarden_core::{fit_mdl_bins, BinCuts, ConfusionMatrix, Dataset, MibRecord, TrafficClass};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn names(m: usize) -> Vec<String> {
    (0..m).map(|i| format!("a{i}")).collect()
}

pub fn dataset(rows: Vec<(Vec<f64>, TrafficClass)>) -> Dataset {
    let m = rows.first().map_or(1, |r| r.0.len());
    let records = rows.into_iter().map(|(v, c)| MibRecord::labeled(v, c)).collect();
    Dataset::new(names(m), records, "test").unwrap()
}

/// Lowest index among the maxima.
fn first_max(counts: &[usize]) -> usize {
    let best = *counts.iter().max().unwrap();
    counts.iter().position(|&c| c == best).unwrap()
}

/// Per-class one-vs-rest counts obtained by walking every (actual,
/// predicted) pair the matrix stands for.
pub struct PairCounts {
    pub tp: u64,
    pub fp: u64,
    pub fn_: u64,
    pub tn: u64,
}

pub fn pair_counts(m: &ConfusionMatrix, class: TrafficClass) -> PairCounts {
    let mut out = PairCounts { tp: 0, fp: 0, fn_: 0, tn: 0 };
    for actual in TrafficClass::ALL {
        for predicted in TrafficClass::ALL {
            for _ in 0..m.get(actual, predicted) {
                match (actual == class, predicted == class) {
                    (true, true) => out.tp += 1,
                    (false, true) => out.fp += 1,
                    (true, false) => out.fn_ += 1,
                    (false, false) => out.tn += 1,
                }
            }
        }
    }
    out
}

pub fn random_matrix(r: &mut ChaCha8Rng, max_total: u64) -> ConfusionMatrix {
    let mut m = ConfusionMatrix::new();
    let cells = 64;
    let budget = r.gen_range(0..=max_total);
    // Sparse or dense at random so empty rows and columns show up.
    let density: f64 = r.gen();
    for i in 0..8 {
        for j in 0..8 {
            if r.gen::<f64>() < density {
                m.counts[i][j] = r.gen_range(0..=budget / cells);
            }
        }
    }
    m
}

/// Training errors of Holte's bucket rule on one attribute. Works on runs
/// of equal values and a running class tally.
pub fn holte_errors(values: &[f64], labels: &[usize], min_bucket: usize) -> usize {
    let mut idx: Vec<usize> = (0..values.len()).collect();
    idx.sort_by(|&a, &b| values[a].total_cmp(&values[b]).then(labels[a].cmp(&labels[b])));
    let x: Vec<f64> = idx.iter().map(|&i| values[i]).collect();
    let y: Vec<usize> = idx.iter().map(|&i| labels[i]).collect();

    let mut buckets: Vec<Vec<usize>> = Vec::new();
    let mut start = 0;
    while start < x.len() {
        let mut tally = vec![0usize; 8];
        let mut end = start;
        while end < x.len() {
            tally[y[end]] += 1;
            end += 1;
            if tally.iter().any(|&t| t >= min_bucket) {
                break;
            }
        }
        let major = first_max(&tally);
        while end < x.len() && (x[end] == x[end - 1] || y[end] == major) {
            tally[y[end]] += 1;
            end += 1;
        }
        let major = first_max(&tally);
        match buckets.last_mut() {
            Some(prev) if first_max(prev) == major => {
                for (p, t) in prev.iter_mut().zip(&tally) {
                    *p += t;
                }
            }
            _ => buckets.push(tally),
        }
        start = end;
    }
    buckets.iter().map(|t| t.iter().sum::<usize>() - t[first_max(t)]).sum()
}

/// Decision-table leave-one-out accuracy over `subset`, quadratic scan.
pub fn brute_loo(keys: &[Vec<usize>], labels: &[usize], subset: &[usize]) -> f64 {
    let n = labels.len();
    let mut correct = 0;
    for i in 0..n {
        let mut cell = vec![0usize; 8];
        let mut all = vec![0usize; 8];
        for j in (0..n).filter(|&j| j != i) {
            all[labels[j]] += 1;
            if subset.iter().all(|&a| keys[i][a] == keys[j][a]) {
                cell[labels[j]] += 1;
            }
        }
        let predicted = if cell.iter().any(|&c| c > 0) { first_max(&cell) } else { first_max(&all) };
        if predicted == labels[i] {
            correct += 1;
        }
    }
    correct as f64 / n as f64
}

/// Bin ids of every record under MDL cuts, `[record][attribute]`.
pub fn mdl_keys(ds: &Dataset) -> Vec<Vec<usize>> {
    let labels = ds.labels().unwrap();
    let cuts: Vec<BinCuts> = (0..ds.num_attributes())
        .map(|a| {
            let pairs: Vec<_> = ds.records().iter().zip(&labels).map(|(r, &l)| (r.values[a], l)).collect();
            fit_mdl_bins(a, &pairs).unwrap()
        })
        .collect();
    ds.records()
        .iter()
        .map(|r| cuts.iter().map(|c| c.cuts.iter().filter(|&&t| t < r.values[c.attribute_index]).count()).collect())
        .collect()
}

/// Best subset by exhaustive enumeration: highest LOO score, then fewest
/// attributes, then lowest indices.
pub fn exhaustive_best_subset(ds: &Dataset) -> (Vec<usize>, f64) {
    let keys = mdl_keys(ds);
    let labels: Vec<usize> = ds.labels().unwrap().into_iter().map(|c| c.index()).collect();
    let m = ds.num_attributes();
    let mut subsets: Vec<Vec<usize>> =
        (0u32..1 << m).map(|mask| (0..m).filter(|&a| mask >> a & 1 == 1).collect()).collect();
    subsets.sort_by(|a, b| (a.len(), a).cmp(&(b.len(), b)));
    let mut best: Option<(Vec<usize>, f64)> = None;
    for s in subsets {
        let score = brute_loo(&keys, &labels, &s);
        if best.as_ref().is_none_or(|b| score > b.1 + 1e-5) {
            best = Some((s, score));
        }
    }
    best.unwrap()
}

/// Records on a coarse lattice with labels driven by one or two attributes
/// and a share of label noise.
pub fn structured_dataset(r: &mut ChaCha8Rng, m: usize, n: usize, classes: usize, noise: f64) -> Dataset {
    let drivers: Vec<usize> = (0..r.gen_range(1..=m.min(2))).map(|_| r.gen_range(0..m)).collect();
    let rows = (0..n)
        .map(|_| {
            let v: Vec<f64> = (0..m).map(|_| f64::from(r.gen_range(0u8..6)) + r.gen_range(0.0..0.5)).collect();
            let mut c = drivers.iter().map(|&a| v[a] as usize).sum::<usize>() % classes;
            if r.gen::<f64>() < noise {
                c = r.gen_range(0..classes);
            }
            (v, TrafficClass::ALL[c])
        })
        .collect();
    dataset(rows)
}

/// Each class occupies its own unit cell of a lattice, so classes are
/// disjoint axis-aligned boxes.
pub fn box_dataset(r: &mut ChaCha8Rng, m: usize, classes: usize, per_class: usize) -> Dataset {
    let mut cells: Vec<Vec<u8>> = Vec::new();
    while cells.len() < classes {
        let cell: Vec<u8> = (0..m).map(|_| r.gen_range(0..4)).collect();
        if !cells.contains(&cell) {
            cells.push(cell);
        }
    }
    let mut rows = Vec::new();
    for (c, cell) in cells.iter().enumerate() {
        for _ in 0..per_class {
            let v = cell.iter().map(|&g| f64::from(g) * 10.0 + r.gen_range(0.0..8.0)).collect();
            rows.push((v, TrafficClass::ALL[c]));
        }
    }
    dataset(rows)
}

/// Like [`box_dataset`], but every attribute gives each class its own
/// interval, so no two classes share a projection on any attribute.
pub fn projection_disjoint_box_dataset(r: &mut ChaCha8Rng, m: usize, classes: usize, per_class: usize) -> Dataset {
    use rand::seq::SliceRandom;
    let mut coords: Vec<Vec<u8>> = vec![Vec::new(); classes];
    for _ in 0..m {
        let mut slots: Vec<u8> = (0..classes as u8).collect();
        slots.shuffle(r);
        for (c, s) in slots.into_iter().enumerate() {
            coords[c].push(s);
        }
    }
    let mut rows = Vec::new();
    for (c, cell) in coords.iter().enumerate() {
        for _ in 0..per_class {
            let v = cell.iter().map(|&g| f64::from(g) * 10.0 + r.gen_range(0.0..8.0)).collect();
            rows.push((v, TrafficClass::ALL[c]));
        }
    }
    dataset(rows)
}
