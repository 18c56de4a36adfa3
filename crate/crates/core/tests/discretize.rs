mod common;

use common::rng;
use mibwarden_core::{bin_of, fit_mdl_bins, fit_oner_buckets, BinCuts, TrafficClass};
use proptest::prelude::*;
use rand::Rng;

fn entropy(counts: &[f64]) -> f64 {
    let n: f64 = counts.iter().sum();
    counts.iter().filter(|&&c| c > 0.0).map(|&c| -(c / n) * (c / n).log2()).sum()
}

/// Weighted class entropy of splitting after the `k` smallest values.
fn split_entropy(sorted: &[(f64, usize)], k: usize) -> f64 {
    let mut l = [0.0; 8];
    let mut r = [0.0; 8];
    sorted[..k].iter().for_each(|&(_, c)| l[c] += 1.0);
    sorted[k..].iter().for_each(|&(_, c)| r[c] += 1.0);
    let n = sorted.len() as f64;
    (k as f64 * entropy(&l) + (n - k as f64) * entropy(&r)) / n
}

#[test]
fn first_mdl_cut_minimizes_split_entropy() {
    let mut r = rng(5);
    for _ in 0..200 {
        let n = r.gen_range(10..120);
        let values: Vec<(f64, TrafficClass)> = (0..n)
            .map(|_| {
                let x = f64::from(r.gen_range(0u8..20));
                let c = if x < 8.0 { r.gen_range(0..2) } else { r.gen_range(1..4) };
                (x, TrafficClass::ALL[c])
            })
            .collect();
        let cuts = fit_mdl_bins(0, &values).unwrap();
        if cuts.cuts.is_empty() {
            continue;
        }
        let mut sorted: Vec<(f64, usize)> = values.iter().map(|&(x, c)| (x, c.index())).collect();
        sorted.sort_by(|a, b| a.0.total_cmp(&b.0));
        // Candidate boundaries sit between distinct values.
        let candidates: Vec<usize> = (1..sorted.len()).filter(|&k| sorted[k - 1].0 < sorted[k].0).collect();
        let best = candidates.iter().map(|&k| split_entropy(&sorted, k)).fold(f64::INFINITY, f64::min);
        // The top-level cut is one of the recorded cuts and reaches the minimum.
        let hit = cuts.cuts.iter().any(|&t| {
            let k = sorted.iter().filter(|(x, _)| *x <= t).count();
            (split_entropy(&sorted, k) - best).abs() < 1e-9
        });
        assert!(hit, "no cut reaches the minimum entropy split");
    }
}

#[test]
fn random_labels_rarely_get_cuts() {
    let mut r = rng(17);
    let trials = 400;
    let mut empty = 0;
    for _ in 0..trials {
        let values: Vec<(f64, TrafficClass)> =
            (0..200).map(|_| (r.gen_range(0.0..1.0), TrafficClass::ALL[r.gen_range(0..2)])).collect();
        if fit_mdl_bins(0, &values).unwrap().cuts.is_empty() {
            empty += 1;
        }
    }
    assert!(empty as f64 / trials as f64 >= 0.95, "{empty} of {trials} without cuts");
}

#[test]
fn perfectly_separated_classes_get_every_boundary() {
    let values: Vec<(f64, TrafficClass)> = (0..80).map(|i| (i as f64, TrafficClass::ALL[i / 20])).collect();
    assert_eq!(fit_mdl_bins(0, &values).unwrap().cuts, vec![19.5, 39.5, 59.5]);
    assert_eq!(fit_oner_buckets(0, &values, 6).unwrap().cuts, vec![19.5, 39.5, 59.5]);
}

fn labeled_values() -> impl Strategy<Value = Vec<(f64, TrafficClass)>> {
    proptest::collection::vec((0u32..50, 0usize..8), 1..150)
        .prop_map(|v| v.into_iter().map(|(x, c)| (f64::from(x) / 2.0, TrafficClass::ALL[c])).collect())
}

proptest! {
    #[test]
    fn bin_of_is_monotone(mut cuts in proptest::collection::vec(-1e6f64..1e6, 0..12), a in -2e6f64..2e6, b in -2e6f64..2e6) {
        cuts.sort_by(f64::total_cmp);
        cuts.dedup();
        let bins = BinCuts::new(0, cuts.clone()).unwrap();
        let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
        prop_assert!(bin_of(&bins, lo) <= bin_of(&bins, hi));
        prop_assert!(bin_of(&bins, hi) <= cuts.len());
        for (i, &c) in cuts.iter().enumerate() {
            prop_assert_eq!(bin_of(&bins, c), i);
        }
    }

    #[test]
    fn cuts_are_strict_and_between_observed_values(values in labeled_values(), min_bucket in 1usize..10) {
        for cuts in [fit_oner_buckets(0, &values, min_bucket).unwrap(), fit_mdl_bins(0, &values).unwrap()] {
            prop_assert!(cuts.cuts.windows(2).all(|w| w[0] < w[1]));
            for &t in &cuts.cuts {
                // Some value on each side, none exactly on a cut from above.
                prop_assert!(values.iter().any(|v| v.0 <= t));
                prop_assert!(values.iter().any(|v| v.0 > t));
                let below = values.iter().filter(|v| v.0 <= t).map(|v| v.0).fold(f64::MIN, f64::max);
                let above = values.iter().filter(|v| v.0 > t).map(|v| v.0).fold(f64::MAX, f64::min);
                prop_assert!(below <= t && t < above);
            }
        }
    }
}
