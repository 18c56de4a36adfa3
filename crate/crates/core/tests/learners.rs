mod common;

use common::{
    box_dataset, exhaustive_best_subset, holte_errors, projection_disjoint_box_dataset, rng, structured_dataset,
};
use mibwarden_core::learners::{
    loo_accuracy, single_attribute_errors, train_decision_table, train_jrip, train_oner, train_part, train_zeror,
    DTableParams, JripParams, PartParams,
};
use mibwarden_core::{Dataset, LearnerId, MibRecord, RuleModel, TrafficClass};
use proptest::prelude::*;
use rand::Rng;

fn train_all(ds: &Dataset, seed: u64) -> Vec<RuleModel> {
    vec![
        train_zeror(ds).unwrap(),
        train_oner(ds, 6).unwrap(),
        train_jrip(ds, &JripParams { seed, ..JripParams::default() }).unwrap(),
        train_part(ds, &PartParams { seed, ..PartParams::default() }).unwrap(),
        train_decision_table(ds, &DTableParams { seed, ..DTableParams::default() }).unwrap(),
    ]
}

fn training_accuracy(m: &RuleModel, ds: &Dataset) -> f64 {
    let predicted = m.predict_all(ds).unwrap();
    let labels = ds.labels().unwrap();
    predicted.iter().zip(&labels).filter(|(p, l)| p == l).count() as f64 / ds.len() as f64
}

#[test]
fn oner_picks_a_minimum_error_attribute() {
    let mut r = rng(3);
    for _ in 0..200 {
        let m = r.gen_range(1..=8);
        let n = r.gen_range(1..=300);
        let classes = r.gen_range(2..=8);
        let ds = structured_dataset(&mut r, m, n, classes, 0.2);
        let labels: Vec<usize> = ds.labels().unwrap().into_iter().map(|c| c.index()).collect();
        let oracle: Vec<usize> = (0..m)
            .map(|a| {
                let v: Vec<f64> = ds.records().iter().map(|rec| rec.values[a]).collect();
                holte_errors(&v, &labels, 6)
            })
            .collect();
        assert_eq!(single_attribute_errors(&ds, 6).unwrap(), oracle);
        let min = *oracle.iter().min().unwrap();
        let model = train_oner(&ds, 6).unwrap();
        let chosen = model.bins[0].attribute_index;
        assert_eq!(chosen, oracle.iter().position(|&e| e == min).unwrap());
        let errors = ((1.0 - training_accuracy(&model, &ds)) * n as f64).round() as usize;
        assert_eq!(errors, min);
    }
}

#[test]
fn oner_on_constant_attributes_acts_like_zeror() {
    let rows: Vec<_> = (0..30).map(|i| (vec![1.0, 2.0], TrafficClass::ALL[i % 3])).collect();
    let ds = common::dataset(rows);
    let one = train_oner(&ds, 6).unwrap();
    let zero = train_zeror(&ds).unwrap();
    for r in ds.records() {
        assert_eq!(one.predict(&r.values).unwrap(), zero.predict(&r.values).unwrap());
    }
}

#[test]
fn decision_table_matches_exhaustive_search() {
    let mut r = rng(8);
    for _ in 0..50 {
        let m = r.gen_range(1..=4);
        let n = r.gen_range(20..=300);
        let classes = r.gen_range(2..=4);
        let ds = structured_dataset(&mut r, m, n, classes, 0.1);
        let (subset, score) = exhaustive_best_subset(&ds);
        let model = train_decision_table(&ds, &DTableParams::default()).unwrap();
        let table = model.table.as_ref().unwrap();
        assert_eq!(table.selected_attributes, subset);
        assert!((loo_accuracy(&ds, &subset).unwrap() - score).abs() < 1e-12);
        let reported: f64 = model.param("loo").unwrap().parse().unwrap();
        assert!((reported - score).abs() < 1e-12);
    }
}

#[test]
fn empty_subset_loo_equals_zeror_loo() {
    let mut r = rng(21);
    for _ in 0..20 {
        let n = r.gen_range(2..80);
        let ds = structured_dataset(&mut r, 2, n, 3, 0.3);
        let labels = ds.labels().unwrap();
        // ZeroR retrained without each record in turn.
        let mut correct = 0;
        for (i, &label) in labels.iter().enumerate() {
            let rest: Vec<usize> = (0..ds.len()).filter(|&j| j != i).collect();
            let m = train_zeror(&ds.subset(&rest, "loo")).unwrap();
            if m.default_class == label {
                correct += 1;
            }
        }
        let want = correct as f64 / ds.len() as f64;
        assert!((loo_accuracy(&ds, &[]).unwrap() - want).abs() < 1e-12);
        let model = train_decision_table(&ds, &DTableParams::default()).unwrap();
        let reported: f64 = model.param("loo").unwrap().parse().unwrap();
        assert!(reported >= want);
    }
}

#[test]
fn zeror_on_reference_distribution_picks_tcpsyn() {
    let ds = mibwarden_core::synthesize(&mibwarden_core::SynthProfile::default(), 1).unwrap();
    assert_eq!(train_zeror(&ds).unwrap().default_class, TrafficClass::TcpSyn);
}

#[test]
fn ripper_rules_cover_min_covered_on_replay() {
    let mut r = rng(13);
    for _ in 0..30 {
        let (n, k) = (r.gen_range(40..250), r.gen_range(2..5));
        let ds = structured_dataset(&mut r, 3, n, k, 0.1);
        let classes = ds.labels().unwrap().iter().collect::<std::collections::BTreeSet<_>>().len();
        if classes < 2 {
            continue;
        }
        let params = JripParams::default();
        let model = train_jrip(&ds, &params).unwrap();
        let mut remaining: Vec<&MibRecord> = ds.records().iter().collect();
        for rule in &model.rules {
            let (covered, rest): (Vec<&MibRecord>, Vec<&MibRecord>) =
                remaining.into_iter().partition(|rec| rule.matches(&rec.values, &model.bins));
            let positives = covered.iter().filter(|rec| rec.label == Some(rule.consequent)).count();
            assert!(positives >= params.min_covered);
            remaining = rest;
        }
    }
}

/// Boxes that share a projection can leave RIPPER short of a perfect fit:
/// the first condition is cut inside the shared range and the two records
/// left behind are fewer than `min_covered` can learn from. PART fits it.
#[test]
fn shared_projection_box_case() {
    let seed = 14173879283264436010;
    let ds = box_dataset(&mut rng(seed), 4, 4, 65);
    let jrip = train_jrip(&ds, &JripParams { seed, ..JripParams::default() }).unwrap();
    let missed = ((1.0 - training_accuracy(&jrip, &ds)) * ds.len() as f64).round() as usize;
    assert_eq!(missed, 2);
    assert_eq!(training_accuracy(&train_part(&ds, &PartParams::default()).unwrap(), &ds), 1.0);
}

#[test]
fn part_rule_count_is_bounded_by_records() {
    let mut r = rng(19);
    for _ in 0..30 {
        let (n, k) = (r.gen_range(1..200), r.gen_range(2..8));
        let ds = structured_dataset(&mut r, 3, n, k, 0.4);
        let model = train_part(&ds, &PartParams::default()).unwrap();
        assert!(model.rules.len() <= ds.len());
        assert!(model.rules.iter().all(|rule| !rule.conditions.is_empty()));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn part_fits_disjoint_boxes(seed in any::<u64>(), m in 1usize..=6, classes in 2usize..=4, per_class in 10usize..=120) {
        let mut r = rng(seed);
        let ds = box_dataset(&mut r, m, classes, per_class);
        prop_assume!(ds.len() <= 500);
        let part = train_part(&ds, &PartParams::default()).unwrap();
        prop_assert_eq!(training_accuracy(&part, &ds), 1.0);
    }

    #[test]
    fn jrip_fits_projection_disjoint_boxes(seed in any::<u64>(), m in 1usize..=6, classes in 2usize..=4, per_class in 10usize..=120) {
        let mut r = rng(seed);
        let ds = projection_disjoint_box_dataset(&mut r, m, classes, per_class);
        prop_assume!(ds.len() <= 500);
        let jrip = train_jrip(&ds, &JripParams { seed, ..JripParams::default() }).unwrap();
        prop_assert_eq!(training_accuracy(&jrip, &ds), 1.0);
    }

    #[test]
    fn training_is_deterministic(seed in any::<u64>()) {
        let mut r = rng(seed);
        let ds = structured_dataset(&mut r, 3, 120, 3, 0.1);
        prop_assert_eq!(train_all(&ds, seed), train_all(&ds, seed));
    }

    #[test]
    fn prediction_is_total_and_zeror_is_constant(seed in any::<u64>(), probes in proptest::collection::vec(proptest::collection::vec(0.0f64..10.0, 3), 1..30)) {
        let mut r = rng(seed);
        let ds = structured_dataset(&mut r, 3, 90, 4, 0.2);
        let models = train_all(&ds, seed);
        for model in &models {
            for p in &probes {
                model.predict(p).unwrap();
            }
        }
        let zeror = &models[0];
        prop_assert_eq!(zeror.learner, LearnerId::ZeroR);
        for p in &probes {
            prop_assert_eq!(zeror.predict(p).unwrap(), zeror.default_class);
        }
    }
}
