//! Train all five learners on one split and compare them.

use std::collections::BTreeMap;
use std::thread;
use std::time::Instant;

use mibwarden_core::eval::{evaluate, EvalSummary};
use mibwarden_core::learners::{
    train_decision_table, train_jrip, train_oner, train_part, train_zeror, DTableParams, JripParams, PartParams,
};
use mibwarden_core::{class_histogram, compare, stratified_split, CoreResult, Dataset, LearnerId, RuleModel};

use crate::error::{Error, Result};
use crate::report::{BenchReport, DatasetInfo, LearnerReport, Ranking, Timings, REPORT_FORMAT};

/// Parameters of every learner, defaulting to the usual Weka settings.
#[derive(Clone, Debug, PartialEq)]
pub struct LearnerParams {
    pub min_bucket: usize,
    pub jrip: JripParams,
    pub part: PartParams,
    pub dtable: DTableParams,
}

impl Default for LearnerParams {
    fn default() -> Self {
        LearnerParams {
            min_bucket: mibwarden_core::discretize::DEFAULT_MIN_BUCKET,
            jrip: JripParams::default(),
            part: PartParams::default(),
            dtable: DTableParams::default(),
        }
    }
}

impl LearnerParams {
    pub fn with_seed(seed: u64) -> Self {
        let mut p = LearnerParams::default();
        p.jrip.seed = seed;
        p.part.seed = seed;
        p.dtable.seed = seed;
        p
    }
}

pub fn train(learner: LearnerId, ds: &Dataset, p: &LearnerParams) -> CoreResult<RuleModel> {
    match learner {
        LearnerId::ZeroR => train_zeror(ds),
        LearnerId::OneR => train_oner(ds, p.min_bucket),
        LearnerId::JRip => train_jrip(ds, &p.jrip),
        LearnerId::Part => train_part(ds, &p.part),
        LearnerId::DTable => train_decision_table(ds, &p.dtable),
    }
}

struct Outcome {
    model: RuleModel,
    holdout: EvalSummary,
    resubstitution: EvalSummary,
    timings: Timings,
}

fn run_one(
    learner: LearnerId,
    train_set: &Dataset,
    test_set: &Dataset,
    full: &Dataset,
    p: &LearnerParams,
) -> CoreResult<Outcome> {
    let t0 = Instant::now();
    let model = train(learner, train_set, p)?;
    let trained = t0.elapsed();
    let t1 = Instant::now();
    let holdout = evaluate(&model, test_set)?;
    let tested = t1.elapsed();
    let resubstitution = evaluate(&model, full)?;
    Ok(Outcome { model, holdout, resubstitution, timings: Timings { train: trained, test: tested } })
}

/// Splits `ds`, trains the five learners concurrently on the train part
/// and scores each on the test part and on all of `ds`. The report is
/// assembled in canonical learner order, independent of thread timing.
pub fn run_bench(ds: &Dataset, seed: u64, split: f64) -> Result<(BenchReport, Vec<Timings>)> {
    if !(split > 0.0 && split < 1.0) {
        return Err(Error::Config(format!("--split must lie in (0, 1), got {split}")));
    }
    let (train_set, test_set) = stratified_split(ds, split, seed)?;
    let params = LearnerParams::with_seed(seed);

    let outcomes: Vec<CoreResult<Outcome>> = thread::scope(|s| {
        let handles: Vec<_> = LearnerId::ALL
            .iter()
            .map(|&l| {
                let (tr, te, p) = (&train_set, &test_set, &params);
                s.spawn(move || run_one(l, tr, te, ds, p))
            })
            .collect();
        handles
            .into_iter()
            .map(|h| h.join().unwrap_or(Err(mibwarden_core::CoreError::InvalidParameter("learner panicked"))))
            .collect()
    });
    let outcomes = outcomes.into_iter().collect::<CoreResult<Vec<_>>>()?;

    let holdout: Vec<EvalSummary> = outcomes.iter().map(|o| o.holdout.clone()).collect();
    let resub: Vec<EvalSummary> = outcomes.iter().map(|o| o.resubstitution.clone()).collect();
    let ids = |v: Vec<LearnerId>| v.into_iter().map(|l| l.as_str().to_string()).collect();
    let histogram = class_histogram(ds)?;

    let report = BenchReport {
        format: REPORT_FORMAT,
        seed,
        split,
        dataset: DatasetInfo {
            provenance: ds.provenance().to_string(),
            attributes: ds.attribute_names(),
            records: ds.len(),
            train_records: train_set.len(),
            test_records: test_set.len(),
            class_counts: histogram.iter().map(|(c, n)| (c.name().to_string(), n)).collect(),
        },
        learners: outcomes
            .iter()
            .map(|o| LearnerReport {
                learner: o.model.learner.as_str().to_string(),
                params: o.model.params.iter().cloned().collect::<BTreeMap<_, _>>(),
                rules: o.model.rules.len() + o.model.table.as_ref().map_or(0, |t| t.cells.len()),
                holdout: (&o.holdout).into(),
                resubstitution: (&o.resubstitution).into(),
            })
            .collect(),
        ranking: Ranking { holdout: ids(compare(&holdout)), resubstitution: ids(compare(&resub)) },
    };
    Ok((report, outcomes.iter().map(|o| o.timings).collect()))
}
