//! Detection and classification of DoS / brute-force traffic from SNMP-MIB
//! interface counter records.
//!
//! The crate is `no_std` and only needs `alloc`. It carries the whole
//! algorithmic pipeline: the traffic-class taxonomy and dataset model,
//! stratified splitting, a synthetic corpus generator, supervised
//! discretization, five rule-based learners (ZeroR, OneR, RIPPER, PART and a
//! decision table), multiclass evaluation metrics, and counter-delta
//! computation for online classification. File formats, the CLI and any IO
//! live in the `mibwarden` crate.
#![no_std]
#![forbid(unsafe_code)]

extern crate alloc;

mod class;
pub mod collector;
mod dataset;
pub mod discretize;
mod error;
pub mod eval;
pub mod learners;
mod math;
mod model;
pub mod synth;

pub use class::TrafficClass;
pub use collector::{deltas, DeltaConfig, DeltaRecord, Snapshot};
pub use dataset::{
    class_histogram, default_interface_schema, fingerprint, stratified_split, AttributeSpec, ClassHistogram, Dataset,
    MibRecord,
};
pub use discretize::{bin_of, fit_mdl_bins, fit_oner_buckets, BinCuts};
pub use error::{CoreError, CoreResult};
pub use eval::{accuracy, class_metrics, compare, confusion, evaluate, ClassMetrics, ConfusionMatrix, EvalSummary};
pub use model::{Condition, DecisionTableCore, LearnerId, Rule, RuleModel};
pub use synth::{synthesize, SynthProfile};
