//! RIPPER (repeated incremental pruning to produce error reduction).
//!
//! Classes are handled from least to most frequent; the most frequent one
//! becomes the default. For each class, rules are grown on two thirds of the
//! remaining data by FOIL gain, pruned on the other third, and accepted
//! until the description length of the rule set runs more than 64 bits over
//! the best seen, a rule errs on more than half of its pruning coverage, or
//! it covers fewer than `min_covered` positives. Each optimization pass then
//! reconsiders every rule against a freshly grown replacement and a revision
//! of itself, keeping whichever gives the smallest description length.

use alloc::vec::Vec;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::class::TrafficClass;
use crate::dataset::Dataset;
use crate::error::{CoreError, CoreResult};
use crate::math::log2;
use crate::model::{Condition, LearnerId, Rule, RuleModel};

use super::{counts_of, label_indices};

const MAX_DL_SURPLUS: f64 = 64.0;
// Theory bits are discounted for redundancy among conditions.
const REDUNDANCY_FACTOR: f64 = 0.5;

#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub struct JripParams {
    pub folds: usize,
    pub min_covered: usize,
    pub optimizations: usize,
    pub seed: u64,
}

impl Default for JripParams {
    fn default() -> Self {
        JripParams { folds: 3, min_covered: 2, optimizations: 2, seed: 1 }
    }
}

type Conds = Vec<Condition>;

// Simple statistics of one rule on the data left by the rules before it.
const COVER: usize = 0;
const UNCOVER: usize = 1;
const TP: usize = 2;
const FP: usize = 4;
const FN: usize = 5;
type Stats = [f64; 6];

struct Ctx<'a> {
    ds: &'a Dataset,
    labels: &'a [usize],
    total_conds: f64,
    params: JripParams,
    rng: ChaCha8Rng,
}

impl Ctx<'_> {
    fn covers(&self, rule: &[Condition], i: usize) -> bool {
        let v = &self.ds.records()[i].values;
        rule.iter().all(|c| c.matches(v, &[]))
    }

    fn value(&self, i: usize, a: usize) -> f64 {
        self.ds.records()[i].values[a]
    }

    /// Shuffles each class bag and deals them out fold by fold, so any
    /// contiguous fold-sized run is roughly stratified.
    fn stratify(&mut self, data: &[usize]) -> Vec<usize> {
        let folds = self.params.folds;
        let mut bags: [Vec<usize>; TrafficClass::COUNT] = Default::default();
        for &i in data {
            bags[self.labels[i]].push(i);
        }
        for bag in bags.iter_mut() {
            bag.shuffle(&mut self.rng);
        }
        let mut out = Vec::with_capacity(data.len());
        for k in 0..folds {
            let mut offset = k;
            let mut bag = 0;
            'fold: loop {
                while offset >= bags[bag].len() {
                    offset -= bags[bag].len();
                    bag += 1;
                    if bag >= bags.len() {
                        break 'fold;
                    }
                }
                out.push(bags[bag][offset]);
                offset += folds;
            }
        }
        out
    }

    fn partition(&self, data: &[usize]) -> (Vec<usize>, Vec<usize>) {
        let folds = self.params.folds;
        let split = data.len() * (folds - 1) / folds;
        (data[..split].to_vec(), data[split..].to_vec())
    }

    /// Extends `rule` greedily by the condition with the highest FOIL gain
    /// until it covers only positives of `data`, nothing improves, or the
    /// best condition covers fewer than `min_covered` positives.
    fn grow(&self, rule: &mut Conds, data: &[usize], class: usize) {
        let mut grow: Vec<usize> = data.to_vec();
        if grow.is_empty() {
            return;
        }
        let pos = grow.iter().filter(|&&i| self.labels[i] == class).count() as f64;
        let mut def_rate = (pos + 1.0) / (grow.len() as f64 + 1.0);
        while !grow.is_empty() && def_rate < 1.0 {
            let mut best: Option<(f64, Condition, f64, f64)> = None;
            for a in 0..self.ds.num_attributes() {
                if let Some(c) = self.best_condition(&grow, a, class, def_rate) {
                    if best.is_none_or(|b| c.0 > b.0) {
                        best = Some(c);
                    }
                }
            }
            let Some((_, cond, accu, rate)) = best else { break };
            if accu < self.params.min_covered as f64 {
                break;
            }
            grow.retain(|&i| cond.matches(&self.ds.records()[i].values, &[]));
            rule.push(cond);
            def_rate = rate;
        }
    }

    /// Highest-gain threshold test on attribute `a`:
    /// `(gain, condition, covered positives, Laplace accuracy)`.
    fn best_condition(
        &self,
        data: &[usize],
        a: usize,
        class: usize,
        def_rate: f64,
    ) -> Option<(f64, Condition, f64, f64)> {
        let mut sorted = data.to_vec();
        sorted.sort_by(|&x, &y| self.value(x, a).total_cmp(&self.value(y, a)));
        let n = sorted.len();
        let total_pos = sorted.iter().filter(|&&i| self.labels[i] == class).count() as f64;
        let log_def = log2(def_rate);
        let gain_of = |accu: f64, cover: f64| {
            let rate = (accu + 1.0) / (cover + 1.0);
            (accu * (log2(rate) - log_def), rate)
        };

        let mut best: Option<(f64, Condition, f64, f64)> = None;
        let mut fst_pos = 0.0;
        for s in 1..n {
            if self.labels[sorted[s - 1]] == class {
                fst_pos += 1.0;
            }
            let lo = self.value(sorted[s - 1], a);
            let hi = self.value(sorted[s], a);
            if lo >= hi {
                continue;
            }
            let threshold = split_point(lo, hi);
            let fst_cover = s as f64;
            let snd_cover = (n - s) as f64;
            let snd_pos = total_pos - fst_pos;
            let (g1, r1) = gain_of(fst_pos, fst_cover);
            let (g2, r2) = gain_of(snd_pos, snd_cover);
            let floor = best.map_or(0.0, |b| b.0);
            if g1 > floor && g1 >= g2 {
                best = Some((g1, Condition::Le { attribute: a, threshold }, fst_pos, r1));
            } else if g2 > floor {
                best = Some((g2, Condition::Gt { attribute: a, threshold }, snd_pos, r2));
            }
        }
        best
    }

    /// Drops a final run of conditions when that strictly raises the rule's
    /// worth on `data`. At least one condition is kept.
    ///
    /// With `use_whole` the worth is the accuracy over all of `data`
    /// (covered positives plus excluded negatives); otherwise it is
    /// `(p - n) / (p + n)` over the covered records.
    fn prune(&self, rule: &mut Conds, data: &[usize], class: usize, use_whole: bool) {
        if data.is_empty() || rule.len() <= 1 {
            return;
        }
        let total = data.len() as f64;
        let mut covered: Vec<usize> = data.to_vec();
        let mut tn = 0.0;
        let mut best_len = 0;
        let mut best_worth = f64::NEG_INFINITY;
        for (x, cond) in rule.iter().enumerate() {
            let mut p = 0.0;
            let mut n = 0.0;
            covered.retain(|&i| {
                let pos = self.labels[i] == class;
                if cond.matches(&self.ds.records()[i].values, &[]) {
                    if pos {
                        p += 1.0;
                    } else {
                        n += 1.0;
                    }
                    true
                } else {
                    if !pos {
                        tn += 1.0;
                    }
                    false
                }
            });
            let worth = if use_whole {
                (p + tn) / total
            } else if p + n > 0.0 {
                (p - n) / (p + n)
            } else {
                0.0
            };
            if worth >= best_worth {
                best_worth = worth;
                best_len = x + 1;
            }
        }
        rule.truncate(best_len.max(1));
    }

    /// Fraction of the records of `data` covered by `rule` that are
    /// negatives, or `None` when it covers nothing there.
    fn error_on(&self, rule: &[Condition], data: &[usize], class: usize) -> Option<f64> {
        let (mut cover, mut neg) = (0.0, 0.0);
        for &i in data {
            if self.covers(rule, i) {
                cover += 1.0;
                if self.labels[i] != class {
                    neg += 1.0;
                }
            }
        }
        (cover > 0.0).then(|| neg / cover)
    }
}

fn split_point(lo: f64, hi: f64) -> f64 {
    let m = lo + (hi - lo) / 2.0;
    if m >= hi {
        lo
    } else {
        m
    }
}

fn subset_dl(t: f64, k: f64, p: f64) -> f64 {
    let p = p.clamp(0.0, 1.0 - 1e-12);
    let mut rt = if p > 0.0 { -k * log2(p) } else { 0.0 };
    if t - k != 0.0 {
        rt -= (t - k) * log2(1.0 - p);
    }
    rt
}

/// Bits needed to encode the exceptions of a rule set that covers `cover`
/// records (`fp` of them wrongly) and leaves `uncover` (`fn_` wrongly).
fn data_dl(exp_fp_over_err: f64, cover: f64, uncover: f64, fp: f64, fn_: f64) -> f64 {
    let total_bits = log2(cover + uncover + 1.0);
    let (cover_bits, uncover_bits);
    if cover > uncover {
        let exp_err = exp_fp_over_err * (fp + fn_);
        cover_bits = subset_dl(cover, fp, exp_err / cover);
        uncover_bits = if uncover > 0.0 { subset_dl(uncover, fn_, fn_ / uncover) } else { 0.0 };
    } else {
        let exp_err = (1.0 - exp_fp_over_err) * (fp + fn_);
        cover_bits = if cover > 0.0 { subset_dl(cover, fp, fp / cover) } else { 0.0 };
        uncover_bits = if uncover > 0.0 { subset_dl(uncover, fn_, exp_err / uncover) } else { 0.0 };
    }
    total_bits + cover_bits + uncover_bits
}

/// Per-rule coverage statistics of a rule list applied in order.
#[derive(Clone)]
struct RuleStats {
    data: Vec<usize>,
    rules: Vec<Conds>,
    stats: Vec<Stats>,
    /// Records left uncovered after rule `i`. Entries before a partial
    /// recount's start position other than the one just before it are
    /// placeholders.
    uncovered: Vec<Vec<usize>>,
    class: usize,
    total_conds: f64,
}

impl RuleStats {
    fn new(data: Vec<usize>, class: usize, total_conds: f64) -> Self {
        RuleStats { data, rules: Vec::new(), stats: Vec::new(), uncovered: Vec::new(), class, total_conds }
    }

    fn len(&self) -> usize {
        self.rules.len()
    }

    fn simple_stats(ctx: &Ctx, rule: &[Condition], data: &[usize], class: usize) -> (Stats, Vec<usize>) {
        let mut s = [0.0; 6];
        let mut uncovered = Vec::new();
        for &i in data {
            let pos = ctx.labels[i] == class;
            if ctx.covers(rule, i) {
                s[COVER] += 1.0;
                s[if pos { TP } else { FP }] += 1.0;
            } else {
                s[UNCOVER] += 1.0;
                s[if pos { FN } else { 3 }] += 1.0;
                uncovered.push(i);
            }
        }
        (s, uncovered)
    }

    fn add_and_update(&mut self, ctx: &Ctx, rule: Conds) {
        let data = self.uncovered.last().unwrap_or(&self.data);
        let (s, unc) = Self::simple_stats(ctx, &rule, data, self.class);
        self.rules.push(rule);
        self.stats.push(s);
        self.uncovered.push(unc);
    }

    fn remove_last(&mut self) {
        self.rules.pop();
        self.stats.pop();
        self.uncovered.pop();
    }

    /// Recount every rule from scratch on `self.data`.
    fn count_data(&mut self, ctx: &Ctx) {
        let rules = core::mem::take(&mut self.rules);
        self.stats.clear();
        self.uncovered.clear();
        for r in rules {
            self.add_and_update(ctx, r);
        }
    }

    /// Recount rules from `index` on, reusing `prev` for the rules before it
    /// and `uncovered` as the data left after them.
    fn count_data_from(&mut self, ctx: &Ctx, index: usize, uncovered: &[usize], prev: &[Stats]) {
        self.stats.clear();
        self.uncovered.clear();
        for (i, s) in prev.iter().enumerate().take(index) {
            self.stats.push(*s);
            self.uncovered.push(if i + 1 == index { uncovered.to_vec() } else { Vec::new() });
        }
        let mut data = uncovered.to_vec();
        for j in index..self.rules.len() {
            let (s, unc) = Self::simple_stats(ctx, &self.rules[j], &data, self.class);
            self.stats.push(s);
            self.uncovered.push(unc.clone());
            data = unc;
        }
    }

    fn theory_dl(&self, index: usize) -> f64 {
        let k = self.rules[index].len() as f64;
        if k == 0.0 {
            return 0.0;
        }
        let mut tdl = log2(k);
        if k > 1.0 {
            tdl += 2.0 * log2(tdl);
        }
        tdl += subset_dl(self.total_conds, k, k / self.total_conds);
        REDUNDANCY_FACTOR * tdl
    }

    /// DL change from deleting the rule with stats `rule`; applies the
    /// deletion to `ruleset` and returns the change when it does not grow
    /// the DL (or the rule errs on half its coverage), `None` otherwise.
    fn potential(&self, index: usize, exp_fp: f64, ruleset: &mut Stats, rule: &Stats) -> Option<f64> {
        let pcov = ruleset[COVER] - rule[COVER];
        let puncov = ruleset[UNCOVER] + rule[COVER];
        let pfp = ruleset[FP] - rule[FP];
        let pfn = ruleset[FN] + rule[TP];
        let with = data_dl(exp_fp, ruleset[COVER], ruleset[UNCOVER], ruleset[FP], ruleset[FN]);
        let theory = self.theory_dl(index);
        let without = data_dl(exp_fp, pcov, puncov, pfp, pfn);
        let potential = with + theory - without;
        let over_err = rule[COVER] > 0.0 && rule[FP] / rule[COVER] >= 0.5;
        if potential >= 0.0 || over_err {
            ruleset[COVER] = pcov;
            ruleset[UNCOVER] = puncov;
            ruleset[FP] = pfp;
            ruleset[FN] = pfn;
            Some(potential)
        } else {
            None
        }
    }

    fn cumulative(&self) -> Stats {
        let mut acc = [0.0; 6];
        for s in &self.stats {
            acc[COVER] += s[COVER];
            acc[TP] += s[TP];
            acc[FP] += s[FP];
        }
        if let Some(last) = self.stats.last() {
            acc[UNCOVER] = last[UNCOVER];
            acc[3] = last[3];
            acc[FN] = last[FN];
        }
        acc
    }

    fn min_data_dl_if_deleted(&self, ctx: &Ctx, index: usize, exp_fp: f64) -> f64 {
        let mut acc = [0.0; 6];
        for s in &self.stats[..index] {
            acc[COVER] += s[COVER];
            acc[TP] += s[TP];
            acc[FP] += s[FP];
        }
        let mut data: Vec<usize> = if index == 0 { self.data.clone() } else { self.uncovered[index - 1].clone() };
        let mut after = Vec::new();
        for j in (index + 1)..self.rules.len() {
            let (s, unc) = Self::simple_stats(ctx, &self.rules[j], &data, self.class);
            acc[COVER] += s[COVER];
            acc[TP] += s[TP];
            acc[FP] += s[FP];
            after.push(s);
            data = unc;
        }
        if let Some(last) = after.last() {
            acc[UNCOVER] = last[UNCOVER];
            acc[3] = last[3];
            acc[FN] = last[FN];
        } else if index > 0 {
            let prev = &self.stats[index - 1];
            acc[UNCOVER] = prev[UNCOVER];
            acc[3] = prev[3];
            acc[FN] = prev[FN];
        } else {
            let s = &self.stats[0];
            acc[UNCOVER] = s[COVER] + s[UNCOVER];
            acc[3] = s[3] + s[FP];
            acc[FN] = s[TP] + s[FN];
        }
        let mut potential = 0.0;
        for (k, rule) in after.iter().enumerate() {
            if let Some(p) = self.potential(index + 1 + k, exp_fp, &mut acc, rule) {
                potential += p;
            }
        }
        data_dl(exp_fp, acc[COVER], acc[UNCOVER], acc[FP], acc[FN]) - potential
    }

    fn min_data_dl_if_exists(&self, index: usize, exp_fp: f64) -> f64 {
        let mut acc = self.cumulative();
        let mut potential = 0.0;
        for k in (index + 1)..self.stats.len() {
            let rule = self.stats[k];
            if let Some(p) = self.potential(k, exp_fp, &mut acc, &rule) {
                potential += p;
            }
        }
        data_dl(exp_fp, acc[COVER], acc[UNCOVER], acc[FP], acc[FN]) - potential
    }

    /// DL of the rule set with rule `index` minus the DL without it.
    fn relative_dl(&self, ctx: &Ctx, index: usize, exp_fp: f64) -> f64 {
        self.min_data_dl_if_exists(index, exp_fp) + self.theory_dl(index)
            - self.min_data_dl_if_deleted(ctx, index, exp_fp)
    }

    /// Deletes, from the back, every rule whose removal does not grow the DL.
    fn reduce_dl(&mut self, ctx: &Ctx, exp_fp: f64) {
        let mut need_update = false;
        let mut acc = self.cumulative();
        for k in (0..self.stats.len()).rev() {
            let rule = self.stats[k];
            if self.potential(k, exp_fp, &mut acc, &rule).is_some() {
                if k == self.stats.len() - 1 && k == self.rules.len() - 1 {
                    self.remove_last();
                } else {
                    self.rules.remove(k);
                    need_update = true;
                }
            }
        }
        if need_update {
            self.count_data(ctx);
        }
    }
}

fn check_stop(rst: &Stats, min_dl: f64, dl: f64, prune_error: Option<f64>, min_covered: usize) -> bool {
    if dl.is_nan() || dl > min_dl + MAX_DL_SURPLUS {
        return true;
    }
    if rst[TP] <= 0.0 || rst[TP] < min_covered as f64 {
        return true;
    }
    let error = prune_error.unwrap_or(if rst[COVER] > 0.0 { rst[FP] / rst[COVER] } else { 1.0 });
    error > 0.5
}

fn rule_set_for_class(
    ctx: &mut Ctx,
    data: &[usize],
    class: usize,
    exp_fp: f64,
    default_dl: f64,
) -> (Vec<Conds>, Vec<usize>) {
    let min_covered = ctx.params.min_covered;
    let mut ruleset: Vec<Conds> = Vec::new();
    let mut new_data = data.to_vec();
    let mut dl = default_dl;
    let mut min_dl = default_dl;
    let mut rstats: Option<RuleStats> = None;
    let mut has_positive = true;

    // Building stage.
    loop {
        if !has_positive {
            break;
        }
        new_data = ctx.stratify(&new_data);
        let (grow_data, prune_data) = ctx.partition(&new_data);
        let mut rule = Conds::new();
        ctx.grow(&mut rule, &grow_data, class);
        if rule.is_empty() {
            break;
        }
        ctx.prune(&mut rule, &prune_data, class, false);
        let prune_error = ctx.error_on(&rule, &prune_data, class);

        let stats = rstats.get_or_insert_with(|| RuleStats::new(new_data.clone(), class, ctx.total_conds));
        stats.add_and_update(ctx, rule.clone());
        let last = stats.len() - 1;
        dl += stats.relative_dl(ctx, last, exp_fp);
        if dl < min_dl {
            min_dl = dl;
        }
        let rst = stats.stats[last];
        if check_stop(&rst, min_dl, dl, prune_error, min_covered) {
            stats.remove_last();
            break;
        }
        ruleset.push(rule);
        new_data = stats.uncovered[last].clone();
        has_positive = rst[FN] > 0.0;
    }

    // Optimization stage.
    let mut final_stats: Option<RuleStats> = None;
    for _ in 0..ctx.params.optimizations {
        if ruleset.is_empty() {
            break;
        }
        let mut new_data = data.to_vec();
        let mut fs = RuleStats::new(new_data.clone(), class, ctx.total_conds);
        let mut position = 0usize;
        let mut has_positive = true;
        let mut dl = default_dl;
        let mut min_dl = default_dl;

        while has_positive {
            let is_residual = position >= ruleset.len();
            new_data = ctx.stratify(&new_data);
            let (grow_data, prune_data) = ctx.partition(&new_data);

            let final_rule = if is_residual {
                let mut rule = Conds::new();
                ctx.grow(&mut rule, &grow_data, class);
                if rule.is_empty() {
                    break;
                }
                ctx.prune(&mut rule, &prune_data, class, false);
                rule
            } else {
                let old = ruleset[position].clone();
                if !new_data.iter().any(|&i| ctx.covers(&old, i)) {
                    fs.add_and_update(ctx, old);
                    position += 1;
                    continue;
                }

                let mut replace = Conds::new();
                ctx.grow(&mut replace, &grow_data, class);
                let prune_rest: Vec<usize> = prune_data
                    .iter()
                    .copied()
                    .filter(|&i| !ruleset[position + 1..].iter().any(|r| ctx.covers(r, i)))
                    .collect();
                ctx.prune(&mut replace, &prune_rest, class, true);

                let mut revision = old.clone();
                let covered_grow: Vec<usize> =
                    grow_data.iter().copied().filter(|&i| ctx.covers(&revision, i)).collect();
                ctx.grow(&mut revision, &covered_grow, class);
                ctx.prune(&mut revision, &prune_rest, class, true);

                let prev: Vec<Stats> = fs.stats[..position].to_vec();
                let variant_dl = |ctx: &Ctx, candidate: &Conds| {
                    let mut rules = ruleset.clone();
                    rules[position] = candidate.clone();
                    let mut st = RuleStats::new(data.to_vec(), class, ctx.total_conds);
                    st.rules = rules;
                    st.count_data_from(ctx, position, &new_data, &prev);
                    st.relative_dl(ctx, position, exp_fp)
                };
                let rep_dl = if replace.is_empty() { f64::INFINITY } else { variant_dl(ctx, &replace) };
                let rev_dl = variant_dl(ctx, &revision);
                let old_dl = variant_dl(ctx, &old);
                if old_dl <= rev_dl && old_dl <= rep_dl {
                    old
                } else if rev_dl <= rep_dl {
                    revision
                } else {
                    replace
                }
            };

            let prune_error = ctx.error_on(&final_rule, &prune_data, class);
            fs.add_and_update(ctx, final_rule.clone());
            let rst = fs.stats[position];
            if is_residual {
                dl += fs.relative_dl(ctx, position, exp_fp);
                if dl < min_dl {
                    min_dl = dl;
                }
                if check_stop(&rst, min_dl, dl, prune_error, min_covered) {
                    fs.remove_last();
                    break;
                }
                ruleset.push(final_rule);
            } else {
                ruleset[position] = final_rule;
            }
            new_data = fs.uncovered[position].clone();
            has_positive = rst[FN] > 0.0;
            position += 1;
        }
        for rule in ruleset.iter().skip(fs.len()) {
            fs.add_and_update(ctx, rule.clone());
        }
        fs.reduce_dl(ctx, exp_fp);
        ruleset = fs.rules.clone();
        final_stats = Some(fs);
    }

    let stats = final_stats.or(rstats);
    let remaining = match stats {
        Some(s) if !ruleset.is_empty() => s.uncovered[ruleset.len() - 1].clone(),
        _ => data.to_vec(),
    };
    (ruleset, remaining)
}

/// Trains a RIPPER rule list.
pub fn train_jrip(train: &Dataset, params: &JripParams) -> CoreResult<RuleModel> {
    let labels = label_indices(train)?;
    if params.folds < 2 {
        return Err(CoreError::InvalidParameter("folds must be >= 2"));
    }
    let counts = counts_of(&labels, 0..labels.len());
    let mut order: Vec<usize> = (0..TrafficClass::COUNT).filter(|&c| counts[c] > 0).collect();
    if order.len() < 2 {
        return Err(CoreError::TooFewClasses { found: order.len() });
    }
    // Ascending frequency; among equal counts the canonically first class
    // goes last so it becomes the default.
    order.sort_by_key(|&c| (counts[c], core::cmp::Reverse(c)));

    let mut total_conds = 0.0;
    for a in 0..train.num_attributes() {
        let mut v: Vec<f64> = train.records().iter().map(|r| r.values[a]).collect();
        v.sort_by(f64::total_cmp);
        v.dedup();
        total_conds += 2.0 * v.len() as f64;
    }

    let mut ctx =
        Ctx { ds: train, labels: &labels, total_conds, params: *params, rng: ChaCha8Rng::seed_from_u64(params.seed) };

    let mut data: Vec<usize> = (0..labels.len()).collect();
    let mut all = labels.len() as f64;
    let mut rules: Vec<Rule> = Vec::new();
    for &class in &order[..order.len() - 1] {
        let exp_fp = counts[class] as f64 / all;
        all -= counts[class] as f64;
        let positives = data.iter().filter(|&&i| labels[i] == class).count() as f64;
        if positives == 0.0 {
            continue;
        }
        let default_dl = data_dl(exp_fp, 0.0, data.len() as f64, 0.0, positives);
        let (ruleset, rest) = rule_set_for_class(&mut ctx, &data, class, exp_fp, default_dl);
        rules.extend(ruleset.into_iter().map(|c| Rule::new(c, TrafficClass::ALL[class])));
        data = rest;
    }

    // Replay in final order and keep only rules that still cover enough
    // positives of their class among the records that reach them.
    let mut reaching: Vec<usize> = (0..labels.len()).collect();
    let mut kept = Vec::with_capacity(rules.len());
    for rule in rules {
        let class = rule.consequent.index();
        let covered_pos = reaching.iter().filter(|&&i| labels[i] == class && ctx.covers(&rule.conditions, i)).count();
        if covered_pos >= params.min_covered.max(1) {
            reaching.retain(|&i| !ctx.covers(&rule.conditions, i));
            kept.push(rule);
        }
    }

    let default = TrafficClass::ALL[*order.last().expect("two classes")];
    let mut model = RuleModel::skeleton(LearnerId::JRip, train, default)
        .with_param("folds", params.folds)
        .with_param("min_covered", params.min_covered)
        .with_param("optimizations", params.optimizations)
        .with_param("seed", params.seed);
    model.rules = kept;
    Ok(model)
}
