//! Simulated-annealing MAP search over rule sets.
//!
//! Each step samples a misclassified example and proposes neighbors that
//! correct it: an uncovered positive draws one of the coverage-increasing
//! actions (add a value, remove a condition, add a rule), a covered negative
//! draws one of the coverage-decreasing actions (add a condition, remove a
//! rule). Candidates are scored, one is chosen by an exploration /
//! exploitation split, and the move is accepted with the annealing
//! probability `exp((proposed − current) / T)` under the schedule
//! `T = T0^(1 − t/n_iter)`.

use std::io::Write;

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::bitmap::Bitmap;
use crate::coverage::{CoverageIndex, ValueIndex};
use crate::dataset::Dataset;
use crate::error::{Error, Result};
use crate::num::Real;
use crate::posterior::{score_from_parts, Hyperparams, PosteriorScore};
use crate::rules::{Condition, Rule, RuleSet};
use crate::schema::UNSEEN;

/// Annealing-search configuration.
#[derive(Debug, Clone, PartialEq)]
pub struct SaConfig<T: Real> {
    /// Steps per chain.
    pub n_iter: usize,
    /// Initial temperature; the schedule decays it to 1 at the final step.
    pub t0: T,
    /// Probability of taking a random neighbor instead of the best one.
    pub explore_prob: T,
    /// Upper bound on a rule's item count (sum of value-set sizes).
    pub max_rule_len: usize,
    /// Upper bound on the number of rules.
    pub max_rules: usize,
    /// Neighbor lists longer than this are uniformly subsampled.
    pub neighbor_cap: usize,
    /// Master seed; each restart derives its own generator from it.
    pub seed: u64,
    /// Independent chains; the best state across all of them is returned.
    pub restarts: usize,
}

impl<T: Real> Default for SaConfig<T> {
    fn default() -> Self {
        SaConfig {
            n_iter: 5000,
            t0: T::of(10.0),
            explore_prob: T::of(0.2),
            max_rule_len: 16,
            max_rules: 10,
            neighbor_cap: 200,
            seed: 0,
            restarts: 3,
        }
    }
}

impl<T: Real> SaConfig<T> {
    pub fn validate(&self) -> Result<()> {
        if self.n_iter == 0 {
            return Err(Error::Config("n_iter must be at least 1".into()));
        }
        if !(self.t0 > T::one()) {
            return Err(Error::Config(format!("t0 must exceed 1, got {}", self.t0)));
        }
        if self.explore_prob < T::zero() || self.explore_prob > T::one() {
            return Err(Error::Config(format!(
                "explore_prob must lie in [0, 1], got {}",
                self.explore_prob
            )));
        }
        if self.max_rule_len == 0 || self.max_rules == 0 || self.neighbor_cap == 0 {
            return Err(Error::Config(
                "max_rule_len, max_rules and neighbor_cap must be at least 1".into(),
            ));
        }
        if self.restarts == 0 {
            return Err(Error::Config("restarts must be at least 1".into()));
        }
        Ok(())
    }
}

/// Temperature at step `t`: `T0^(1 − t/n_iter)`, strictly decreasing from
/// `T0` at step 0 to 1 at the final step.
pub fn temperature<T: Real>(t: usize, cfg: &SaConfig<T>) -> T {
    assert!(t <= cfg.n_iter, "step {t} outside 0..={}", cfg.n_iter);
    let frac = T::of_usize(t) / T::of_usize(cfg.n_iter);
    cfg.t0.powf(T::one() - frac)
}

/// Metropolis acceptance on total log-posteriors: improvements always pass,
/// a drop of `d` passes with probability `exp(−d / temp)`.
pub fn accept<T: Real>(current: T, proposed: T, temp: T, rng: &mut impl Rng) -> bool {
    if proposed >= current {
        return true;
    }
    let p = ((proposed - current) / temp).exp();
    T::of(rng.gen::<f64>()) < p
}

/// Which way a sampled misclassified example is wrong.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Polarity {
    /// Positive label, not covered: the model under-covers.
    Positive,
    /// Negative label, covered: the model over-covers.
    Negative,
}

impl Polarity {
    pub fn action_kinds(self) -> &'static [ActionKind] {
        match self {
            Polarity::Positive => &[
                ActionKind::AddValue,
                ActionKind::RemoveCondition,
                ActionKind::AddRule,
            ],
            Polarity::Negative => &[ActionKind::AddCondition, ActionKind::RemoveRule],
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ActionKind {
    AddValue,
    RemoveCondition,
    AddRule,
    AddCondition,
    RemoveRule,
}

impl ActionKind {
    /// Coverage-increasing kinds fix uncovered positives; the others shrink
    /// coverage. No kind does both.
    pub fn increases_coverage(self) -> bool {
        matches!(
            self,
            ActionKind::AddValue | ActionKind::RemoveCondition | ActionKind::AddRule
        )
    }

    pub fn label(self) -> &'static str {
        match self {
            ActionKind::AddValue => "add_value",
            ActionKind::RemoveCondition => "remove_condition",
            ActionKind::AddRule => "add_rule",
            ActionKind::AddCondition => "add_condition",
            ActionKind::RemoveRule => "remove_rule",
        }
    }
}

/// One edit applied to the current rule set. Rule indices address the
/// canonical order of the state the action was proposed from.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Action {
    AddValue {
        rule: usize,
        feature: usize,
        value: usize,
    },
    RemoveCondition {
        rule: usize,
        feature: usize,
    },
    AddRule {
        feature: usize,
        value: usize,
    },
    AddCondition {
        rule: usize,
        feature: usize,
    },
    RemoveRule {
        rule: usize,
    },
}

impl Action {
    pub fn kind(&self) -> ActionKind {
        match self {
            Action::AddValue { .. } => ActionKind::AddValue,
            Action::RemoveCondition { .. } => ActionKind::RemoveCondition,
            Action::AddRule { .. } => ActionKind::AddRule,
            Action::AddCondition { .. } => ActionKind::AddCondition,
            Action::RemoveRule { .. } => ActionKind::RemoveRule,
        }
    }
}

/// A proposed neighbor: the action and the canonical rule set it yields.
#[derive(Debug, Clone)]
pub struct Candidate {
    pub action: Action,
    pub rules: RuleSet,
}

/// Per-step trace line.
#[derive(Debug, Clone, PartialEq)]
pub struct TraceRecord<T: Real> {
    pub chain: usize,
    pub step: usize,
    pub temperature: T,
    pub current_total: T,
    pub best_total: T,
    pub action: Option<ActionKind>,
    pub accepted: bool,
}

/// Search result: the best state visited across all restarts plus the full
/// step trace.
#[derive(Debug, Clone)]
pub struct SaOutcome<T: Real> {
    pub rules: RuleSet,
    pub score: PosteriorScore<T>,
    pub trace: Vec<TraceRecord<T>>,
}

/// Post-step snapshot handed to observers (used by the invariant suites to
/// compare the incremental state against a from-scratch rebuild).
pub struct StepEvent<'a, T: Real> {
    pub chain: usize,
    pub record: &'a TraceRecord<T>,
    pub rules: &'a RuleSet,
    pub coverage: &'a CoverageIndex,
    pub score: &'a PosteriorScore<T>,
}

/// One annealing chain over a fixed dataset.
pub struct Chain<'a, T: Real> {
    dataset: &'a Dataset,
    index: &'a ValueIndex,
    hps: &'a Hyperparams<T>,
    cfg: &'a SaConfig<T>,
    rules: RuleSet,
    coverage: CoverageIndex,
    score: PosteriorScore<T>,
    best_rules: RuleSet,
    best_score: PosteriorScore<T>,
}

impl<'a, T: Real> Chain<'a, T> {
    /// Starts from the empty rule set.
    pub fn new(
        dataset: &'a Dataset,
        index: &'a ValueIndex,
        hps: &'a Hyperparams<T>,
        cfg: &'a SaConfig<T>,
    ) -> Result<Self> {
        let rules = RuleSet::empty();
        let coverage = CoverageIndex::build(index, &rules);
        let score = score_from_parts(
            &rules,
            dataset.schema(),
            coverage.aggregate(),
            index.labels(),
            hps,
        )?;
        Ok(Chain {
            dataset,
            index,
            hps,
            cfg,
            best_rules: rules.clone(),
            best_score: score,
            rules,
            coverage,
            score,
        })
    }

    /// Starts from an explicit state; `coverage` and `score` must be
    /// consistent with `rules` (checked in debug builds).
    pub fn with_state(
        dataset: &'a Dataset,
        index: &'a ValueIndex,
        hps: &'a Hyperparams<T>,
        cfg: &'a SaConfig<T>,
        rules: RuleSet,
        coverage: CoverageIndex,
        score: PosteriorScore<T>,
    ) -> Self {
        debug_assert_eq!(coverage.n_rules(), rules.len());
        debug_assert_eq!(coverage.n_rows(), index.n_rows());
        Chain {
            dataset,
            index,
            hps,
            cfg,
            best_rules: rules.clone(),
            best_score: score,
            rules,
            coverage,
            score,
        }
    }

    pub fn rules(&self) -> &RuleSet {
        &self.rules
    }

    pub fn coverage(&self) -> &CoverageIndex {
        &self.coverage
    }

    pub fn score(&self) -> &PosteriorScore<T> {
        &self.score
    }

    pub fn best(&self) -> (&RuleSet, &PosteriorScore<T>) {
        (&self.best_rules, &self.best_score)
    }

    /// Uniformly samples a row the current model misclassifies. `None`
    /// signals local perfection (nothing misclassified).
    pub fn sample_misclassified(&self, rng: &mut impl Rng) -> Option<(usize, Polarity)> {
        let mismatches = self
            .coverage
            .aggregate()
            .mismatch_indices(self.index.labels());
        if mismatches.is_empty() {
            return None;
        }
        let row = mismatches[rng.gen_range(0..mismatches.len())];
        let polarity = if self.index.labels().get(row) {
            Polarity::Positive
        } else {
            Polarity::Negative
        };
        Some((row, polarity))
    }

    /// Draws an action kind uniformly from the polarity's set (redrawing
    /// kinds whose candidate lists are empty) and returns that kind's
    /// candidates, subsampled to at most `neighbor_cap`. Empty only when
    /// every kind came up empty, which the caller treats as a no-op step.
    pub fn propose_neighbors(
        &self,
        example: usize,
        polarity: Polarity,
        rng: &mut impl Rng,
    ) -> Vec<Candidate> {
        let mut kinds = polarity.action_kinds().to_vec();
        while !kinds.is_empty() {
            let kind = kinds.swap_remove(rng.gen_range(0..kinds.len()));
            let mut candidates = self.candidates_for(kind, example);
            if !candidates.is_empty() {
                self.cap_candidates(&mut candidates, rng);
                return candidates;
            }
        }
        Vec::new()
    }

    fn cap_candidates(&self, candidates: &mut Vec<Candidate>, rng: &mut impl Rng) {
        if candidates.len() > self.cfg.neighbor_cap {
            let mut keep =
                rand::seq::index::sample(rng, candidates.len(), self.cfg.neighbor_cap).into_vec();
            keep.sort_unstable();
            let mut kept = Vec::with_capacity(keep.len());
            for i in keep {
                kept.push(candidates[i].clone());
            }
            *candidates = kept;
        }
    }

    /// Enumerates every candidate of one action kind that corrects the
    /// sampled example. All candidates are canonical and respect the
    /// configured caps and the vocabulary-size bound on value sets.
    pub fn candidates_for(&self, kind: ActionKind, example: usize) -> Vec<Candidate> {
        let row = self.dataset.row(example);
        match kind {
            ActionKind::AddValue => self.add_value_candidates(row),
            ActionKind::RemoveCondition => self.remove_condition_candidates(row),
            ActionKind::AddRule => self.add_rule_candidates(row),
            ActionKind::AddCondition => self.add_condition_candidates(example, row),
            ActionKind::RemoveRule => self.remove_rule_candidates(example),
        }
    }

    /// The condition blocking the row, provided it is the only one.
    fn unique_failing_feature(&self, rule: &Rule, row: &[usize]) -> Option<usize> {
        let mut failing = None;
        for c in rule.conditions() {
            let v = row[c.feature()];
            if v == UNSEEN || !c.contains(v) {
                if failing.is_some() {
                    return None;
                }
                failing = Some(c.feature());
            }
        }
        failing
    }

    fn replace_rule_at(&self, i: usize, new_rule: Rule) -> RuleSet {
        let mut rules = self.rules.rules().to_vec();
        rules[i] = new_rule;
        RuleSet::new(rules)
    }

    fn add_value_candidates(&self, row: &[usize]) -> Vec<Candidate> {
        let schema = self.dataset.schema();
        let mut out = Vec::new();
        for (i, rule) in self.rules.rules().iter().enumerate() {
            let Some(feature) = self.unique_failing_feature(rule, row) else {
                continue;
            };
            let value = row[feature];
            if value == UNSEEN {
                continue;
            }
            let cond = rule
                .condition_on(feature)
                .expect("failing feature has a condition")
                .with_value(value);
            let new_rule = if cond.is_tautology(schema) {
                // the widened condition accepts everything; canonical form drops it
                if rule.conditions().len() == 1 {
                    continue; // would leave an empty rule
                }
                rule.without_condition(feature)
            } else {
                rule.with_condition(cond)
            };
            if new_rule.length() > self.cfg.max_rule_len {
                continue;
            }
            out.push(Candidate {
                action: Action::AddValue {
                    rule: i,
                    feature,
                    value,
                },
                rules: self.replace_rule_at(i, new_rule),
            });
        }
        out
    }

    fn remove_condition_candidates(&self, row: &[usize]) -> Vec<Candidate> {
        let mut out = Vec::new();
        for (i, rule) in self.rules.rules().iter().enumerate() {
            if rule.conditions().len() < 2 {
                continue;
            }
            let Some(feature) = self.unique_failing_feature(rule, row) else {
                continue;
            };
            out.push(Candidate {
                action: Action::RemoveCondition { rule: i, feature },
                rules: self.replace_rule_at(i, rule.without_condition(feature)),
            });
        }
        out
    }

    fn add_rule_candidates(&self, row: &[usize]) -> Vec<Candidate> {
        let schema = self.dataset.schema();
        if self.rules.len() >= self.cfg.max_rules {
            return Vec::new();
        }
        let mut out = Vec::new();
        for (feature, &value) in row.iter().enumerate() {
            if value == UNSEEN || schema.vocab_size(feature) < 2 {
                continue;
            }
            let single = Rule::new([Condition::new(feature, [value]).expect("one value")]);
            let mut rules = self.rules.rules().to_vec();
            rules.push(single);
            out.push(Candidate {
                action: Action::AddRule { feature, value },
                rules: RuleSet::new(rules),
            });
        }
        out
    }

    fn add_condition_candidates(&self, example: usize, row: &[usize]) -> Vec<Candidate> {
        let schema = self.dataset.schema();
        let mut out = Vec::new();
        for (i, rule) in self.rules.rules().iter().enumerate() {
            if !self.coverage.rule_bitmap(i).get(example) {
                continue;
            }
            for feature in 0..schema.feature_count() {
                if rule.condition_on(feature).is_some() {
                    continue;
                }
                let vocab = schema.vocab_size(feature);
                let value = row[feature];
                if value == UNSEEN || vocab < 2 {
                    // excluding an unseen value would need the full
                    // vocabulary, which is tautological
                    continue;
                }
                let cond = Condition::new(feature, (0..vocab).filter(|&v| v != value))
                    .expect("vocab of 2+ leaves a non-empty complement");
                let new_rule = rule.with_condition(cond);
                if new_rule.length() > self.cfg.max_rule_len {
                    continue;
                }
                out.push(Candidate {
                    action: Action::AddCondition { rule: i, feature },
                    rules: self.replace_rule_at(i, new_rule),
                });
            }
        }
        out
    }

    fn remove_rule_candidates(&self, example: usize) -> Vec<Candidate> {
        let mut out = Vec::new();
        for i in 0..self.rules.len() {
            if !self.coverage.rule_bitmap(i).get(example) {
                continue;
            }
            let mut rules = self.rules.rules().to_vec();
            rules.remove(i);
            out.push(Candidate {
                action: Action::RemoveRule { rule: i },
                rules: RuleSet::new(rules),
            });
        }
        out
    }

    /// Scores a candidate, reusing the cached bitmaps of untouched rules.
    pub fn eval_candidate(&self, candidate: &Candidate) -> Result<PosteriorScore<T>> {
        let mut aggregate = Bitmap::zeros(self.index.n_rows());
        for rule in candidate.rules.rules() {
            match self.rules.rules().binary_search(rule) {
                Ok(i) => aggregate.union_with(self.coverage.rule_bitmap(i)),
                Err(_) => aggregate.union_with(&self.index.rule_bitmap(rule)),
            }
        }
        score_from_parts(
            &candidate.rules,
            self.dataset.schema(),
            &aggregate,
            self.index.labels(),
            self.hps,
        )
    }

    /// Exploration / exploitation choice: with probability `explore_prob` a
    /// uniform candidate, otherwise the best-scoring one with ties broken by
    /// canonical order.
    pub fn select_neighbor(
        &self,
        candidates: &[Candidate],
        rng: &mut impl Rng,
    ) -> Result<(usize, PosteriorScore<T>)> {
        assert!(!candidates.is_empty(), "select_neighbor needs candidates");
        let explore = T::of(rng.gen::<f64>()) < self.cfg.explore_prob;
        if explore {
            let i = rng.gen_range(0..candidates.len());
            return Ok((i, self.eval_candidate(&candidates[i])?));
        }
        let mut best: Option<(usize, PosteriorScore<T>)> = None;
        for (i, c) in candidates.iter().enumerate() {
            let s = self.eval_candidate(c)?;
            let better = match &best {
                None => true,
                Some((bi, bs)) => {
                    s.total() > bs.total()
                        || (s.total() == bs.total() && c.rules < candidates[*bi].rules)
                }
            };
            if better {
                best = Some((i, s));
            }
        }
        Ok(best.expect("non-empty candidate list"))
    }

    /// When nothing is misclassified the proposal scheme has no example to
    /// fix; propose a random complexity-reducing edit instead so the chain
    /// can keep seeking simpler models.
    fn perfection_candidates(&self, rng: &mut impl Rng) -> Option<Candidate> {
        let mut kinds = vec![ActionKind::RemoveCondition, ActionKind::RemoveRule];
        while !kinds.is_empty() {
            let kind = kinds.swap_remove(rng.gen_range(0..kinds.len()));
            let candidates = match kind {
                ActionKind::RemoveCondition => {
                    let mut out = Vec::new();
                    for (i, rule) in self.rules.rules().iter().enumerate() {
                        if rule.conditions().len() < 2 {
                            continue;
                        }
                        for c in rule.conditions() {
                            out.push(Candidate {
                                action: Action::RemoveCondition {
                                    rule: i,
                                    feature: c.feature(),
                                },
                                rules: self.replace_rule_at(i, rule.without_condition(c.feature())),
                            });
                        }
                    }
                    out
                }
                ActionKind::RemoveRule => (0..self.rules.len())
                    .map(|i| {
                        let mut rules = self.rules.rules().to_vec();
                        rules.remove(i);
                        Candidate {
                            action: Action::RemoveRule { rule: i },
                            rules: RuleSet::new(rules),
                        }
                    })
                    .collect(),
                _ => unreachable!(),
            };
            if !candidates.is_empty() {
                let i = rng.gen_range(0..candidates.len());
                return Some(candidates.into_iter().nth(i).expect("index in range"));
            }
        }
        None
    }

    fn adopt(&mut self, candidate: Candidate, score: PosteriorScore<T>) {
        let per_rule: Vec<Bitmap> = candidate
            .rules
            .rules()
            .iter()
            .map(|rule| match self.rules.rules().binary_search(rule) {
                Ok(i) => self.coverage.rule_bitmap(i).clone(),
                Err(_) => self.index.rule_bitmap(rule),
            })
            .collect();
        self.coverage = CoverageIndex::from_parts(self.index.n_rows(), per_rule);
        self.rules = candidate.rules;
        self.score = score;
        debug_assert!(self.rules.len() <= self.cfg.max_rules);
        debug_assert!(self
            .rules
            .rules()
            .iter()
            .all(|r| r.length() <= self.cfg.max_rule_len && !r.is_empty()));
        if self.score.total() > self.best_score.total() {
            self.best_rules = self.rules.clone();
            self.best_score = self.score;
        }
    }

    /// Runs one annealing step at step index `t` (1-based up to `n_iter`).
    pub fn step(&mut self, chain: usize, t: usize, rng: &mut impl Rng) -> TraceRecord<T> {
        let temp = temperature(t, self.cfg);
        let mut action = None;
        let mut accepted = false;
        match self.sample_misclassified(rng) {
            Some((example, polarity)) => {
                let candidates = self.propose_neighbors(example, polarity, rng);
                if !candidates.is_empty() {
                    let (chosen, score) = self
                        .select_neighbor(&candidates, rng)
                        .expect("candidates scored");
                    let candidate = candidates.into_iter().nth(chosen).expect("index in range");
                    action = Some(candidate.action.kind());
                    if accept(self.score.total(), score.total(), temp, rng) {
                        accepted = true;
                        self.adopt(candidate, score);
                    }
                }
            }
            None => {
                if let Some(candidate) = self.perfection_candidates(rng) {
                    let score = self.eval_candidate(&candidate).expect("candidate scored");
                    action = Some(candidate.action.kind());
                    if accept(self.score.total(), score.total(), temp, rng) {
                        accepted = true;
                        self.adopt(candidate, score);
                    }
                }
            }
        }
        TraceRecord {
            chain,
            step: t,
            temperature: temp,
            current_total: self.score.total(),
            best_total: self.best_score.total(),
            action,
            accepted,
        }
    }
}

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E3779B97F4A7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58476D1CE4E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D049BB133111EB);
    z ^ (z >> 31)
}

/// Seed for one restart, derived from the master seed.
pub fn chain_seed(seed: u64, chain: usize) -> u64 {
    splitmix64(seed ^ (chain as u64).wrapping_mul(0x9E3779B97F4A7C15))
}

/// Runs `cfg.restarts` independent chains from the empty rule set and
/// returns the best-scoring state ever visited, with the concatenated step
/// trace. Fully deterministic given `cfg.seed`.
pub fn run<T: Real>(
    dataset: &Dataset,
    hps: &Hyperparams<T>,
    cfg: &SaConfig<T>,
) -> Result<SaOutcome<T>> {
    run_with_observer(dataset, hps, cfg, |_| {})
}

/// [`run`] with a per-step observer snapshot, used by the invariant suites.
pub fn run_with_observer<T: Real, F>(
    dataset: &Dataset,
    hps: &Hyperparams<T>,
    cfg: &SaConfig<T>,
    mut observe: F,
) -> Result<SaOutcome<T>>
where
    F: FnMut(&StepEvent<T>),
{
    cfg.validate()?;
    hps.validate()?;
    let index = ValueIndex::build(dataset);
    let mut trace = Vec::with_capacity(cfg.n_iter * cfg.restarts);
    let mut best: Option<(RuleSet, PosteriorScore<T>)> = None;
    for chain_idx in 0..cfg.restarts {
        let mut rng = ChaCha8Rng::seed_from_u64(chain_seed(cfg.seed, chain_idx));
        let mut chain = Chain::new(dataset, &index, hps, cfg)?;
        for t in 1..=cfg.n_iter {
            let record = chain.step(chain_idx, t, &mut rng);
            observe(&StepEvent {
                chain: chain_idx,
                record: &record,
                rules: chain.rules(),
                coverage: chain.coverage(),
                score: chain.score(),
            });
            trace.push(record);
        }
        let (rules, score) = chain.best();
        let replace = match &best {
            None => true,
            Some((_, s)) => score.total() > s.total(),
        };
        if replace {
            best = Some((rules.clone(), *score));
        }
    }
    let (rules, score) = best.expect("at least one restart");
    Ok(SaOutcome {
        rules,
        score,
        trace,
    })
}

/// Writes the trace as tab-separated lines, one per step.
pub fn write_trace<T: Real, W: Write>(mut w: W, trace: &[TraceRecord<T>]) -> std::io::Result<()> {
    writeln!(
        w,
        "chain\tstep\ttemperature\tcurrent_total\tbest_total\taction\taccepted"
    )?;
    for r in trace {
        writeln!(
            w,
            "{}\t{}\t{}\t{}\t{}\t{}\t{}",
            r.chain,
            r.step,
            r.temperature,
            r.current_total,
            r.best_total,
            r.action.map_or("-", ActionKind::label),
            u8::from(r.accepted),
        )?;
    }
    Ok(())
}
