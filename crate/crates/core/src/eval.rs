//! Metrics, stratified splitting, the exhaustive-search oracle, and the
//! planted-model generator used for verification.

use rand::seq::SliceRandom;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::bitmap::Bitmap;
use crate::coverage::ValueIndex;
use crate::dataset::Dataset;
use crate::error::{Error, Result};
use crate::num::Real;
use crate::posterior::{
    log_likelihood, score_from_parts, ConfusionCounts, Hyperparams, PosteriorScore,
};
use crate::rules::{Condition, Rule, RuleSet};
use crate::schema::Schema;
use crate::special::ln_gamma;

/// Predictive and complexity metrics for one model on one dataset.
///
/// `n_cond` counts conditions; `n_item` additionally counts the values
/// inside them (a 3-value condition is one condition, three items).
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ModelReport {
    pub f1: f64,
    pub precision: f64,
    pub recall: f64,
    /// Set when neither the model nor the data contain any positives, in
    /// which case `f1 = 0` by definition.
    pub f1_degenerate: bool,
    pub n_rule: usize,
    pub n_cond: usize,
    pub n_item: usize,
    pub n_feat: usize,
    pub confusion: ConfusionCounts,
}

impl std::fmt::Display for ModelReport {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        writeln!(
            f,
            "{:<8}{:<8}{:<8}{:<8}",
            "F1", "n_rule", "n_cond", "n_feat"
        )?;
        write!(
            f,
            "{:<8.3}{:<8}{:<8}{:<8}",
            self.f1, self.n_rule, self.n_cond, self.n_feat
        )
    }
}

/// Confusion counts from row-by-row classification plus complexity counts
/// from the canonical rule set.
pub fn evaluate(rules: &RuleSet, dataset: &Dataset) -> Result<ModelReport> {
    rules.validate(dataset.schema())?;
    let mut counts = ConfusionCounts::new(0, 0, 0, 0);
    for n in 0..dataset.n_rows() {
        let predicted = rules.classify(dataset.row(n))?;
        match (predicted, dataset.label(n)) {
            (true, true) => counts.true_pos += 1,
            (true, false) => counts.false_pos += 1,
            (false, false) => counts.true_neg += 1,
            (false, true) => counts.false_neg += 1,
        }
    }
    Ok(report_from_counts(rules, counts))
}

pub(crate) fn report_from_counts(rules: &RuleSet, confusion: ConfusionCounts) -> ModelReport {
    let tp = confusion.true_pos as f64;
    let predicted = confusion.true_pos + confusion.false_pos;
    let actual = confusion.true_pos + confusion.false_neg;
    let precision = if predicted == 0 {
        0.0
    } else {
        tp / predicted as f64
    };
    let recall = if actual == 0 { 0.0 } else { tp / actual as f64 };
    let f1 = if precision + recall == 0.0 {
        0.0
    } else {
        2.0 * precision * recall / (precision + recall)
    };
    ModelReport {
        f1,
        precision,
        recall,
        f1_degenerate: predicted == 0 && actual == 0,
        n_rule: rules.len(),
        n_cond: rules.n_conditions(),
        n_item: rules.n_items(),
        n_feat: rules.feature_set().len(),
        confusion,
    }
}

/// A train/test partition. `stratified` is false when a class was too small
/// to stratify and the split fell back to a plain shuffle.
#[derive(Debug, Clone)]
pub struct SplitOutcome {
    pub train: Dataset,
    pub test: Dataset,
    pub stratified: bool,
}

/// Deterministic stratified split: each class is shuffled separately and
/// contributes its rounded share of test rows.
pub fn split(dataset: &Dataset, test_fraction: f64, seed: u64) -> Result<SplitOutcome> {
    if !(test_fraction > 0.0 && test_fraction < 1.0) {
        return Err(Error::Config(format!(
            "test fraction must lie strictly between 0 and 1, got {test_fraction}"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut pos: Vec<usize> = (0..dataset.n_rows())
        .filter(|&n| dataset.label(n))
        .collect();
    let mut neg: Vec<usize> = (0..dataset.n_rows())
        .filter(|&n| !dataset.label(n))
        .collect();
    pos.shuffle(&mut rng);
    neg.shuffle(&mut rng);

    let share = |len: usize| (len as f64 * test_fraction).round() as usize;
    let (pos_test, neg_test) = (share(pos.len()), share(neg.len()));
    let usable =
        |class: &[usize], take: usize| class.is_empty() || (take >= 1 && take < class.len());
    let stratified = usable(&pos, pos_test) && usable(&neg, neg_test);

    let (mut test_idx, mut train_idx): (Vec<usize>, Vec<usize>) = if stratified {
        let mut test: Vec<usize> = pos[..pos_test].to_vec();
        test.extend_from_slice(&neg[..neg_test]);
        let mut train: Vec<usize> = pos[pos_test..].to_vec();
        train.extend_from_slice(&neg[neg_test..]);
        (test, train)
    } else {
        let mut all: Vec<usize> = (0..dataset.n_rows()).collect();
        all.shuffle(&mut rng);
        let n_test = share(dataset.n_rows()).clamp(1, dataset.n_rows() - 1);
        (all[..n_test].to_vec(), all[n_test..].to_vec())
    };
    test_idx.sort_unstable();
    train_idx.sort_unstable();
    Ok(SplitOutcome {
        train: dataset.subset(&train_idx)?,
        test: dataset.subset(&test_idx)?,
        stratified,
    })
}

/// Bounds for the brute-force search, plus a hard ceiling on how many states
/// it will agree to enumerate.
#[derive(Debug, Clone, PartialEq)]
pub struct SearchBounds {
    pub max_rules: usize,
    pub max_rule_len: usize,
    pub state_ceiling: u128,
}

impl SearchBounds {
    pub fn new(max_rules: usize, max_rule_len: usize) -> Self {
        SearchBounds {
            max_rules,
            max_rule_len,
            state_ceiling: 10_000_000,
        }
    }
}

fn binomial(n: u128, k: u128) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc.saturating_mul(n - i) / (i + 1);
    }
    acc
}

/// Number of canonical rules (non-empty, no tautological conditions, at most
/// one condition per feature) with length at most `max_rule_len`.
pub fn count_rules(schema: &Schema, max_rule_len: usize) -> u128 {
    // ways[rem] = rule fragments over features processed so far using `rem`
    // of the length budget; tautological (full-vocabulary) sets excluded.
    let mut ways = vec![0u128; max_rule_len + 1];
    ways[0] = 1;
    for j in 0..schema.feature_count() {
        let vocab = schema.vocab_size(j);
        let mut next = ways.clone(); // skip this feature
        for used in 0..=max_rule_len {
            if ways[used] == 0 {
                continue;
            }
            let cap = (max_rule_len - used).min(vocab.saturating_sub(1));
            for size in 1..=cap {
                let combos = binomial(vocab as u128, size as u128);
                next[used + size] =
                    next[used + size].saturating_add(ways[used].saturating_mul(combos));
            }
        }
        ways = next;
    }
    ways.iter().fold(0u128, |a, &b| a.saturating_add(b)) - 1 // minus the empty rule
}

/// Number of canonical rule sets within the bounds (the empty set included).
pub fn count_states(schema: &Schema, bounds: &SearchBounds) -> u128 {
    let rules = count_rules(schema, bounds.max_rule_len);
    let mut total: u128 = 0;
    for k in 0..=bounds.max_rules as u128 {
        total = total.saturating_add(binomial(rules, k));
    }
    total
}

fn enumerate_rules(schema: &Schema, max_rule_len: usize) -> Vec<Rule> {
    fn recurse(
        schema: &Schema,
        feature: usize,
        remaining: usize,
        current: &mut Vec<Condition>,
        out: &mut Vec<Rule>,
    ) {
        if feature == schema.feature_count() {
            if !current.is_empty() {
                out.push(Rule::new(current.iter().cloned()));
            }
            return;
        }
        // skip this feature
        recurse(schema, feature + 1, remaining, current, out);
        let vocab = schema.vocab_size(feature);
        if vocab < 2 {
            return;
        }
        // every non-empty, non-tautological value subset within budget
        for mask in 1u64..(1u64 << vocab) - 1 {
            let size = mask.count_ones() as usize;
            if size > remaining {
                continue;
            }
            let values: Vec<usize> = (0..vocab).filter(|v| mask >> v & 1 == 1).collect();
            current.push(Condition::new(feature, values).expect("non-empty subset"));
            recurse(schema, feature + 1, remaining - size, current, out);
            current.pop();
        }
    }
    assert!(
        schema.features().iter().all(|f| f.vocabulary().len() <= 24),
        "vocabulary too large for exhaustive enumeration"
    );
    let mut out = Vec::new();
    let mut current = Vec::new();
    recurse(schema, 0, max_rule_len, &mut current, &mut out);
    out.sort_unstable();
    out
}

/// Brute-force MAP: enumerates every canonical rule set within the bounds
/// and returns the posterior argmax, ties broken by canonical order.
/// Refuses to run when the state count exceeds `bounds.state_ceiling`.
pub fn exhaustive_map<T: Real>(
    dataset: &Dataset,
    hps: &Hyperparams<T>,
    bounds: &SearchBounds,
) -> Result<(RuleSet, PosteriorScore<T>)> {
    hps.validate()?;
    let schema = dataset.schema();
    let states = count_states(schema, bounds);
    if states > bounds.state_ceiling {
        return Err(Error::SearchSpaceTooLarge {
            computed: states,
            ceiling: bounds.state_ceiling,
        });
    }
    let index = ValueIndex::build(dataset);
    let rules = enumerate_rules(schema, bounds.max_rule_len);

    struct RuleInfo<T> {
        bitmap: Bitmap,
        counts: Vec<(usize, usize)>, // (feature, item count)
        prior_piece: T,              // length marginal + arrangement coefficient
    }
    let infos: Vec<RuleInfo<T>> = rules
        .iter()
        .map(|r| {
            let len = r.length();
            let mut piece = ln_poisson_gamma(len, hps.prior.alpha_l, hps.prior.beta_l)
                + ln_gamma(T::of_usize(len) + T::one());
            let mut counts = Vec::with_capacity(r.conditions().len());
            for c in r.conditions() {
                piece -= ln_gamma(T::of_usize(c.values().len()) + T::one());
                counts.push((c.feature(), c.values().len()));
            }
            RuleInfo {
                bitmap: index.rule_bitmap(r),
                counts,
                prior_piece: piece,
            }
        })
        .collect();
    let nb_m: Vec<T> = (0..=bounds.max_rules)
        .map(|m| ln_poisson_gamma(m, hps.prior.alpha_m, hps.prior.beta_m))
        .collect();
    let theta = &hps.prior.theta;
    let theta_sum: T = theta.iter().copied().sum();
    let mut likelihood_memo: std::collections::HashMap<(usize, usize), T> =
        std::collections::HashMap::new();

    let mut pooled = vec![0usize; schema.feature_count()];
    let mut chosen: Vec<usize> = Vec::new();
    let mut best: Option<(T, Vec<usize>)> = None;

    fn recurse<T: Real>(
        start: usize,
        chosen: &mut Vec<usize>,
        pooled: &mut Vec<usize>,
        infos: &[RuleInfo<T>],
        index: &ValueIndex,
        nb_m: &[T],
        theta: &[T],
        theta_sum: T,
        hps: &Hyperparams<T>,
        likelihood_memo: &mut std::collections::HashMap<(usize, usize), T>,
        best: &mut Option<(T, Vec<usize>)>,
        max_rules: usize,
    ) {
        // score the current combination
        let mut aggregate = Bitmap::zeros(index.n_rows());
        let mut prior = nb_m[chosen.len()];
        for &i in chosen.iter() {
            aggregate.union_with(&infos[i].bitmap);
            prior += infos[i].prior_piece;
        }
        let mut pooled_total = 0usize;
        for (j, &g) in pooled.iter().enumerate() {
            if g > 0 {
                prior += ln_gamma(theta[j] + T::of_usize(g)) - ln_gamma(theta[j]);
                pooled_total += g;
            }
        }
        prior += ln_gamma(theta_sum) - ln_gamma(theta_sum + T::of_usize(pooled_total));

        let tp = aggregate.and_count(index.labels());
        let fp = aggregate.count() - tp;
        let ll = *likelihood_memo.entry((tp, fp)).or_insert_with(|| {
            log_likelihood(
                ConfusionCounts::new(tp, fp, index.negatives() - fp, index.positives() - tp),
                &hps.likelihood,
            )
        });
        let total = prior + ll;
        let better = match best {
            None => true,
            Some((b, _)) => total > *b,
        };
        if better {
            *best = Some((total, chosen.clone()));
        }

        if chosen.len() == max_rules {
            return;
        }
        for i in start..infos.len() {
            chosen.push(i);
            for &(f, c) in &infos[i].counts {
                pooled[f] += c;
            }
            recurse(
                i + 1,
                chosen,
                pooled,
                infos,
                index,
                nb_m,
                theta,
                theta_sum,
                hps,
                likelihood_memo,
                best,
                max_rules,
            );
            for &(f, c) in &infos[i].counts {
                pooled[f] -= c;
            }
            chosen.pop();
        }
    }

    recurse(
        0,
        &mut chosen,
        &mut pooled,
        &infos,
        &index,
        &nb_m,
        theta,
        theta_sum,
        hps,
        &mut likelihood_memo,
        &mut best,
        bounds.max_rules,
    );

    let (_, combo) = best.expect("the empty set is always scored");
    let winner = RuleSet::new(combo.iter().map(|&i| rules[i].clone()));
    let mut aggregate = Bitmap::zeros(index.n_rows());
    for &i in &combo {
        aggregate.union_with(&infos[i].bitmap);
    }
    let score = score_from_parts(&winner, schema, &aggregate, index.labels(), hps)?;
    Ok((winner, score))
}

fn ln_poisson_gamma<T: Real>(count: usize, alpha: T, beta: T) -> T {
    let k = T::of_usize(count);
    ln_gamma(k + alpha) - ln_gamma(k + T::one()) - ln_gamma(alpha) + alpha * beta.ln()
        - (k + alpha) * (beta + T::one()).ln()
}

/// Draws `n_rows` rows uniformly over value indices and labels them with the
/// planted model, flipping each label independently with probability
/// `noise_rate`. Deterministic given `seed`.
pub fn generate_planted(
    n_rows: usize,
    schema: &Schema,
    planted: &RuleSet,
    noise_rate: f64,
    seed: u64,
) -> Result<Dataset> {
    if n_rows == 0 {
        return Err(Error::Config("n_rows must be at least 1".into()));
    }
    if !(0.0..0.5).contains(&noise_rate) {
        return Err(Error::Config(format!(
            "noise rate must lie in [0, 0.5), got {noise_rate}"
        )));
    }
    planted.validate(schema)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let j = schema.feature_count();
    let mut rows = Vec::with_capacity(n_rows);
    let mut labels = Vec::with_capacity(n_rows);
    for _ in 0..n_rows {
        let row: Vec<usize> = (0..j)
            .map(|f| rng.gen_range(0..schema.vocab_size(f)))
            .collect();
        let mut label = planted.classify(&row)?;
        if rng.gen::<f64>() < noise_rate {
            label = !label;
        }
        rows.push(row);
        labels.push(label);
    }
    Dataset::new(schema.clone(), rows, labels)
}
