//! Acceptance suite. One test per criterion; each prints a PASS line with
//! its runtime (visible with `-- --nocapture`) and enforces the criterion's
//! tolerance and time budget.
//!
//! The oracles here are deliberately independent of the library's scoring
//! path: the likelihood is checked against exact big-integer factorial
//! arithmetic, and the prior against direct numerical integration of the
//! generative model (Gauss-Legendre quadrature over the Poisson rates and
//! the feature-weight simplex).

use std::collections::BTreeMap;
use std::time::{Duration, Instant};

use mvrs::coverage::{CoverageIndex, ValueIndex};
use mvrs::eval::{evaluate, exhaustive_map, generate_planted, split, SearchBounds};
use mvrs::inference::{run, run_with_observer, Chain, SaConfig};
use mvrs::model_io::{model_to_string, parse_model};
use mvrs::posterior::{
    log_likelihood, log_prior, score_from_parts, ConfusionCounts, Hyperparams,
    LikelihoodHyperparams, PriorHyperparams,
};
use mvrs::rules::{Condition, Rule, RuleSet};
use mvrs::{Dataset, Schema};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::ToPrimitive;
use rand::seq::SliceRandom;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn pass(name: &str, start: Instant, budget: Duration) {
    let elapsed = start.elapsed();
    println!("acceptance {name}: PASS ({elapsed:.2?})");
    assert!(
        elapsed <= budget,
        "{name} exceeded its {budget:?} budget: {elapsed:?}"
    );
}

/// |got − want| within a relative tolerance, floored at 1 for values near
/// zero (log-scale quantities cross zero).
fn within_rel(got: f64, want: f64, tol: f64) -> bool {
    (got - want).abs() <= tol * want.abs().max(1.0)
}

// ---------------------------------------------------------------------------
// Criterion 1: likelihood against exact rational factorial arithmetic
// ---------------------------------------------------------------------------

#[test]
fn c1_likelihood_matches_exact_rational_arithmetic() {
    let start = Instant::now();
    // B(a, b) = (a-1)!(b-1)!/(a+b-1)! for integer arguments.
    let mut factorials: Vec<BigInt> = vec![BigInt::from(1)];
    for n in 1..=80u32 {
        let last = factorials.last().unwrap() * n;
        factorials.push(last);
    }
    let exact_ln_beta = |a: usize, b: usize| -> f64 {
        let beta = BigRational::new(
            &factorials[a - 1] * &factorials[b - 1],
            factorials[a + b - 1].clone(),
        );
        beta.to_f64().expect("beta fits in f64").ln()
    };

    let hyper_grid = [1usize, 2, 5];
    let max_n = 30usize;
    // Every Beta argument is a count plus an integer hyperparameter, so the
    // distinct (a, b) pairs are few; table the exact side once.
    let side = max_n + 6;
    let mut exact = vec![vec![0.0f64; side]; side];
    for (a, row) in exact.iter_mut().enumerate().skip(1) {
        for (b, cell) in row.iter_mut().enumerate().skip(1) {
            *cell = exact_ln_beta(a, b);
        }
    }

    let mut combos = Vec::new();
    for ap in hyper_grid {
        for bp in hyper_grid {
            for an in hyper_grid {
                for bn in hyper_grid {
                    combos.push((ap, bp, an, bn));
                }
            }
        }
    }
    let totals: Vec<(u64, f64)> = std::thread::scope(|scope| {
        let handles: Vec<_> = combos
            .chunks(11)
            .map(|chunk| {
                let exact = &exact;
                scope.spawn(move || {
                    let mut checked = 0u64;
                    let mut worst = 0.0f64;
                    for &(ap, bp, an, bn) in chunk {
                        let hp =
                            LikelihoodHyperparams::new(ap as f64, bp as f64, an as f64, bn as f64);
                        for tp in 0..=max_n {
                            for fp in 0..=(max_n - tp) {
                                for tn in 0..=(max_n - tp - fp) {
                                    for fnn in 0..=(max_n - tp - fp - tn) {
                                        let counts = ConfusionCounts::new(tp, fp, tn, fnn);
                                        let got = log_likelihood(counts, &hp);
                                        let want =
                                            exact[tp + ap][fp + bp] + exact[tn + an][fnn + bn];
                                        assert!(
                                            within_rel(got, want, 1e-9),
                                            "counts {counts:?}, hp ({ap},{bp},{an},{bn}): \
                                             {got} vs {want}"
                                        );
                                        worst = worst.max((got - want).abs() / want.abs().max(1.0));
                                        checked += 1;
                                    }
                                }
                            }
                        }
                    }
                    (checked, worst)
                })
            })
            .collect();
        handles.into_iter().map(|h| h.join().unwrap()).collect()
    });
    let checked: u64 = totals.iter().map(|t| t.0).sum();
    let worst = totals.iter().map(|t| t.1).fold(0.0, f64::max);
    assert!(
        checked > 3_000_000,
        "swept {checked} count/hyperparameter combinations"
    );
    println!("  likelihood oracle: {checked} checks, worst relative error {worst:.3e}");
    pass("C1 likelihood-oracle", start, Duration::from_secs(5));
}

// ---------------------------------------------------------------------------
// Criterion 2: prior against numerical integration of the generative model
// ---------------------------------------------------------------------------

/// Gauss-Legendre nodes and weights on [-1, 1].
fn gauss_legendre(n: usize) -> Vec<(f64, f64)> {
    let mut out = Vec::with_capacity(n);
    let m = n.div_ceil(2);
    for i in 0..m {
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0f64, x);
            for k in 2..=n {
                let p2 = ((2 * k - 1) as f64 * x * p1 - (k - 1) as f64 * p0) / k as f64;
                p0 = p1;
                p1 = p2;
            }
            dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
            let dx = p1 / dp;
            x -= dx;
            if dx.abs() < 1e-15 {
                break;
            }
        }
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        out.push((x, w));
        if i != n - 1 - i {
            out.push((-x, w));
        }
    }
    out
}

fn integrate(nodes: &[(f64, f64)], a: f64, b: f64, mut f: impl FnMut(f64) -> f64) -> f64 {
    let half = (b - a) / 2.0;
    let mid = (a + b) / 2.0;
    nodes
        .iter()
        .map(|&(x, w)| w * f(mid + half * x))
        .sum::<f64>()
        * half
}

fn int_factorial(n: usize) -> f64 {
    (1..=n).map(|k| k as f64).product()
}

/// ∫ Poisson(k; λ) Gamma(λ; α, β) dλ by quadrature, integer α.
fn poisson_gamma_quad(nodes: &[(f64, f64)], k: usize, alpha: usize, beta: f64) -> f64 {
    let norm = beta.powi(alpha as i32) / int_factorial(alpha - 1) / int_factorial(k);
    // integrand mass sits well below this cutoff for the rates in the sweep
    let upper = 8.0 + 3.0 * k as f64;
    norm * integrate(nodes, 0.0, upper, |lambda| {
        lambda.powi((k + alpha - 1) as i32) * (-(beta + 1.0) * lambda).exp()
    })
}

/// ∫ ∏_j p_j^{g_j} Dirichlet(p; θ) dp over the simplex, J ≤ 3, integer θ.
fn dirichlet_moment_quad(nodes: &[(f64, f64)], pooled: &[usize], theta: &[usize]) -> f64 {
    let theta_sum: usize = theta.iter().sum();
    let norm =
        int_factorial(theta_sum - 1) / theta.iter().map(|&t| int_factorial(t - 1)).product::<f64>();
    match pooled.len() {
        1 => 1.0, // p = (1) with certainty
        2 => {
            let (a, b) = (
                (pooled[0] + theta[0] - 1) as i32,
                (pooled[1] + theta[1] - 1) as i32,
            );
            norm * integrate(nodes, 0.0, 1.0, |p| p.powi(a) * (1.0 - p).powi(b))
        }
        3 => {
            let (a, b, c) = (
                (pooled[0] + theta[0] - 1) as i32,
                (pooled[1] + theta[1] - 1) as i32,
                (pooled[2] + theta[2] - 1) as i32,
            );
            norm * integrate(nodes, 0.0, 1.0, |p1| {
                p1.powi(a)
                    * integrate(nodes, 0.0, 1.0 - p1, |p2| {
                        p2.powi(b) * (1.0 - p1 - p2).powi(c)
                    })
            })
        }
        _ => unreachable!("sweep keeps J <= 3"),
    }
}

/// All per-rule feature-count vectors over `j` features with total in 1..=3.
fn rule_structures(j: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    fn recurse(
        j: usize,
        feature: usize,
        left: usize,
        current: &mut Vec<usize>,
        out: &mut Vec<Vec<usize>>,
    ) {
        if feature == j {
            if left < 3 {
                out.push(current.clone());
            }
            return;
        }
        for take in 0..=left {
            current.push(take);
            recurse(j, feature + 1, left - take, current, out);
            current.pop();
        }
    }
    recurse(j, 0, 3, &mut Vec::new(), &mut out);
    out.retain(|v| v.iter().sum::<usize>() >= 1);
    out
}

/// Concrete rule realizing a count vector; `salt` shifts the chosen values
/// so same-structure rules in one set stay distinct.
fn rule_from_structure(schema: &Schema, counts: &[usize], salt: usize) -> Rule {
    Rule::new(
        counts
            .iter()
            .enumerate()
            .filter(|(_, &c)| c > 0)
            .map(|(j, &c)| {
                let vocab = schema.vocab_size(j);
                Condition::new(j, (0..c).map(|i| (salt + i) % vocab)).unwrap()
            }),
    )
}

#[test]
fn c2_prior_matches_numerical_integration() {
    let start = Instant::now();
    let nodes = gauss_legendre(64);
    let lambda_nodes = gauss_legendre(160);

    let mut checked = 0u64;
    let mut worst = 0.0f64;
    for j in 1..=3usize {
        let schema = Schema::new(
            (0..j)
                .map(|f| {
                    (
                        format!("f{f}"),
                        (0..4).map(|v| format!("v{v}")).collect::<Vec<_>>(),
                    )
                })
                .collect::<Vec<_>>(),
        )
        .unwrap();
        let structures = rule_structures(j);
        for (alpha_m, beta_m, alpha_l, beta_l) in [(1usize, 9.0, 1usize, 9.0), (2, 10.0, 2, 5.0)] {
            for theta_val in [1usize, 2] {
                let theta = vec![theta_val; j];
                let hp = PriorHyperparams::new(
                    alpha_m as f64,
                    beta_m,
                    alpha_l as f64,
                    beta_l,
                    theta.iter().map(|&t| t as f64).collect(),
                );
                // cache the one-dimensional marginals
                let nb_m: Vec<f64> = (0..=3)
                    .map(|m| poisson_gamma_quad(&lambda_nodes, m, alpha_m, beta_m))
                    .collect();
                let nb_l: Vec<f64> = (0..=3)
                    .map(|l| poisson_gamma_quad(&lambda_nodes, l, alpha_l, beta_l))
                    .collect();

                // every rule multiset of size 0..=3 over the structures
                let mut sets: Vec<Vec<usize>> = vec![Vec::new()];
                sets.extend((0..structures.len()).map(|i| vec![i]));
                for a in 0..structures.len() {
                    for b in a..structures.len() {
                        sets.push(vec![a, b]);
                        for c in b..structures.len() {
                            sets.push(vec![a, b, c]);
                        }
                    }
                }

                let mut moment_cache: BTreeMap<Vec<usize>, f64> = BTreeMap::new();
                for set in &sets {
                    let rules = RuleSet::new(
                        set.iter()
                            .enumerate()
                            .map(|(m, &s)| rule_from_structure(&schema, &structures[s], m)),
                    );
                    if rules.len() != set.len() {
                        continue; // value salting failed to keep rules distinct
                    }
                    // direct integration of the generative model
                    let mut want = nb_m[rules.len()];
                    let mut pooled = vec![0usize; j];
                    for rule in rules.rules() {
                        let len = rule.length();
                        want *= nb_l[len];
                        let mut coef = int_factorial(len);
                        for c in rule.conditions() {
                            coef /= int_factorial(c.values().len());
                            pooled[c.feature()] += c.values().len();
                        }
                        want *= coef;
                    }
                    want *= *moment_cache
                        .entry(pooled.clone())
                        .or_insert_with(|| dirichlet_moment_quad(&nodes, &pooled, &theta));

                    let got = log_prior(&rules, &schema, &hp).unwrap();
                    assert!(
                        (got - want.ln()).abs() <= 1e-3,
                        "J={j} hp=({alpha_m},{beta_m},{alpha_l},{beta_l}) θ={theta_val} \
                         set {set:?}: {got} vs {}",
                        want.ln()
                    );
                    worst = worst.max((got - want.ln()).abs());
                    checked += 1;
                }
            }
        }
    }
    assert!(checked > 5000, "only {checked} structures checked");
    println!("  prior oracle: {checked} structures, worst |Δlog| {worst:.3e}");
    pass("C2 prior-oracle", start, Duration::from_secs(60));
}

// ---------------------------------------------------------------------------
// Criterion 3: annealing reaches the exhaustive optimum
// ---------------------------------------------------------------------------

fn binary_schema(j: usize) -> Schema {
    Schema::new(
        (0..j)
            .map(|f| (format!("f{f}"), vec!["0".to_string(), "1".to_string()]))
            .collect::<Vec<_>>(),
    )
    .unwrap()
}

fn random_planted_truth(rng: &mut ChaCha8Rng, j: usize) -> RuleSet {
    let n_rules = rng.gen_range(1..=2);
    RuleSet::new((0..n_rules).map(|_| {
        let n_conds = rng.gen_range(1..=2);
        let mut feats: Vec<usize> = (0..j).collect();
        feats.shuffle(rng);
        Rule::new(
            feats[..n_conds]
                .iter()
                .map(|&f| Condition::new(f, [rng.gen_range(0..2usize)]).unwrap()),
        )
    }))
}

#[test]
fn c3_annealing_attains_the_exhaustive_optimum() {
    let start = Instant::now();
    let schema = binary_schema(6);
    let hps = Hyperparams::<f64>::defaults(6);
    let bounds = SearchBounds::new(2, 4);

    let results: Vec<(u64, usize)> = std::thread::scope(|scope| {
        let handles: Vec<_> = (0..10u64)
            .map(|dataset_idx| {
                let schema = &schema;
                let hps = &hps;
                let bounds = &bounds;
                scope.spawn(move || {
                    let mut rng = ChaCha8Rng::seed_from_u64(500 + dataset_idx);
                    let truth = random_planted_truth(&mut rng, 6);
                    let data =
                        generate_planted(64, schema, &truth, 0.1, 900 + dataset_idx).unwrap();
                    let (_, optimum) = exhaustive_map(&data, hps, bounds).unwrap();
                    let mut hits = 0;
                    for seed in 0..20u64 {
                        let cfg = SaConfig {
                            n_iter: 3000,
                            restarts: 3,
                            max_rules: 2,
                            max_rule_len: 4,
                            seed: dataset_idx * 100 + seed,
                            ..SaConfig::default()
                        };
                        let out = run(&data, hps, &cfg).unwrap();
                        // oracle dominance: the annealer can never win
                        assert!(out.score.total() <= optimum.total() + 1e-9);
                        if out.score.total() >= optimum.total() - 1e-9 {
                            hits += 1;
                        }
                    }
                    (dataset_idx, hits)
                })
            })
            .collect();
        handles.into_iter().map(|h| h.join().unwrap()).collect()
    });

    for (dataset_idx, hits) in &results {
        println!("  dataset {dataset_idx}: {hits}/20 chains reached the optimum");
        assert!(
            *hits >= 16,
            "dataset {dataset_idx}: only {hits}/20 chains reached the optimum"
        );
    }
    pass("C3 sa-vs-exhaustive", start, Duration::from_secs(300));
}

// ---------------------------------------------------------------------------
// Criterion 4: planted-model recovery
// ---------------------------------------------------------------------------

fn recovery_schema() -> Schema {
    // ten features, two of them high-cardinality like clinical code columns
    let mut features: Vec<(String, Vec<String>)> = (0..8)
        .map(|j| (format!("f{j}"), (0..4).map(|v| format!("v{v}")).collect()))
        .collect();
    features.extend((8..10).map(|j| {
        (
            format!("f{j}"),
            (0..12).map(|v| format!("v{v}")).collect::<Vec<_>>(),
        )
    }));
    Schema::new(features).unwrap()
}

fn recovery_truth() -> RuleSet {
    RuleSet::new([
        Rule::new([
            Condition::new(8, [0, 1, 2, 3, 4, 5]).unwrap(),
            Condition::new(0, [0, 1, 2]).unwrap(),
        ]),
        Rule::new([
            Condition::new(9, [0, 1, 2, 3]).unwrap(),
            Condition::new(1, [0, 1, 2]).unwrap(),
        ]),
    ])
}

#[test]
fn c4_planted_recovery_generalizes() {
    let start = Instant::now();
    let schema = recovery_schema();
    let truth = recovery_truth();
    let hps = Hyperparams::<f64>::defaults(10);

    let results: Vec<(u64, f64, usize, Duration)> = std::thread::scope(|scope| {
        let handles: Vec<_> = (0..10u64)
            .map(|seed| {
                let schema = &schema;
                let truth = &truth;
                let hps = &hps;
                scope.spawn(move || {
                    let t0 = Instant::now();
                    let data = generate_planted(2000, schema, truth, 0.05, 1000 + seed).unwrap();
                    let parts = split(&data, 0.2, seed).unwrap();
                    let cfg = SaConfig {
                        n_iter: 4000,
                        restarts: 3,
                        seed,
                        ..SaConfig::default()
                    };
                    let out = run(&parts.train, hps, &cfg).unwrap();
                    let report = evaluate(&out.rules, &parts.test).unwrap();
                    (seed, report.f1, report.n_feat, t0.elapsed())
                })
            })
            .collect();
        handles.into_iter().map(|h| h.join().unwrap()).collect()
    });

    let mut wins = 0;
    for (seed, f1, n_feat, elapsed) in &results {
        let ok = *f1 >= 0.90 && *n_feat <= 4;
        wins += ok as usize;
        println!(
            "  seed {seed}: held-out F1 {f1:.3}, n_feat {n_feat}, {elapsed:.2?} {}",
            if ok { "ok" } else { "miss" }
        );
        assert!(
            *elapsed < Duration::from_secs(120),
            "seed {seed} took {elapsed:?}, budget is 2 minutes"
        );
    }
    assert!(
        wins >= 8,
        "only {wins}/10 seeds recovered the planted model"
    );
    pass("C4 planted-recovery", start, Duration::from_secs(1200));
}

// ---------------------------------------------------------------------------
// Criterion 5: multi-value conciseness under single-value expansion
// ---------------------------------------------------------------------------

#[test]
fn c5_single_value_expansion_of_a_value_set_pair() {
    let start = Instant::now();
    // A rule shaped like the flagship clinical model: one single-value
    // condition and one ten-value condition over a 14-value code feature.
    let schema = Schema::new(vec![
        (
            "risk".to_string(),
            vec!["Minor", "Moderate", "Major", "Extreme"]
                .into_iter()
                .map(String::from)
                .collect::<Vec<_>>(),
        ),
        (
            "procedure".to_string(),
            vec![
                "33", "34", "35", "39", "58", "61", "63", "142", "216", "225", "7", "8", "9", "10",
            ]
            .into_iter()
            .map(String::from)
            .collect::<Vec<_>>(),
        ),
    ])
    .unwrap();
    let planted = RuleSet::new([Rule::new([
        Condition::new(0, [3]).unwrap(),
        Condition::new(1, [0, 1, 2, 3, 4, 5, 6, 7, 8, 9]).unwrap(),
    ])]);
    assert_eq!(planted.n_conditions(), 2);

    let expanded = planted.expand_single_valued();
    assert_eq!(expanded.len(), 10, "expected exactly 10 single-value rules");
    assert_eq!(
        expanded.n_conditions(),
        20,
        "expected exactly 20 conditions"
    );
    for rule in expanded.rules() {
        assert!(rule.conditions().iter().all(|c| c.values().len() == 1));
    }

    // the expansion describes the same model: identical predictions on data
    // drawn from the planted analog
    let data = generate_planted(2000, &schema, &planted, 0.05, 77).unwrap();
    for n in 0..data.n_rows() {
        assert_eq!(
            planted.classify(data.row(n)).unwrap(),
            expanded.classify(data.row(n)).unwrap()
        );
    }
    let compact = evaluate(&planted, &data).unwrap();
    let verbose = evaluate(&expanded, &data).unwrap();
    assert_eq!(compact.confusion, verbose.confusion);
    assert_eq!((compact.n_rule, compact.n_cond), (1, 2));
    assert_eq!((verbose.n_rule, verbose.n_cond), (10, 20));
    pass("C5 conciseness-expansion", start, Duration::from_secs(60));
}

// ---------------------------------------------------------------------------
// Criterion 6: randomized property suites (>= 1000 cases each)
// ---------------------------------------------------------------------------

fn random_schema(rng: &mut ChaCha8Rng) -> Schema {
    let n_features = rng.gen_range(2..=5);
    Schema::new(
        (0..n_features)
            .map(|j| {
                let vocab = rng.gen_range(2..=6);
                (
                    format!("f{j}"),
                    (0..vocab).map(|v| format!("v{v}")).collect::<Vec<_>>(),
                )
            })
            .collect::<Vec<_>>(),
    )
    .unwrap()
}

fn random_ruleset(schema: &Schema, max_rules: usize, rng: &mut ChaCha8Rng) -> RuleSet {
    let n = rng.gen_range(0..=max_rules);
    RuleSet::new((0..n).map(|_| {
        let mut feats: Vec<usize> = (0..schema.feature_count()).collect();
        feats.shuffle(rng);
        let n_conds = rng.gen_range(1..=feats.len().min(3));
        Rule::new(feats[..n_conds].iter().map(|&j| {
            let vocab = schema.vocab_size(j);
            let size = rng.gen_range(1..vocab);
            let mut values: Vec<usize> = (0..vocab).collect();
            values.shuffle(rng);
            Condition::new(j, values[..size].to_vec()).unwrap()
        }))
    }))
}

fn random_dataset(schema: &Schema, n_rows: usize, rng: &mut ChaCha8Rng) -> Dataset {
    let rows: Vec<Vec<usize>> = (0..n_rows)
        .map(|_| {
            (0..schema.feature_count())
                .map(|j| rng.gen_range(0..schema.vocab_size(j)))
                .collect()
        })
        .collect();
    let labels = (0..n_rows).map(|_| rng.gen::<f64>() < 0.4).collect();
    Dataset::new(schema.clone(), rows, labels).unwrap()
}

#[test]
fn c6a_action_coverage_monotonicity() {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(61);
    let mut per_kind: BTreeMap<&'static str, u64> = BTreeMap::new();
    let mut round = 0u64;
    while per_kind.len() < 5 || per_kind.values().any(|&c| c < 1000) {
        round += 1;
        assert!(
            round < 100_000,
            "generator failed to exercise all actions: {per_kind:?}"
        );
        let schema = random_schema(&mut rng);
        let data = random_dataset(&schema, 40, &mut rng);
        let hps = Hyperparams::<f64>::defaults(schema.feature_count());
        let cfg = SaConfig {
            seed: round,
            ..SaConfig::default()
        };
        // random non-trivial state, installed directly
        let rules = random_ruleset(&schema, 3, &mut rng);
        let index = ValueIndex::build(&data);
        let coverage = CoverageIndex::build(&index, &rules);
        let score = score_from_parts(
            &rules,
            data.schema(),
            coverage.aggregate(),
            index.labels(),
            &hps,
        )
        .unwrap();
        let before = coverage.aggregate().clone();
        let chain = Chain::with_state(&data, &index, &hps, &cfg, rules, coverage, score);
        let Some((example, polarity)) = chain.sample_misclassified(&mut rng) else {
            continue;
        };
        for kind in polarity.action_kinds() {
            for cand in chain.candidates_for(*kind, example) {
                let after = CoverageIndex::build(&index, &cand.rules);
                if kind.increases_coverage() {
                    assert!(
                        before.is_subset_of(after.aggregate()),
                        "{:?} shrank coverage",
                        cand.action
                    );
                } else {
                    assert!(
                        after.aggregate().is_subset_of(&before),
                        "{:?} grew coverage",
                        cand.action
                    );
                }
                *per_kind.entry(kind.label()).or_default() += 1;
            }
        }
    }
    println!("  coverage monotonicity cases: {per_kind:?}");
    pass("C6a coverage-monotonicity", start, Duration::from_secs(300));
}

#[test]
fn c6b_chain_rebuild_equality() {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(62);
    let mut accepted = 0u64;
    let mut round = 0u64;
    while accepted < 1000 {
        round += 1;
        assert!(round < 2000, "chains stopped accepting steps");
        let schema = random_schema(&mut rng);
        let data = random_dataset(&schema, 60, &mut rng);
        let hps = Hyperparams::<f64>::defaults(schema.feature_count());
        let cfg = SaConfig {
            n_iter: 120,
            seed: 7000 + round,
            restarts: 1,
            ..SaConfig::default()
        };
        let index = ValueIndex::build(&data);
        run_with_observer(&data, &hps, &cfg, |event| {
            if !event.record.accepted {
                return;
            }
            accepted += 1;
            let rebuilt = CoverageIndex::build(&index, event.rules);
            assert_eq!(&rebuilt, event.coverage, "coverage drifted from rebuild");
            let rescored = score_from_parts(
                event.rules,
                data.schema(),
                rebuilt.aggregate(),
                index.labels(),
                &hps,
            )
            .unwrap();
            assert_eq!(&rescored, event.score, "score drifted from rebuild");
        })
        .unwrap();
    }
    println!("  rebuild equality held over {accepted} accepted steps");
    pass("C6b chain-rebuild", start, Duration::from_secs(300));
}

#[test]
fn c6c_prior_exchangeability() {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(63);
    let mut checked = 0u64;
    while checked < 1000 {
        let schema = random_schema(&mut rng);
        let rules = random_ruleset(&schema, 4, &mut rng);
        let hp = PriorHyperparams::<f64>::defaults(schema.feature_count());
        let base = log_prior(&rules, &schema, &hp).unwrap();
        assert!(base.is_finite());

        // relabel values within every condition, preserving set sizes
        let relabeled = RuleSet::new(rules.rules().iter().map(|r| {
            Rule::new(r.conditions().iter().map(|c| {
                let vocab = schema.vocab_size(c.feature());
                let mut values: Vec<usize> = (0..vocab).collect();
                values.shuffle(&mut rng);
                Condition::new(c.feature(), values[..c.values().len()].to_vec()).unwrap()
            }))
        }));
        if relabeled.len() != rules.len() {
            continue; // relabeling collided two rules
        }
        let permuted = log_prior(&relabeled, &schema, &hp).unwrap();
        assert!(
            (base - permuted).abs() < 1e-9,
            "prior should depend only on structure: {base} vs {permuted}"
        );
        checked += 1;
    }
    println!("  prior exchangeability held over {checked} rule sets");
    pass("C6c prior-exchangeability", start, Duration::from_secs(300));
}

#[test]
fn c6d_model_roundtrip_identity() {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(64);
    for _ in 0..1000 {
        let schema = random_schema(&mut rng);
        let rules = random_ruleset(&schema, 4, &mut rng);
        let text = model_to_string(&rules, &schema).unwrap();
        let back = parse_model(&text, &schema).unwrap();
        assert_eq!(back, rules, "round-trip changed the model:\n{text}");
    }
    println!("  model round-trip held over 1000 rule sets");
    pass("C6d model-roundtrip", start, Duration::from_secs(300));
}

// ---------------------------------------------------------------------------
// Criterion 7: end-to-end determinism of the CLI
// ---------------------------------------------------------------------------

#[test]
fn c7_same_seed_gives_byte_identical_artifacts() {
    let start = Instant::now();
    let base = std::path::Path::new(env!("CARGO_TARGET_TMPDIR")).join("determinism");
    let _ = std::fs::remove_dir_all(&base);
    std::fs::create_dir_all(&base).unwrap();

    let config = r#"
seed = 33

[search]
n_iter = 800
restarts = 2

[split]
test_fraction = 0.2

[planted]
rows = 600
noise = 0.05

[[planted.features]]
name = "risk"
values = ["Minor", "Moderate", "Major", "Extreme"]

[[planted.features]]
name = "procedure"
values = ["33", "34", "35", "39", "58", "61", "63", "142"]

[[planted.features]]
name = "transfer"
values = ["none", "acute", "other"]

[[planted.rules]]
conditions = [
  { feature = "risk", values = ["Extreme"] },
  { feature = "procedure", values = ["33", "34", "35", "39"] },
]
"#;
    let config_path = base.join("config.toml");
    std::fs::write(&config_path, config).unwrap();
    let data_path = base.join("data.csv");

    let bin = env!("CARGO_BIN_EXE_mvrs");
    let gen = std::process::Command::new(bin)
        .args(["gen", "--config"])
        .arg(&config_path)
        .arg("--out")
        .arg(&data_path)
        .output()
        .unwrap();
    assert!(
        gen.status.success(),
        "gen failed: {}",
        String::from_utf8_lossy(&gen.stderr)
    );

    let train = |out_dir: &std::path::Path| {
        let output = std::process::Command::new(bin)
            .args(["train", "--data"])
            .arg(&data_path)
            .arg("--config")
            .arg(&config_path)
            .arg("--out")
            .arg(out_dir)
            .output()
            .unwrap();
        assert!(
            output.status.success(),
            "train failed: {}",
            String::from_utf8_lossy(&output.stderr)
        );
    };
    let run_a = base.join("run_a");
    let run_b = base.join("run_b");
    train(&run_a);
    train(&run_b);

    for artifact in [
        "model.toml",
        "codebook.toml",
        "report_train.toml",
        "report_test.toml",
        "trace.tsv",
    ] {
        let a = std::fs::read(run_a.join(artifact)).unwrap();
        let b = std::fs::read(run_b.join(artifact)).unwrap();
        assert_eq!(a, b, "{artifact} differs between identical runs");
    }
    pass("C7 determinism", start, Duration::from_secs(300));
}
