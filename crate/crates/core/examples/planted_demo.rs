//! End-to-end library walkthrough: plant a ground-truth rule set, sample
//! noisy data from it, learn a model by annealing, and compare.
//!
//! Run with `cargo run --release --example planted_demo`.

use mvrs::eval::{evaluate, generate_planted, split};
use mvrs::inference::{run, SaConfig};
use mvrs::model_io::render_if_then;
use mvrs::posterior::Hyperparams;
use mvrs::rules::{Condition, Rule, RuleSet};
use mvrs::Schema;

fn main() -> mvrs::Result<()> {
    // Ten features; the last two are high-cardinality code columns.
    let mut features: Vec<(String, Vec<String>)> = (0..8)
        .map(|j| (format!("f{j}"), (0..4).map(|v| format!("v{v}")).collect()))
        .collect();
    features.extend((8..10).map(|j| {
        (
            format!("f{j}"),
            (0..12).map(|v| format!("v{v}")).collect::<Vec<_>>(),
        )
    }));
    let schema = Schema::new(features)?;

    // Two planted rules with multi-value conditions.
    let truth = RuleSet::new([
        Rule::new([
            Condition::new(8, [0, 1, 2, 3, 4, 5])?,
            Condition::new(0, [0, 1, 2])?,
        ]),
        Rule::new([
            Condition::new(9, [0, 1, 2, 3])?,
            Condition::new(1, [0, 1, 2])?,
        ]),
    ]);

    let data = generate_planted(2000, &schema, &truth, 0.05, 42)?;
    let parts = split(&data, 0.2, 42)?;

    let hps = Hyperparams::<f64>::defaults(schema.feature_count());
    let cfg = SaConfig {
        n_iter: 4000,
        seed: 42,
        ..SaConfig::default()
    };
    let outcome = run(&parts.train, &hps, &cfg)?;

    println!(
        "learned model (log-posterior {:.3}):",
        outcome.score.total()
    );
    print!("{}", render_if_then(&outcome.rules, &schema)?);
    println!("\nheld-out performance:");
    println!("{}", evaluate(&outcome.rules, &parts.test)?);
    println!("\nplanted truth for comparison:");
    println!("{}", evaluate(&truth, &parts.test)?);
    Ok(())
}
