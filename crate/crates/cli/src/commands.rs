//! Implementations of the six subcommands.

use std::fmt::Write as _;
use std::path::Path;
use std::time::Instant;

use mvrs::config::RunConfig;
use mvrs::eval::{evaluate, exhaustive_map, generate_planted, split, ModelReport, SearchBounds};
use mvrs::inference::{run, write_trace};
use mvrs::ingest::{format_delimited, load_csv, Codebook, Encoder, Ingested};
use mvrs::model_io::{load_model, model_to_string, render_if_then, resolve_rules, save_model};
use mvrs::{Error, Result, RuleSet, Schema};

use crate::manifest::RunManifest;
use crate::{ApplyArgs, ExportArgs, GenArgs, OracleArgs, TrainArgs};

fn load_config(path: Option<&Path>) -> Result<RunConfig> {
    match path {
        Some(p) => RunConfig::load(p),
        None => Ok(RunConfig::default()),
    }
}

fn write_out(path: Option<&Path>, text: &str) -> Result<()> {
    match path {
        Some(p) => {
            std::fs::write(p, text)?;
            Ok(())
        }
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn report_text(report: &ModelReport) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "{report}");
    let _ = writeln!(
        out,
        "precision {:.3}  recall {:.3}  n_item {}",
        report.precision, report.recall, report.n_item
    );
    let c = &report.confusion;
    let _ = writeln!(
        out,
        "tp {}  fp {}  tn {}  fn {}",
        c.true_pos, c.false_pos, c.true_neg, c.false_neg
    );
    out
}

fn save_report(report: &ModelReport, path: &Path) -> Result<()> {
    let text = toml::to_string_pretty(report)
        .map_err(|e| Error::Internal(format!("report serialization: {e}")))?;
    std::fs::write(path, text)?;
    Ok(())
}

fn ingest_with_warnings(data: &Path, config: &RunConfig) -> Result<Ingested> {
    let ingested = load_csv(data, &config.ingestion())?;
    for w in &ingested.warnings {
        eprintln!("warning: {w}");
    }
    Ok(ingested)
}

pub fn train(args: &TrainArgs) -> Result<()> {
    let start = Instant::now();
    let mut config = load_config(args.config.as_deref())?;
    if let Some(seed) = args.seed {
        config.seed = Some(seed);
    }
    if let Some(iters) = args.iters {
        config.search.n_iter = Some(iters);
    }
    if let Some(restarts) = args.restarts {
        config.search.restarts = Some(restarts);
    }
    if let Some(t0) = args.t0 {
        config.search.t0 = Some(t0);
    }
    if let Some(f) = args.test_fraction {
        config.split.test_fraction = Some(f);
    }

    let ingested = ingest_with_warnings(&args.data, &config)?;
    let n_features = ingested.dataset.n_features();
    let hps = config.hyperparams(n_features)?;
    for w in hps.validate()? {
        eprintln!("warning: {w}");
    }
    let sa = config.sa_config();
    sa.validate()?;

    let (train_set, test_set) = match config.split.test_fraction {
        Some(fraction) => {
            let parts = split(&ingested.dataset, fraction, sa.seed)?;
            if !parts.stratified {
                eprintln!("warning: a class was too small to stratify; split is unstratified");
            }
            (parts.train, Some(parts.test))
        }
        None => (ingested.dataset.clone(), None),
    };

    let outcome = run(&train_set, &hps, &sa)?;

    std::fs::create_dir_all(&args.out)?;
    let mut manifest = RunManifest::new("train", sa.seed, config);
    manifest.add_input("data", &args.data)?;

    let model_path = args.out.join("model.toml");
    save_model(&outcome.rules, ingested.codebook.schema(), &model_path)?;
    manifest.add_artifact("model", &model_path);

    let codebook_path = args.out.join("codebook.toml");
    ingested.codebook.save(&codebook_path)?;
    manifest.add_artifact("codebook", &codebook_path);

    let train_report = evaluate(&outcome.rules, &train_set)?;
    let train_report_path = args.out.join("report_train.toml");
    save_report(&train_report, &train_report_path)?;
    manifest.add_artifact("report_train", &train_report_path);

    let test_report = match &test_set {
        Some(test) => {
            let report = evaluate(&outcome.rules, test)?;
            let path = args.out.join("report_test.toml");
            save_report(&report, &path)?;
            manifest.add_artifact("report_test", &path);
            Some(report)
        }
        None => None,
    };

    let trace_path = args.out.join("trace.tsv");
    let mut trace_file = std::fs::File::create(&trace_path)?;
    write_trace(&mut trace_file, &outcome.trace)?;
    manifest.add_artifact("trace", &trace_path);

    manifest.duration_seconds = start.elapsed().as_secs_f64();
    manifest.save(&args.out.join("manifest.toml"))?;

    println!(
        "model: {} rule(s), log-posterior {:.4}",
        outcome.rules.len(),
        outcome.score.total()
    );
    print!(
        "{}",
        render_if_then(&outcome.rules, ingested.codebook.schema())?
    );
    println!("\ntrain:\n{}", report_text(&train_report));
    if let Some(report) = test_report {
        println!("test:\n{}", report_text(&report));
    }
    Ok(())
}

fn load_model_pair(model: &Path, codebook: &Path) -> Result<(Codebook, RuleSet)> {
    let codebook = Codebook::load(codebook)?;
    let rules = load_model(model, codebook.schema())?;
    Ok((codebook, rules))
}

pub fn predict(args: &ApplyArgs) -> Result<()> {
    let (codebook, rules) = load_model_pair(&args.model, &args.codebook)?;
    let text = std::fs::read_to_string(&args.data)?;
    let table = codebook.encode_delimited(&text, false, false)?;
    let mut out = String::new();
    for row in &table.rows {
        match rules.first_covering(row)? {
            Some(i) => {
                let _ = writeln!(out, "1, rule={}", i + 1);
            }
            None => {
                let _ = writeln!(out, "0, rule=-");
            }
        }
    }
    write_out(args.out.as_deref(), &out)
}

pub fn evaluate_cmd(args: &ApplyArgs) -> Result<()> {
    let (codebook, rules) = load_model_pair(&args.model, &args.codebook)?;
    let text = std::fs::read_to_string(&args.data)?;
    let dataset = codebook.encode_labeled_dataset(&text)?;
    let report = evaluate(&rules, &dataset)?;
    match args.out.as_deref() {
        Some(path) => save_report(&report, path)?,
        None => {}
    }
    print!("{}", report_text(&report));
    Ok(())
}

pub fn export(args: &ExportArgs) -> Result<()> {
    let (codebook, rules) = load_model_pair(&args.model, &args.codebook)?;
    write_out(
        args.out.as_deref(),
        &render_if_then(&rules, codebook.schema())?,
    )
}

pub fn gen(args: &GenArgs) -> Result<()> {
    let config = RunConfig::load(&args.config)?;
    let planted = config
        .planted
        .as_ref()
        .ok_or_else(|| Error::Config("gen needs a [planted] section in the config".into()))?;
    let schema = Schema::new(
        planted
            .features
            .iter()
            .map(|f| (f.name.clone(), f.values.clone()))
            .collect(),
    )?;
    let rules = resolve_rules(&planted.rules, &schema)?;
    let seed = args.seed.or(config.seed).unwrap_or(0);
    let dataset = generate_planted(planted.rows, &schema, &rules, planted.noise, seed)?;

    let ingestion = config.ingestion();
    let mut rows = Vec::with_capacity(dataset.n_rows() + 1);
    let mut header: Vec<String> = schema
        .features()
        .iter()
        .map(|f| f.name().to_string())
        .collect();
    header.push(ingestion.label_column.clone());
    rows.push(header);
    for n in 0..dataset.n_rows() {
        let mut row: Vec<String> = dataset
            .row(n)
            .iter()
            .enumerate()
            .map(|(j, &v)| schema.feature(j).label(v).to_string())
            .collect();
        row.push(if dataset.label(n) {
            "1".into()
        } else {
            "0".into()
        });
        rows.push(row);
    }
    std::fs::write(&args.out, format_delimited(&rows, ingestion.delimiter))?;

    if let Some(path) = &args.model_out {
        std::fs::write(path, model_to_string(&rules, &schema)?)?;
    }
    if let Some(path) = &args.codebook_out {
        let encoders = vec![Encoder::Categorical; schema.feature_count()];
        let codebook = Codebook::new(
            schema.clone(),
            encoders,
            ingestion.missing_policy,
            ingestion.label_column.clone(),
            "1".to_string(),
            ingestion.delimiter,
        )?;
        codebook.save(path)?;
    }
    println!(
        "wrote {} rows ({} positive) to {}",
        dataset.n_rows(),
        dataset.positives(),
        args.out.display()
    );
    Ok(())
}

pub fn oracle(args: &OracleArgs) -> Result<()> {
    let start = Instant::now();
    let config = load_config(args.config.as_deref())?;
    let ingested = ingest_with_warnings(&args.data, &config)?;
    let hps = config.hyperparams(ingested.dataset.n_features())?;
    for w in hps.validate()? {
        eprintln!("warning: {w}");
    }
    let sa = config.sa_config();
    let bounds = SearchBounds::new(sa.max_rules, sa.max_rule_len);
    let (rules, score) = exhaustive_map(&ingested.dataset, &hps, &bounds)?;

    std::fs::create_dir_all(&args.out)?;
    let mut manifest = RunManifest::new("oracle", sa.seed, config);
    manifest.add_input("data", &args.data)?;
    let model_path = args.out.join("model.toml");
    save_model(&rules, ingested.codebook.schema(), &model_path)?;
    manifest.add_artifact("model", &model_path);
    let codebook_path = args.out.join("codebook.toml");
    ingested.codebook.save(&codebook_path)?;
    manifest.add_artifact("codebook", &codebook_path);
    let report = evaluate(&rules, &ingested.dataset)?;
    let report_path = args.out.join("report_train.toml");
    save_report(&report, &report_path)?;
    manifest.add_artifact("report_train", &report_path);
    manifest.duration_seconds = start.elapsed().as_secs_f64();
    manifest.save(&args.out.join("manifest.toml"))?;

    println!(
        "exact optimum: {} rule(s), log-posterior {:.4}",
        rules.len(),
        score.total()
    );
    print!("{}", render_if_then(&rules, ingested.codebook.schema())?);
    println!("\n{}", report_text(&report));
    Ok(())
}
