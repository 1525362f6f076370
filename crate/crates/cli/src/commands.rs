//! Subcommand implementations. Each command verifies its inputs against the
//! manifest, does its work, writes outputs with a chained provenance hash,
//! and records everything back into the manifest.

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

use serde::Serialize;

use equigoal_core::augment::augment_dataset_k;
use equigoal_core::collect::{collect_onpolicy, collect_random, CollectionKind};
use equigoal_core::env::EnvConfig;
use equigoal_core::evaluate::{evaluate, multigoal_run, MetricsSummary, TestConfig};
use equigoal_core::learn::{train_equivalence, train_gcp, Policy, TrainConfig, TrainingSet};

use crate::checkpoint::{self, CheckpointMeta};
use crate::config::ExperimentConfig;
use crate::dataset::{self, LoadedData};
use crate::failure::{CliResult, Failure};
use crate::manifest::{provenance, sha256_file, CollectionRecord, Manifest};
use crate::report;
use crate::svg;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TrainMethod {
    Gcp,
    Equiv,
}

fn params_json<T: Serialize>(v: &T) -> String {
    serde_json::to_string(v).expect("params serialize")
}

fn path_str(p: &Path) -> String {
    p.to_string_lossy().into_owned()
}

pub fn cmd_collect(
    root: &Path,
    config_path: &Path,
    kind: CollectionKind,
    out: &Path,
) -> CliResult<()> {
    let cfg = ExperimentConfig::load(config_path)?;
    let env = cfg.env_config()?;
    let c = &cfg.collect;
    let record = CollectionRecord {
        kind,
        episodes: c.episodes,
        horizon: c.horizon,
        noise_start: c.noise_start,
        noise_end: c.noise_end,
        seed: c.seed,
    };
    let data = match kind {
        CollectionKind::Onpolicy => collect_onpolicy(
            &env,
            c.episodes,
            c.horizon,
            (c.noise_start, c.noise_end),
            c.seed,
        ),
        CollectionKind::Random => collect_random(&env, c.episodes, c.horizon, c.seed),
    }
    .map_err(Failure::config)?;

    let config_hash = sha256_file(config_path)?;
    let prov = provenance(
        "collect",
        &format!("{}{}", params_json(&env), params_json(&record)),
        &[&config_hash],
    );
    dataset::save_dataset(out, &data, &prov)?;

    let mut manifest = Manifest::load_or_new(root, cfg.name())?;
    manifest.env_config = Some(env);
    manifest.collection = Some(record);
    manifest.record_output(out, "collect", &prov, &[path_str(config_path)])?;
    manifest.save(root)?;

    println!(
        "collected {} {} episodes ({} transitions) -> {}",
        data.trajectories.len(),
        env.kind.name(),
        data.total_transitions(),
        out.display()
    );
    Ok(())
}

pub fn cmd_augment(
    root: &Path,
    input: &Path,
    seed: u64,
    twins: usize,
    force: bool,
    out: &Path,
) -> CliResult<()> {
    let mut manifest = Manifest::load_or_new(root, "experiment")?;
    let in_hash = manifest.verify_input(input)?;
    let (loaded, _) = dataset::load(input)?;
    let base = match loaded {
        LoadedData::Plain(d) => d,
        LoadedData::Paired(_) => {
            return Err(Failure::data(format!(
                "{} is already a paired dataset",
                input.display()
            )))
        }
    };
    if base.collection_kind == CollectionKind::Random {
        if force {
            eprintln!(
                "warning: augmenting a random-action dataset; twins of noise are still noise"
            );
        } else {
            return Err(Failure::method(
                "refusing to augment a random-action dataset (pass --force for ablations)",
            ));
        }
    }
    let paired = augment_dataset_k(&base, seed, twins)?;

    #[derive(Serialize)]
    struct Params {
        seed: u64,
        twins: usize,
    }
    let prov = provenance("augment", &params_json(&Params { seed, twins }), &[&in_hash]);
    dataset::save_paired(out, &paired, &prov)?;

    manifest.augmentation_seed = Some(seed);
    manifest.record_output(out, "augment", &prov, &[path_str(input)])?;
    manifest.save(root)?;

    println!(
        "augmented {} episodes with {} twins each -> {} ({} transitions)",
        paired.base.trajectories.len(),
        twins,
        out.display(),
        paired.total_transitions()
    );
    Ok(())
}

pub fn cmd_train(
    root: &Path,
    method: TrainMethod,
    data_path: &Path,
    config_path: Option<&Path>,
    out: &Path,
) -> CliResult<()> {
    let mut manifest = Manifest::load_or_new(root, "experiment")?;
    let data_hash = manifest.verify_input(data_path)?;
    let (loaded, _) = dataset::load(data_path)?;
    let env = *loaded.env_config();
    env.validate().map_err(Failure::data)?;

    let mut input_hashes = vec![data_hash];
    let mut inputs = vec![path_str(data_path)];
    let cfg = match config_path {
        Some(p) => {
            input_hashes.push(sha256_file(p)?);
            inputs.push(path_str(p));
            ExperimentConfig::load(p)?.train_config()?
        }
        None => TrainConfig::default(),
    };

    let (policy, trace, label) = match (method, &loaded) {
        (TrainMethod::Gcp, LoadedData::Plain(d)) => {
            let label = match d.collection_kind {
                CollectionKind::Random => "random",
                CollectionKind::Onpolicy => "onpolicy",
            };
            let set = TrainingSet::from_dataset(d)?;
            let (model, trace) = train_gcp(&set, &cfg)?;
            (Policy::Gcp(model), trace, label)
        }
        (TrainMethod::Gcp, LoadedData::Paired(p)) => {
            let set = TrainingSet::from_paired_flat(p)?;
            let (model, trace) = train_gcp(&set, &cfg)?;
            (Policy::Gcp(model), trace, "augmented")
        }
        (TrainMethod::Equiv, LoadedData::Paired(p)) => {
            let (model, trace) = train_equivalence(p, &cfg)?;
            (Policy::Equiv(model), trace, "equivalence")
        }
        (TrainMethod::Equiv, LoadedData::Plain(_)) => {
            return Err(Failure::method(
                "equivalence training needs a paired dataset; run augment first",
            ))
        }
    };

    #[derive(Serialize)]
    struct Params<'a> {
        method: &'a str,
        label: &'a str,
        train_config: &'a TrainConfig,
    }
    let method_str = match method {
        TrainMethod::Gcp => "gcp",
        TrainMethod::Equiv => "equiv",
    };
    let prov = provenance(
        "train",
        &params_json(&Params {
            method: method_str,
            label,
            train_config: &cfg,
        }),
        &input_hashes.iter().map(String::as_str).collect::<Vec<_>>(),
    );

    let meta = CheckpointMeta {
        method: label.to_string(),
        env,
        train_config: cfg,
        provenance: prov.clone(),
    };
    checkpoint::save(out, &policy, &meta)?;
    let losses_path = out.with_extension("losses.csv");
    report::write_loss_csv(&losses_path, &trace, &prov)?;

    manifest.train_configs.insert(label.to_string(), cfg);
    manifest.record_output(out, "train", &prov, &inputs)?;
    manifest.record_output(&losses_path, "train", &prov, &inputs)?;
    manifest.save(root)?;

    let last = trace.epochs.last().expect("at least one epoch");
    println!(
        "trained {label} for {} epochs (final total {:.6}, l_enc {:.6}, l_pi {:.6}) -> {}",
        trace.epochs.len(),
        last.total,
        last.l_enc,
        last.l_pi,
        out.display()
    );
    Ok(())
}

struct LoadedModels {
    models: Vec<(Policy, CheckpointMeta)>,
    input_hashes: Vec<String>,
    env: EnvConfig,
    test_cfg: TestConfig,
}

/// Load checkpoints, requiring every model to share one environment, and
/// reconcile that environment with an optional experiment config.
fn load_models(
    manifest: &Manifest,
    models: &[PathBuf],
    config_path: Option<&Path>,
) -> CliResult<LoadedModels> {
    let mut out = Vec::new();
    let mut hashes = Vec::new();
    for path in models {
        hashes.push(manifest.verify_input(path)?);
        out.push(checkpoint::load(path)?);
    }
    let env = out[0].1.env;
    for (path, (_, meta)) in models.iter().zip(&out) {
        if meta.env != env {
            return Err(Failure::env(format!(
                "{} was trained on {}, other checkpoints on {}",
                path.display(),
                meta.env.kind.name(),
                env.kind.name()
            )));
        }
    }
    let tc = match config_path {
        Some(p) => {
            let cfg = ExperimentConfig::load(p)?;
            if !cfg.env.is_unset() && cfg.env_config()? != env {
                return Err(Failure::env(format!(
                    "{} describes a different environment than the checkpoints",
                    p.display()
                )));
            }
            cfg.test_config()?
        }
        None => TestConfig::default(),
    };
    Ok(LoadedModels {
        models: out,
        input_hashes: hashes,
        env,
        test_cfg: tc,
    })
}

/// Unique per-model output labels: checkpoint method names, suffixed on repeat.
fn unique_labels(metas: &[(Policy, CheckpointMeta)]) -> Vec<String> {
    let mut counts: BTreeMap<&str, usize> = BTreeMap::new();
    let mut labels = Vec::new();
    for (_, meta) in metas {
        let n = counts.entry(meta.method.as_str()).or_insert(0);
        *n += 1;
        if *n == 1 {
            labels.push(meta.method.clone());
        } else {
            labels.push(format!("{}-{}", meta.method, n));
        }
    }
    labels
}

pub fn cmd_eval(
    root: &Path,
    models: &[PathBuf],
    config_path: Option<&Path>,
    out_dir: &Path,
) -> CliResult<()> {
    let mut manifest = Manifest::load_or_new(root, "experiment")?;
    let LoadedModels {
        models: loaded,
        input_hashes: mut hashes,
        env,
        test_cfg: tc,
    } = load_models(&manifest, models, config_path)?;
    let labels = unique_labels(&loaded);
    if let Some(p) = config_path {
        hashes.push(sha256_file(p)?);
    }

    let mut summaries: Vec<MetricsSummary> = Vec::new();
    for (policy, _) in &loaded {
        summaries.push(evaluate(&env, policy, &tc)?);
    }

    #[derive(Serialize)]
    struct Params<'a> {
        test_config: &'a TestConfig,
        labels: &'a [String],
    }
    let prov = provenance(
        "eval",
        &params_json(&Params {
            test_config: &tc,
            labels: &labels,
        }),
        &hashes.iter().map(String::as_str).collect::<Vec<_>>(),
    );

    fs::create_dir_all(out_dir)
        .map_err(|e| Failure::config(format!("cannot create {}: {e}", out_dir.display())))?;
    let mut inputs: Vec<String> = models.iter().map(|p| path_str(p)).collect();
    if let Some(p) = config_path {
        inputs.push(path_str(p));
    }

    let mut written = Vec::new();
    for (label, summary) in labels.iter().zip(&summaries) {
        let path = out_dir.join(format!("{label}_episodes.csv"));
        report::write_episodes_csv(&path, summary, &prov)?;
        written.push(path);
    }
    let summary_rows: Vec<(String, f64, f64)> = labels
        .iter()
        .zip(&summaries)
        .map(|(l, s)| (l.clone(), s.pooled_mean, s.pooled_std))
        .collect();
    let summary_path = out_dir.join("summary.csv");
    report::write_summary_csv(&summary_path, &summary_rows, &prov)?;
    written.push(summary_path);

    let violin_pairs: Vec<(String, &MetricsSummary)> = labels
        .iter()
        .cloned()
        .zip(summaries.iter())
        .collect();
    let violin_path = out_dir.join("violin.csv");
    report::write_violin_csv(&violin_path, &violin_pairs, &prov)?;
    written.push(violin_path);

    let samples: Vec<(String, Vec<f64>)> = labels
        .iter()
        .cloned()
        .zip(summaries.iter().map(|s| {
            s.episode_records
                .iter()
                .map(|r| r.closest_distance)
                .collect::<Vec<f64>>()
        }))
        .collect();
    let svg_path = out_dir.join("distances.svg");
    let svg_text = svg::violin_svg(&samples, &prov);
    fs::write(&svg_path, svg_text)
        .map_err(|e| Failure::config(format!("cannot write {}: {e}", svg_path.display())))?;
    written.push(svg_path);

    manifest.test_config = Some(tc);
    for path in &written {
        manifest.record_output(path, "eval", &prov, &inputs)?;
    }
    manifest.save(root)?;

    println!("{:<14} {:>8} {:>8}", "method", "mean", "std");
    for (label, mean, std) in &summary_rows {
        println!("{label:<14} {mean:>8.3} {std:>8.3}");
    }
    Ok(())
}

pub fn cmd_multigoal(
    root: &Path,
    model: &Path,
    goals: usize,
    seed: u64,
    config_path: Option<&Path>,
    out_dir: &Path,
) -> CliResult<()> {
    let mut manifest = Manifest::load_or_new(root, "experiment")?;
    let LoadedModels {
        models: loaded,
        input_hashes: mut hashes,
        env,
        test_cfg: tc,
    } = load_models(&manifest, std::slice::from_ref(&model.to_path_buf()), config_path)?;
    if let Some(p) = config_path {
        hashes.push(sha256_file(p)?);
    }
    let (policy, meta) = &loaded[0];
    let trace = multigoal_run(&env, policy, goals, &tc, seed)?;

    #[derive(Serialize)]
    struct Params<'a> {
        test_config: &'a TestConfig,
        goals: usize,
        seed: u64,
    }
    let prov = provenance(
        "multigoal",
        &params_json(&Params {
            test_config: &tc,
            goals,
            seed,
        }),
        &hashes.iter().map(String::as_str).collect::<Vec<_>>(),
    );

    fs::create_dir_all(out_dir)
        .map_err(|e| Failure::config(format!("cannot create {}: {e}", out_dir.display())))?;
    let trace_path = out_dir.join("trace.csv");
    report::write_multigoal_csv(&trace_path, &trace, &prov)?;
    let svg_path = out_dir.join("path.svg");
    fs::write(&svg_path, svg::multigoal_svg(&trace, &prov))
        .map_err(|e| Failure::config(format!("cannot write {}: {e}", svg_path.display())))?;

    let mut inputs = vec![path_str(model)];
    if let Some(p) = config_path {
        inputs.push(path_str(p));
    }
    manifest.record_output(&trace_path, "multigoal", &prov, &inputs)?;
    manifest.record_output(&svg_path, "multigoal", &prov, &inputs)?;
    manifest.save(root)?;

    println!(
        "{}: achieved {}/{} goals in {} steps, heading alignment {:.3}",
        meta.method,
        trace.goals_achieved,
        goals,
        trace.steps.len(),
        trace.heading_alignment
    );
    Ok(())
}
