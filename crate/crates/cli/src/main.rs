//! `equigoal` — collect, augment, train, and evaluate goal-conditioned
//! policies on rotation-equivariant planar environments.

mod checkpoint;
mod commands;
mod config;
mod dataset;
mod failure;
mod manifest;
mod report;
mod svg;

use std::path::PathBuf;
use std::process;

use clap::{Parser, Subcommand, ValueEnum};

use equigoal_core::collect::CollectionKind;

use crate::commands::TrainMethod;

#[derive(Parser)]
#[command(name = "equigoal", version, about)]
struct Cli {
    /// Output root holding the run manifest
    #[arg(long, global = true, env = "EQUIGOAL_OUT", default_value = ".")]
    root: PathBuf,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum KindArg {
    Random,
    Onpolicy,
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum MethodArg {
    Gcp,
    Equiv,
}

#[derive(Subcommand)]
enum Cmd {
    /// Roll out a behavior policy and record a transition dataset
    Collect {
        /// Experiment config (TOML)
        config: PathBuf,
        /// Behavior policy used for the rollouts
        #[arg(long, value_enum)]
        kind: KindArg,
        /// Dataset file to write
        #[arg(long)]
        out: PathBuf,
    },
    /// Pair every episode with rotated twins replaying the same actions
    Augment {
        /// Base dataset (from collect)
        #[arg(long = "in")]
        input: PathBuf,
        /// Seed for the twin rotation angles
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Twins generated per episode
        #[arg(long, default_value_t = 1)]
        twins: usize,
        /// Augment even a random-action dataset
        #[arg(long)]
        force: bool,
        /// Paired dataset file to write
        #[arg(long)]
        out: PathBuf,
    },
    /// Fit a policy to a dataset and write a checkpoint
    Train {
        /// gcp: direct regression; equiv: shared encoder over twin pairs
        #[arg(long, value_enum)]
        method: MethodArg,
        /// Training dataset (plain or paired)
        #[arg(long)]
        data: PathBuf,
        /// Experiment config (TOML); defaults apply when omitted
        #[arg(long)]
        config: Option<PathBuf>,
        /// Checkpoint file to write (losses CSV lands beside it)
        #[arg(long)]
        out: PathBuf,
    },
    /// Run checkpointed policies on shared goal-reaching episodes
    Eval {
        /// Checkpoint(s) to compare; repeatable
        #[arg(long = "model", required = true)]
        models: Vec<PathBuf>,
        /// Experiment config (TOML) supplying the test protocol
        #[arg(long = "test-config")]
        test_config: Option<PathBuf>,
        /// Directory for per-episode CSVs, summary, and violin plot
        #[arg(long)]
        out: PathBuf,
    },
    /// Chase a sequence of goals in one episode and plot the path
    Multigoal {
        /// Checkpoint to run
        #[arg(long)]
        model: PathBuf,
        /// Number of goals in the sequence
        #[arg(long, default_value_t = 4)]
        goals: usize,
        /// Seed for the goal sequence
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Experiment config (TOML) supplying the test protocol
        #[arg(long = "test-config")]
        test_config: Option<PathBuf>,
        /// Directory for the trace CSV and path SVG
        #[arg(long)]
        out: PathBuf,
    },
}

fn main() {
    let cli = Cli::parse();
    let root = cli.root;
    let result = match cli.cmd {
        Cmd::Collect { config, kind, out } => {
            let kind = match kind {
                KindArg::Random => CollectionKind::Random,
                KindArg::Onpolicy => CollectionKind::Onpolicy,
            };
            commands::cmd_collect(&root, &config, kind, &out)
        }
        Cmd::Augment {
            input,
            seed,
            twins,
            force,
            out,
        } => commands::cmd_augment(&root, &input, seed, twins, force, &out),
        Cmd::Train {
            method,
            data,
            config,
            out,
        } => {
            let method = match method {
                MethodArg::Gcp => TrainMethod::Gcp,
                MethodArg::Equiv => TrainMethod::Equiv,
            };
            commands::cmd_train(&root, method, &data, config.as_deref(), &out)
        }
        Cmd::Eval {
            models,
            test_config,
            out,
        } => commands::cmd_eval(&root, &models, test_config.as_deref(), &out),
        Cmd::Multigoal {
            model,
            goals,
            seed,
            test_config,
            out,
        } => commands::cmd_multigoal(&root, &model, goals, seed, test_config.as_deref(), &out),
    };
    if let Err(e) = result {
        eprintln!("equigoal: {e}");
        process::exit(e.code());
    }
}
