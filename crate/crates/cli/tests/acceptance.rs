//! Acceptance gate: one test per acceptance criterion, each at its stated
//! tolerance. Criteria that need trained models share one default-scale
//! pipeline build (both environments, all four methods), constructed once.

use std::collections::BTreeMap;
use std::f64::consts::{PI, TAU};
use std::fs;
use std::path::{Path, PathBuf};
use std::process::Command;
use std::sync::LazyLock;
use std::time::{Duration, Instant};

use rand::Rng;

use equigoal_core::augment::{augment_dataset, verify_pairing};
use equigoal_core::collect::{collect_onpolicy, collect_random, Dataset};
use equigoal_core::env::{
    env_step, rotate_state, Action, EnvConfig, EnvKind, EnvState, Motion,
};
use equigoal_core::evaluate::{
    bearing_split, evaluate, multigoal_run, MetricsSummary, TestConfig,
};
use equigoal_core::learn::{
    equivalence_loss, equivalence_loss_grads, train_equivalence, train_gcp, EquivModel, GcpModel,
    PairSet, Policy, TrainConfig, TrainTrace, TrainingSet,
};
use equigoal_core::nnmath::{grad_check, GradBundle};
use equigoal_core::rng::{stream_rng, Domain};
use equigoal_core::vec2::Vec2;

const COLLECT_SEED: u64 = 0;
const AUGMENT_SEED: u64 = 0;

struct EnvArts {
    cfg: EnvConfig,
    onpolicy: Dataset,
    gcp_onpolicy: GcpModel,
    equiv: EquivModel,
    equiv_trace: TrainTrace,
    summaries: BTreeMap<&'static str, MetricsSummary>,
    collect_wall: Duration,
    augment_wall: Duration,
    train_walls: Vec<(&'static str, Duration)>,
    eval_wall: Duration,
}

fn build_env(kind: EnvKind) -> EnvArts {
    let cfg = EnvConfig::new(kind);

    let t = Instant::now();
    let onpolicy = collect_onpolicy(&cfg, 500, 200, (0.5, 0.05), COLLECT_SEED).unwrap();
    let random = collect_random(&cfg, 500, 200, COLLECT_SEED).unwrap();
    let collect_wall = t.elapsed();

    let t = Instant::now();
    let paired = augment_dataset(&onpolicy, AUGMENT_SEED).unwrap();
    let augment_wall = t.elapsed();

    let tc = TrainConfig::default();
    let mut train_walls = Vec::new();

    let t = Instant::now();
    let (gcp_random, _) = train_gcp(&TrainingSet::from_dataset(&random).unwrap(), &tc).unwrap();
    train_walls.push(("random", t.elapsed()));

    let t = Instant::now();
    let (gcp_onpolicy, _) =
        train_gcp(&TrainingSet::from_dataset(&onpolicy).unwrap(), &tc).unwrap();
    train_walls.push(("onpolicy", t.elapsed()));

    let t = Instant::now();
    let (gcp_augmented, _) =
        train_gcp(&TrainingSet::from_paired_flat(&paired).unwrap(), &tc).unwrap();
    train_walls.push(("augmented", t.elapsed()));

    let t = Instant::now();
    let (equiv, equiv_trace) = train_equivalence(&paired, &tc).unwrap();
    train_walls.push(("equivalence", t.elapsed()));

    let test_cfg = TestConfig::default();
    let t = Instant::now();
    let mut summaries = BTreeMap::new();
    summaries.insert(
        "random",
        evaluate(&cfg, &Policy::Gcp(gcp_random), &test_cfg).unwrap(),
    );
    summaries.insert(
        "onpolicy",
        evaluate(&cfg, &Policy::Gcp(gcp_onpolicy.clone()), &test_cfg).unwrap(),
    );
    summaries.insert(
        "augmented",
        evaluate(&cfg, &Policy::Gcp(gcp_augmented), &test_cfg).unwrap(),
    );
    summaries.insert(
        "equivalence",
        evaluate(&cfg, &Policy::Equiv(equiv.clone()), &test_cfg).unwrap(),
    );
    // Qualitative trace runs are part of the stock pipeline output.
    for seed in 0..4 {
        multigoal_run(&cfg, &Policy::Equiv(equiv.clone()), 4, &test_cfg, seed).unwrap();
        multigoal_run(&cfg, &Policy::Gcp(gcp_onpolicy.clone()), 4, &test_cfg, seed).unwrap();
    }
    let eval_wall = t.elapsed();

    EnvArts {
        cfg,
        onpolicy,
        gcp_onpolicy,
        equiv,
        equiv_trace,
        summaries,
        collect_wall,
        augment_wall,
        train_walls,
        eval_wall,
    }
}

static PIPELINE: LazyLock<Vec<EnvArts>> =
    LazyLock::new(|| vec![build_env(EnvKind::Unicycle), build_env(EnvKind::Thrustship)]);

fn wrapped_diff(a: f64, b: f64) -> f64 {
    let d = (a - b).rem_euclid(TAU);
    d.min(TAU - d)
}

#[test]
fn c01_equivariance_exactness() {
    for kind in [EnvKind::Unicycle, EnvKind::Thrustship] {
        let cfg = EnvConfig::new(kind);
        let mut rng = stream_rng(4242, kind as u64, Domain::Eval);
        let t0 = Instant::now();
        let mut worst = 0.0f64;
        for _ in 0..10_000 {
            let motion = match kind {
                EnvKind::Unicycle => Motion::Speed(rng.random_range(-1.0..1.0)),
                EnvKind::Thrustship => Motion::Velocity(Vec2::new(
                    rng.random_range(-0.7..0.7),
                    rng.random_range(-0.7..0.7),
                )),
            };
            let state = EnvState {
                position: Vec2::new(rng.random_range(-5.0..5.0), rng.random_range(-5.0..5.0)),
                heading: rng.random_range(-PI..PI),
                motion,
                step_index: 0,
            };
            let action = Action {
                thrust: rng.random_range(-1.0..1.0),
                steer: rng.random_range(-1.0..1.0),
            };
            let theta = rng.random_range(0.0..TAU);
            let pivot = state.position;

            let (next_rot, goal_rot) = env_step(&cfg, &rotate_state(&state, theta, pivot), action);
            let (next, goal) = env_step(&cfg, &state, action);
            let expect_state = rotate_state(&next, theta, pivot);
            let expect_goal = goal.rotated_about(theta, pivot);

            worst = worst
                .max((next_rot.position.x - expect_state.position.x).abs())
                .max((next_rot.position.y - expect_state.position.y).abs())
                .max(wrapped_diff(next_rot.heading, expect_state.heading))
                .max((goal_rot.x - expect_goal.x).abs())
                .max((goal_rot.y - expect_goal.y).abs());
            worst = match (next_rot.motion, expect_state.motion) {
                (Motion::Speed(a), Motion::Speed(b)) => worst.max((a - b).abs()),
                (Motion::Velocity(a), Motion::Velocity(b)) => {
                    worst.max((a.x - b.x).abs()).max((a.y - b.y).abs())
                }
                _ => panic!("motion kind changed under rotation"),
            };
        }
        let wall = t0.elapsed();
        assert!(
            worst < 1e-9,
            "criterion 1 ({kind:?}): FAIL — max deviation {worst:.3e} over 10k triples"
        );
        assert!(
            wall < Duration::from_secs(5),
            "criterion 1 ({kind:?}): FAIL — took {wall:?} (budget 5 s)"
        );
        println!("criterion 1 ({kind:?}): PASS — max deviation {worst:.3e}, 10k triples in {wall:?}");
    }
}

#[test]
fn c02_augmentation_validity() {
    for arts in PIPELINE.iter() {
        let kind = arts.cfg.kind;
        let t0 = Instant::now();
        let fresh = augment_dataset(&arts.onpolicy, AUGMENT_SEED).unwrap();
        let wall = t0.elapsed();
        verify_pairing(&fresh, 1e-9)
            .unwrap_or_else(|e| panic!("criterion 2 ({kind:?}): FAIL — {e}"));
        let base_n = arts.onpolicy.total_transitions();
        let total = fresh.total_transitions();
        assert_eq!(
            total,
            2 * base_n,
            "criterion 2 ({kind:?}): FAIL — augmented size {total} != 2 x {base_n}"
        );
        assert!(
            wall < Duration::from_secs(10),
            "criterion 2 ({kind:?}): FAIL — took {wall:?} (budget 10 s)"
        );
        println!(
            "criterion 2 ({kind:?}): PASS — {total} transitions = 2 x {base_n}, actions byte-identical, rotations within 1e-9, in {wall:?}"
        );
    }
}

/// Average per-pair gradient bundles entrywise (the batch loss is the mean of
/// per-pair losses).
fn mean_bundle(bundles: &[(GradBundle, GradBundle)]) -> (GradBundle, GradBundle) {
    let n = bundles.len() as f64;
    let (mut enc, mut pol) = bundles[0].clone();
    for (e, p) in &bundles[1..] {
        for (acc, g) in enc.weight_grads.iter_mut().zip(&e.weight_grads) {
            for (a, b) in acc.iter_mut().zip(g) {
                *a += b;
            }
        }
        for (acc, g) in enc.bias_grads.iter_mut().zip(&e.bias_grads) {
            for (a, b) in acc.iter_mut().zip(g) {
                *a += b;
            }
        }
        for (acc, g) in pol.weight_grads.iter_mut().zip(&p.weight_grads) {
            for (a, b) in acc.iter_mut().zip(g) {
                *a += b;
            }
        }
        for (acc, g) in pol.bias_grads.iter_mut().zip(&p.bias_grads) {
            for (a, b) in acc.iter_mut().zip(g) {
                *a += b;
            }
        }
    }
    for v in enc.weight_grads.iter_mut().chain(enc.bias_grads.iter_mut()) {
        for a in v.iter_mut() {
            *a /= n;
        }
    }
    for v in pol.weight_grads.iter_mut().chain(pol.bias_grads.iter_mut()) {
        for a in v.iter_mut() {
            *a /= n;
        }
    }
    (enc, pol)
}

#[test]
fn c03_gradient_correctness() {
    let lambda = 0.25;
    let obs_dim = 3; // unicycle-sized inputs; the loss is dimension-agnostic
    let mut worst = 0.0f64;
    for point in 0..20u64 {
        let cfg = TrainConfig {
            hidden_dims: (6, 6),
            embed_dim: 3,
            seed: 1000 + point,
            ..TrainConfig::default()
        };
        let model = EquivModel::init(obs_dim, &cfg).unwrap();
        let mut rng = stream_rng(777, point, Domain::Shuffle);
        let dim = obs_dim + 2;
        let mut pairs = Vec::new();
        for _ in 0..4 {
            let x: Vec<f64> = (0..dim).map(|_| rng.random_range(-1.0..1.0)).collect();
            let xt: Vec<f64> = (0..dim).map(|_| rng.random_range(-1.0..1.0)).collect();
            let a = Action {
                thrust: rng.random_range(-1.0..1.0),
                steer: rng.random_range(-1.0..1.0),
            };
            pairs.push((x, xt, a));
        }

        // Per-pair loss (the single-pair objective).
        let (x, xt, a) = &pairs[0];
        let (enc_g, pol_g, _) = equivalence_loss_grads(&model, x, xt, *a, lambda).unwrap();
        let e = grad_check(
            &model.encoder,
            &enc_g,
            |enc| {
                let m = EquivModel::new(enc.clone(), model.policy.clone()).unwrap();
                equivalence_loss(&m, x, xt, *a, lambda).unwrap().0
            },
            1e-6,
        )
        .unwrap();
        worst = worst.max(e);
        let e = grad_check(
            &model.policy,
            &pol_g,
            |pol| {
                let m = EquivModel::new(model.encoder.clone(), pol.clone()).unwrap();
                equivalence_loss(&m, x, xt, *a, lambda).unwrap().0
            },
            1e-6,
        )
        .unwrap();
        worst = worst.max(e);

        // Joint loss: mean over the minibatch of pairs.
        let bundles: Vec<(GradBundle, GradBundle)> = pairs
            .iter()
            .map(|(x, xt, a)| {
                let (e, p, _) = equivalence_loss_grads(&model, x, xt, *a, lambda).unwrap();
                (e, p)
            })
            .collect();
        let (enc_mean, pol_mean) = mean_bundle(&bundles);
        let batch_loss = |m: &EquivModel| -> f64 {
            pairs
                .iter()
                .map(|(x, xt, a)| equivalence_loss(m, x, xt, *a, lambda).unwrap().0)
                .sum::<f64>()
                / pairs.len() as f64
        };
        let e = grad_check(
            &model.encoder,
            &enc_mean,
            |enc| batch_loss(&EquivModel::new(enc.clone(), model.policy.clone()).unwrap()),
            1e-6,
        )
        .unwrap();
        worst = worst.max(e);
        let e = grad_check(
            &model.policy,
            &pol_mean,
            |pol| batch_loss(&EquivModel::new(model.encoder.clone(), pol.clone()).unwrap()),
            1e-6,
        )
        .unwrap();
        worst = worst.max(e);
    }
    assert!(
        worst < 1e-5,
        "criterion 3: FAIL — max relative error {worst:.3e} over 20 parameter points"
    );
    println!("criterion 3: PASS — max relative error {worst:.3e} over 20 parameter points");
}

#[test]
fn c04_loss_decomposition() {
    for arts in PIPELINE.iter() {
        let kind = arts.cfg.kind;
        let mut worst = 0.0f64;
        for r in &arts.equiv_trace.minibatches {
            worst = worst.max((r.total - (0.25 * r.l_enc + 0.75 * r.l_pi)).abs());
        }
        let n = arts.equiv_trace.minibatches.len();
        assert!(n > 0, "criterion 4 ({kind:?}): FAIL — no minibatch records");
        assert!(
            worst <= 1e-12,
            "criterion 4 ({kind:?}): FAIL — worst decomposition residual {worst:.3e} over {n} minibatches"
        );
        println!(
            "criterion 4 ({kind:?}): PASS — worst residual {worst:.3e} over {n} minibatches"
        );
    }
}

#[test]
fn c05_embedding_collapse() {
    for arts in PIPELINE.iter() {
        let kind = arts.cfg.kind;
        let held = collect_onpolicy(&arts.cfg, 50, 200, (0.5, 0.05), 99).unwrap();
        let held_paired = augment_dataset(&held, 98).unwrap();
        let pairs = PairSet::from_paired(&held_paired).unwrap();
        let gap = arts.equiv.mean_pair_gap(&pairs);
        let mismatch_dist = arts.equiv.median_mismatch_gap(&pairs, 2000, 7).sqrt();
        assert!(
            gap < 1e-2,
            "criterion 5 ({kind:?}): FAIL — held-out mean l_enc {gap:.3e} >= 1e-2"
        );
        assert!(
            10.0 * gap <= mismatch_dist,
            "criterion 5 ({kind:?}): FAIL — mean l_enc {gap:.3e} not 10x below mismatch median {mismatch_dist:.3e}"
        );
        println!(
            "criterion 5 ({kind:?}): PASS — held-out mean l_enc {gap:.3e}, mismatch median {mismatch_dist:.3e} ({:.0}x)",
            mismatch_dist / gap
        );
    }
}

#[test]
fn c06_method_ordering() {
    for arts in PIPELINE.iter() {
        let kind = arts.cfg.kind;
        let s = &arts.summaries;
        // Every method saw the same episodes.
        let reference = &s["equivalence"].episode_records;
        for (name, summary) in s.iter() {
            for (a, b) in reference.iter().zip(&summary.episode_records) {
                assert!(
                    a.seed == b.seed
                        && a.episode == b.episode
                        && a.goal == b.goal
                        && a.init_heading == b.init_heading,
                    "criterion 6 ({kind:?}): FAIL — {name} saw a different episode set"
                );
            }
        }
        let (me, ma, mo, mr) = (
            s["equivalence"].pooled_mean,
            s["augmented"].pooled_mean,
            s["onpolicy"].pooled_mean,
            s["random"].pooled_mean,
        );
        let table = format!(
            "equivalence {me:.3}, augmented {ma:.3}, onpolicy {mo:.3}, random {mr:.3}"
        );
        assert!(
            me < ma && ma < mo && mo < mr,
            "criterion 6 ({kind:?}): FAIL — ordering violated: {table}"
        );
        assert!(
            me <= 0.95 * ma,
            "criterion 6 ({kind:?}): FAIL — equivalence not 5% better than augmented: {table}"
        );
        assert!(
            mr >= 1.2 * mo,
            "criterion 6 ({kind:?}): FAIL — random not worst by 20%: {table}"
        );
        println!("criterion 6 ({kind:?}): PASS — {table}");
    }
}

#[test]
fn c07_in_distribution_peak() {
    for arts in PIPELINE.iter() {
        let kind = arts.cfg.kind;
        let tc = TestConfig {
            goal_angle_range: PI,
            ..TestConfig::default()
        };
        let summary = evaluate(&arts.cfg, &Policy::Gcp(arts.gcp_onpolicy.clone()), &tc).unwrap();
        let split = bearing_split(
            &summary.episode_records,
            10f64.to_radians(),
            90f64.to_radians(),
        );
        assert!(
            split.in_count > 0 && split.out_count > 0,
            "criterion 7 ({kind:?}): FAIL — empty partition (in {}, out {})",
            split.in_count,
            split.out_count
        );
        assert!(
            split.in_mean <= 0.5 * split.out_mean,
            "criterion 7 ({kind:?}): FAIL — |bearing|<=10deg mean {:.3} (n={}) not half of |bearing|>=90deg mean {:.3} (n={})",
            split.in_mean,
            split.in_count,
            split.out_mean,
            split.out_count
        );
        println!(
            "criterion 7 ({kind:?}): PASS — in-distribution mean {:.3} (n={}) vs {:.3} (n={})",
            split.in_mean, split.in_count, split.out_mean, split.out_count
        );
    }
}

#[test]
fn c08_orientation_quality() {
    for arts in PIPELINE.iter() {
        let kind = arts.cfg.kind;
        let tc = TestConfig::default();
        let mut align_equiv = 0.0;
        let mut align_onpol = 0.0;
        let runs = 8;
        for seed in 0..runs {
            align_equiv +=
                multigoal_run(&arts.cfg, &Policy::Equiv(arts.equiv.clone()), 4, &tc, seed)
                    .unwrap()
                    .heading_alignment;
            align_onpol +=
                multigoal_run(&arts.cfg, &Policy::Gcp(arts.gcp_onpolicy.clone()), 4, &tc, seed)
                    .unwrap()
                    .heading_alignment;
        }
        let (ae, ao) = (align_equiv / runs as f64, align_onpol / runs as f64);
        assert!(
            ae > ao,
            "criterion 8 ({kind:?}): FAIL — mean alignment equivalence {ae:.3} !> onpolicy {ao:.3}"
        );
        println!("criterion 8 ({kind:?}): PASS — mean alignment equivalence {ae:.3} > onpolicy {ao:.3}");
    }
}

const RERUN_CONFIG: &str = r#"
name = "determinism"

[env]
kind = "thrustship"

[collect]
episodes = 40
horizon = 50
seed = 11

[train]
epochs = 5
minibatch = 256

[test]
episodes_per_seed = 10
seeds = [0, 1]
max_steps = 200
"#;

fn run_pipeline(root: &Path) -> Vec<PathBuf> {
    let bin = env!("CARGO_BIN_EXE_equigoal");
    let cfg = root.join("exp.toml");
    fs::write(&cfg, RERUN_CONFIG).unwrap();
    let run = |args: &[&str]| {
        let out = Command::new(bin)
            .arg("--root")
            .arg(root)
            .args(args)
            .output()
            .unwrap();
        assert!(
            out.status.success(),
            "pipeline stage {:?} failed: {}",
            args.first(),
            String::from_utf8_lossy(&out.stderr)
        );
    };
    let s = |p: &Path| p.to_string_lossy().into_owned();

    let onpol = root.join("onpolicy.jsonl");
    let random = root.join("random.jsonl");
    let paired = root.join("paired.jsonl");
    run(&["collect", &s(&cfg), "--kind", "onpolicy", "--out", &s(&onpol)]);
    run(&["collect", &s(&cfg), "--kind", "random", "--out", &s(&random)]);
    run(&["augment", "--in", &s(&onpol), "--out", &s(&paired)]);
    let ck_r = root.join("random.json");
    let ck_o = root.join("onpolicy.json");
    let ck_a = root.join("augmented.json");
    let ck_e = root.join("equivalence.json");
    run(&["train", "--method", "gcp", "--data", &s(&random), "--config", &s(&cfg), "--out", &s(&ck_r)]);
    run(&["train", "--method", "gcp", "--data", &s(&onpol), "--config", &s(&cfg), "--out", &s(&ck_o)]);
    run(&["train", "--method", "gcp", "--data", &s(&paired), "--config", &s(&cfg), "--out", &s(&ck_a)]);
    run(&["train", "--method", "equiv", "--data", &s(&paired), "--config", &s(&cfg), "--out", &s(&ck_e)]);
    let evaldir = root.join("eval");
    run(&[
        "eval", "--model", &s(&ck_r), "--model", &s(&ck_o), "--model", &s(&ck_a),
        "--model", &s(&ck_e), "--test-config", &s(&cfg), "--out", &s(&evaldir),
    ]);
    let mgdir = root.join("multigoal");
    run(&["multigoal", "--model", &s(&ck_e), "--test-config", &s(&cfg), "--out", &s(&mgdir)]);

    let mut files = vec![
        onpol,
        random,
        paired,
        ck_r,
        ck_o,
        ck_a,
        ck_e,
        root.join("random.losses.csv"),
        root.join("onpolicy.losses.csv"),
        root.join("augmented.losses.csv"),
        root.join("equivalence.losses.csv"),
        mgdir.join("trace.csv"),
        mgdir.join("path.svg"),
    ];
    for f in [
        "random_episodes.csv",
        "onpolicy_episodes.csv",
        "augmented_episodes.csv",
        "equivalence_episodes.csv",
        "summary.csv",
        "violin.csv",
        "distances.svg",
    ] {
        files.push(evaldir.join(f));
    }
    files
}

#[test]
fn c09_determinism_rerun() {
    let base = std::env::temp_dir().join("equigoal-acceptance-rerun");
    let _ = fs::remove_dir_all(&base);
    let root1 = base.join("run1");
    let root2 = base.join("run2");
    fs::create_dir_all(&root1).unwrap();
    fs::create_dir_all(&root2).unwrap();
    let files1 = run_pipeline(&root1);
    let files2 = run_pipeline(&root2);
    for (a, b) in files1.iter().zip(&files2) {
        let ba = fs::read(a).unwrap_or_else(|e| panic!("missing {}: {e}", a.display()));
        let bb = fs::read(b).unwrap_or_else(|e| panic!("missing {}: {e}", b.display()));
        assert!(
            ba == bb,
            "criterion 9: FAIL — {} differs between reruns",
            a.file_name().unwrap().to_string_lossy()
        );
    }
    println!(
        "criterion 9: PASS — {} artifacts byte-identical across independent reruns",
        files1.len()
    );
}

/// Longest-processing-time schedule of the independent trainings onto 4
/// workers; serial stages (collect, augment, eval) run on one.
fn four_core_bound(arts: &[EnvArts]) -> (Duration, Duration) {
    let serial: Duration = arts
        .iter()
        .map(|a| a.collect_wall + a.augment_wall + a.eval_wall)
        .sum();
    let mut jobs: Vec<Duration> = arts
        .iter()
        .flat_map(|a| a.train_walls.iter().map(|(_, d)| *d))
        .collect();
    jobs.sort();
    jobs.reverse();
    let mut workers = [Duration::ZERO; 4];
    for j in jobs {
        let w = workers
            .iter_mut()
            .min()
            .expect("four workers");
        *w += j;
    }
    let makespan = *workers.iter().max().expect("four workers");
    (serial, makespan)
}

#[test]
fn c10_pipeline_budget() {
    let arts = &*PIPELINE;
    let single_core: Duration = arts
        .iter()
        .map(|a| {
            a.collect_wall
                + a.augment_wall
                + a.eval_wall
                + a.train_walls.iter().map(|(_, d)| *d).sum::<Duration>()
        })
        .sum();
    let (serial, makespan) = four_core_bound(arts);
    let bound = serial + makespan;
    for a in arts {
        let trains: Vec<String> = a
            .train_walls
            .iter()
            .map(|(n, d)| format!("{n} {:.1}s", d.as_secs_f64()))
            .collect();
        println!(
            "  {:?}: collect {:.1}s, augment {:.1}s, eval {:.1}s, train [{}]",
            a.cfg.kind,
            a.collect_wall.as_secs_f64(),
            a.augment_wall.as_secs_f64(),
            a.eval_wall.as_secs_f64(),
            trains.join(", ")
        );
    }
    assert!(
        bound < Duration::from_secs(600),
        "criterion 10: FAIL — 4-core schedule bound {:.1}s (single-core total {:.1}s) exceeds 600 s",
        bound.as_secs_f64(),
        single_core.as_secs_f64()
    );
    println!(
        "criterion 10: PASS — 4-core schedule bound {:.1}s (serial {:.1}s + trainings {:.1}s; single-core total {:.1}s)",
        bound.as_secs_f64(),
        serial.as_secs_f64(),
        makespan.as_secs_f64(),
        single_core.as_secs_f64()
    );
}
