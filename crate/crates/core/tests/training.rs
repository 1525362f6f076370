//! End-to-end learning behavior at reduced scale: the equivalence model's
//! embeddings collapse for rotated pairs and generalize to fresh rotations,
//! its policy becomes rotation-consistent, and trained models beat inert
//! ones at goal reaching.

use std::f64::consts::TAU;

use equigoal_core::augment::{augment_dataset, augment_trajectory};
use equigoal_core::collect::{collect_onpolicy, Dataset};
use equigoal_core::env::{rotate_state, EnvConfig, EnvKind};
use equigoal_core::evaluate::{evaluate, multigoal_run, TestConfig};
use equigoal_core::learn::{
    build_input, train_equivalence, train_gcp, PairSet, Policy, TrainConfig, TrainingSet,
};
use equigoal_core::vec2::Vec2;

fn small_batch(kind: EnvKind, seed: u64) -> Dataset {
    let c = EnvConfig::new(kind);
    collect_onpolicy(&c, 60, 80, (0.5, 0.05), seed).unwrap()
}

fn small_train_cfg() -> TrainConfig {
    TrainConfig {
        epochs: 25,
        minibatch: 256,
        seed: 5,
        ..TrainConfig::default()
    }
}

/// Enough data for the encoder to stay informative instead of collapsing
/// every input to one point; still ~5x below production scale.
fn medium_batch(kind: EnvKind, seed: u64) -> Dataset {
    let c = EnvConfig::new(kind);
    collect_onpolicy(&c, 200, 200, (0.5, 0.05), seed).unwrap()
}

fn medium_train_cfg() -> TrainConfig {
    TrainConfig {
        epochs: 30,
        seed: 5,
        ..TrainConfig::default()
    }
}

#[test]
fn equivalence_model_collapses_and_generalizes() {
    let d = medium_batch(EnvKind::Unicycle, 1);
    let paired = augment_dataset(&d, 2).unwrap();
    let (model, trace) = train_equivalence(&paired, &medium_train_cfg()).unwrap();

    let final_l_enc = trace.final_epoch().unwrap().l_enc;
    assert!(final_l_enc < 2e-3, "training l_enc {final_l_enc:.2e}");

    // Held-out pairs: same base data, fresh twin angles.
    let held_out = augment_dataset(&d, 999).unwrap();
    let pairs = PairSet::from_paired(&held_out).unwrap();
    let held_gap = model.mean_pair_gap(&pairs);
    assert!(
        held_gap < 10.0 * final_l_enc.max(1e-6),
        "held-out gap {held_gap:.2e} vs training {final_l_enc:.2e}"
    );

    // Contrast: unrelated inputs keep an embedding separation at least an
    // order of magnitude above the equivalent-pair gap, so the encoder has
    // not collapsed globally.
    let mismatch_dist = model.median_mismatch_gap(&pairs, 2000, 7).sqrt();
    assert!(
        held_gap * 10.0 <= mismatch_dist,
        "equivalent gap {held_gap:.2e} not well below mismatch median {mismatch_dist:.2e}"
    );
}

#[test]
fn trained_equivalence_policy_is_rotation_consistent() {
    let kind = EnvKind::Unicycle;
    let env_cfg = EnvConfig::new(kind);
    let d = small_batch(kind, 3);
    let paired = augment_dataset(&d, 4).unwrap();
    let (model, _) = train_equivalence(&paired, &small_train_cfg()).unwrap();

    // Probe: states off a fresh trajectory, rotated by angles never trained on.
    let probe = collect_onpolicy(&env_cfg, 1, 30, (0.3, 0.3), 77).unwrap();
    let base = &probe.trajectories[0];
    for (i, theta) in [(3usize, 0.7), (10, 2.9), (25, 5.5)] {
        let t = &base.transitions[i];
        let twin_traj = augment_trajectory(&env_cfg, base, theta).unwrap();
        let tt = &twin_traj.transitions[i];

        let x = build_input(t, t.one_step_goal).unwrap();
        let xt = build_input(tt, tt.one_step_goal).unwrap();
        let h = model.embed(&x).unwrap();
        let ht = model.embed(&xt).unwrap();
        let out = model.policy.forward(&h).unwrap();
        let out_t = model.policy.forward(&ht).unwrap();
        for (a, b) in out.iter().zip(out_t.iter()) {
            assert!(
                (a - b).abs() < 0.05,
                "rotated action drifted: {a:.3} vs {b:.3} (step {i}, theta {theta})"
            );
        }
    }
}

#[test]
fn trained_models_outperform_inert_behavior() {
    // At reduced training scale the equivalence model must already reach
    // goals far better than the nothing-happens baseline of standing still,
    // and better than the unrotated-data clone.
    let kind = EnvKind::Unicycle;
    let env_cfg = EnvConfig::new(kind);
    let d = medium_batch(kind, 8);
    let paired = augment_dataset(&d, 9).unwrap();
    let cfg = medium_train_cfg();

    let (equiv, _) = train_equivalence(&paired, &cfg).unwrap();
    let onpolicy_set = TrainingSet::from_dataset(&d).unwrap();
    let (onpol, _) = train_gcp(&onpolicy_set, &cfg).unwrap();

    let test_cfg = TestConfig {
        episodes_per_seed: 30,
        seeds: vec![0, 1, 2],
        max_steps: 400,
        ..TestConfig::default()
    };
    let m_equiv = evaluate(&env_cfg, &Policy::Equiv(equiv.clone()), &test_cfg).unwrap();
    let m_onpol = evaluate(&env_cfg, &Policy::Gcp(onpol), &test_cfg).unwrap();

    // Standing still scores the mean initial distance, ~3.5.
    assert!(
        m_equiv.pooled_mean < 2.0,
        "equivalence model mean {:.2}",
        m_equiv.pooled_mean
    );
    assert!(
        m_equiv.pooled_mean < m_onpol.pooled_mean,
        "equiv {:.2} !< onpolicy {:.2}",
        m_equiv.pooled_mean,
        m_onpol.pooled_mean
    );

    // Multigoal heading alignment: the model spends most of each episode
    // facing its current goal (per-run mean cosine is in [-1, 1]).
    let mut align_equiv = 0.0;
    for seed in 0..4u64 {
        align_equiv += multigoal_run(&env_cfg, &Policy::Equiv(equiv.clone()), 4, &test_cfg, seed)
            .unwrap()
            .heading_alignment;
    }
    assert!(
        align_equiv > 1.0,
        "alignment over 4 runs only {align_equiv:.2}"
    );
}

#[test]
fn full_angle_sweep_stays_equivariant_after_training() {
    // Same goal direction, many rotations: actions from the equivalence
    // model stay nearly constant in the rotated frame.
    let kind = EnvKind::Thrustship;
    let env_cfg = EnvConfig::new(kind);
    let d = small_batch(kind, 12);
    let paired = augment_dataset(&d, 13).unwrap();
    let (model, _) = train_equivalence(&paired, &small_train_cfg()).unwrap();

    let probe = collect_onpolicy(&env_cfg, 1, 10, (0.2, 0.2), 55).unwrap();
    let state = probe.trajectories[0].initial_state;
    let goal = Vec2::new(3.0, 0.5);
    let base_action = Policy::Equiv(model.clone())
        .infer_action(&state, goal)
        .unwrap();
    for k in 1..12 {
        let theta = k as f64 / 12.0 * TAU;
        let rs = rotate_state(&state, theta, state.position);
        let rg = goal.rotated_about(theta, state.position);
        let a = Policy::Equiv(model.clone()).infer_action(&rs, rg).unwrap();
        assert!(
            (a.thrust - base_action.thrust).abs() < 0.05
                && (a.steer - base_action.steer).abs() < 0.05,
            "theta {theta:.2}: ({:.3},{:.3}) vs ({:.3},{:.3})",
            a.thrust,
            a.steer,
            base_action.thrust,
            base_action.steer
        );
    }
}
