//! Trajectory twinning: rotate an episode's initial configuration by a random
//! θ about its starting position, then replay the identical action sequence
//! through the simulator. Because the dynamics commute with rotation, the
//! replayed states land exactly on the rotation of the originals — which the
//! verifier here checks against the analytic rotation, transition by
//! transition.

use std::f64::consts::TAU;

use rand::Rng;

use crate::collect::{Dataset, Trajectory, Transition};
use crate::env::{env_step, observe, rotate_state, EnvConfig, EnvKind, Motion};
use crate::error::{Error, Result};
use crate::rng::{stream_rng, Domain};
use crate::vec2::Vec2;

/// A re-simulated equivalent of one base trajectory.
#[derive(Debug, Clone, PartialEq)]
pub struct Twin {
    /// Index into the base dataset's trajectory list.
    pub base_index: usize,
    /// Rotation angle in [0, 2π).
    pub theta: f64,
    pub trajectory: Trajectory,
}

/// Base batch plus its generated equivalents; together they form the
/// augmented batch with exactly twice the transitions (at one twin per base).
#[derive(Debug, Clone, PartialEq)]
pub struct PairedDataset {
    pub base: Dataset,
    pub twins: Vec<Twin>,
}

impl PairedDataset {
    pub fn total_transitions(&self) -> usize {
        self.base.total_transitions()
            + self.twins.iter().map(|t| t.trajectory.len()).sum::<usize>()
    }
}

fn motion_matches(kind: EnvKind, motion: &Motion) -> bool {
    matches!(
        (kind, motion),
        (EnvKind::Unicycle, Motion::Speed(_)) | (EnvKind::Thrustship, Motion::Velocity(_))
    )
}

/// Replay `traj`'s actions from its initial state rotated by `theta` about
/// the initial position. States come from re-simulation, not analytic
/// rotation — augmentation costs environment steps by design.
pub fn augment_trajectory(cfg: &EnvConfig, traj: &Trajectory, theta: f64) -> Result<Trajectory> {
    if !(0.0..TAU).contains(&theta) {
        return Err(Error::InvalidConfig(format!(
            "twin angle must be in [0, 2π), got {theta}"
        )));
    }
    if !motion_matches(cfg.kind, &traj.initial_state.motion) {
        return Err(Error::EnvMismatch(format!(
            "trajectory state does not belong to a {} environment",
            cfg.kind.name()
        )));
    }
    let initial_state = rotate_state(&traj.initial_state, theta, traj.initial_state.position);
    let mut state = initial_state;
    let mut transitions = Vec::with_capacity(traj.len());
    for t in &traj.transitions {
        let (next, one_step_goal) = env_step(cfg, &state, t.action);
        transitions.push(Transition {
            obs: observe(&state),
            action: t.action,
            one_step_goal,
            agent_position: state.position,
        });
        state = next;
    }
    Ok(Trajectory {
        episode_id: traj.episode_id,
        initial_state,
        transitions,
    })
}

/// The pre-generated twin-angle sequence for a given seed: i.i.d. uniform on
/// [0, 2π), drawn sequentially so re-simulation order can be arbitrary.
pub fn twin_angles(seed: u64, count: usize) -> Vec<f64> {
    let mut rng = stream_rng(seed, 0, Domain::Augment);
    (0..count).map(|_| rng.random::<f64>() * TAU).collect()
}

/// One twin per base trajectory.
pub fn augment_dataset(d: &Dataset, seed: u64) -> Result<PairedDataset> {
    augment_dataset_k(d, seed, 1)
}

/// `twins_per_traj` twins per base trajectory, grouped by base index. Twin
/// episode ids continue the base numbering so ids stay unique in the pair.
pub fn augment_dataset_k(d: &Dataset, seed: u64, twins_per_traj: usize) -> Result<PairedDataset> {
    d.validate()?;
    if twins_per_traj == 0 {
        return Err(Error::InvalidConfig(
            "twins_per_traj must be >= 1".to_string(),
        ));
    }
    let n = d.trajectories.len();
    let thetas = twin_angles(seed, n * twins_per_traj);
    let mut twins = Vec::with_capacity(n * twins_per_traj);
    for (base_index, traj) in d.trajectories.iter().enumerate() {
        for k in 0..twins_per_traj {
            let theta = thetas[base_index * twins_per_traj + k];
            let mut trajectory = augment_trajectory(&d.env_config, traj, theta)?;
            trajectory.episode_id = (n + twins.len()) as u64;
            twins.push(Twin {
                base_index,
                theta,
                trajectory,
            });
        }
    }
    Ok(PairedDataset {
        base: d.clone(),
        twins,
    })
}

/// Rotate an observation's oriented blocks by θ: heading pair always, the
/// velocity pair too on thrust-ship observations. Scalar speed is invariant.
pub fn rotate_obs(kind: EnvKind, obs: &[f64], theta: f64) -> Vec<f64> {
    let h = Vec2::new(obs[0], obs[1]).rotated(theta);
    match kind {
        EnvKind::Unicycle => vec![h.x, h.y, obs[2]],
        EnvKind::Thrustship => {
            let v = Vec2::new(obs[2], obs[3]).rotated(theta);
            vec![h.x, h.y, v.x, v.y]
        }
    }
}

/// Equivalence-validity oracle. Confirms, for every twin:
///   - the action sequence is byte-identical to the base's;
///   - lengths match;
///   - every state, observation, and one-step goal equals the analytic
///     rotation of the base record about the base initial position, within
///     `tol` componentwise.
pub fn verify_pairing(p: &PairedDataset, tol: f64) -> Result<()> {
    let kind = p.base.env_config.kind;
    if p.twins.is_empty() {
        return Err(Error::EmptyDataset("no twins".to_string()));
    }
    for (w, twin) in p.twins.iter().enumerate() {
        let base = p
            .base
            .trajectories
            .get(twin.base_index)
            .ok_or_else(|| Error::CorruptData(format!("twin {w} points past base")))?;
        if twin.trajectory.len() != base.len() {
            return Err(Error::shape(
                "twin length",
                base.len(),
                twin.trajectory.len(),
            ));
        }
        if !(0.0..TAU).contains(&twin.theta) {
            return Err(Error::CorruptData(format!(
                "twin {w} angle {} outside [0, 2π)",
                twin.theta
            )));
        }
        let pivot = base.initial_state.position;
        let fail = |t: usize, what: &str| {
            Err(Error::CorruptData(format!(
                "twin {w} (base {}) step {t}: {what} deviates from the rotated base",
                twin.base_index
            )))
        };
        for (t, (tb, tt)) in base
            .transitions
            .iter()
            .zip(twin.trajectory.transitions.iter())
            .enumerate()
        {
            if tb.action.thrust.to_bits() != tt.action.thrust.to_bits()
                || tb.action.steer.to_bits() != tt.action.steer.to_bits()
            {
                return Err(Error::CorruptData(format!(
                    "twin {w} step {t}: action differs from base"
                )));
            }
            if tt.agent_position.dist(tb.agent_position.rotated_about(twin.theta, pivot)) > tol {
                return fail(t, "position");
            }
            if tt.one_step_goal.dist(tb.one_step_goal.rotated_about(twin.theta, pivot)) > tol {
                return fail(t, "one-step goal");
            }
            let expect_obs = rotate_obs(kind, &tb.obs, twin.theta);
            if tt.obs.len() != expect_obs.len() {
                return Err(Error::shape("twin obs", expect_obs.len(), tt.obs.len()));
            }
            if tt
                .obs
                .iter()
                .zip(expect_obs.iter())
                .any(|(a, b)| (a - b).abs() > tol)
            {
                return fail(t, "observation");
            }
        }
    }
    Ok(())
}
