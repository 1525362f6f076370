//! Batch data collection: forward-walking scripted expert with annealed
//! noise (the on-policy-style batch) and a uniform-random baseline batch.
//!
//! Every episode starts at the origin facing +x, so directional diversity in
//! the data comes only from downstream augmentation.

use std::f64::consts::{PI, TAU};

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::env::{env_reset, env_step, observe, Action, EnvConfig, EnvState};
use crate::error::{Error, Result};
use crate::rng::{stream_rng, Domain};
use crate::vec2::Vec2;

/// Proportional steering gain of the scripted expert.
pub const EXPERT_KP: f64 = 2.0;

/// One (s_t, a_t, g_t) record. `agent_position` is s_t's position, kept so
/// goal inputs can be recomputed without replaying the episode.
#[derive(Debug, Clone, PartialEq)]
pub struct Transition {
    pub obs: Vec<f64>,
    pub action: Action,
    pub one_step_goal: Vec2,
    pub agent_position: Vec2,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    pub episode_id: u64,
    pub initial_state: EnvState,
    pub transitions: Vec<Transition>,
}

impl Trajectory {
    pub fn len(&self) -> usize {
        self.transitions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.transitions.is_empty()
    }

    /// Contiguity: each one-step goal is the next transition's position.
    pub fn is_contiguous(&self, tol: f64) -> bool {
        self.transitions
            .windows(2)
            .all(|w| w[0].one_step_goal.dist(w[1].agent_position) <= tol)
    }

    /// Net displacement from the initial position to the final reached goal.
    pub fn displacement(&self) -> Vec2 {
        match self.transitions.last() {
            Some(last) => last.one_step_goal - self.initial_state.position,
            None => Vec2::ZERO,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CollectionKind {
    Random,
    Onpolicy,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Dataset {
    pub env_config: EnvConfig,
    pub seed: u64,
    pub collection_kind: CollectionKind,
    pub trajectories: Vec<Trajectory>,
}

impl Dataset {
    pub fn total_transitions(&self) -> usize {
        self.trajectories.iter().map(Trajectory::len).sum()
    }

    /// Structural invariants shared by fresh and reloaded datasets: non-empty,
    /// observation widths matching the env kind, contiguous trajectories.
    pub fn validate(&self) -> Result<()> {
        if self.trajectories.is_empty() {
            return Err(Error::EmptyDataset("no trajectories".to_string()));
        }
        let obs_dim = self.env_config.kind.obs_dim();
        for traj in &self.trajectories {
            if traj.is_empty() {
                return Err(Error::CorruptData(format!(
                    "episode {} has no transitions",
                    traj.episode_id
                )));
            }
            if let Some(t) = traj.transitions.iter().find(|t| t.obs.len() != obs_dim) {
                return Err(Error::shape("observation", obs_dim, t.obs.len()));
            }
            if !traj.is_contiguous(1e-12) {
                return Err(Error::CorruptData(format!(
                    "episode {} breaks contiguity",
                    traj.episode_id
                )));
            }
        }
        Ok(())
    }
}

/// Signed angular difference wrapped into [-π, π).
fn wrap_signed(theta: f64) -> f64 {
    (theta + PI).rem_euclid(TAU) - PI
}

/// Uniform draw in [-scale, scale); exactly zero when scale is zero, and
/// always consumes one draw so stream alignment is independent of scale.
fn noise(rng: &mut ChaCha8Rng, scale: f64) -> f64 {
    (rng.random::<f64>() * 2.0 - 1.0) * scale
}

/// Forward-walking proportional controller: full thrust, steer toward
/// `target_heading`, both perturbed by uniform noise. Not goal-conditioned —
/// it always pushes in its one trained direction.
pub fn expert_action(
    state: &EnvState,
    target_heading: f64,
    noise_scale: f64,
    rng: &mut ChaCha8Rng,
) -> Action {
    let thrust = (1.0 + noise(rng, noise_scale)).clamp(-1.0, 1.0);
    let err = wrap_signed(target_heading - state.heading);
    let steer = (EXPERT_KP * err + noise(rng, noise_scale)).clamp(-1.0, 1.0);
    Action::new(thrust, steer)
}

fn check_budget(episodes: usize, horizon: usize) -> Result<()> {
    if episodes == 0 || horizon == 0 {
        return Err(Error::InvalidConfig(format!(
            "episodes and horizon must be >= 1, got {episodes} x {horizon}"
        )));
    }
    Ok(())
}

fn rollout<F>(cfg: &EnvConfig, episode_id: u64, horizon: usize, mut pick: F) -> Trajectory
where
    F: FnMut(&EnvState) -> Action,
{
    let initial_state = env_reset(cfg, Vec2::ZERO, 0.0).expect("finite reset args");
    let mut state = initial_state;
    let mut transitions = Vec::with_capacity(horizon);
    for _ in 0..horizon {
        let action = pick(&state);
        let (next, one_step_goal) = env_step(cfg, &state, action);
        transitions.push(Transition {
            obs: observe(&state),
            action,
            one_step_goal,
            agent_position: state.position,
        });
        state = next;
    }
    Trajectory {
        episode_id,
        initial_state,
        transitions,
    }
}

/// Expert batch: episode `i` uses noise scale linearly interpolated from
/// `noise_schedule.0` (episode 0) to `noise_schedule.1` (last episode),
/// emulating a training buffer's early-bad/late-good mix. Each episode owns
/// the rng stream keyed by (seed, episode_id), so collection order is free.
pub fn collect_onpolicy(
    cfg: &EnvConfig,
    episodes: usize,
    horizon: usize,
    noise_schedule: (f64, f64),
    seed: u64,
) -> Result<Dataset> {
    cfg.validate()?;
    check_budget(episodes, horizon)?;
    let (start, end) = noise_schedule;
    if start < 0.0 || end < 0.0 {
        return Err(Error::InvalidConfig(format!(
            "noise scales must be >= 0, got ({start}, {end})"
        )));
    }
    let trajectories = (0..episodes)
        .map(|ep| {
            let frac = if episodes > 1 {
                ep as f64 / (episodes - 1) as f64
            } else {
                0.0
            };
            let scale = start + (end - start) * frac;
            let mut rng = stream_rng(seed, ep as u64, Domain::Collect);
            rollout(cfg, ep as u64, horizon, |state| {
                expert_action(state, 0.0, scale, &mut rng)
            })
        })
        .collect();
    Ok(Dataset {
        env_config: *cfg,
        seed,
        collection_kind: CollectionKind::Onpolicy,
        trajectories,
    })
}

/// Baseline batch: actions uniform over [-1, 1]^2.
pub fn collect_random(
    cfg: &EnvConfig,
    episodes: usize,
    horizon: usize,
    seed: u64,
) -> Result<Dataset> {
    cfg.validate()?;
    check_budget(episodes, horizon)?;
    let trajectories = (0..episodes)
        .map(|ep| {
            let mut rng = stream_rng(seed, ep as u64, Domain::Collect);
            rollout(cfg, ep as u64, horizon, |_| {
                Action::new(noise(&mut rng, 1.0), noise(&mut rng, 1.0))
            })
        })
        .collect();
    Ok(Dataset {
        env_config: *cfg,
        seed,
        collection_kind: CollectionKind::Random,
        trajectories,
    })
}
