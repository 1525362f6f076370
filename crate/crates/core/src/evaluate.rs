//! Goal-reaching evaluation: randomized-orientation episodes, the
//! closest-distance metric, per-seed aggregation, and sequential multi-goal
//! traces for qualitative orientation analysis.
//!
//! Episode initial conditions are a pure function of (seed, episode index),
//! so every evaluated model sees the identical episode set.

use std::f64::consts::PI;

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::env::{env_reset, env_step, wrap_angle, Action, EnvConfig, EnvState};
use crate::error::{Error, Result};
use crate::learn::Policy;
use crate::rng::{stream_rng, Domain};
use crate::vec2::Vec2;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TestConfig {
    /// Goal distance drawn uniformly from [min, max]; min == max pins it.
    pub goal_dist_range: (f64, f64),
    /// Goal bearing drawn uniformly from ±this, relative to the agent's
    /// heading. π gives full-circle goals (used for bearing analyses).
    pub goal_angle_range: f64,
    pub max_steps: usize,
    pub reach_threshold: f64,
    pub episodes_per_seed: usize,
    pub seeds: Vec<u64>,
}

impl Default for TestConfig {
    fn default() -> Self {
        TestConfig {
            goal_dist_range: (2.0, 5.0),
            goal_angle_range: PI / 4.0,
            max_steps: 1000,
            reach_threshold: 0.5,
            episodes_per_seed: 100,
            seeds: (0..10).collect(),
        }
    }
}

impl TestConfig {
    pub fn validate(&self) -> Result<()> {
        let (lo, hi) = self.goal_dist_range;
        if !(lo.is_finite() && hi.is_finite() && 0.0 < lo && lo <= hi) {
            return Err(Error::InvalidConfig(format!(
                "goal_dist_range must satisfy 0 < min <= max, got ({lo}, {hi})"
            )));
        }
        if !(0.0..=PI).contains(&self.goal_angle_range) {
            return Err(Error::InvalidConfig(format!(
                "goal_angle_range must be in [0, π], got {}",
                self.goal_angle_range
            )));
        }
        if self.max_steps == 0 || self.episodes_per_seed == 0 {
            return Err(Error::InvalidConfig(
                "max_steps and episodes_per_seed must be >= 1".to_string(),
            ));
        }
        if !(self.reach_threshold.is_finite() && self.reach_threshold > 0.0) {
            return Err(Error::InvalidConfig(format!(
                "reach_threshold must be > 0, got {}",
                self.reach_threshold
            )));
        }
        if self.seeds.is_empty() {
            return Err(Error::InvalidConfig("need at least one seed".to_string()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct EpisodeResult {
    pub closest_distance: f64,
    pub reached: bool,
    pub steps_taken: usize,
    /// Positions including the initial one: length steps_taken + 1.
    pub path: Vec<Vec2>,
    pub headings: Vec<f64>,
}

/// One row of the episode table; paths are dropped, everything the metric
/// CSVs and bearing analyses need is kept.
#[derive(Debug, Clone, PartialEq)]
pub struct EpisodeRecord {
    pub seed: u64,
    pub episode: usize,
    pub goal: Vec2,
    pub init_heading: f64,
    pub closest_distance: f64,
    pub reached: bool,
    pub steps_taken: usize,
}

impl EpisodeRecord {
    /// Goal bearing relative to the initial heading, in (-π, π]. Episodes
    /// start at the origin, so the bearing comes straight off the goal.
    pub fn init_bearing(&self) -> f64 {
        let mut b = self.goal.angle() - self.init_heading;
        b = wrap_angle(b);
        if b > PI {
            b -= 2.0 * PI;
        }
        b
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SeedStats {
    pub seed: u64,
    pub mean: f64,
    pub std: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct MetricsSummary {
    pub per_seed: Vec<SeedStats>,
    pub pooled_mean: f64,
    pub pooled_std: f64,
    pub episode_records: Vec<EpisodeRecord>,
}

/// Population mean/std of a slice.
fn mean_std(xs: &[f64]) -> (f64, f64) {
    let n = xs.len() as f64;
    let mean = xs.iter().sum::<f64>() / n;
    let var = xs.iter().map(|x| (x - mean) * (x - mean)).sum::<f64>() / n;
    (mean, var.sqrt())
}

fn draw(rng: &mut ChaCha8Rng, lo: f64, hi: f64) -> f64 {
    if lo == hi {
        lo
    } else {
        rng.random_range(lo..hi)
    }
}

/// A fresh goal relative to the agent's current pose: distance uniform in
/// the configured range, bearing uniform within ±goal_angle_range of the
/// current heading.
pub fn sample_goal_from(state: &EnvState, cfg: &TestConfig, rng: &mut ChaCha8Rng) -> Vec2 {
    let dist = draw(rng, cfg.goal_dist_range.0, cfg.goal_dist_range.1);
    let bearing = draw(rng, -cfg.goal_angle_range, cfg.goal_angle_range);
    state.position + Vec2::from_angle(state.heading + bearing) * dist
}

/// Test episode: agent at the origin rotated by a uniform random angle, goal
/// placed relative to that heading.
pub fn sample_test_episode(
    env_cfg: &EnvConfig,
    cfg: &TestConfig,
    rng: &mut ChaCha8Rng,
) -> (EnvState, Vec2) {
    let heading = rng.random::<f64>() * 2.0 * PI;
    let state = env_reset(env_cfg, Vec2::ZERO, heading).expect("finite reset");
    let goal = sample_goal_from(&state, cfg, rng);
    (state, goal)
}

/// Roll one episode under any action source: terminate on reach (distance to
/// goal at or under the threshold) or after max_steps, tracking the running
/// minimum distance from the initial configuration onward.
pub fn run_episode_with<F>(
    env_cfg: &EnvConfig,
    mut act: F,
    episode: (EnvState, Vec2),
    cfg: &TestConfig,
) -> Result<EpisodeResult>
where
    F: FnMut(&EnvState, Vec2) -> Result<Action>,
{
    let (mut state, goal) = episode;
    let mut closest = state.position.dist(goal);
    let mut path = vec![state.position];
    let mut headings = vec![state.heading];
    let mut reached = closest <= cfg.reach_threshold;
    let mut steps = 0;
    while !reached && steps < cfg.max_steps {
        let action = act(&state, goal)?;
        let (next, _) = env_step(env_cfg, &state, action);
        state = next;
        steps += 1;
        let d = state.position.dist(goal);
        closest = closest.min(d);
        path.push(state.position);
        headings.push(state.heading);
        reached = d <= cfg.reach_threshold;
    }
    Ok(EpisodeResult {
        closest_distance: closest,
        reached,
        steps_taken: steps,
        path,
        headings,
    })
}

pub fn run_episode(
    env_cfg: &EnvConfig,
    policy: &Policy,
    episode: (EnvState, Vec2),
    cfg: &TestConfig,
) -> Result<EpisodeResult> {
    run_episode_with(env_cfg, |s, g| policy.infer_action(s, g), episode, cfg)
}

/// Full protocol: episodes_per_seed episodes for each seed, aggregated per
/// seed and pooled. The episode set depends only on the test config, never
/// on the model.
pub fn evaluate(env_cfg: &EnvConfig, policy: &Policy, cfg: &TestConfig) -> Result<MetricsSummary> {
    cfg.validate()?;
    env_cfg.validate()?;
    let mut per_seed = Vec::with_capacity(cfg.seeds.len());
    let mut episode_records = Vec::with_capacity(cfg.seeds.len() * cfg.episodes_per_seed);
    for &seed in &cfg.seeds {
        let mut distances = Vec::with_capacity(cfg.episodes_per_seed);
        for episode in 0..cfg.episodes_per_seed {
            let mut rng = stream_rng(seed, episode as u64, Domain::Eval);
            let (state, goal) = sample_test_episode(env_cfg, cfg, &mut rng);
            let init_heading = state.heading;
            let r = run_episode(env_cfg, policy, (state, goal), cfg)?;
            distances.push(r.closest_distance);
            episode_records.push(EpisodeRecord {
                seed,
                episode,
                goal,
                init_heading,
                closest_distance: r.closest_distance,
                reached: r.reached,
                steps_taken: r.steps_taken,
            });
        }
        let (mean, std) = mean_std(&distances);
        per_seed.push(SeedStats { seed, mean, std });
    }
    let all: Vec<f64> = episode_records.iter().map(|r| r.closest_distance).collect();
    let (pooled_mean, pooled_std) = mean_std(&all);
    Ok(MetricsSummary {
        per_seed,
        pooled_mean,
        pooled_std,
        episode_records,
    })
}

/// One step of a multi-goal trace: the pose before acting and the goal that
/// was active at that moment.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TraceStep {
    pub position: Vec2,
    pub heading: f64,
    pub goal: Vec2,
}

#[derive(Debug, Clone, PartialEq)]
pub struct QualTrace {
    pub steps: Vec<TraceStep>,
    /// Goals in the order they were posed (achieved ones plus the last active).
    pub goals: Vec<Vec2>,
    pub goals_achieved: usize,
    /// Mean cos(heading − bearing to the active goal) over all steps; 1 means
    /// the agent always faces where it is going.
    pub heading_alignment: f64,
}

/// Sequential-goal protocol: as soon as the agent reaches the active goal a
/// fresh one is sampled relative to its current pose, without any reset,
/// until n_goals are achieved or the shared max_steps budget runs out.
pub fn multigoal_run(
    env_cfg: &EnvConfig,
    policy: &Policy,
    n_goals: usize,
    cfg: &TestConfig,
    seed: u64,
) -> Result<QualTrace> {
    cfg.validate()?;
    env_cfg.validate()?;
    if n_goals == 0 {
        return Err(Error::InvalidConfig("n_goals must be >= 1".to_string()));
    }
    let mut rng = stream_rng(seed, 0, Domain::Eval);
    let (mut state, mut goal) = sample_test_episode(env_cfg, cfg, &mut rng);
    let mut goals = vec![goal];
    let mut goals_achieved = 0;
    let mut steps = Vec::new();
    let mut align_sum = 0.0;
    for _ in 0..cfg.max_steps {
        if state.position.dist(goal) <= cfg.reach_threshold {
            goals_achieved += 1;
            if goals_achieved == n_goals {
                break;
            }
            goal = sample_goal_from(&state, cfg, &mut rng);
            goals.push(goal);
        }
        steps.push(TraceStep {
            position: state.position,
            heading: state.heading,
            goal,
        });
        let bearing = (goal - state.position).angle();
        align_sum += (state.heading - bearing).cos();
        let action = policy.infer_action(&state, goal)?;
        state = env_step(env_cfg, &state, action).0;
    }
    // The goal may be reached on the budget's final step.
    if goals_achieved < n_goals && state.position.dist(goal) <= cfg.reach_threshold {
        goals_achieved += 1;
    }
    let heading_alignment = if steps.is_empty() {
        0.0
    } else {
        align_sum / steps.len() as f64
    };
    Ok(QualTrace {
        steps,
        goals,
        goals_achieved,
        heading_alignment,
    })
}

/// Mean closest distance of episodes whose initial goal bearing magnitude is
/// at most `in_band` vs at least `out_band` (radians). Drives the
/// in-distribution-peak analysis; needs records from a full-circle sampler
/// for the out band to be populated.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BearingSplit {
    pub in_mean: f64,
    pub in_count: usize,
    pub out_mean: f64,
    pub out_count: usize,
}

pub fn bearing_split(records: &[EpisodeRecord], in_band: f64, out_band: f64) -> BearingSplit {
    let mut in_sum = 0.0;
    let mut in_count = 0;
    let mut out_sum = 0.0;
    let mut out_count = 0;
    for r in records {
        let b = r.init_bearing().abs();
        if b <= in_band {
            in_sum += r.closest_distance;
            in_count += 1;
        } else if b >= out_band {
            out_sum += r.closest_distance;
            out_count += 1;
        }
    }
    BearingSplit {
        in_mean: if in_count > 0 { in_sum / in_count as f64 } else { f64::NAN },
        in_count,
        out_mean: if out_count > 0 { out_sum / out_count as f64 } else { f64::NAN },
        out_count,
    }
}
