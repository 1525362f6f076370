//! Planar locomotion simulators whose dynamics commute exactly with rotation.
//!
//! Two variants: a unicycle (heading + scalar forward speed) and a thrust
//! ship (heading + world-frame velocity vector). Both are pure functions of
//! (config, state, action) — no hidden RNG — and rotating a state about any
//! pivot then stepping gives the same result as stepping then rotating.

use std::f64::consts::TAU;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::vec2::Vec2;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum EnvKind {
    Unicycle,
    Thrustship,
}

impl EnvKind {
    pub fn obs_dim(self) -> usize {
        match self {
            EnvKind::Unicycle => 3,
            EnvKind::Thrustship => 4,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            EnvKind::Unicycle => "unicycle",
            EnvKind::Thrustship => "thrustship",
        }
    }
}

impl std::str::FromStr for EnvKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "unicycle" => Ok(EnvKind::Unicycle),
            "thrustship" => Ok(EnvKind::Thrustship),
            other => Err(Error::InvalidConfig(format!("unknown env kind {other:?}"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EnvConfig {
    pub kind: EnvKind,
    pub dt: f64,
    pub v_max: f64,
    pub accel_max: f64,
    pub turn_max: f64,
    pub drag: f64,
}

impl EnvConfig {
    pub fn new(kind: EnvKind) -> Self {
        EnvConfig {
            kind,
            dt: 0.1,
            v_max: 1.0,
            accel_max: 1.0,
            turn_max: 1.5,
            drag: 0.1,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let positive = [
            ("dt", self.dt),
            ("v_max", self.v_max),
            ("accel_max", self.accel_max),
            ("turn_max", self.turn_max),
            ("drag", self.drag),
        ];
        for (name, v) in positive {
            if !(v.is_finite() && v > 0.0) {
                return Err(Error::InvalidConfig(format!(
                    "{name} must be positive and finite, got {v}"
                )));
            }
        }
        if self.drag * self.dt >= 1.0 {
            return Err(Error::InvalidConfig(format!(
                "drag*dt must be < 1 for stable integration, got {}",
                self.drag * self.dt
            )));
        }
        Ok(())
    }
}

/// Motion component of the state: the part of s beyond pose.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Motion {
    /// Forward speed along the heading (unicycle).
    Speed(f64),
    /// World-frame velocity (thrust ship).
    Velocity(Vec2),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EnvState {
    pub position: Vec2,
    /// Always normalized into [0, 2π).
    pub heading: f64,
    pub motion: Motion,
    pub step_index: u64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Action {
    pub thrust: f64,
    pub steer: f64,
}

impl Action {
    pub fn new(thrust: f64, steer: f64) -> Self {
        Action { thrust, steer }
    }

    /// Both components forced into [-1, 1]; applied on entry to env_step.
    pub fn clamped(self) -> Self {
        Action {
            thrust: self.thrust.clamp(-1.0, 1.0),
            steer: self.steer.clamp(-1.0, 1.0),
        }
    }
}

/// Normalize an angle into [0, 2π). rem_euclid can round up to exactly TAU
/// for tiny negative inputs, so fold that back to zero.
pub fn wrap_angle(theta: f64) -> f64 {
    let t = theta.rem_euclid(TAU);
    if t >= TAU {
        0.0
    } else {
        t
    }
}

pub fn env_reset(cfg: &EnvConfig, position: Vec2, heading: f64) -> Result<EnvState> {
    if !position.is_finite() || !heading.is_finite() {
        return Err(Error::Numeric(format!(
            "non-finite reset arguments: position {position:?}, heading {heading}"
        )));
    }
    let motion = match cfg.kind {
        EnvKind::Unicycle => Motion::Speed(0.0),
        EnvKind::Thrustship => Motion::Velocity(Vec2::ZERO),
    };
    Ok(EnvState {
        position,
        heading: wrap_angle(heading),
        motion,
        step_index: 0,
    })
}

/// Advance one step. Returns the next state and the one-step goal (the
/// position actually reached), which is what the goal-relabelled dataset
/// stores for this transition.
pub fn env_step(cfg: &EnvConfig, state: &EnvState, action: Action) -> (EnvState, Vec2) {
    let a = action.clamped();
    let heading = wrap_angle(state.heading + cfg.turn_max * a.steer * cfg.dt);
    let dir = Vec2::from_angle(heading);
    let (motion, position) = match state.motion {
        Motion::Speed(speed) => {
            let s = (speed + cfg.accel_max * a.thrust * cfg.dt - cfg.drag * speed * cfg.dt)
                .clamp(0.0, cfg.v_max);
            (Motion::Speed(s), state.position + dir * (s * cfg.dt))
        }
        Motion::Velocity(vel) => {
            let mut v = vel * (1.0 - cfg.drag * cfg.dt) + dir * (cfg.accel_max * a.thrust * cfg.dt);
            let n = v.norm();
            if n > cfg.v_max {
                v = v * (cfg.v_max / n);
            }
            (Motion::Velocity(v), state.position + v * cfg.dt)
        }
    };
    let next = EnvState {
        position,
        heading,
        motion,
        step_index: state.step_index + 1,
    };
    (next, position)
}

/// Rotate a state by `theta` about `pivot`: position orbits the pivot, the
/// heading (and any velocity vector) turns with it, scalar speed is invariant.
pub fn rotate_state(state: &EnvState, theta: f64, pivot: Vec2) -> EnvState {
    if theta == 0.0 {
        return *state;
    }
    let motion = match state.motion {
        Motion::Speed(s) => Motion::Speed(s),
        Motion::Velocity(v) => Motion::Velocity(v.rotated(theta)),
    };
    EnvState {
        position: state.position.rotated_about(theta, pivot),
        heading: wrap_angle(state.heading + theta),
        motion,
        step_index: state.step_index,
    }
}

/// The observation fed to policies. Absolute position is deliberately
/// excluded (translation invariance); orientation is included so rotated
/// states remain distinguishable.
pub fn observe(state: &EnvState) -> Vec<f64> {
    let (s, c) = state.heading.sin_cos();
    match state.motion {
        Motion::Speed(speed) => vec![c, s, speed],
        Motion::Velocity(v) => vec![c, s, v.x, v.y],
    }
}

/// Unit vector from the agent toward the goal position.
pub fn goal_input(state: &EnvState, goal_position: Vec2) -> Result<Vec2> {
    let d = goal_position - state.position;
    let n = d.norm();
    if n == 0.0 {
        return Err(Error::DegenerateGoal);
    }
    Ok(d * (1.0 / n))
}
