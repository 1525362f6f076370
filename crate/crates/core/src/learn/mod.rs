//! Goal-conditioned policy learning from batch data.
//!
//! Two model families: a naïve goal-conditioned policy cloned directly from
//! (input, action) rows, and the equivalence model — a Siamese encoder whose
//! twin branches share one parameter store, trained so equivalent (state,
//! goal) pairs collapse to a common embedding that a small policy head maps
//! to actions.

mod sets;
mod train;

pub use sets::{PairSet, TrainingSet};
pub use train::{train_equivalence, train_gcp};

use serde::{Deserialize, Serialize};

use crate::collect::Transition;
use crate::env::{observe, Action, EnvState};
use crate::error::{Error, Result};
use crate::nnmath::{GradBundle, MlpParams, Workspace};
use crate::rng::{stream_rng, Domain};
use crate::vec2::Vec2;

/// Hidden sizes of the equivalence policy head π_E.
pub const EQUIV_POLICY_HIDDEN: (usize, usize) = (50, 50);

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TrainConfig {
    /// Weight λ on the embedding-coincidence term; 1−λ weighs the action term.
    pub lambda: f64,
    /// Embedding width k.
    pub embed_dim: usize,
    pub lr: f64,
    pub minibatch: usize,
    pub epochs: usize,
    /// Hidden sizes of the cloned policy and of the encoder.
    pub hidden_dims: (usize, usize),
    pub seed: u64,
}

impl Default for TrainConfig {
    fn default() -> Self {
        TrainConfig {
            lambda: 0.25,
            embed_dim: 10,
            lr: 0.001,
            minibatch: 512,
            epochs: 50,
            hidden_dims: (64, 64),
            seed: 0,
        }
    }
}

impl TrainConfig {
    pub fn validate(&self) -> Result<()> {
        if !(0.0..=1.0).contains(&self.lambda) {
            return Err(Error::InvalidConfig(format!(
                "lambda must be in [0,1], got {}",
                self.lambda
            )));
        }
        if !(self.lr.is_finite() && self.lr > 0.0) {
            return Err(Error::InvalidConfig(format!("lr must be > 0, got {}", self.lr)));
        }
        let positive = [
            ("embed_dim", self.embed_dim),
            ("minibatch", self.minibatch),
            ("epochs", self.epochs),
            ("hidden_dims.0", self.hidden_dims.0),
            ("hidden_dims.1", self.hidden_dims.1),
        ];
        for (name, v) in positive {
            if v == 0 {
                return Err(Error::InvalidConfig(format!("{name} must be >= 1")));
            }
        }
        Ok(())
    }
}

/// Behavior-cloned goal-conditioned policy: [obs ‖ goal unit vector] → action.
#[derive(Debug, Clone, PartialEq)]
pub struct GcpModel {
    pub params: MlpParams,
}

impl GcpModel {
    pub fn init(obs_dim: usize, cfg: &TrainConfig) -> Result<Self> {
        let (h1, h2) = cfg.hidden_dims;
        let params = MlpParams::init_stream(&[obs_dim + 2, h1, h2, 2], cfg.seed, 0)?;
        Ok(GcpModel { params })
    }

    pub fn new(params: MlpParams) -> Result<Self> {
        if params.output_dim() != 2 {
            return Err(Error::shape("policy output", 2, params.output_dim()));
        }
        Ok(GcpModel { params })
    }

    pub fn infer(&self, state: &EnvState, goal_position: Vec2) -> Result<Action> {
        let x = state_goal_input(state, goal_position, self.params.input_dim())?;
        let out = self.params.forward(&x)?;
        Ok(clamp_action(&out))
    }
}

/// Siamese encoder plus policy head. The encoder is a single parameter
/// store — twin branches are two forward passes through it, never a copy.
#[derive(Debug, Clone, PartialEq)]
pub struct EquivModel {
    pub encoder: MlpParams,
    pub policy: MlpParams,
}

impl EquivModel {
    pub fn init(obs_dim: usize, cfg: &TrainConfig) -> Result<Self> {
        let (h1, h2) = cfg.hidden_dims;
        let (p1, p2) = EQUIV_POLICY_HIDDEN;
        let encoder =
            MlpParams::init_stream(&[obs_dim + 2, h1, h2, cfg.embed_dim], cfg.seed, 0)?;
        let policy = MlpParams::init_stream(&[cfg.embed_dim, p1, p2, 2], cfg.seed, 1)?;
        Ok(EquivModel { encoder, policy })
    }

    pub fn new(encoder: MlpParams, policy: MlpParams) -> Result<Self> {
        if encoder.output_dim() != policy.input_dim() {
            return Err(Error::shape(
                "policy input (embedding width)",
                encoder.output_dim(),
                policy.input_dim(),
            ));
        }
        if policy.output_dim() != 2 {
            return Err(Error::shape("policy output", 2, policy.output_dim()));
        }
        Ok(EquivModel { encoder, policy })
    }

    pub fn embed_dim(&self) -> usize {
        self.encoder.output_dim()
    }

    pub fn embed(&self, x: &[f64]) -> Result<Vec<f64>> {
        self.encoder.forward(x)
    }

    /// At inference a lone (s, g) has no twin, so the policy reads h itself —
    /// once embeddings of equivalent pairs coincide, h equals the pair mean.
    pub fn infer(&self, state: &EnvState, goal_position: Vec2) -> Result<Action> {
        let x = state_goal_input(state, goal_position, self.encoder.input_dim())?;
        let h = self.encoder.forward(&x)?;
        let out = self.policy.forward(&h)?;
        Ok(clamp_action(&out))
    }

    /// Mean squared embedding distance over a pair set — the encoder loss
    /// evaluated without training, e.g. on held-out pairs.
    pub fn mean_pair_gap(&self, pairs: &PairSet) -> f64 {
        let mut ws = Workspace::for_params(&self.encoder);
        let mut h = vec![0.0; self.embed_dim()];
        let mut sum = 0.0;
        for i in 0..pairs.len() {
            self.encoder.forward_ws(pairs.input(i), &mut ws);
            h.copy_from_slice(ws.output());
            self.encoder.forward_ws(pairs.twin_input(i), &mut ws);
            sum += sq_dist(&h, ws.output());
        }
        sum / pairs.len() as f64
    }

    /// Median squared embedding distance between deliberately mismatched
    /// rows (x_i against x̃_j, i ≠ j): the contrast scale that equivalent
    /// pairs are expected to sit far below.
    pub fn median_mismatch_gap(&self, pairs: &PairSet, draws: usize, seed: u64) -> f64 {
        use rand::Rng;
        assert!(pairs.len() >= 2 && draws > 0);
        let mut rng = stream_rng(seed, 0, Domain::Eval);
        let mut ws = Workspace::for_params(&self.encoder);
        let mut h = vec![0.0; self.embed_dim()];
        let mut gaps = Vec::with_capacity(draws);
        for _ in 0..draws {
            let i = rng.random_range(0..pairs.len());
            let mut j = rng.random_range(0..pairs.len() - 1);
            if j >= i {
                j += 1;
            }
            self.encoder.forward_ws(pairs.input(i), &mut ws);
            h.copy_from_slice(ws.output());
            self.encoder.forward_ws(pairs.twin_input(j), &mut ws);
            gaps.push(sq_dist(&h, ws.output()));
        }
        gaps.sort_by(|a, b| a.partial_cmp(b).unwrap());
        gaps[gaps.len() / 2]
    }
}

/// A trained policy of either family, behind one inference surface.
#[derive(Debug, Clone, PartialEq)]
pub enum Policy {
    Gcp(GcpModel),
    Equiv(EquivModel),
}

impl Policy {
    pub fn infer_action(&self, state: &EnvState, goal_position: Vec2) -> Result<Action> {
        match self {
            Policy::Gcp(m) => m.infer(state, goal_position),
            Policy::Equiv(m) => m.infer(state, goal_position),
        }
    }

    pub fn input_dim(&self) -> usize {
        match self {
            Policy::Gcp(m) => m.params.input_dim(),
            Policy::Equiv(m) => m.encoder.input_dim(),
        }
    }
}

/// Per-minibatch (or per-epoch) loss triple. For cloned policies l_enc is 0
/// and total equals l_pi; for the equivalence model the decomposition
/// total = λ·l_enc + (1−λ)·l_pi holds exactly by construction.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LossRecord {
    pub total: f64,
    pub l_enc: f64,
    pub l_pi: f64,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct TrainTrace {
    pub epochs: Vec<LossRecord>,
    pub minibatches: Vec<LossRecord>,
}

impl TrainTrace {
    pub fn final_epoch(&self) -> Option<&LossRecord> {
        self.epochs.last()
    }
}

/// Training/inference input: [obs ‖ unit vector toward the goal]. Transitions
/// that did not move have no goal direction and yield a degenerate-goal error
/// that callers skip (and count).
pub fn build_input(t: &Transition, goal_position: Vec2) -> Result<Vec<f64>> {
    let d = goal_position - t.agent_position;
    let n = d.norm();
    if n == 0.0 {
        return Err(Error::DegenerateGoal);
    }
    let mut x = Vec::with_capacity(t.obs.len() + 2);
    x.extend_from_slice(&t.obs);
    x.push(d.x / n);
    x.push(d.y / n);
    Ok(x)
}

fn state_goal_input(state: &EnvState, goal_position: Vec2, expect_dim: usize) -> Result<Vec<f64>> {
    let obs = observe(state);
    if obs.len() + 2 != expect_dim {
        return Err(Error::EnvMismatch(format!(
            "model expects input width {expect_dim}, observation gives {}",
            obs.len() + 2
        )));
    }
    let d = goal_position - state.position;
    let n = d.norm();
    if n == 0.0 {
        return Err(Error::DegenerateGoal);
    }
    let mut x = obs;
    x.push(d.x / n);
    x.push(d.y / n);
    Ok(x)
}

fn clamp_action(out: &[f64]) -> Action {
    Action::new(out[0].clamp(-1.0, 1.0), out[1].clamp(-1.0, 1.0))
}

fn sq_dist(a: &[f64], b: &[f64]) -> f64 {
    let mut s = 0.0;
    for (x, y) in a.iter().zip(b.iter()) {
        let d = x - y;
        s += d * d;
    }
    s
}

/// Joint loss of one aligned pair: h and h̃ from two passes through the one
/// shared encoder, l_enc = ‖h−h̃‖², l_pi = ‖π_E(½(h+h̃)) − a‖², and
/// total = λ·l_enc + (1−λ)·l_pi. Minibatch values are means of these.
pub fn equivalence_loss(
    model: &EquivModel,
    x: &[f64],
    x_twin: &[f64],
    action: Action,
    lambda: f64,
) -> Result<(f64, f64, f64)> {
    if x.len() != x_twin.len() {
        return Err(Error::shape("twin input", x.len(), x_twin.len()));
    }
    if !(0.0..=1.0).contains(&lambda) {
        return Err(Error::InvalidConfig(format!("lambda {lambda} outside [0,1]")));
    }
    let h = model.encoder.forward(x)?;
    let ht = model.encoder.forward(x_twin)?;
    let hbar: Vec<f64> = h.iter().zip(ht.iter()).map(|(a, b)| 0.5 * (a + b)).collect();
    let out = model.policy.forward(&hbar)?;
    let l_enc = sq_dist(&h, &ht);
    let l_pi = sq_dist(&out, &[action.thrust, action.steer]);
    Ok((lambda * l_enc + (1.0 - lambda) * l_pi, l_enc, l_pi))
}

/// Analytic gradients of the single-pair joint loss with respect to both the
/// encoder and the policy parameters. Exists for gradient checking; the
/// trainer uses the same math on whole minibatches.
pub fn equivalence_loss_grads(
    model: &EquivModel,
    x: &[f64],
    x_twin: &[f64],
    action: Action,
    lambda: f64,
) -> Result<(GradBundle, GradBundle, f64)> {
    let k = model.embed_dim();
    let mut enc_ws = Workspace::for_params(&model.encoder);
    let mut pol_ws = Workspace::for_params(&model.policy);

    let mut h = vec![0.0; k];
    let mut ht = vec![0.0; k];
    model.encoder.forward_ws(x, &mut enc_ws);
    h.copy_from_slice(enc_ws.output());
    let mut enc_ws_twin = Workspace::for_params(&model.encoder);
    model.encoder.forward_ws(x_twin, &mut enc_ws_twin);
    ht.copy_from_slice(enc_ws_twin.output());

    let hbar: Vec<f64> = h.iter().zip(ht.iter()).map(|(a, b)| 0.5 * (a + b)).collect();
    model.policy.forward_ws(&hbar, &mut pol_ws);
    let target = [action.thrust, action.steer];
    let l_pi = sq_dist(pol_ws.output(), &target);
    let l_enc = sq_dist(&h, &ht);
    let total = lambda * l_enc + (1.0 - lambda) * l_pi;

    let d_out: Vec<f64> = pol_ws
        .output()
        .iter()
        .zip(target.iter())
        .map(|(o, a)| (1.0 - lambda) * 2.0 * (o - a))
        .collect();
    let mut pol_grads = GradBundle::zeros(&model.policy);
    model.policy.backward_ws(&mut pol_ws, &d_out, &mut pol_grads);
    pol_grads.loss_value = total;

    // d total / d h = λ·2(h−h̃) + ½·(d total / d h̄), and the mirror for h̃.
    let q = pol_ws.input_grad();
    let mut d_h = vec![0.0; k];
    let mut d_ht = vec![0.0; k];
    for i in 0..k {
        let e = lambda * 2.0 * (h[i] - ht[i]);
        d_h[i] = e + 0.5 * q[i];
        d_ht[i] = -e + 0.5 * q[i];
    }
    let mut enc_grads = GradBundle::zeros(&model.encoder);
    model.encoder.backward_ws(&mut enc_ws, &d_h, &mut enc_grads);
    model
        .encoder
        .backward_ws(&mut enc_ws_twin, &d_ht, &mut enc_grads);
    enc_grads.loss_value = total;

    Ok((enc_grads, pol_grads, total))
}
