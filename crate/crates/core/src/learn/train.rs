//! Minibatch Adam trainers. Single-threaded and seed-deterministic: epoch
//! shuffles come from (seed, epoch) streams, and all per-sample work runs in
//! preallocated workspaces.

use rand::seq::SliceRandom;

use crate::augment::PairedDataset;
use crate::error::{Error, Result};
use crate::nnmath::{AdamState, GradBundle, MlpParams, Workspace};
use crate::rng::{stream_rng, Domain};

use super::sets::{PairSet, TrainingSet};
use super::{EquivModel, GcpModel, LossRecord, TrainConfig, TrainTrace};

fn shuffled_order(n: usize, seed: u64, epoch: u64) -> Vec<u32> {
    let mut order: Vec<u32> = (0..n as u32).collect();
    order.shuffle(&mut stream_rng(seed, epoch, Domain::Shuffle));
    order
}

/// Behavior cloning: minimize the mean squared action error over shuffled
/// minibatches. Works the same on a plain batch or a flattened augmented one.
pub fn train_gcp(set: &TrainingSet, cfg: &TrainConfig) -> Result<(GcpModel, TrainTrace)> {
    cfg.validate()?;
    if set.is_empty() {
        return Err(Error::EmptyDataset("no training rows".to_string()));
    }
    let mut model = GcpModel::init(set.input_dim() - 2, cfg)?;
    let mut adam = AdamState::new(&model.params, cfg.lr);
    let mut ws = Workspace::for_params(&model.params);
    let mut grads = GradBundle::zeros(&model.params);
    let mut d_out = [0.0f64; 2];
    let mut trace = TrainTrace::default();

    let n = set.len();
    for epoch in 0..cfg.epochs {
        let order = shuffled_order(n, cfg.seed, epoch as u64);
        let mut epoch_sum = 0.0;
        for chunk in order.chunks(cfg.minibatch) {
            let m = chunk.len() as f64;
            grads.reset();
            let mut sum = 0.0;
            for &i in chunk {
                let i = i as usize;
                model.params.forward_ws(set.input(i), &mut ws);
                let target = set.action(i);
                {
                    let out = ws.output();
                    let d0 = out[0] - target[0];
                    let d1 = out[1] - target[1];
                    sum += d0 * d0 + d1 * d1;
                    d_out[0] = 2.0 / m * d0;
                    d_out[1] = 2.0 / m * d1;
                }
                model.params.backward_ws(&mut ws, &d_out, &mut grads);
            }
            adam.update(&mut model.params, &grads);
            let l_pi = sum / m;
            trace.minibatches.push(LossRecord {
                total: l_pi,
                l_enc: 0.0,
                l_pi,
            });
            epoch_sum += sum;
        }
        let l_pi = epoch_sum / n as f64;
        trace.epochs.push(LossRecord {
            total: l_pi,
            l_enc: 0.0,
            l_pi,
        });
    }
    if !model.params.all_finite() {
        return Err(Error::Numeric("training diverged to non-finite weights".to_string()));
    }
    Ok((model, trace))
}

/// Scratch buffers for one equivalence-pair gradient step.
struct PairKernel {
    enc_ws: Workspace,
    enc_ws_twin: Workspace,
    pol_ws: Workspace,
    h: Vec<f64>,
    ht: Vec<f64>,
    hbar: Vec<f64>,
    d_out: [f64; 2],
    d_h: Vec<f64>,
    d_ht: Vec<f64>,
}

impl PairKernel {
    fn new(model: &EquivModel) -> Self {
        let k = model.embed_dim();
        PairKernel {
            enc_ws: Workspace::for_params(&model.encoder),
            enc_ws_twin: Workspace::for_params(&model.encoder),
            pol_ws: Workspace::for_params(&model.policy),
            h: vec![0.0; k],
            ht: vec![0.0; k],
            hbar: vec![0.0; k],
            d_out: [0.0; 2],
            d_h: vec![0.0; k],
            d_ht: vec![0.0; k],
        }
    }

    /// Forward + backward for one pair, scaled as 1/m of its minibatch.
    /// Returns (l_enc, l_pi) for the pair; gradients accumulate into the
    /// bundles — the twin branch reuses the same encoder store, so both
    /// encoder passes land in `enc_grads`.
    #[allow(clippy::too_many_arguments)]
    fn accumulate(
        &mut self,
        encoder: &MlpParams,
        policy: &MlpParams,
        x: &[f64],
        xt: &[f64],
        target: &[f64],
        lambda: f64,
        inv_m: f64,
        enc_grads: &mut GradBundle,
        pol_grads: &mut GradBundle,
    ) -> (f64, f64) {
        encoder.forward_ws(x, &mut self.enc_ws);
        self.h.copy_from_slice(self.enc_ws.output());
        encoder.forward_ws(xt, &mut self.enc_ws_twin);
        self.ht.copy_from_slice(self.enc_ws_twin.output());

        let k = self.h.len();
        let mut l_enc = 0.0;
        for i in 0..k {
            let d = self.h[i] - self.ht[i];
            l_enc += d * d;
            self.hbar[i] = 0.5 * (self.h[i] + self.ht[i]);
        }

        policy.forward_ws(&self.hbar, &mut self.pol_ws);
        let mut l_pi = 0.0;
        {
            let out = self.pol_ws.output();
            for j in 0..2 {
                let d = out[j] - target[j];
                l_pi += d * d;
                self.d_out[j] = (1.0 - lambda) * 2.0 * inv_m * d;
            }
        }
        policy.backward_ws(&mut self.pol_ws, &self.d_out, pol_grads);

        let q = self.pol_ws.input_grad();
        #[allow(clippy::needless_range_loop)] // five slices share the index
        for i in 0..k {
            let e = lambda * 2.0 * inv_m * (self.h[i] - self.ht[i]);
            self.d_h[i] = e + 0.5 * q[i];
            self.d_ht[i] = -e + 0.5 * q[i];
        }
        encoder.backward_ws(&mut self.enc_ws, &self.d_h, enc_grads);
        encoder.backward_ws(&mut self.enc_ws_twin, &self.d_ht, enc_grads);
        (l_enc, l_pi)
    }
}

/// Train the Siamese encoder and policy head jointly on aligned pairs with
/// the weighted loss λ·l_enc + (1−λ)·l_pi, logging the decomposition per
/// minibatch and per epoch.
pub fn train_equivalence(paired: &PairedDataset, cfg: &TrainConfig) -> Result<(EquivModel, TrainTrace)> {
    let pairs = PairSet::from_paired(paired)?;
    train_equivalence_set(&pairs, cfg)
}

pub(crate) fn train_equivalence_set(
    pairs: &PairSet,
    cfg: &TrainConfig,
) -> Result<(EquivModel, TrainTrace)> {
    cfg.validate()?;
    if pairs.is_empty() {
        return Err(Error::EmptyDataset("no training pairs".to_string()));
    }
    let mut model = EquivModel::init(pairs.input_dim() - 2, cfg)?;
    let mut adam_enc = AdamState::new(&model.encoder, cfg.lr);
    let mut adam_pol = AdamState::new(&model.policy, cfg.lr);
    let mut enc_grads = GradBundle::zeros(&model.encoder);
    let mut pol_grads = GradBundle::zeros(&model.policy);
    let mut kernel = PairKernel::new(&model);
    let mut trace = TrainTrace::default();
    let lambda = cfg.lambda;

    let n = pairs.len();
    for epoch in 0..cfg.epochs {
        let order = shuffled_order(n, cfg.seed, epoch as u64);
        let mut epoch_enc = 0.0;
        let mut epoch_pi = 0.0;
        for chunk in order.chunks(cfg.minibatch) {
            let m = chunk.len() as f64;
            let inv_m = 1.0 / m;
            enc_grads.reset();
            pol_grads.reset();
            let mut sum_enc = 0.0;
            let mut sum_pi = 0.0;
            for &i in chunk {
                let i = i as usize;
                let (le, lp) = kernel.accumulate(
                    &model.encoder,
                    &model.policy,
                    pairs.input(i),
                    pairs.twin_input(i),
                    pairs.action(i),
                    lambda,
                    inv_m,
                    &mut enc_grads,
                    &mut pol_grads,
                );
                sum_enc += le;
                sum_pi += lp;
            }
            adam_enc.update(&mut model.encoder, &enc_grads);
            adam_pol.update(&mut model.policy, &pol_grads);
            let l_enc = sum_enc / m;
            let l_pi = sum_pi / m;
            trace.minibatches.push(LossRecord {
                total: lambda * l_enc + (1.0 - lambda) * l_pi,
                l_enc,
                l_pi,
            });
            epoch_enc += sum_enc;
            epoch_pi += sum_pi;
        }
        let l_enc = epoch_enc / n as f64;
        let l_pi = epoch_pi / n as f64;
        trace.epochs.push(LossRecord {
            total: lambda * l_enc + (1.0 - lambda) * l_pi,
            l_enc,
            l_pi,
        });
    }
    if !model.encoder.all_finite() || !model.policy.all_finite() {
        return Err(Error::Numeric("training diverged to non-finite weights".to_string()));
    }
    Ok((model, trace))
}
