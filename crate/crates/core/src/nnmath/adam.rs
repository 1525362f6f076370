//! Adam optimizer with bias correction.

use super::mlp::{GradBundle, MlpParams};

const BETA1: f64 = 0.9;
const BETA2: f64 = 0.999;
const EPS: f64 = 1e-8;

/// First/second moment estimates for every parameter of one network.
#[derive(Debug, Clone)]
pub struct AdamState {
    lr: f64,
    step: u64,
    m_w: Vec<Vec<f64>>,
    v_w: Vec<Vec<f64>>,
    m_b: Vec<Vec<f64>>,
    v_b: Vec<Vec<f64>>,
}

impl AdamState {
    pub fn new(params: &MlpParams, lr: f64) -> Self {
        AdamState {
            lr,
            step: 0,
            m_w: params.weights().iter().map(|w| vec![0.0; w.len()]).collect(),
            v_w: params.weights().iter().map(|w| vec![0.0; w.len()]).collect(),
            m_b: params.biases().iter().map(|b| vec![0.0; b.len()]).collect(),
            v_b: params.biases().iter().map(|b| vec![0.0; b.len()]).collect(),
        }
    }

    pub fn lr(&self) -> f64 {
        self.lr
    }

    pub fn steps_taken(&self) -> u64 {
        self.step
    }

    /// One Adam update in place. `grads` must be shaped like `params`.
    pub fn update(&mut self, params: &mut MlpParams, grads: &GradBundle) {
        debug_assert!(grads.shapes_match(params));
        self.step += 1;
        let t = self.step as i32;
        let bc1 = 1.0 - BETA1.powi(t);
        let bc2 = 1.0 - BETA2.powi(t);
        for l in 0..params.num_layers() {
            step_slice(
                self.lr,
                bc1,
                bc2,
                &mut self.m_w[l],
                &mut self.v_w[l],
                &grads.weight_grads[l],
                l,
                params,
                true,
            );
            step_slice(
                self.lr,
                bc1,
                bc2,
                &mut self.m_b[l],
                &mut self.v_b[l],
                &grads.bias_grads[l],
                l,
                params,
                false,
            );
        }
    }
}

#[allow(clippy::too_many_arguments)]
fn step_slice(
    lr: f64,
    bc1: f64,
    bc2: f64,
    m: &mut [f64],
    v: &mut [f64],
    g: &[f64],
    layer: usize,
    params: &mut MlpParams,
    is_weight: bool,
) {
    for i in 0..g.len() {
        m[i] = BETA1 * m[i] + (1.0 - BETA1) * g[i];
        v[i] = BETA2 * v[i] + (1.0 - BETA2) * g[i] * g[i];
        let m_hat = m[i] / bc1;
        let v_hat = v[i] / bc2;
        let delta = lr * m_hat / (v_hat.sqrt() + EPS);
        if is_weight {
            *params.weight_mut(layer, i) -= delta;
        } else {
            *params.bias_mut(layer, i) -= delta;
        }
    }
}
