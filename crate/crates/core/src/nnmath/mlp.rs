//! MLP parameters, forward pass, and exact reverse-mode backward pass.
//!
//! Weight matrices are row-major `(out_dim, in_dim)`, stored flat per layer.
//! The hot paths (`forward_ws` / `backward_ws`) write into a reusable
//! [`Workspace`] and never allocate.

use rand::Rng;

use crate::error::{Error, Result};
use crate::rng::{stream_rng, Domain};

/// Parameters of a dense tanh network: `layer_dims = [in, hidden..., out]`,
/// tanh on hidden layers, linear output.
#[derive(Debug, Clone, PartialEq)]
pub struct MlpParams {
    layer_dims: Vec<usize>,
    /// weights[l] is row-major with shape (layer_dims[l+1], layer_dims[l]).
    weights: Vec<Vec<f64>>,
    biases: Vec<Vec<f64>>,
}

/// Parameter gradients shaped like an [`MlpParams`], plus the loss value of
/// the pass that produced them (zero when the caller backpropagates a raw
/// upstream gradient rather than a loss).
#[derive(Debug, Clone)]
pub struct GradBundle {
    pub weight_grads: Vec<Vec<f64>>,
    pub bias_grads: Vec<Vec<f64>>,
    pub loss_value: f64,
}

/// Reusable per-layer activation and delta buffers for one network.
#[derive(Debug, Clone)]
pub struct Workspace {
    /// acts[l] holds the activation of layer l; acts[0] is the input copy.
    acts: Vec<Vec<f64>>,
    deltas: Vec<Vec<f64>>,
}

impl MlpParams {
    /// Seeded initialization: weights uniform in (-1/sqrt(fan_in), +1/sqrt(fan_in)),
    /// biases zero. Identical seeds give bitwise-identical parameters.
    pub fn init(layer_dims: &[usize], seed: u64) -> Result<Self> {
        Self::init_stream(layer_dims, seed, 0)
    }

    /// Like [`init`](Self::init) with an explicit stream id, so several
    /// networks sharing one seed still get independent draws.
    pub fn init_stream(layer_dims: &[usize], seed: u64, stream: u64) -> Result<Self> {
        if layer_dims.len() < 2 {
            return Err(Error::InvalidConfig(format!(
                "need at least 2 layer dims, got {}",
                layer_dims.len()
            )));
        }
        if layer_dims.contains(&0) {
            return Err(Error::InvalidConfig(
                "layer dims must all be >= 1".to_string(),
            ));
        }
        let mut rng = stream_rng(seed, stream, Domain::Init);
        let mut weights = Vec::with_capacity(layer_dims.len() - 1);
        let mut biases = Vec::with_capacity(layer_dims.len() - 1);
        for l in 0..layer_dims.len() - 1 {
            let fan_in = layer_dims[l];
            let fan_out = layer_dims[l + 1];
            let limit = 1.0 / (fan_in as f64).sqrt();
            let mut w = vec![0.0; fan_in * fan_out];
            for v in w.iter_mut() {
                *v = rng.random_range(-limit..limit);
            }
            weights.push(w);
            biases.push(vec![0.0; fan_out]);
        }
        Ok(MlpParams {
            layer_dims: layer_dims.to_vec(),
            weights,
            biases,
        })
    }

    /// Construct from explicit values, validating shapes and finiteness.
    pub fn from_parts(
        layer_dims: Vec<usize>,
        weights: Vec<Vec<f64>>,
        biases: Vec<Vec<f64>>,
    ) -> Result<Self> {
        if layer_dims.len() < 2 || layer_dims.contains(&0) {
            return Err(Error::InvalidConfig("bad layer dims".to_string()));
        }
        let n_layers = layer_dims.len() - 1;
        if weights.len() != n_layers {
            return Err(Error::shape("weight matrices", n_layers, weights.len()));
        }
        if biases.len() != n_layers {
            return Err(Error::shape("bias vectors", n_layers, biases.len()));
        }
        for l in 0..n_layers {
            let expect_w = layer_dims[l] * layer_dims[l + 1];
            if weights[l].len() != expect_w {
                return Err(Error::shape("weight matrix entries", expect_w, weights[l].len()));
            }
            if biases[l].len() != layer_dims[l + 1] {
                return Err(Error::shape("bias entries", layer_dims[l + 1], biases[l].len()));
            }
            if weights[l].iter().chain(biases[l].iter()).any(|v| !v.is_finite()) {
                return Err(Error::Numeric("non-finite parameter".to_string()));
            }
        }
        Ok(MlpParams {
            layer_dims,
            weights,
            biases,
        })
    }

    pub fn layer_dims(&self) -> &[usize] {
        &self.layer_dims
    }

    pub fn input_dim(&self) -> usize {
        self.layer_dims[0]
    }

    pub fn output_dim(&self) -> usize {
        *self.layer_dims.last().unwrap()
    }

    pub fn num_layers(&self) -> usize {
        self.layer_dims.len() - 1
    }

    pub fn weights(&self) -> &[Vec<f64>] {
        &self.weights
    }

    pub fn biases(&self) -> &[Vec<f64>] {
        &self.biases
    }

    /// Mutable access to one weight entry. Test and grad-check plumbing.
    pub fn weight_mut(&mut self, layer: usize, idx: usize) -> &mut f64 {
        &mut self.weights[layer][idx]
    }

    pub fn bias_mut(&mut self, layer: usize, idx: usize) -> &mut f64 {
        &mut self.biases[layer][idx]
    }

    /// Allocating forward pass.
    pub fn forward(&self, input: &[f64]) -> Result<Vec<f64>> {
        if input.len() != self.input_dim() {
            return Err(Error::shape("mlp input", self.input_dim(), input.len()));
        }
        let mut ws = Workspace::for_params(self);
        Ok(self.forward_ws(input, &mut ws).to_vec())
    }

    /// Forward pass into a reusable workspace. Returns the output slice.
    ///
    /// Panics on input length mismatch; shape errors at this level are
    /// programmer error (callers validate once at the API boundary).
    pub fn forward_ws<'w>(&self, input: &[f64], ws: &'w mut Workspace) -> &'w [f64] {
        assert_eq!(input.len(), self.input_dim(), "mlp input dim");
        ws.acts[0].copy_from_slice(input);
        let n_layers = self.num_layers();
        for l in 0..n_layers {
            let (lo, hi) = ws.acts.split_at_mut(l + 1);
            let x = &lo[l];
            let out = &mut hi[0];
            affine_forward(&self.weights[l], &self.biases[l], x, out);
            if l + 1 < n_layers {
                for v in out.iter_mut() {
                    *v = v.tanh();
                }
            }
        }
        &ws.acts[n_layers]
    }

    /// Reverse-mode backward from `upstream` (dL/d output), using activations
    /// left in `ws` by the matching `forward_ws` call. Parameter gradients are
    /// accumulated into `grads`; dL/d input is left in `ws.input_grad()`.
    pub fn backward_ws(&self, ws: &mut Workspace, upstream: &[f64], grads: &mut GradBundle) {
        let n_layers = self.num_layers();
        assert_eq!(upstream.len(), self.output_dim(), "upstream dim");
        ws.deltas[n_layers].copy_from_slice(upstream);
        for l in (0..n_layers).rev() {
            // deltas[l+1] currently holds dL/dz for layer l (activation already applied).
            let (dlo, dhi) = ws.deltas.split_at_mut(l + 1);
            let delta = &dhi[0];
            let din = &mut dlo[l];
            affine_backward(
                &self.weights[l],
                delta,
                &ws.acts[l],
                &mut grads.weight_grads[l],
                &mut grads.bias_grads[l],
                din,
            );
            if l > 0 {
                // acts[l] is a tanh output; convert dL/d(act) to dL/dz.
                for (d, &y) in dlo[l].iter_mut().zip(ws.acts[l].iter()) {
                    *d *= 1.0 - y * y;
                }
            }
        }
    }

    /// Allocating backward pass: forward to populate activations, then
    /// backpropagate `upstream`. Returns a fresh gradient bundle.
    pub fn backward(&self, input: &[f64], upstream: &[f64]) -> Result<GradBundle> {
        if input.len() != self.input_dim() {
            return Err(Error::shape("mlp input", self.input_dim(), input.len()));
        }
        if upstream.len() != self.output_dim() {
            return Err(Error::shape(
                "upstream gradient",
                self.output_dim(),
                upstream.len(),
            ));
        }
        let mut ws = Workspace::for_params(self);
        self.forward_ws(input, &mut ws);
        let mut grads = GradBundle::zeros(self);
        self.backward_ws(&mut ws, upstream, &mut grads);
        Ok(grads)
    }

    pub fn all_finite(&self) -> bool {
        self.weights
            .iter()
            .chain(self.biases.iter())
            .all(|v| v.iter().all(|x| x.is_finite()))
    }
}

impl Workspace {
    pub fn for_params(params: &MlpParams) -> Self {
        let acts = params.layer_dims.iter().map(|&d| vec![0.0; d]).collect();
        let deltas = params.layer_dims.iter().map(|&d| vec![0.0; d]).collect();
        Workspace { acts, deltas }
    }

    /// Output of the most recent forward pass.
    pub fn output(&self) -> &[f64] {
        self.acts.last().unwrap()
    }

    /// dL/d input left by the most recent backward pass.
    pub fn input_grad(&self) -> &[f64] {
        &self.deltas[0]
    }
}

impl GradBundle {
    pub fn zeros(params: &MlpParams) -> Self {
        GradBundle {
            weight_grads: params.weights.iter().map(|w| vec![0.0; w.len()]).collect(),
            bias_grads: params.biases.iter().map(|b| vec![0.0; b.len()]).collect(),
            loss_value: 0.0,
        }
    }

    pub fn reset(&mut self) {
        for w in self.weight_grads.iter_mut() {
            w.fill(0.0);
        }
        for b in self.bias_grads.iter_mut() {
            b.fill(0.0);
        }
        self.loss_value = 0.0;
    }

    pub fn shapes_match(&self, params: &MlpParams) -> bool {
        self.weight_grads.len() == params.weights.len()
            && self.bias_grads.len() == params.biases.len()
            && self
                .weight_grads
                .iter()
                .zip(params.weights.iter())
                .all(|(g, w)| g.len() == w.len())
            && self
                .bias_grads
                .iter()
                .zip(params.biases.iter())
                .all(|(g, b)| g.len() == b.len())
    }

    pub fn all_finite(&self) -> bool {
        self.weight_grads
            .iter()
            .chain(self.bias_grads.iter())
            .all(|v| v.iter().all(|x| x.is_finite()))
            && self.loss_value.is_finite()
    }

    /// Largest absolute gradient entry.
    pub fn max_abs(&self) -> f64 {
        self.weight_grads
            .iter()
            .chain(self.bias_grads.iter())
            .flat_map(|v| v.iter())
            .fold(0.0f64, |m, &g| m.max(g.abs()))
    }
}

/// out = W x + b, W row-major (out_dim, in_dim).
fn affine_forward(w: &[f64], b: &[f64], x: &[f64], out: &mut [f64]) {
    let n = x.len();
    for (o, out_o) in out.iter_mut().enumerate() {
        let row = &w[o * n..(o + 1) * n];
        *out_o = b[o] + dot(row, x);
    }
}

/// Accumulate dW and db from delta and input activation, and produce
/// dL/d(input) in `din` (overwritten).
fn affine_backward(
    w: &[f64],
    delta: &[f64],
    x: &[f64],
    dw: &mut [f64],
    db: &mut [f64],
    din: &mut [f64],
) {
    let n = x.len();
    din.fill(0.0);
    for (o, &d) in delta.iter().enumerate() {
        db[o] += d;
        let row = &w[o * n..(o + 1) * n];
        let dw_row = &mut dw[o * n..(o + 1) * n];
        for i in 0..n {
            dw_row[i] += d * x[i];
            din[i] += d * row[i];
        }
    }
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    let mut acc = [0.0f64; 4];
    let chunks = a.len() / 4;
    for k in 0..chunks {
        let i = 4 * k;
        acc[0] += a[i] * b[i];
        acc[1] += a[i + 1] * b[i + 1];
        acc[2] += a[i + 2] * b[i + 2];
        acc[3] += a[i + 3] * b[i + 3];
    }
    let mut s = (acc[0] + acc[1]) + (acc[2] + acc[3]);
    for i in 4 * chunks..a.len() {
        s += a[i] * b[i];
    }
    s
}
