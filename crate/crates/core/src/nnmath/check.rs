//! Finite-difference gradient checking and small loss helpers.

use crate::error::{Error, Result};

use super::mlp::{GradBundle, MlpParams};

/// Componentwise mean squared error: (1/n) * sum_i (a_i - b_i)^2.
pub fn mse(a: &[f64], b: &[f64]) -> f64 {
    assert_eq!(a.len(), b.len(), "mse operand lengths");
    let n = a.len() as f64;
    let mut s = 0.0;
    for (x, y) in a.iter().zip(b.iter()) {
        let d = x - y;
        s += d * d;
    }
    s / n
}

/// d mse(a, b) / d a_i = 2 (a_i - b_i) / n, written into `out`.
pub fn mse_grad(a: &[f64], b: &[f64], out: &mut [f64]) {
    assert_eq!(a.len(), b.len(), "mse operand lengths");
    assert_eq!(a.len(), out.len(), "mse grad length");
    let n = a.len() as f64;
    for i in 0..a.len() {
        out[i] = 2.0 * (a[i] - b[i]) / n;
    }
}

/// Compare an analytic gradient bundle against central finite differences of
/// `loss_fn` over every parameter of `params`.
///
/// Returns the worst relative error, |analytic - fd| / max(1, |analytic|).
/// `eps` is the central-difference half-step and must lie in (0, 1e-3].
pub fn grad_check<F>(
    params: &MlpParams,
    analytic: &GradBundle,
    mut loss_fn: F,
    eps: f64,
) -> Result<f64>
where
    F: FnMut(&MlpParams) -> f64,
{
    if !(eps > 0.0 && eps <= 1e-3) {
        return Err(Error::InvalidConfig(format!(
            "grad_check eps must be in (0, 1e-3], got {eps}"
        )));
    }
    if !analytic.shapes_match(params) {
        return Err(Error::shape(
            "gradient bundle layers",
            params.num_layers(),
            analytic.weight_grads.len(),
        ));
    }
    let mut probe = params.clone();
    let mut worst = 0.0f64;
    for l in 0..params.num_layers() {
        for i in 0..params.weights()[l].len() {
            let orig = probe.weights()[l][i];
            *probe.weight_mut(l, i) = orig + eps;
            let fp = loss_fn(&probe);
            *probe.weight_mut(l, i) = orig - eps;
            let fm = loss_fn(&probe);
            *probe.weight_mut(l, i) = orig;
            let fd = (fp - fm) / (2.0 * eps);
            let a = analytic.weight_grads[l][i];
            worst = worst.max((a - fd).abs() / a.abs().max(1.0));
        }
        for i in 0..params.biases()[l].len() {
            let orig = probe.biases()[l][i];
            *probe.bias_mut(l, i) = orig + eps;
            let fp = loss_fn(&probe);
            *probe.bias_mut(l, i) = orig - eps;
            let fm = loss_fn(&probe);
            *probe.bias_mut(l, i) = orig;
            let fd = (fp - fm) / (2.0 * eps);
            let a = analytic.bias_grads[l][i];
            worst = worst.max((a - fd).abs() / a.abs().max(1.0));
        }
    }
    Ok(worst)
}
