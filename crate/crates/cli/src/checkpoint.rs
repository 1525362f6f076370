//! Checkpoint files: JSON with every float printed at 17 significant digits
//! so parameters round-trip bit-exactly and reruns produce identical bytes.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use serde::Deserialize;

use equigoal_core::env::EnvConfig;
use equigoal_core::learn::{EquivModel, GcpModel, Policy, TrainConfig};
use equigoal_core::nnmath::MlpParams;

use crate::failure::{CliResult, Failure};

#[derive(Debug, Clone)]
pub struct CheckpointMeta {
    /// Baseline label: random | onpolicy | augmented | equivalence.
    pub method: String,
    pub env: EnvConfig,
    pub train_config: TrainConfig,
    pub provenance: String,
}

fn push_f64(out: &mut String, v: f64) {
    debug_assert!(v.is_finite(), "checkpoint floats must be finite");
    write!(out, "{v:.16e}").expect("string write");
}

fn push_f64_slice(out: &mut String, vs: &[f64]) {
    out.push('[');
    for (i, v) in vs.iter().enumerate() {
        if i > 0 {
            out.push(',');
        }
        push_f64(out, *v);
    }
    out.push(']');
}

fn push_usize_slice(out: &mut String, vs: &[usize]) {
    out.push('[');
    for (i, v) in vs.iter().enumerate() {
        if i > 0 {
            out.push(',');
        }
        write!(out, "{v}").expect("string write");
    }
    out.push(']');
}

fn push_mlp(out: &mut String, p: &MlpParams) {
    out.push_str("{\"layer_dims\":");
    push_usize_slice(out, p.layer_dims());
    out.push_str(",\"weights\":[");
    for (i, w) in p.weights().iter().enumerate() {
        if i > 0 {
            out.push(',');
        }
        push_f64_slice(out, w);
    }
    out.push_str("],\"biases\":[");
    for (i, b) in p.biases().iter().enumerate() {
        if i > 0 {
            out.push(',');
        }
        push_f64_slice(out, b);
    }
    out.push_str("]}");
}

fn push_env(out: &mut String, env: &EnvConfig) {
    write!(out, "{{\"kind\":\"{}\",\"dt\":", env.kind.name()).expect("string write");
    push_f64(out, env.dt);
    out.push_str(",\"v_max\":");
    push_f64(out, env.v_max);
    out.push_str(",\"accel_max\":");
    push_f64(out, env.accel_max);
    out.push_str(",\"turn_max\":");
    push_f64(out, env.turn_max);
    out.push_str(",\"drag\":");
    push_f64(out, env.drag);
    out.push('}');
}

fn push_train_config(out: &mut String, cfg: &TrainConfig) {
    out.push_str("{\"lambda\":");
    push_f64(out, cfg.lambda);
    write!(out, ",\"embed_dim\":{},\"lr\":", cfg.embed_dim).expect("string write");
    push_f64(out, cfg.lr);
    write!(
        out,
        ",\"minibatch\":{},\"epochs\":{},\"hidden_dims\":[{},{}],\"seed\":{}}}",
        cfg.minibatch, cfg.epochs, cfg.hidden_dims.0, cfg.hidden_dims.1, cfg.seed
    )
    .expect("string write");
}

pub fn save(path: &Path, policy: &Policy, meta: &CheckpointMeta) -> CliResult<()> {
    let mut out = String::new();
    let kind = match policy {
        Policy::Gcp(_) => "gcp",
        Policy::Equiv(_) => "equiv",
    };
    write!(
        out,
        "{{\"kind\":\"{kind}\",\"method\":\"{}\",\"provenance\":\"{}\",\"env\":",
        meta.method, meta.provenance
    )
    .expect("string write");
    push_env(&mut out, &meta.env);
    out.push_str(",\"train_config\":");
    push_train_config(&mut out, &meta.train_config);
    match policy {
        Policy::Gcp(m) => {
            out.push_str(",\"policy\":");
            push_mlp(&mut out, &m.params);
        }
        Policy::Equiv(m) => {
            out.push_str(",\"encoder\":");
            push_mlp(&mut out, &m.encoder);
            out.push_str(",\"policy\":");
            push_mlp(&mut out, &m.policy);
        }
    }
    out.push_str("}\n");
    fs::write(path, out)
        .map_err(|e| Failure::config(format!("cannot write {}: {e}", path.display())))
}

#[derive(Deserialize)]
struct MlpJson {
    layer_dims: Vec<usize>,
    weights: Vec<Vec<f64>>,
    biases: Vec<Vec<f64>>,
}

impl MlpJson {
    fn into_params(self, path: &Path) -> CliResult<MlpParams> {
        MlpParams::from_parts(self.layer_dims, self.weights, self.biases)
            .map_err(|e| Failure::data(format!("{}: {e}", path.display())))
    }
}

#[derive(Deserialize)]
struct CkptFile {
    kind: String,
    method: String,
    provenance: String,
    env: EnvConfig,
    train_config: TrainConfig,
    #[serde(default)]
    encoder: Option<MlpJson>,
    policy: MlpJson,
}

pub fn load(path: &Path) -> CliResult<(Policy, CheckpointMeta)> {
    let text = fs::read_to_string(path)
        .map_err(|e| Failure::data(format!("cannot read {}: {e}", path.display())))?;
    let file: CkptFile = serde_json::from_str(&text)
        .map_err(|e| Failure::data(format!("{}: bad checkpoint: {e}", path.display())))?;
    let bad = |msg: String| Failure::data(format!("{}: {msg}", path.display()));
    file.env.validate().map_err(|e| bad(e.to_string()))?;
    let policy = match (file.kind.as_str(), file.encoder) {
        ("gcp", None) => {
            let params = file.policy.into_params(path)?;
            Policy::Gcp(GcpModel::new(params).map_err(|e| bad(e.to_string()))?)
        }
        ("equiv", Some(enc)) => {
            let encoder = enc.into_params(path)?;
            let head = file.policy.into_params(path)?;
            Policy::Equiv(EquivModel::new(encoder, head).map_err(|e| bad(e.to_string()))?)
        }
        ("gcp", Some(_)) => return Err(bad("gcp checkpoint carries an encoder".to_string())),
        ("equiv", None) => return Err(bad("equiv checkpoint lacks an encoder".to_string())),
        (other, _) => return Err(bad(format!("unknown checkpoint kind {other:?}"))),
    };
    let expect = file.env.kind.obs_dim() + 2;
    if policy.input_dim() != expect {
        return Err(bad(format!(
            "model input width {} does not fit {} observations ({expect})",
            policy.input_dim(),
            file.env.kind.name()
        )));
    }
    Ok((
        policy,
        CheckpointMeta {
            method: file.method,
            env: file.env,
            train_config: file.train_config,
            provenance: file.provenance,
        },
    ))
}
