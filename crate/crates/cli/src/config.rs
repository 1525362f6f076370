//! Experiment configuration file: TOML tables with every field optional so a
//! minimal file (or none at all) falls back to the stock experiment. Every
//! hyperparameter is addressable by name.

use std::fs;
use std::path::Path;

use serde::Deserialize;

use equigoal_core::env::{EnvConfig, EnvKind};
use equigoal_core::evaluate::TestConfig;
use equigoal_core::learn::TrainConfig;

use crate::failure::{CliResult, Failure};

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ExperimentConfig {
    pub name: Option<String>,
    pub env: EnvSection,
    pub collect: CollectSection,
    pub train: TrainSection,
    pub test: TestSection,
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct EnvSection {
    pub kind: Option<EnvKind>,
    pub dt: Option<f64>,
    pub v_max: Option<f64>,
    pub accel_max: Option<f64>,
    pub turn_max: Option<f64>,
    pub drag: Option<f64>,
}

impl EnvSection {
    /// True when the file never mentioned the environment, in which case
    /// commands that read checkpoints take the environment from there.
    pub fn is_unset(&self) -> bool {
        self.kind.is_none()
            && self.dt.is_none()
            && self.v_max.is_none()
            && self.accel_max.is_none()
            && self.turn_max.is_none()
            && self.drag.is_none()
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct CollectSection {
    pub episodes: usize,
    pub horizon: usize,
    pub noise_start: f64,
    pub noise_end: f64,
    pub seed: u64,
}

impl Default for CollectSection {
    fn default() -> Self {
        CollectSection {
            episodes: 500,
            horizon: 200,
            noise_start: 0.5,
            noise_end: 0.05,
            seed: 0,
        }
    }
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct TrainSection {
    pub lambda: Option<f64>,
    pub embed_dim: Option<usize>,
    pub lr: Option<f64>,
    pub minibatch: Option<usize>,
    pub epochs: Option<usize>,
    pub hidden_dims: Option<(usize, usize)>,
    pub seed: Option<u64>,
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct TestSection {
    pub goal_dist_min: Option<f64>,
    pub goal_dist_max: Option<f64>,
    pub goal_angle_range: Option<f64>,
    pub max_steps: Option<usize>,
    pub reach_threshold: Option<f64>,
    pub episodes_per_seed: Option<usize>,
    pub seeds: Option<Vec<u64>>,
}

impl ExperimentConfig {
    pub fn load(path: &Path) -> CliResult<Self> {
        let text = fs::read_to_string(path)
            .map_err(|e| Failure::config(format!("cannot read {}: {e}", path.display())))?;
        toml::from_str(&text)
            .map_err(|e| Failure::config(format!("cannot parse {}: {e}", path.display())))
    }

    pub fn name(&self) -> &str {
        self.name.as_deref().unwrap_or("experiment")
    }

    pub fn env_config(&self) -> CliResult<EnvConfig> {
        let mut cfg = EnvConfig::new(self.env.kind.unwrap_or(EnvKind::Unicycle));
        if let Some(v) = self.env.dt {
            cfg.dt = v;
        }
        if let Some(v) = self.env.v_max {
            cfg.v_max = v;
        }
        if let Some(v) = self.env.accel_max {
            cfg.accel_max = v;
        }
        if let Some(v) = self.env.turn_max {
            cfg.turn_max = v;
        }
        if let Some(v) = self.env.drag {
            cfg.drag = v;
        }
        cfg.validate().map_err(Failure::config)?;
        Ok(cfg)
    }

    pub fn train_config(&self) -> CliResult<TrainConfig> {
        let mut cfg = TrainConfig::default();
        let t = &self.train;
        if let Some(v) = t.lambda {
            cfg.lambda = v;
        }
        if let Some(v) = t.embed_dim {
            cfg.embed_dim = v;
        }
        if let Some(v) = t.lr {
            cfg.lr = v;
        }
        if let Some(v) = t.minibatch {
            cfg.minibatch = v;
        }
        if let Some(v) = t.epochs {
            cfg.epochs = v;
        }
        if let Some(v) = t.hidden_dims {
            cfg.hidden_dims = v;
        }
        if let Some(v) = t.seed {
            cfg.seed = v;
        }
        cfg.validate().map_err(Failure::config)?;
        Ok(cfg)
    }

    pub fn test_config(&self) -> CliResult<TestConfig> {
        let mut cfg = TestConfig::default();
        let t = &self.test;
        if let Some(v) = t.goal_dist_min {
            cfg.goal_dist_range.0 = v;
        }
        if let Some(v) = t.goal_dist_max {
            cfg.goal_dist_range.1 = v;
        }
        if let Some(v) = t.goal_angle_range {
            cfg.goal_angle_range = v;
        }
        if let Some(v) = t.max_steps {
            cfg.max_steps = v;
        }
        if let Some(v) = t.reach_threshold {
            cfg.reach_threshold = v;
        }
        if let Some(v) = t.episodes_per_seed {
            cfg.episodes_per_seed = v;
        }
        if let Some(v) = &t.seeds {
            cfg.seeds = v.clone();
        }
        cfg.validate().map_err(Failure::config)?;
        Ok(cfg)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_config_yields_stock_experiment() {
        let cfg: ExperimentConfig = toml::from_str("").unwrap();
        let env = cfg.env_config().unwrap();
        assert_eq!(env.kind, EnvKind::Unicycle);
        assert_eq!(cfg.collect.episodes, 500);
        assert_eq!(cfg.train_config().unwrap(), TrainConfig::default());
        assert_eq!(cfg.test_config().unwrap(), TestConfig::default());
    }

    #[test]
    fn partial_tables_override_only_named_fields() {
        let cfg: ExperimentConfig = toml::from_str(
            "[env]\nkind = \"thrustship\"\ndrag = 0.2\n[train]\nepochs = 7\n[test]\nseeds = [3, 4]\n",
        )
        .unwrap();
        let env = cfg.env_config().unwrap();
        assert_eq!(env.kind, EnvKind::Thrustship);
        assert_eq!(env.drag, 0.2);
        assert_eq!(env.dt, 0.1);
        let train = cfg.train_config().unwrap();
        assert_eq!(train.epochs, 7);
        assert_eq!(train.minibatch, 512);
        assert_eq!(cfg.test_config().unwrap().seeds, vec![3, 4]);
    }

    #[test]
    fn unknown_keys_rejected() {
        assert!(toml::from_str::<ExperimentConfig>("[train]\nlerning_rate = 0.1\n").is_err());
    }

    #[test]
    fn invalid_values_rejected_on_build() {
        let cfg: ExperimentConfig = toml::from_str("[env]\ndt = -1.0\n").unwrap();
        assert!(cfg.env_config().is_err());
        let cfg: ExperimentConfig = toml::from_str("[train]\nlambda = 2.0\n").unwrap();
        assert!(cfg.train_config().is_err());
    }
}
