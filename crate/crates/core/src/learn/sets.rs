//! Flattened training sets: transitions (or aligned transition pairs) packed
//! into contiguous input/action buffers ready for minibatch indexing.

use crate::augment::PairedDataset;
use crate::collect::{Dataset, Transition};
use crate::error::{Error, Result};

use super::build_input;

/// Action vector width (thrust, steer).
pub(crate) const ACT_DIM: usize = 2;

/// Packed (input, action) rows for behavior cloning. Inputs are
/// [obs ‖ goal unit vector]; rows whose transition had zero displacement are
/// skipped and counted, since they define no goal direction.
#[derive(Debug, Clone, PartialEq)]
pub struct TrainingSet {
    dim: usize,
    xs: Vec<f64>,
    acts: Vec<f64>,
    pub skipped_degenerate: usize,
}

impl TrainingSet {
    pub fn len(&self) -> usize {
        self.acts.len() / ACT_DIM
    }

    pub fn is_empty(&self) -> bool {
        self.acts.is_empty()
    }

    pub fn input_dim(&self) -> usize {
        self.dim
    }

    pub fn input(&self, i: usize) -> &[f64] {
        &self.xs[i * self.dim..(i + 1) * self.dim]
    }

    pub fn action(&self, i: usize) -> &[f64] {
        &self.acts[i * ACT_DIM..(i + 1) * ACT_DIM]
    }

    fn with_dim(dim: usize) -> Self {
        TrainingSet {
            dim,
            xs: Vec::new(),
            acts: Vec::new(),
            skipped_degenerate: 0,
        }
    }

    fn push(&mut self, t: &Transition) {
        match build_input(t, t.one_step_goal) {
            Ok(x) => {
                debug_assert_eq!(x.len(), self.dim);
                self.xs.extend_from_slice(&x);
                self.acts.push(t.action.thrust);
                self.acts.push(t.action.steer);
            }
            Err(Error::DegenerateGoal) => self.skipped_degenerate += 1,
            Err(_) => unreachable!("build_input only fails on degenerate goals"),
        }
    }

    fn finish(self, what: &str) -> Result<Self> {
        if self.is_empty() {
            return Err(Error::EmptyDataset(format!(
                "{what}: every transition was degenerate"
            )));
        }
        Ok(self)
    }

    pub fn from_dataset(d: &Dataset) -> Result<Self> {
        d.validate()?;
        let mut set = Self::with_dim(d.env_config.kind.obs_dim() + 2);
        for traj in &d.trajectories {
            for t in &traj.transitions {
                set.push(t);
            }
        }
        set.finish("dataset")
    }

    /// The augmented batch flattened: base and twin transitions together,
    /// pair structure discarded.
    pub fn from_paired_flat(p: &PairedDataset) -> Result<Self> {
        let mut set = Self::from_dataset(&p.base)?;
        for twin in &p.twins {
            for t in &twin.trajectory.transitions {
                set.push(t);
            }
        }
        set.finish("paired dataset")
    }

    #[cfg(test)]
    pub(crate) fn from_raw(dim: usize, xs: Vec<f64>, acts: Vec<f64>) -> Self {
        assert_eq!(xs.len() / dim, acts.len() / ACT_DIM);
        TrainingSet {
            dim,
            xs,
            acts,
            skipped_degenerate: 0,
        }
    }
}

/// Aligned equivalent-pair rows: x from the base transition, x̃ from the twin
/// at the same step, sharing the base action. A pair is skipped if either
/// side is degenerate (rotation preserves displacement, so in practice both
/// sides are, together).
#[derive(Debug, Clone, PartialEq)]
pub struct PairSet {
    dim: usize,
    xs: Vec<f64>,
    xts: Vec<f64>,
    acts: Vec<f64>,
    pub skipped_degenerate: usize,
}

impl PairSet {
    pub fn len(&self) -> usize {
        self.acts.len() / ACT_DIM
    }

    pub fn is_empty(&self) -> bool {
        self.acts.is_empty()
    }

    pub fn input_dim(&self) -> usize {
        self.dim
    }

    pub fn input(&self, i: usize) -> &[f64] {
        &self.xs[i * self.dim..(i + 1) * self.dim]
    }

    pub fn twin_input(&self, i: usize) -> &[f64] {
        &self.xts[i * self.dim..(i + 1) * self.dim]
    }

    pub fn action(&self, i: usize) -> &[f64] {
        &self.acts[i * ACT_DIM..(i + 1) * ACT_DIM]
    }

    pub fn from_paired(p: &PairedDataset) -> Result<Self> {
        p.base.validate()?;
        let dim = p.base.env_config.kind.obs_dim() + 2;
        let mut set = PairSet {
            dim,
            xs: Vec::new(),
            xts: Vec::new(),
            acts: Vec::new(),
            skipped_degenerate: 0,
        };
        for twin in &p.twins {
            let base = p.base.trajectories.get(twin.base_index).ok_or_else(|| {
                Error::CorruptData(format!("twin points at missing base {}", twin.base_index))
            })?;
            if twin.trajectory.len() != base.len() {
                return Err(Error::CorruptData(format!(
                    "twin of base {} has {} steps, base has {}",
                    twin.base_index,
                    twin.trajectory.len(),
                    base.len()
                )));
            }
            for (tb, tt) in base
                .transitions
                .iter()
                .zip(twin.trajectory.transitions.iter())
            {
                let x = build_input(tb, tb.one_step_goal);
                let xt = build_input(tt, tt.one_step_goal);
                match (x, xt) {
                    (Ok(x), Ok(xt)) => {
                        set.xs.extend_from_slice(&x);
                        set.xts.extend_from_slice(&xt);
                        set.acts.push(tb.action.thrust);
                        set.acts.push(tb.action.steer);
                    }
                    _ => set.skipped_degenerate += 1,
                }
            }
        }
        if set.is_empty() {
            return Err(Error::EmptyDataset(
                "paired dataset: every pair was degenerate".to_string(),
            ));
        }
        Ok(set)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::augment::augment_dataset;
    use crate::collect::{collect_onpolicy, collect_random};
    use crate::env::{EnvConfig, EnvKind};

    #[test]
    fn expert_batch_flattens_without_skips() {
        // The expert always thrusts forward, so no transition is degenerate.
        let c = EnvConfig::new(EnvKind::Unicycle);
        let d = collect_onpolicy(&c, 4, 25, (0.3, 0.1), 5).unwrap();
        let set = TrainingSet::from_dataset(&d).unwrap();
        assert_eq!(set.len(), 100);
        assert_eq!(set.skipped_degenerate, 0);
        assert_eq!(set.input_dim(), 5);
        assert_eq!(set.input(0).len(), 5);
        assert_eq!(set.action(99).len(), 2);
    }

    #[test]
    fn random_unicycle_batch_skips_stalled_steps() {
        // Negative thrust at zero speed pins the unicycle in place: those
        // transitions have no goal direction and must be dropped, not imputed.
        let c = EnvConfig::new(EnvKind::Unicycle);
        let d = collect_random(&c, 20, 30, 3).unwrap();
        let set = TrainingSet::from_dataset(&d).unwrap();
        assert!(set.skipped_degenerate > 0, "expected stalled transitions");
        assert_eq!(set.len() + set.skipped_degenerate, d.total_transitions());
    }

    #[test]
    fn flattened_pairs_double_the_rows() {
        let c = EnvConfig::new(EnvKind::Thrustship);
        let d = collect_onpolicy(&c, 5, 20, (0.4, 0.1), 2).unwrap();
        let p = augment_dataset(&d, 8).unwrap();
        let flat = TrainingSet::from_paired_flat(&p).unwrap();
        assert_eq!(flat.len(), 2 * d.total_transitions());
    }

    #[test]
    fn pair_set_aligns_base_and_twin() {
        let c = EnvConfig::new(EnvKind::Thrustship);
        let d = collect_onpolicy(&c, 3, 15, (0.2, 0.2), 4).unwrap();
        let p = augment_dataset(&d, 6).unwrap();
        let pairs = PairSet::from_paired(&p).unwrap();
        assert_eq!(pairs.len(), d.total_transitions());
        // Shared action comes from the base row.
        let a = pairs.action(7);
        let base_act = p.base.trajectories[0].transitions[7].action;
        assert_eq!(a, [base_act.thrust, base_act.steer]);
        // Inputs differ (rotated) but have equal layout.
        assert_eq!(pairs.input(7).len(), pairs.twin_input(7).len());
    }

    #[test]
    fn pair_set_rejects_misaligned_twin() {
        let c = EnvConfig::new(EnvKind::Unicycle);
        let d = collect_onpolicy(&c, 2, 10, (0.1, 0.1), 1).unwrap();
        let mut p = augment_dataset(&d, 2).unwrap();
        p.twins[0].trajectory.transitions.pop();
        assert!(matches!(
            PairSet::from_paired(&p),
            Err(Error::CorruptData(_))
        ));
    }
}
