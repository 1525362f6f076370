//! Dataset files: one JSON header line followed by one JSON line per
//! transition. Streamable and diffable; float values round-trip exactly, so
//! loading a file and re-saving it reproduces the same bytes.

use std::fs;
use std::io::{BufWriter, Write as _};
use std::path::Path;

use serde::{Deserialize, Serialize};

use equigoal_core::augment::{PairedDataset, Twin};
use equigoal_core::collect::{CollectionKind, Dataset, Trajectory, Transition};
use equigoal_core::env::{wrap_angle, EnvConfig, EnvKind, EnvState, Motion};
use equigoal_core::env::Action;
use equigoal_core::Vec2;

use crate::failure::{CliResult, Failure};

#[derive(Debug, Serialize, Deserialize)]
struct Header {
    env_config: EnvConfig,
    seed: u64,
    collection_kind: CollectionKind,
    counts: Counts,
    provenance: String,
}

#[derive(Debug, Serialize, Deserialize)]
struct Counts {
    episodes: usize,
    transitions: usize,
    twin_episodes: usize,
}

#[derive(Debug, Serialize, Deserialize)]
struct Row {
    ep: u64,
    t: usize,
    obs: Vec<f64>,
    act: [f64; 2],
    pos: [f64; 2],
    goal: [f64; 2],
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pair_of: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    theta: Option<f64>,
}

/// A dataset file holds either a plain collection or a paired (augmented) one.
#[derive(Debug)]
pub enum LoadedData {
    Plain(Dataset),
    Paired(PairedDataset),
}

impl LoadedData {
    pub fn env_config(&self) -> &EnvConfig {
        match self {
            LoadedData::Plain(d) => &d.env_config,
            LoadedData::Paired(p) => &p.base.env_config,
        }
    }

}

fn traj_rows(out: &mut Vec<Row>, traj: &Trajectory, pair_of: Option<u64>, theta: Option<f64>) {
    for (t, tr) in traj.transitions.iter().enumerate() {
        out.push(Row {
            ep: traj.episode_id,
            t,
            obs: tr.obs.clone(),
            act: [tr.action.thrust, tr.action.steer],
            pos: [tr.agent_position.x, tr.agent_position.y],
            goal: [tr.one_step_goal.x, tr.one_step_goal.y],
            pair_of,
            theta,
        });
    }
}

fn write_rows(path: &Path, header: &Header, rows: &[Row]) -> CliResult<()> {
    let file = fs::File::create(path)
        .map_err(|e| Failure::config(format!("cannot write {}: {e}", path.display())))?;
    let mut w = BufWriter::new(file);
    let emit = |w: &mut BufWriter<fs::File>, line: String| {
        writeln!(w, "{line}").map_err(|e| Failure::config(format!("write {}: {e}", path.display())))
    };
    emit(&mut w, serde_json::to_string(header).expect("header serializes"))?;
    for row in rows {
        emit(&mut w, serde_json::to_string(row).expect("row serializes"))?;
    }
    w.flush()
        .map_err(|e| Failure::config(format!("write {}: {e}", path.display())))
}

pub fn save_dataset(path: &Path, d: &Dataset, provenance: &str) -> CliResult<()> {
    let header = Header {
        env_config: d.env_config,
        seed: d.seed,
        collection_kind: d.collection_kind,
        counts: Counts {
            episodes: d.trajectories.len(),
            transitions: d.total_transitions(),
            twin_episodes: 0,
        },
        provenance: provenance.to_string(),
    };
    let mut rows = Vec::with_capacity(d.total_transitions());
    for traj in &d.trajectories {
        traj_rows(&mut rows, traj, None, None);
    }
    write_rows(path, &header, &rows)
}

pub fn save_paired(path: &Path, p: &PairedDataset, provenance: &str) -> CliResult<()> {
    let header = Header {
        env_config: p.base.env_config,
        seed: p.base.seed,
        collection_kind: p.base.collection_kind,
        counts: Counts {
            episodes: p.base.trajectories.len(),
            transitions: p.total_transitions(),
            twin_episodes: p.twins.len(),
        },
        provenance: provenance.to_string(),
    };
    let mut rows = Vec::with_capacity(p.total_transitions());
    for traj in &p.base.trajectories {
        traj_rows(&mut rows, traj, None, None);
    }
    for twin in &p.twins {
        let base_ep = p.base.trajectories[twin.base_index].episode_id;
        traj_rows(&mut rows, &twin.trajectory, Some(base_ep), Some(twin.theta));
    }
    write_rows(path, &header, &rows)
}

/// Rebuild the pre-step state of the first transition: the file stores the
/// position outright and the heading/motion inside the observation vector.
fn initial_state(kind: EnvKind, row: &Row) -> EnvState {
    let heading = wrap_angle(row.obs[1].atan2(row.obs[0]));
    let motion = match kind {
        EnvKind::Unicycle => Motion::Speed(row.obs[2]),
        EnvKind::Thrustship => Motion::Velocity(Vec2::new(row.obs[2], row.obs[3])),
    };
    EnvState {
        position: Vec2::new(row.pos[0], row.pos[1]),
        heading,
        motion,
        step_index: 0,
    }
}

struct EpisodeRows {
    ep: u64,
    pair_of: Option<u64>,
    theta: Option<f64>,
    rows: Vec<Row>,
}

impl EpisodeRows {
    fn into_trajectory(self, kind: EnvKind) -> Trajectory {
        let initial = initial_state(kind, &self.rows[0]);
        let transitions = self
            .rows
            .iter()
            .map(|r| Transition {
                obs: r.obs.clone(),
                action: Action::new(r.act[0], r.act[1]),
                one_step_goal: Vec2::new(r.goal[0], r.goal[1]),
                agent_position: Vec2::new(r.pos[0], r.pos[1]),
            })
            .collect();
        Trajectory {
            episode_id: self.ep,
            initial_state: initial,
            transitions,
        }
    }
}

pub fn load(path: &Path) -> CliResult<(LoadedData, String)> {
    let text = fs::read_to_string(path)
        .map_err(|e| Failure::data(format!("cannot read {}: {e}", path.display())))?;
    let mut lines = text.lines();
    let header_line = lines
        .next()
        .ok_or_else(|| Failure::data(format!("{}: empty file", path.display())))?;
    let header: Header = serde_json::from_str(header_line)
        .map_err(|e| Failure::data(format!("{}: bad header: {e}", path.display())))?;
    let kind = header.env_config.kind;
    let obs_dim = kind.obs_dim();

    // Group rows into episodes; rows of one episode must be contiguous with
    // in-order step indices, anything else is a corrupt file.
    let mut episodes: Vec<EpisodeRows> = Vec::new();
    let mut seen: std::collections::HashSet<u64> = std::collections::HashSet::new();
    for (lineno, line) in lines.enumerate() {
        let row: Row = serde_json::from_str(line)
            .map_err(|e| Failure::data(format!("{}:{}: bad row: {e}", path.display(), lineno + 2)))?;
        let bad = |msg: &str| Failure::data(format!("{}:{}: {msg}", path.display(), lineno + 2));
        if row.obs.len() != obs_dim {
            return Err(bad(&format!(
                "obs width {} does not match {} ({obs_dim})",
                row.obs.len(),
                kind.name()
            )));
        }
        if row.pair_of.is_some() != row.theta.is_some() {
            return Err(bad("pair_of and theta must appear together"));
        }
        let extend = matches!(episodes.last(), Some(e) if e.ep == row.ep);
        if extend {
            let ep = episodes.last_mut().expect("just matched");
            if row.t != ep.rows.len() {
                return Err(bad(&format!("expected step {}, found {}", ep.rows.len(), row.t)));
            }
            if row.pair_of != ep.pair_of || row.theta.map(f64::to_bits) != ep.theta.map(f64::to_bits)
            {
                return Err(bad("pairing fields changed mid-episode"));
            }
            ep.rows.push(row);
        } else {
            if !seen.insert(row.ep) {
                return Err(bad(&format!("episode {} appears twice", row.ep)));
            }
            if row.t != 0 {
                return Err(bad("episode does not start at step 0"));
            }
            episodes.push(EpisodeRows {
                ep: row.ep,
                pair_of: row.pair_of,
                theta: row.theta,
                rows: vec![row],
            });
        }
    }

    let mut base_trajs = Vec::new();
    let mut twins = Vec::new();
    for ep in episodes {
        match (ep.pair_of, ep.theta) {
            (None, None) => {
                if !twins.is_empty() {
                    return Err(Failure::data(format!(
                        "{}: base episode {} appears after twin episodes",
                        path.display(),
                        ep.ep
                    )));
                }
                base_trajs.push(ep.into_trajectory(kind));
            }
            (Some(parent), Some(theta)) => {
                let base_index = base_trajs
                    .iter()
                    .position(|t: &Trajectory| t.episode_id == parent)
                    .ok_or_else(|| {
                        Failure::data(format!(
                            "{}: twin episode {} references unknown base {parent}",
                            path.display(),
                            ep.ep
                        ))
                    })?;
                twins.push(Twin {
                    base_index,
                    theta,
                    trajectory: ep.into_trajectory(kind),
                });
            }
            _ => unreachable!("row-level check keeps the fields together"),
        }
    }

    let transitions: usize = base_trajs.iter().map(|t| t.len()).sum::<usize>()
        + twins.iter().map(|t| t.trajectory.len()).sum::<usize>();
    if base_trajs.len() != header.counts.episodes
        || twins.len() != header.counts.twin_episodes
        || transitions != header.counts.transitions
    {
        return Err(Failure::data(format!(
            "{}: header counts ({}/{}/{}) disagree with contents ({}/{}/{})",
            path.display(),
            header.counts.episodes,
            header.counts.twin_episodes,
            header.counts.transitions,
            base_trajs.len(),
            twins.len(),
            transitions,
        )));
    }

    let base = Dataset {
        env_config: header.env_config,
        seed: header.seed,
        collection_kind: header.collection_kind,
        trajectories: base_trajs,
    };
    base.validate()
        .map_err(|e| Failure::data(format!("{}: {e}", path.display())))?;
    let data = if twins.is_empty() {
        LoadedData::Plain(base)
    } else {
        LoadedData::Paired(PairedDataset { base, twins })
    };
    Ok((data, header.provenance))
}
