//! CSV emission for metrics, loss traces, and multigoal traces. Every file
//! opens with a provenance comment tying it back to the manifest chain;
//! values print in Rust's shortest round-trip form, so identical runs emit
//! identical bytes and readers recover the exact floats.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use equigoal_core::evaluate::{MetricsSummary, QualTrace};
use equigoal_core::learn::TrainTrace;

use crate::failure::{CliResult, Failure};

fn write_text(path: &Path, text: &str) -> CliResult<()> {
    if let Some(dir) = path.parent() {
        fs::create_dir_all(dir)
            .map_err(|e| Failure::config(format!("cannot create {}: {e}", dir.display())))?;
    }
    fs::write(path, text)
        .map_err(|e| Failure::config(format!("cannot write {}: {e}", path.display())))
}

pub fn write_loss_csv(path: &Path, trace: &TrainTrace, provenance: &str) -> CliResult<()> {
    let mut out = format!("# provenance {provenance}\nepoch,total,l_enc,l_pi\n");
    for (i, r) in trace.epochs.iter().enumerate() {
        writeln!(out, "{},{},{},{}", i + 1, r.total, r.l_enc, r.l_pi).expect("string write");
    }
    write_text(path, &out)
}

pub fn write_episodes_csv(path: &Path, summary: &MetricsSummary, provenance: &str) -> CliResult<()> {
    let mut out = format!(
        "# provenance {provenance}\nseed,episode,goal_x,goal_y,init_heading,closest_distance,reached,steps\n"
    );
    for r in &summary.episode_records {
        writeln!(
            out,
            "{},{},{},{},{},{},{},{}",
            r.seed, r.episode, r.goal.x, r.goal.y, r.init_heading, r.closest_distance, r.reached, r.steps_taken
        )
        .expect("string write");
    }
    write_text(path, &out)
}

/// Table 1 shape: one row per evaluated method.
pub fn write_summary_csv(
    path: &Path,
    rows: &[(String, f64, f64)],
    provenance: &str,
) -> CliResult<()> {
    let mut out = format!("# provenance {provenance}\nmethod,mean,std\n");
    for (method, mean, std) in rows {
        writeln!(out, "{method},{mean},{std}").expect("string write");
    }
    write_text(path, &out)
}

/// Long-form source data for distance-distribution (violin) plots.
pub fn write_violin_csv(
    path: &Path,
    per_method: &[(String, &MetricsSummary)],
    provenance: &str,
) -> CliResult<()> {
    let mut out = format!("# provenance {provenance}\nmethod,closest_distance\n");
    for (method, summary) in per_method {
        for r in &summary.episode_records {
            writeln!(out, "{method},{}", r.closest_distance).expect("string write");
        }
    }
    write_text(path, &out)
}

pub fn write_multigoal_csv(path: &Path, trace: &QualTrace, provenance: &str) -> CliResult<()> {
    let mut out = format!("# provenance {provenance}\nstep,x,y,heading,goal_x,goal_y\n");
    for (i, s) in trace.steps.iter().enumerate() {
        writeln!(
            out,
            "{},{},{},{},{},{}",
            i + 1,
            s.position.x,
            s.position.y,
            s.heading,
            s.goal.x,
            s.goal.y
        )
        .expect("string write");
    }
    write_text(path, &out)
}
