use std::path::Path;

use kleinvortex::integrator::{
    integrate, translational_component, CollisionEvent, CoverState, MomentumJump, Trajectory,
};
use kleinvortex::state::fold_to_chart;
use kleinvortex::Vortex;
use serde::Serialize;

use crate::config::{ExperimentConfig, Surface};
use crate::error::{CliError, Result};
use crate::output::{num, write_json, CsvOut};

pub const TRAJECTORY_FILE: &str = "trajectory.csv";
pub const SUMMARY_FILE: &str = "summary.json";

pub fn header(n: usize) -> Vec<String> {
    let mut h = vec!["t".to_string()];
    for k in 0..n {
        for name in ["x_lift", "y_lift", "x_klein", "y_klein", "gamma_current"] {
            h.push(format!("{name}_{k}"));
        }
    }
    h.extend(["H", "C", "step_size"].map(String::from));
    h
}

#[derive(Debug, Serialize)]
pub struct Summary {
    pub surface: Surface,
    pub t_start: f64,
    pub t_end: f64,
    pub completed: bool,
    pub samples: usize,
    pub accepted_steps: usize,
    pub rejected_steps: usize,
    pub initial_hamiltonian: f64,
    pub initial_momentum: f64,
    pub max_energy_drift: f64,
    pub max_relative_energy_drift: f64,
    /// Drift of `C` once the logged wrap jumps are undone.
    pub max_momentum_drift: f64,
    pub collision: Option<CollisionEvent>,
    pub momentum_jumps: Vec<MomentumJump>,
    pub translational_components: Vec<f64>,
}

/// Starting point read back from the last row of a trajectory CSV.
pub fn resume_point(path: &Path) -> Result<(f64, Vec<Vortex>)> {
    let bad = |msg: String| CliError::Config(format!("{}: {msg}", path.display()));
    let mut reader = csv::Reader::from_path(path).map_err(|e| bad(e.to_string()))?;
    let header = reader.headers().map_err(|e| bad(e.to_string()))?.clone();
    if header.len() < 4 || (header.len() - 4) % 5 != 0 {
        return Err(bad("not a trajectory file".into()));
    }
    let n = (header.len() - 4) / 5;
    if !header.iter().eq(self::header(n).iter().map(String::as_str)) {
        return Err(bad("unexpected trajectory columns".into()));
    }
    let mut last = None;
    for record in reader.records() {
        last = Some(record.map_err(|e| bad(e.to_string()))?);
    }
    let last = last.ok_or_else(|| bad("no rows".into()))?;
    let field =
        |i: usize| -> Result<f64> { last[i].parse::<f64>().map_err(|e| bad(format!("column {}: {e}", &header[i]))) };
    let t0 = field(0)?;
    let mut vortices = Vec::with_capacity(n);
    for k in 0..n {
        let base = 1 + 5 * k;
        let (x, y, gamma_current) = (field(base)?, field(base + 1)?, field(base + 4)?);
        // the chart strength is flipped when the lift sits on the second sheet
        let (_, flipped) = fold_to_chart(Vortex::new(x, y, gamma_current));
        vortices.push(Vortex::new(x, y, if flipped { -gamma_current } else { gamma_current }));
    }
    Ok((t0, vortices))
}

pub fn run(cfg: &ExperimentConfig, out: &Path, resume: Option<&Path>) -> Result<Summary> {
    let (t0, start) = match resume {
        Some(path) => {
            let (t0, vortices) = resume_point(path)?;
            (t0, CoverState { mode: cfg.surface.cover_mode(), vortices })
        }
        None => (0.0, cfg.cover_state()?),
    };
    if cfg.t_end < t0 {
        return Err(CliError::Config(format!("t_end = {} precedes the resume time {t0}", cfg.t_end)));
    }
    let traj = integrate(&start, cfg.t_end - t0, &cfg.integrator)?;

    let n = start.vortices.len();
    let mut csv = CsvOut::create(out, TRAJECTORY_FILE, &header(n))?;
    for s in &traj.samples {
        let mut row = vec![num(t0 + s.t)];
        for (l, k) in s.lift.iter().zip(&s.klein) {
            row.extend([num(l.x), num(l.y), num(k.x), num(k.y), num(k.gamma)]);
        }
        row.extend([num(s.hamiltonian), num(s.momentum), num(s.step_size)]);
        csv.row(row)?;
    }
    csv.finish()?;

    let summary = summarize(cfg.surface, t0, &traj)?;
    write_json(out, SUMMARY_FILE, &summary)?;
    if let Some(c) = &summary.collision {
        return Err(CliError::Failed(format!(
            "vortices {} and {} approached to {:e} ({} copy) at t = {}; outputs written to {}",
            c.first,
            c.second,
            c.distance,
            c.kind,
            c.t,
            out.display()
        )));
    }
    Ok(summary)
}

fn summarize(surface: Surface, t0: f64, traj: &Trajectory) -> Result<Summary> {
    let first = &traj.samples[0];
    let (h0, c0) = (first.hamiltonian, first.momentum);
    let max_energy_drift = traj.samples.iter().map(|s| (s.hamiltonian - h0).abs()).fold(0.0, f64::max);
    let max_momentum_drift = traj.samples.iter().map(|s| (traj.unwrapped_momentum(s) - c0).abs()).fold(0.0, f64::max);
    let translational_components = if traj.samples.len() >= 2 {
        (0..first.lift.len()).map(|k| translational_component(&traj.samples, k)).collect::<kleinvortex::Result<_>>()?
    } else {
        vec![0.0; first.lift.len()]
    };
    let last = traj.samples.last().expect("at least one sample");
    let collision = traj.collision.map(|mut c| {
        c.t += t0;
        c
    });
    let momentum_jumps = traj
        .momentum_jumps
        .iter()
        .cloned()
        .map(|mut j| {
            j.t += t0;
            j
        })
        .collect();
    Ok(Summary {
        surface,
        t_start: t0,
        t_end: t0 + last.t,
        completed: collision.is_none(),
        samples: traj.samples.len(),
        accepted_steps: traj.accepted_steps,
        rejected_steps: traj.rejected_steps,
        initial_hamiltonian: h0,
        initial_momentum: c0,
        max_energy_drift,
        max_relative_energy_drift: max_energy_drift / (1.0 + h0.abs()),
        max_momentum_drift,
        collision,
        momentum_jumps,
        translational_components,
    })
}
