use std::f64::consts::FRAC_PI_2;
use std::path::Path;

use kleinvortex::hamiltonian::{robin_klein, robin_klein_derivative};
use kleinvortex::reduction::{
    critical_points_on_lines, divergence_sinks, level_set_grid, singular_points_in_window, CriticalPoint,
    ReducedParams, ReducedPoint, SingularPoint,
};
use kleinvortex::roots::linspace;
use serde::Serialize;

use crate::config::ExperimentConfig;
use crate::error::Result;
use crate::output::{num, write_json, CsvOut};

pub const GRID_FILE: &str = "levels.csv";
pub const POINTS_FILE: &str = "levels.json";
pub const ROBIN_FILE: &str = "robin.csv";
pub const GRID_HEADER: [&str; 4] = ["s", "y1", "value", "masked"];
pub const ROBIN_HEADER: [&str; 3] = ["y", "robin", "robin_derivative"];

/// A family of singular points, or the reason it does not exist.
#[derive(Debug, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Family {
    Points(Vec<SingularPoint>),
    Error(String),
}

#[derive(Debug, Serialize)]
pub struct LevelsReport {
    pub params: ReducedParams,
    pub s_range: (f64, f64),
    pub y_range: (f64, f64),
    pub resolution: usize,
    pub mask_radius: f64,
    pub direct_family: Family,
    pub image_family: Family,
    pub divergence_sinks: Vec<ReducedPoint>,
    pub critical_points: Vec<CriticalPoint>,
}

fn family(params: &ReducedParams, y_range: (f64, f64), direct: bool) -> Family {
    let fam = kleinvortex::reduction::singular_points(params, 0..=0);
    let probe = if direct { fam.direct } else { fam.image };
    match probe {
        Err(e) => Family::Error(e.to_string()),
        Ok(_) => Family::Points(
            singular_points_in_window(params, y_range.0, y_range.1)
                .into_iter()
                .filter(|p| (p.kind == kleinvortex::CollisionKind::Direct) == direct)
                .collect(),
        ),
    }
}

pub fn run(cfg: &ExperimentConfig, out: &Path) -> Result<LevelsReport> {
    let l = &cfg.levels;
    let params = cfg.reduced_params()?;
    let grid = level_set_grid(&params, l.s_range, l.y_range, (l.resolution, l.resolution), l.mask_radius)?;

    let mut csv = CsvOut::create(out, GRID_FILE, &GRID_HEADER.map(String::from))?;
    for (iy, &y) in grid.y1.iter().enumerate() {
        for (is, &s) in grid.s.iter().enumerate() {
            let idx = iy * grid.s.len() + is;
            let value = if grid.masked[idx] { "NaN".to_string() } else { num(grid.values[idx]) };
            csv.row([num(s), num(y), value, u8::from(grid.masked[idx]).to_string()])?;
        }
    }
    csv.finish()?;

    let mut robin = CsvOut::create(out, ROBIN_FILE, &ROBIN_HEADER.map(String::from))?;
    for y in linspace(-FRAC_PI_2, FRAC_PI_2, l.robin_points.max(2)) {
        robin.row([num(y), num(robin_klein(y)?), num(robin_klein_derivative(y)?)])?;
    }
    robin.finish()?;

    let direct_family = family(&params, l.y_range, true);
    let image_family = family(&params, l.y_range, false);
    for f in [&direct_family, &image_family] {
        if let Family::Error(msg) = f {
            eprintln!("warning: {msg}");
        }
    }
    let report = LevelsReport {
        params,
        s_range: l.s_range,
        y_range: l.y_range,
        resolution: l.resolution,
        mask_radius: l.mask_radius,
        direct_family,
        image_family,
        divergence_sinks: divergence_sinks(&grid, 1e-2 * (params.gamma1 * params.gamma2).abs()),
        critical_points: critical_points_on_lines(&params, l.y_range)?,
    };
    write_json(out, POINTS_FILE, &report)?;
    Ok(report)
}
