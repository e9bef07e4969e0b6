use std::path::Path;

use kleinvortex::reduction::scan_y1;
use serde::Serialize;

use crate::config::ExperimentConfig;
use crate::error::{CliError, Result};
use crate::output::{num, write_json, CsvOut};

pub const SCAN_FILE: &str = "y1_scan.csv";
pub const SUMMARY_FILE: &str = "y1_scan.json";
pub const HEADER: [&str; 6] = ["pair", "y1", "y2", "s", "Y1", "flagged"];

#[derive(Debug, Serialize)]
pub struct PairSummary {
    pub y1: f64,
    pub y2: f64,
    pub sign_changes: Vec<(f64, f64)>,
    pub extrema: usize,
    /// Extremum counts for `|s| < π/3`, `π/3 ≤ |s| < 2π/3` and `|s| ≥ 2π/3`.
    pub extremum_bands: [usize; 3],
    pub mean: f64,
    pub flagged: usize,
}

#[derive(Debug, Serialize)]
pub struct ScanReport {
    pub gamma2: f64,
    pub points: usize,
    pub pairs: Vec<PairSummary>,
}

pub fn run(cfg: &ExperimentConfig, out: &Path) -> Result<ScanReport> {
    let settings = &cfg.scan;
    if settings.pairs.is_empty() {
        return Err(CliError::Config("scan.pairs is empty".into()));
    }
    let mut csv = CsvOut::create(out, SCAN_FILE, &HEADER.map(String::from))?;
    let mut pairs = Vec::new();
    for (idx, &(y1, y2)) in settings.pairs.iter().enumerate() {
        let scan = scan_y1(y1, y2, settings.gamma2, settings.points)
            .map_err(|e| CliError::Config(format!("scan.pairs[{idx}]: {e}")))?;
        for ((s, v), f) in scan.s.iter().zip(&scan.values).zip(&scan.flagged) {
            let value = if *f { "NaN".to_string() } else { num(*v) };
            csv.row([idx.to_string(), num(y1), num(y2), num(*s), value, u8::from(*f).to_string()])?;
        }
        pairs.push(PairSummary {
            y1,
            y2,
            extrema: scan.extrema().len(),
            extremum_bands: scan.extremum_bands(),
            mean: scan.mean(),
            flagged: scan.flagged.iter().filter(|f| **f).count(),
            sign_changes: scan.sign_changes,
        });
    }
    csv.finish()?;
    let report = ScanReport { gamma2: settings.gamma2, points: settings.points, pairs };
    write_json(out, SUMMARY_FILE, &report)?;
    Ok(report)
}
