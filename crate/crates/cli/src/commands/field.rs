use std::f64::consts::FRAC_PI_2;
use std::path::Path;

use kleinvortex::dynamics::probe_field;
use kleinvortex::Complex64;
use serde::Serialize;

use crate::config::ExperimentConfig;
use crate::error::Result;
use crate::output::{num, write_json, CsvOut};

pub const FIELD_FILE: &str = "field.csv";
pub const META_FILE: &str = "field.json";
pub const HEADER: [&str; 5] = ["x", "y", "u", "v", "singular_flag"];

#[derive(Debug, Serialize)]
pub struct FieldMeta {
    pub copies: u8,
    pub resolution: usize,
    pub x_range: (f64, f64),
    pub y_range: (f64, f64),
    /// Value written to `u` and `v` where `singular_flag` is 1.
    pub singular_sentinel: &'static str,
    pub singular_points: usize,
}

/// Inclusive axis range covered by `copies` charts.
pub fn axis_range(copies: u8) -> (f64, f64) {
    if copies == 4 {
        (-FRAC_PI_2, 3.0 * FRAC_PI_2)
    } else {
        (-FRAC_PI_2, FRAC_PI_2)
    }
}

fn axis(range: (f64, f64), n: usize) -> Vec<f64> {
    let h = (range.1 - range.0) / (n - 1) as f64;
    (0..n).map(|i| if i == n - 1 { range.1 } else { range.0 + h * i as f64 }).collect()
}

pub fn run(cfg: &ExperimentConfig, out: &Path) -> Result<FieldMeta> {
    let state = cfg.klein_state()?;
    let range = axis_range(cfg.field.copies);
    let xs = axis(range, cfg.field.resolution);
    let points: Vec<Complex64> = xs.iter().flat_map(|&y| xs.iter().map(move |&x| Complex64::new(x, y))).collect();
    let field = probe_field(&state, &points)?;

    let mut csv = CsvOut::create(out, FIELD_FILE, &HEADER.map(String::from))?;
    let mut singular = 0;
    for (p, w) in points.iter().zip(&field) {
        let (u, v, flag) = match w {
            Some(w) => (num(w.re), num(w.im), "0"),
            None => {
                singular += 1;
                ("NaN".into(), "NaN".into(), "1")
            }
        };
        csv.row([num(p.re), num(p.im), u, v, flag.into()])?;
    }
    csv.finish()?;

    let meta = FieldMeta {
        copies: cfg.field.copies,
        resolution: cfg.field.resolution,
        x_range: range,
        y_range: range,
        singular_sentinel: "NaN",
        singular_points: singular,
    };
    write_json(out, META_FILE, &meta)?;
    Ok(meta)
}
