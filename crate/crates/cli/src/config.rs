//! JSON experiment configuration.

use std::f64::consts::PI;
use std::path::{Path, PathBuf};

use kleinvortex::integrator::{CoverMode, CoverState, IntegratorOptions};
use kleinvortex::reduction::{ReducedParams, GRID_RESOLUTION, MASK_RADIUS};
use kleinvortex::{Error, KleinState, Vortex};
use serde::{Deserialize, Serialize};

use crate::error::{io_error, CliError, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Surface {
    /// Integrate on the torus cover and report chart positions.
    #[default]
    Klein,
    TorusCover,
    CylinderCover,
}

impl Surface {
    pub fn cover_mode(self) -> CoverMode {
        match self {
            Surface::Klein | Surface::TorusCover => CoverMode::Torus,
            Surface::CylinderCover => CoverMode::Cylinder,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct FieldSpec {
    /// Nodes per axis.
    pub resolution: usize,
    /// 1 for the chart, 4 for a 2 × 2 block of charts.
    pub copies: u8,
}

impl Default for FieldSpec {
    fn default() -> Self {
        FieldSpec { resolution: 101, copies: 1 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct LevelSpec {
    pub gamma1: f64,
    pub gamma2: f64,
    pub momentum: f64,
    pub s_range: (f64, f64),
    pub y_range: (f64, f64),
    /// Nodes per axis.
    pub resolution: usize,
    pub mask_radius: f64,
    /// Nodes of the exported Robin profile.
    pub robin_points: usize,
}

impl Default for LevelSpec {
    fn default() -> Self {
        LevelSpec {
            gamma1: 1.0,
            gamma2: 0.6,
            momentum: 0.3,
            s_range: (-PI, PI),
            y_range: (-PI, PI),
            resolution: GRID_RESOLUTION,
            mask_radius: MASK_RADIUS,
            robin_points: 401,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ScanSpec {
    pub gamma2: f64,
    pub points: usize,
    /// `(y₁, y₂)` heights of the probe and of the vortex.
    pub pairs: Vec<(f64, f64)>,
}

impl Default for ScanSpec {
    fn default() -> Self {
        ScanSpec { gamma2: 1.0, points: 1024, pairs: vec![(0.5, 0.3), (0.7, -0.5), (0.4, -0.1)] }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ExperimentConfig {
    pub surface: Surface,
    pub vortices: Vec<Vortex>,
    pub t_end: f64,
    pub integrator: IntegratorOptions,
    pub field: FieldSpec,
    pub levels: LevelSpec,
    pub scan: ScanSpec,
    pub seed: u64,
    /// Output directory; the `--out` flag takes precedence.
    pub out: Option<PathBuf>,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        ExperimentConfig {
            surface: Surface::default(),
            vortices: Vec::new(),
            t_end: 10.0,
            integrator: IntegratorOptions::default(),
            field: FieldSpec::default(),
            levels: LevelSpec::default(),
            scan: ScanSpec::default(),
            seed: 0,
            out: None,
        }
    }
}

impl ExperimentConfig {
    pub fn parse(text: &str) -> Result<Self> {
        let de = &mut serde_json::Deserializer::from_str(text);
        serde_path_to_error::deserialize(de).map_err(|e| {
            let path = e.path().to_string();
            let inner = e.into_inner();
            if path == "." {
                CliError::Config(inner.to_string())
            } else {
                CliError::Config(format!("field `{path}`: {inner}"))
            }
        })
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(io_error(path))?;
        Self::parse(&text).map_err(|e| match e {
            CliError::Config(msg) => CliError::Config(format!("{}: {msg}", path.display())),
            other => other,
        })
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("config serializes")
    }

    /// The configured vortices as a bottle state; collisions are reported
    /// with the offending pair.
    pub fn klein_state(&self) -> Result<KleinState> {
        if self.vortices.is_empty() {
            return Err(CliError::Config("no vortices given".into()));
        }
        KleinState::new(self.vortices.clone()).map_err(|e| match e {
            Error::Collision { first, second, kind, distance } => CliError::Config(format!(
                "vortices {first} and {second} collide ({kind} copy, separation {distance:e})"
            )),
            other => CliError::Config(other.to_string()),
        })
    }

    pub fn cover_state(&self) -> Result<CoverState> {
        Ok(CoverState::lift(&self.klein_state()?, self.surface.cover_mode()))
    }

    pub fn reduced_params(&self) -> Result<ReducedParams> {
        let l = &self.levels;
        ReducedParams::new(l.gamma1, l.gamma2, l.momentum).map_err(|e| CliError::Config(e.to_string()))
    }

    /// Checks everything that does not depend on the subcommand.
    pub fn validate(&self) -> Result<()> {
        if !(self.t_end.is_finite() && self.t_end >= 0.0) {
            return Err(CliError::Config(format!("t_end must be finite and non-negative, got {}", self.t_end)));
        }
        self.integrator.validate().map_err(|e| CliError::Config(format!("integrator: {e}")))?;
        if !matches!(self.field.copies, 1 | 4) {
            return Err(CliError::Config(format!("field.copies must be 1 or 4, got {}", self.field.copies)));
        }
        if self.field.resolution < 2 || self.levels.resolution < 2 {
            return Err(CliError::Config("grid resolutions need at least 2 nodes".into()));
        }
        Ok(())
    }
}
