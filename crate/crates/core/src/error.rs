use std::fmt;

use thiserror::Error;

/// Which copy of the other vortex a collision involves.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CollisionKind {
    /// Two vortices meet on the cover.
    Direct,
    /// A vortex meets the orientation-reversed copy `μ(z) = z̄ + π` of another.
    Image,
}

impl fmt::Display for CollisionKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CollisionKind::Direct => f.write_str("direct"),
            CollisionKind::Image => f.write_str("image"),
        }
    }
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("nome q = {0} outside (0, 1)")]
    NomeOutOfRange(f64),

    #[error("theta series would overflow: |Im z| = {im} too large for q = {q}")]
    ThetaOverflow { im: f64, q: f64 },

    #[error("theta series did not converge within {terms} terms")]
    ThetaNonConvergence { terms: usize },

    #[error("argument within {distance:e} of a zero of theta1")]
    Pole { distance: f64 },

    #[error("{kind} collision between vortices {first} and {second} (separation {distance:e})")]
    Collision { first: usize, second: usize, kind: CollisionKind, distance: f64 },

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("degenerate strengths: {0}")]
    Degenerate(String),

    #[error("step size underflow at t = {t} (h = {h:e})")]
    StepUnderflow { t: f64, h: f64 },

    #[error("step limit of {0} exceeded")]
    TooManySteps(usize),
}

pub type Result<T> = std::result::Result<T, Error>;
