//! Vortex velocities on the Klein bottle.
//!
//! Each vortex moves with `Γ_k ż_k = -2i ∂H/∂z̄_k`, i.e. `Γ_k ẋ_k = ∂H/∂y_k`
//! and `Γ_k ẏ_k = -∂H/∂x_k`. A passive probe (`Γ = 0`) moves with the fluid.
//! Velocities are returned as `u + iv`.

use std::f64::consts::{FRAC_PI_2, PI};

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::hamiltonian::gradient_per_strength;
use crate::state::{twisted_distance, wrap, KleinState, Vortex, COLLISION_DISTANCE};
use crate::theta::{log_deriv_theta1, Nome};

const MINUS_2I: Complex64 = Complex64::new(0.0, -2.0);

/// Horizontal speed of a lone vortex at height `y`:
/// `ẋ = Γ/4π (i θ1'/θ1(iy - π/2) - 4y/π)`. It never moves vertically.
pub fn velocity_single(y: f64, gamma: f64) -> f64 {
    // the speed is π-periodic in y; reducing keeps the series short
    let y = wrap(y, -FRAC_PI_2, PI);
    let l = log_deriv_theta1(Complex64::new(-FRAC_PI_2, y), Nome::klein()).expect("θ1 has no zeros on Re z = -π/2");
    gamma / (4.0 * PI) * ((Complex64::i() * l).re - 4.0 * y / PI)
}

pub(crate) fn velocities_of(v: &[Vortex]) -> Result<Vec<Complex64>> {
    (0..v.len()).map(|k| Ok(MINUS_2I * gradient_per_strength(v, k)?)).collect()
}

/// Velocity of every vortex.
pub fn velocities(state: &KleinState) -> Result<Vec<Complex64>> {
    velocities_of(state.vortices())
}

fn probe_velocity(v: &[Vortex], p: Complex64) -> Result<Option<Complex64>> {
    if v.iter().any(|w| twisted_distance(p, w.z()).0 < COLLISION_DISTANCE) {
        return Ok(None);
    }
    let mut with_probe = Vec::with_capacity(v.len() + 1);
    with_probe.push(Vortex::new(p.re, p.im, 0.0));
    with_probe.extend_from_slice(v);
    Ok(Some(MINUS_2I * gradient_per_strength(&with_probe, 0)?))
}

/// Fluid velocity at each point; `None` marks points on a vortex or on one of
/// its images, where the field is singular.
pub fn probe_field(state: &KleinState, points: &[Complex64]) -> Result<Vec<Option<Complex64>>> {
    let v = state.vortices();
    points.par_iter().map(|&p| probe_velocity(v, p)).collect()
}

/// Total vertical impulse `C = Σ Γ_k y_k`.
///
/// Conserved by the flow. Independent of which sheet each vortex is described
/// on, but jumps by `±πΓ_k` when `y_k` is shifted by a vertical period.
pub fn momentum(state: &KleinState) -> f64 {
    state.vortices().iter().map(|v| v.gamma * v.y).sum()
}

/// Outcome of [`check_relative_equilibrium`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RelativeEquilibrium {
    /// Mean horizontal speed of the configuration.
    pub speed: f64,
    /// Largest `|v_k|`.
    pub max_vertical: f64,
    /// Largest deviation `|u_k - speed|`.
    pub max_spread: f64,
    pub is_equilibrium: bool,
}

/// Tests whether every vortex moves horizontally at one common speed.
pub fn check_relative_equilibrium(state: &KleinState, tol: f64) -> Result<RelativeEquilibrium> {
    let vel = velocities(state)?;
    let n = vel.len().max(1) as f64;
    let speed = vel.iter().map(|w| w.re).sum::<f64>() / n;
    let max_vertical = vel.iter().map(|w| w.im.abs()).fold(0.0, f64::max);
    let max_spread = vel.iter().map(|w| (w.re - speed).abs()).fold(0.0, f64::max);
    Ok(RelativeEquilibrium {
        speed,
        max_vertical,
        max_spread,
        is_equilibrium: max_vertical <= tol && max_spread <= tol,
    })
}
