//! Adaptive integration of vortex trajectories on a cover of the bottle.
//!
//! Positions are advanced on a lift with fixed strengths. At every right-hand
//! side evaluation the lift is folded into the chart, velocities are computed
//! there, and vortices that were folded through `μ` get their vertical
//! velocity reversed on the way back.
//!
//! The stepper is the Dormand–Prince 5(4) pair with its 4th-order dense output.

use std::f64::consts::{FRAC_PI_2, PI};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::dynamics::velocities_of;
use crate::error::{CollisionKind, Error, Result};
use crate::hamiltonian::klein_energy;
use crate::state::{closest_pair, fold_to_chart, wrap_if_outside, KleinState, Vortex};

/// Which cover the lift lives on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CoverMode {
    /// The `2π × π` torus: coordinates are wrapped after every step and each
    /// vertical wrap is logged as a jump of `C`.
    Torus,
    /// The infinite cylinder of height `π`: coordinates are never wrapped, so
    /// horizontal drift accumulates in `x`.
    Cylinder,
}

/// Vortices on a cover, with strengths fixed along the lift.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CoverState {
    pub mode: CoverMode,
    pub vortices: Vec<Vortex>,
}

impl CoverState {
    /// Lifts a bottle configuration (every chart representative is a valid lift).
    pub fn lift(state: &KleinState, mode: CoverMode) -> Self {
        CoverState { mode, vortices: state.vortices().to_vec() }
    }

    /// Same lift with every strength negated; integrating it runs time backwards.
    pub fn reversed(&self) -> Self {
        let vortices = self.vortices.iter().map(|v| Vortex::new(v.x, v.y, -v.gamma)).collect();
        CoverState { mode: self.mode, vortices }
    }
}

/// Folds a lift into the chart `[-π/2, π/2)²`.
pub fn project_to_klein(cover: &CoverState) -> KleinState {
    KleinState::from_vortices_unchecked(cover.vortices.iter().map(|&v| fold_to_chart(v).0).collect())
}

/// Step control and sampling. Missing fields deserialize to the defaults.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct IntegratorOptions {
    pub rtol: f64,
    pub atol: f64,
    pub h_init: f64,
    pub h_max: f64,
    pub h_min: f64,
    /// Spacing of the dense-output samples.
    pub sample_interval: f64,
    pub max_steps: usize,
    /// Integration stops once two vortices (or a vortex and an image) are
    /// closer than this.
    pub stop_distance: f64,
}

impl Default for IntegratorOptions {
    fn default() -> Self {
        IntegratorOptions {
            rtol: 1e-10,
            atol: 1e-12,
            h_init: 1e-3,
            h_max: 1.0,
            h_min: 1e-14,
            sample_interval: 0.1,
            max_steps: 10_000_000,
            stop_distance: 1e-4,
        }
    }
}

impl IntegratorOptions {
    pub fn validate(&self) -> Result<()> {
        let positive = [
            ("rtol", self.rtol),
            ("atol", self.atol),
            ("h_init", self.h_init),
            ("h_max", self.h_max),
            ("h_min", self.h_min),
            ("sample_interval", self.sample_interval),
            ("stop_distance", self.stop_distance),
        ];
        for (name, v) in positive {
            if !(v.is_finite() && v > 0.0) {
                return Err(Error::InvalidInput(format!("{name} must be positive and finite, got {v}")));
            }
        }
        if self.h_min > self.h_max {
            return Err(Error::InvalidInput("h_min exceeds h_max".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrajectorySample {
    pub t: f64,
    /// Positions on the lift, with the lift's fixed strengths.
    pub lift: Vec<Vortex>,
    /// Chart positions with the strength each vortex carries there.
    pub klein: Vec<Vortex>,
    /// Velocities in the lift frame.
    pub velocities: Vec<Complex64>,
    pub hamiltonian: f64,
    /// `Σ Γ_k y_k` of the lift.
    pub momentum: f64,
    /// Size of the step the sample was interpolated from.
    pub step_size: f64,
}

/// Close approach that ended an integration.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CollisionEvent {
    pub t: f64,
    pub first: usize,
    pub second: usize,
    pub kind: CollisionKind,
    pub distance: f64,
}

/// A vertical wrap of one vortex on the torus cover.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MomentumJump {
    pub t: f64,
    pub vortex: usize,
    /// Change of `C` caused by the wrap, a multiple of `πΓ`.
    pub delta: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Trajectory {
    pub samples: Vec<TrajectorySample>,
    pub collision: Option<CollisionEvent>,
    pub momentum_jumps: Vec<MomentumJump>,
    pub final_state: CoverState,
    pub accepted_steps: usize,
    pub rejected_steps: usize,
}

impl Trajectory {
    /// `C` of the last sample with every logged wrap undone.
    pub fn unwrapped_momentum(&self, sample: &TrajectorySample) -> f64 {
        let jumps: f64 = self.momentum_jumps.iter().filter(|j| j.t <= sample.t).map(|j| j.delta).sum();
        sample.momentum - jumps
    }
}

const A: [[f64; 6]; 7] = [
    [0.0; 6],
    [1.0 / 5.0, 0.0, 0.0, 0.0, 0.0, 0.0],
    [3.0 / 40.0, 9.0 / 40.0, 0.0, 0.0, 0.0, 0.0],
    [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0, 0.0, 0.0, 0.0],
    [19372.0 / 6561.0, -25360.0 / 2187.0, 64448.0 / 6561.0, -212.0 / 729.0, 0.0, 0.0],
    [9017.0 / 3168.0, -355.0 / 33.0, 46732.0 / 5247.0, 49.0 / 176.0, -5103.0 / 18656.0, 0.0],
    [35.0 / 384.0, 0.0, 500.0 / 1113.0, 125.0 / 192.0, -2187.0 / 6784.0, 11.0 / 84.0],
];
const E: [f64; 7] =
    [71.0 / 57600.0, 0.0, -71.0 / 16695.0, 71.0 / 1920.0, -17253.0 / 339200.0, 22.0 / 525.0, -1.0 / 40.0];
const D: [f64; 7] = [
    -12715105075.0 / 11282082432.0,
    0.0,
    87487479700.0 / 32700410799.0,
    -10690763975.0 / 1880347072.0,
    701980252875.0 / 199316789632.0,
    -1453857185.0 / 822651844.0,
    69997945.0 / 29380423.0,
];

struct Field {
    gammas: Vec<f64>,
}

impl Field {
    fn lift(&self, y: &[f64]) -> Vec<Vortex> {
        self.gammas.iter().enumerate().map(|(k, &g)| Vortex::new(y[2 * k], y[2 * k + 1], g)).collect()
    }

    fn eval(&self, y: &[f64]) -> Result<(Vec<f64>, Vec<Complex64>)> {
        let (chart, flipped): (Vec<Vortex>, Vec<bool>) = self.lift(y).into_iter().map(fold_to_chart).unzip();
        let mut vel = velocities_of(&chart)?;
        for (w, &f) in vel.iter_mut().zip(&flipped) {
            if f {
                *w = w.conj();
            }
        }
        let flat = vel.iter().flat_map(|w| [w.re, w.im]).collect();
        Ok((flat, vel))
    }

    fn sample(&self, t: f64, y: &[f64], step_size: f64) -> Result<TrajectorySample> {
        let lift = self.lift(y);
        let klein: Vec<Vortex> = lift.iter().map(|&v| fold_to_chart(v).0).collect();
        let (_, velocities) = self.eval(y)?;
        Ok(TrajectorySample {
            t,
            hamiltonian: klein_energy(&klein)?,
            momentum: lift.iter().map(|v| v.gamma * v.y).sum(),
            lift,
            klein,
            velocities,
            step_size,
        })
    }
}

fn axpy_stages(y: &[f64], h: f64, k: &[Vec<f64>], coeffs: &[f64]) -> Vec<f64> {
    let mut out = y.to_vec();
    for (kj, &a) in k.iter().zip(coeffs) {
        if a != 0.0 {
            for (o, v) in out.iter_mut().zip(kj) {
                *o += h * a * v;
            }
        }
    }
    out
}

/// Integrates from `t = 0` to `t_end`, sampling every `sample_interval` and at `t_end`.
///
/// A close approach below `stop_distance` ends the run early and is reported
/// in [`Trajectory::collision`]; the samples up to that time are kept.
pub fn integrate(initial: &CoverState, t_end: f64, opts: &IntegratorOptions) -> Result<Trajectory> {
    opts.validate()?;
    if !(t_end.is_finite() && t_end >= 0.0) {
        return Err(Error::InvalidInput(format!("t_end must be finite and non-negative, got {t_end}")));
    }
    if initial.vortices.iter().any(|v| !(v.x.is_finite() && v.y.is_finite() && v.gamma.is_finite())) {
        return Err(Error::InvalidInput("non-finite initial state".into()));
    }
    let field = Field { gammas: initial.vortices.iter().map(|v| v.gamma).collect() };
    let mut y: Vec<f64> = initial.vortices.iter().flat_map(|v| [v.x, v.y]).collect();
    let n = y.len();

    let mut t = 0.0;
    let mut h = opts.h_init.min(opts.h_max);
    let mut samples = vec![field.sample(t, &y, h)?];
    let mut next_sample = 1usize;
    let mut jumps = Vec::new();
    let mut collision = None;
    let (mut accepted, mut rejected) = (0usize, 0usize);
    let mut facold = 1e-4f64;
    let (safe, beta, fac_min, fac_max) = (0.9, 0.04, 0.2, 10.0);

    if let Some(ev) = approach(&field.lift(&y), opts.stop_distance, t) {
        collision = Some(ev);
    }
    let mut k0 = if collision.is_none() { field.eval(&y)?.0 } else { Vec::new() };

    while collision.is_none() && t < t_end {
        if accepted + rejected >= opts.max_steps {
            return Err(Error::TooManySteps(opts.max_steps));
        }
        let last = t + h >= t_end || (t_end - (t + h)) < 1e-12 * t_end.max(1.0);
        let h_step = if last { t_end - t } else { h };

        let stages = (|| -> Result<(Vec<Vec<f64>>, Vec<f64>)> {
            let mut k = vec![k0.clone()];
            for s in 1..7 {
                let ys = axpy_stages(&y, h_step, &k, &A[s][..s]);
                k.push(field.eval(&ys)?.0);
            }
            let y_new = axpy_stages(&y, h_step, &k[..6], &A[6][..6]);
            Ok((k, y_new))
        })();

        let (k, y_new) = match stages {
            Ok(v) => v,
            Err(Error::Pole { .. }) => {
                // a stage landed on a singularity: retry with a smaller step
                rejected += 1;
                h = h_step * 0.5;
                if h < opts.h_min {
                    return Err(Error::StepUnderflow { t, h });
                }
                continue;
            }
            Err(e) => return Err(e),
        };

        let mut err = 0.0;
        for i in 0..n {
            let e: f64 = (0..7).map(|s| E[s] * k[s][i]).sum::<f64>() * h_step;
            let sk = opts.atol + opts.rtol * y[i].abs().max(y_new[i].abs());
            err += (e / sk).powi(2);
        }
        let err = (err / n.max(1) as f64).sqrt();

        let fac11 = err.powf(0.2 - beta * 0.75);
        if err <= 1.0 {
            let fac = (fac11 / facold.powf(beta) / safe).clamp(1.0 / fac_max, 1.0 / fac_min);
            facold = err.max(1e-4);
            accepted += 1;

            let t_new = if last { t_end } else { t + h_step };
            // dense output coefficients
            let mut cont = vec![[0.0f64; 5]; n];
            for i in 0..n {
                let diff = y_new[i] - y[i];
                let bspl = h_step * k[0][i] - diff;
                cont[i] = [
                    y[i],
                    diff,
                    bspl,
                    diff - h_step * k[6][i] - bspl,
                    h_step * (0..7).map(|s| D[s] * k[s][i]).sum::<f64>(),
                ];
            }
            loop {
                let ts = next_sample as f64 * opts.sample_interval;
                if ts > t_new || (t_end - ts) < 1e-12 * t_end.max(1.0) {
                    break;
                }
                let th = (ts - t) / h_step;
                let th1 = 1.0 - th;
                let ys: Vec<f64> =
                    cont.iter().map(|c| c[0] + th * (c[1] + th1 * (c[2] + th * (c[3] + th1 * c[4])))).collect();
                samples.push(field.sample(ts, &ys, h_step)?);
                next_sample += 1;
            }

            t = t_new;
            y = y_new;
            k0 = k[6].clone();
            if initial.mode == CoverMode::Torus {
                let mut moved = false;
                for (idx, g) in field.gammas.iter().enumerate() {
                    let (xi, yi) = (2 * idx, 2 * idx + 1);
                    let x_w = wrap_if_outside(y[xi], -FRAC_PI_2, 2.0 * PI);
                    let y_w = wrap_if_outside(y[yi], -FRAC_PI_2, PI);
                    if y_w != y[yi] {
                        jumps.push(MomentumJump { t, vortex: idx, delta: g * (y_w - y[yi]) });
                    }
                    moved |= x_w != y[xi] || y_w != y[yi];
                    y[xi] = x_w;
                    y[yi] = y_w;
                }
                if moved {
                    k0 = field.eval(&y)?.0;
                }
            }
            if t >= t_end {
                samples.push(field.sample(t, &y, h_step)?);
            }
            collision = approach(&field.lift(&y), opts.stop_distance, t);
            if collision.is_some() && t < t_end {
                samples.push(field.sample(t, &y, h_step)?);
            }
            h = (h_step / fac).min(opts.h_max);
        } else {
            rejected += 1;
            h = h_step / (1.0 / fac_min).min(fac11 / safe);
        }
        if h < opts.h_min && t < t_end && collision.is_none() {
            return Err(Error::StepUnderflow { t, h });
        }
    }

    Ok(Trajectory {
        samples,
        collision,
        momentum_jumps: jumps,
        final_state: CoverState { mode: initial.mode, vortices: field.lift(&y) },
        accepted_steps: accepted,
        rejected_steps: rejected,
    })
}

fn approach(lift: &[Vortex], stop: f64, t: f64) -> Option<CollisionEvent> {
    closest_pair(lift).and_then(|(first, second, distance, kind)| {
        (distance < stop).then_some(CollisionEvent { t, first, second, kind, distance })
    })
}

/// Horizontal distance travelled by vortex `k`, `∫ ẋ_k dt`, by the trapezoid
/// rule over the samples.
pub fn translational_component(samples: &[TrajectorySample], k: usize) -> Result<f64> {
    if samples.len() < 2 {
        return Err(Error::InvalidInput("need at least two samples".into()));
    }
    if samples.iter().any(|s| k >= s.velocities.len()) {
        return Err(Error::InvalidInput(format!("vortex index {k} out of range")));
    }
    Ok(samples.windows(2).map(|w| 0.5 * (w[1].t - w[0].t) * (w[0].velocities[k].re + w[1].velocities[k].re)).sum())
}
