//! The two-vortex problem reduced by horizontal translation.
//!
//! With `C = Γ₁y₁ + Γ₂y₂` fixed, the energy of a pair depends only on
//! `s = x₁ - x₂` and `y₁`, since `y₂ = (C - Γ₁y₁)/Γ₂`. The reduced phase space
//! is a cylinder: `s` is `2π`-periodic, `y₁` is unbounded.

use std::f64::consts::PI;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::dynamics::check_relative_equilibrium;
use crate::error::{CollisionKind, Error, Result};
use crate::hamiltonian::{gradient_per_strength, klein_energy};
use crate::roots::{bisect, linspace, sign_change_brackets};
use crate::state::{twisted_distance, wrap, KleinState, Vortex, COLLISION_DISTANCE};

/// Default half-width of the masked neighbourhood around a singular point.
pub const MASK_RADIUS: f64 = 5e-3;
/// Default number of grid nodes per axis.
pub const GRID_RESOLUTION: usize = 512;
/// Samples per line in [`critical_points_on_lines`].
pub const LINE_SAMPLES: usize = 2048;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ReducedParams {
    pub gamma1: f64,
    pub gamma2: f64,
    /// Momentum `C = Γ₁y₁ + Γ₂y₂`.
    pub momentum: f64,
}

impl ReducedParams {
    pub fn new(gamma1: f64, gamma2: f64, momentum: f64) -> Result<Self> {
        if !(gamma1.is_finite() && gamma2.is_finite() && momentum.is_finite()) {
            return Err(Error::InvalidInput("non-finite reduced parameters".into()));
        }
        if gamma1 == 0.0 || gamma2 == 0.0 {
            return Err(Error::InvalidInput("both strengths must be non-zero".into()));
        }
        Ok(ReducedParams { gamma1, gamma2, momentum })
    }

    pub fn y2(&self, y1: f64) -> f64 {
        (self.momentum - self.gamma1 * y1) / self.gamma2
    }

    /// The pair with `x₁ = s`, `x₂ = 0`.
    pub fn vortices(&self, p: ReducedPoint) -> [Vortex; 2] {
        [Vortex::new(p.s, p.y1, self.gamma1), Vortex::new(0.0, self.y2(p.y1), self.gamma2)]
    }

    /// The pair as a validated bottle configuration.
    pub fn state(&self, p: ReducedPoint) -> Result<KleinState> {
        KleinState::new(self.vortices(p).to_vec())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ReducedPoint {
    /// `x₁ - x₂`.
    pub s: f64,
    pub y1: f64,
}

impl ReducedPoint {
    /// A point with `s` reduced into `(-π, π]`.
    pub fn new(s: f64, y1: f64) -> Self {
        ReducedPoint { s: -wrap(-s, -PI, 2.0 * PI), y1 }
    }
}

/// Reduces a two-vortex configuration.
pub fn reduce(state: &KleinState) -> Result<(ReducedParams, ReducedPoint)> {
    match state.vortices() {
        [a, b] => Ok((
            ReducedParams::new(a.gamma, b.gamma, a.gamma * a.y + b.gamma * b.y)?,
            ReducedPoint::new(a.x - b.x, a.y),
        )),
        v => Err(Error::InvalidInput(format!("reduction needs two vortices, got {}", v.len()))),
    }
}

/// Energy of the pair at reduced coordinates `p`.
pub fn reduced_ham(p: ReducedPoint, params: &ReducedParams) -> Result<f64> {
    klein_energy(&params.vortices(p))
}

/// `(∂/∂s, ∂/∂y₁)` of [`reduced_ham`].
pub fn reduced_gradient(p: ReducedPoint, params: &ReducedParams) -> Result<[f64; 2]> {
    let v = params.vortices(p);
    if twisted_distance(v[0].z(), v[1].z()).0 < COLLISION_DISTANCE {
        let (distance, kind) = twisted_distance(v[0].z(), v[1].z());
        return Err(Error::Collision { first: 0, second: 1, kind, distance });
    }
    let d1 = gradient_per_strength(&v, 0)?;
    let d2 = gradient_per_strength(&v, 1)?;
    // H_x = 2 Re ∂H/∂z̄, H_y = 2 Im ∂H/∂z̄, and ∂y₂/∂y₁ = -Γ₁/Γ₂
    let g1 = params.gamma1;
    Ok([2.0 * g1 * d1.re, 2.0 * g1 * (d1.im - d2.im)])
}

/// A closed-form point where the two vortices collide.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SingularPoint {
    pub point: ReducedPoint,
    pub k: i64,
    /// `Direct` on `s = 0`, `Image` on `s = π`.
    pub kind: CollisionKind,
}

/// Both singular families; a family whose denominator vanishes is an error.
#[derive(Debug, Clone, PartialEq)]
pub struct SingularFamilies {
    /// `s = 0`, `y₁ = (πkΓ₂ + C)/(Γ₁ + Γ₂)`.
    pub direct: Result<Vec<SingularPoint>>,
    /// `s = π`, `y₁ = (πkΓ₂ - C)/(Γ₂ - Γ₁)`.
    pub image: Result<Vec<SingularPoint>>,
}

impl SingularFamilies {
    /// Points of the non-degenerate families.
    pub fn points(&self) -> Vec<SingularPoint> {
        let mut out = Vec::new();
        for v in [&self.direct, &self.image].into_iter().flatten() {
            out.extend_from_slice(v);
        }
        out
    }
}

pub fn singular_points(params: &ReducedParams, ks: std::ops::RangeInclusive<i64>) -> SingularFamilies {
    let (g1, g2, c) = (params.gamma1, params.gamma2, params.momentum);
    let family = |den: f64, num: &dyn Fn(f64) -> f64, s: f64, kind: CollisionKind, what: &str| {
        if den == 0.0 {
            return Err(Error::Degenerate(format!("{what} vanishes")));
        }
        Ok(ks.clone().map(|k| SingularPoint { point: ReducedPoint { s, y1: num(k as f64) / den }, k, kind }).collect())
    };
    SingularFamilies {
        direct: family(g1 + g2, &|k| PI * k * g2 + c, 0.0, CollisionKind::Direct, "Γ₁ + Γ₂"),
        image: family(g2 - g1, &|k| PI * k * g2 - c, PI, CollisionKind::Image, "Γ₂ - Γ₁"),
    }
}

/// Singular points with `y₁` in `[y_lo, y_hi]`, from the non-degenerate families.
pub fn singular_points_in_window(params: &ReducedParams, y_lo: f64, y_hi: f64) -> Vec<SingularPoint> {
    let (g1, g2, c) = (params.gamma1, params.gamma2, params.momentum);
    // k as a function of y₁ for each family
    let ks = |a: f64, b: f64| {
        let (lo, hi) = (a.min(b), a.max(b));
        (lo.floor() as i64 - 1)..=(hi.ceil() as i64 + 1)
    };
    let direct_k = |y: f64| ((g1 + g2) * y - c) / (PI * g2);
    let image_k = |y: f64| ((g2 - g1) * y + c) / (PI * g2);
    let mut out = Vec::new();
    let fam_d = singular_points(params, ks(direct_k(y_lo), direct_k(y_hi))).direct;
    let fam_i = singular_points(params, ks(image_k(y_lo), image_k(y_hi))).image;
    for fam in [fam_d, fam_i].into_iter().flatten() {
        out.extend(fam.into_iter().filter(|p| (y_lo..=y_hi).contains(&p.point.y1)));
    }
    out
}

/// Samples of `Y₁(s)`, the horizontal-derivative field felt by a passive
/// probe at `(s, y₁)` from a vortex of strength `Γ₂` at `(0, y₂)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Y1Scan {
    pub s: Vec<f64>,
    /// `NaN` where the probe sits on the vortex or its image.
    pub values: Vec<f64>,
    pub flagged: Vec<bool>,
    /// Sign-change brackets; the last one may straddle `s = ±π`.
    pub sign_changes: Vec<(f64, f64)>,
}

impl Y1Scan {
    /// Indices of strict local extrema, treating the samples as periodic.
    pub fn extrema(&self) -> Vec<usize> {
        let n = self.values.len();
        (0..n)
            .filter(|&j| {
                let (a, b, c) = (self.values[(j + n - 1) % n], self.values[j], self.values[(j + 1) % n]);
                a.is_finite() && b.is_finite() && c.is_finite() && (b - a) * (c - b) < 0.0
            })
            .collect()
    }

    /// Extremum counts for `|s| < π/3`, `π/3 ≤ |s| < 2π/3` and `|s| ≥ 2π/3`.
    pub fn extremum_bands(&self) -> [usize; 3] {
        let mut bands = [0; 3];
        for j in self.extrema() {
            let a = self.s[j].abs();
            let idx = if a < PI / 3.0 {
                0
            } else if a < 2.0 * PI / 3.0 {
                1
            } else {
                2
            };
            bands[idx] += 1;
        }
        bands
    }

    /// Mean of the finite samples.
    pub fn mean(&self) -> f64 {
        let finite: Vec<f64> = self.values.iter().copied().filter(|v| v.is_finite()).collect();
        finite.iter().sum::<f64>() / finite.len().max(1) as f64
    }
}

/// Samples `Y₁ = Re((1/Γ₁) ∂H/∂z̄₁)` at `Γ₁ = 0` over `s ∈ (-π, π)`, on the
/// midpoints of `n_points` equal cells (a grid symmetric about `s = 0`).
pub fn scan_y1(y1: f64, y2: f64, gamma2: f64, n_points: usize) -> Result<Y1Scan> {
    if n_points < 64 {
        return Err(Error::InvalidInput(format!("need at least 64 points, got {n_points}")));
    }
    if !(y1.is_finite() && y2.is_finite() && gamma2.is_finite()) || gamma2 == 0.0 {
        return Err(Error::InvalidInput("scan needs finite heights and a non-zero strength".into()));
    }
    if wrap(y1 - y2, -PI / 2.0, PI).abs() < COLLISION_DISTANCE {
        return Err(Error::InvalidInput("probe and vortex heights coincide".into()));
    }
    let h = 2.0 * PI / n_points as f64;
    let s: Vec<f64> = (0..n_points).map(|j| -PI + (j as f64 + 0.5) * h).collect();
    let vortex = Vortex::new(0.0, y2, gamma2);
    let samples: Vec<Option<f64>> = s
        .par_iter()
        .map(|&sj| {
            let probe = Vortex::new(sj, y1, 0.0);
            if twisted_distance(probe.z(), vortex.z()).0 < COLLISION_DISTANCE {
                return None;
            }
            gradient_per_strength(&[probe, vortex], 0).ok().map(|d| d.re)
        })
        .collect();
    let flagged: Vec<bool> = samples.iter().map(Option::is_none).collect();
    let values: Vec<f64> = samples.iter().map(|v| v.unwrap_or(f64::NAN)).collect();
    let mut sign_changes = sign_change_brackets(&s, &values);
    let (first, last) = (values[0], values[n_points - 1]);
    if first.is_finite() && last.is_finite() && first * last < 0.0 {
        sign_changes.push((s[n_points - 1], s[n_points - 1] + h));
    }
    Ok(Y1Scan { s, values, flagged, sign_changes })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CriticalKind {
    Maximum,
    Minimum,
    Saddle,
    Degenerate,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CriticalPoint {
    pub point: ReducedPoint,
    pub kind: CriticalKind,
    pub value: f64,
    /// Norm of the full 2-D gradient at the point.
    pub gradient_norm: f64,
}

/// Second-derivative test from finite differences of the analytic gradient.
pub fn classify(p: ReducedPoint, params: &ReducedParams) -> Result<CriticalKind> {
    let h = 1e-5;
    let g = |ds: f64, dy: f64| reduced_gradient(ReducedPoint { s: p.s + ds, y1: p.y1 + dy }, params);
    let (sp, sm, yp, ym) = (g(h, 0.0)?, g(-h, 0.0)?, g(0.0, h)?, g(0.0, -h)?);
    let hss = (sp[0] - sm[0]) / (2.0 * h);
    let hyy = (yp[1] - ym[1]) / (2.0 * h);
    let hsy = 0.5 * ((sp[1] - sm[1]) + (yp[0] - ym[0])) / (2.0 * h);
    let det = hss * hyy - hsy * hsy;
    let scale = hss.abs().max(hyy.abs()).max(hsy.abs()).max(1e-300);
    Ok(if det.abs() < 1e-10 * scale * scale {
        CriticalKind::Degenerate
    } else if det < 0.0 {
        CriticalKind::Saddle
    } else if hss < 0.0 {
        CriticalKind::Maximum
    } else {
        CriticalKind::Minimum
    })
}

fn critical_point(p: ReducedPoint, params: &ReducedParams) -> Result<CriticalPoint> {
    let g = reduced_gradient(p, params)?;
    Ok(CriticalPoint {
        point: p,
        kind: classify(p, params)?,
        value: reduced_ham(p, params)?,
        gradient_norm: g[0].hypot(g[1]),
    })
}

/// Critical points on `s = 0` and `s = π` with `y₁` in the window.
///
/// `∂H/∂y₁` is sampled at [`LINE_SAMPLES`] points per line and every sign
/// change not enclosing a singular point is refined by bisection. Points that
/// cannot be evaluated (collisions) are skipped.
pub fn critical_points_on_lines(params: &ReducedParams, y_window: (f64, f64)) -> Result<Vec<CriticalPoint>> {
    let (lo, hi) = y_window;
    if !(lo.is_finite() && hi.is_finite() && lo < hi) {
        return Err(Error::InvalidInput(format!("invalid y window [{lo}, {hi}]")));
    }
    let singular = singular_points_in_window(params, lo - 1.0, hi + 1.0);
    let ys = linspace(lo, hi, LINE_SAMPLES);
    let mut out = Vec::new();
    for s in [0.0, PI] {
        let dy = |y1: f64| reduced_gradient(ReducedPoint { s, y1 }, params).map(|g| g[1]).unwrap_or(f64::NAN);
        let fs: Vec<f64> = ys.par_iter().map(|&y| dy(y)).collect();
        let line_poles: Vec<f64> = singular
            .iter()
            .filter(|p| (wrap(p.point.s - s, -PI, 2.0 * PI)).abs() < 1e-12)
            .map(|p| p.point.y1)
            .collect();
        for (a, b) in sign_change_brackets(&ys, &fs) {
            if line_poles.iter().any(|&y| (a..=b).contains(&y)) {
                continue;
            }
            let y1 = bisect(dy, a, b);
            if let Ok(cp) = critical_point(ReducedPoint { s, y1 }, params) {
                out.push(cp);
            }
        }
    }
    Ok(out)
}

/// Whether a critical point is a rigidly translating pair, at tolerance `tol`.
pub fn is_relative_equilibrium(p: ReducedPoint, params: &ReducedParams, tol: f64) -> Result<bool> {
    Ok(check_relative_equilibrium(&params.state(p)?, tol)?.is_equilibrium)
}

/// [`reduced_ham`] sampled on a rectangle, rows indexed by `y₁`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LevelGrid {
    pub s: Vec<f64>,
    pub y1: Vec<f64>,
    /// Row-major, `values[iy * s.len() + is]`; `NaN` where masked.
    pub values: Vec<f64>,
    /// Nodes within `mask_radius` of a singular point, or not evaluable.
    pub masked: Vec<bool>,
    pub mask_radius: f64,
}

impl LevelGrid {
    pub fn at(&self, iy: usize, is: usize) -> f64 {
        self.values[iy * self.s.len() + is]
    }

    pub fn ds(&self) -> f64 {
        self.s[1] - self.s[0]
    }

    pub fn dy(&self) -> f64 {
        self.y1[1] - self.y1[0]
    }
}

fn check_range(name: &str, r: (f64, f64)) -> Result<()> {
    if r.0.is_finite() && r.1.is_finite() && r.0 < r.1 {
        Ok(())
    } else {
        Err(Error::InvalidInput(format!("invalid {name} range [{}, {}]", r.0, r.1)))
    }
}

/// Samples [`reduced_ham`] on an inclusive `resolution.0 × resolution.1` grid.
pub fn level_set_grid(
    params: &ReducedParams,
    s_range: (f64, f64),
    y_range: (f64, f64),
    resolution: (usize, usize),
    mask_radius: f64,
) -> Result<LevelGrid> {
    check_range("s", s_range)?;
    check_range("y1", y_range)?;
    if resolution.0 < 2 || resolution.1 < 2 {
        return Err(Error::InvalidInput("grid needs at least 2 nodes per axis".into()));
    }
    if !(mask_radius.is_finite() && mask_radius >= 0.0) {
        return Err(Error::InvalidInput(format!("invalid mask radius {mask_radius}")));
    }
    let s = linspace(s_range.0, s_range.1, resolution.0);
    let y1 = linspace(y_range.0, y_range.1, resolution.1);
    let singular = singular_points_in_window(params, y_range.0 - mask_radius, y_range.1 + mask_radius);
    let near_singular = |sv: f64, yv: f64| {
        singular.iter().any(|p| {
            let ds = wrap(sv - p.point.s, -PI, 2.0 * PI);
            ds.hypot(yv - p.point.y1) <= mask_radius
        })
    };
    let rows: Vec<Vec<(f64, bool)>> = y1
        .par_iter()
        .map(|&yv| {
            s.iter()
                .map(|&sv| {
                    if near_singular(sv, yv) {
                        return (f64::NAN, true);
                    }
                    match reduced_ham(ReducedPoint { s: sv, y1: yv }, params) {
                        Ok(v) => (v, false),
                        Err(_) => (f64::NAN, true),
                    }
                })
                .collect()
        })
        .collect();
    let (values, masked) = rows.into_iter().flatten().unzip();
    Ok(LevelGrid { s, y1, values, masked, mask_radius })
}

impl LevelGrid {
    /// Whether the `s` axis spans exactly one period, so that the last column
    /// repeats the first.
    pub fn is_periodic_in_s(&self) -> bool {
        let span = self.s[self.s.len() - 1] - self.s[0];
        (span - 2.0 * PI).abs() < 1e-12
    }

    /// Flat indices of the 8 neighbours of a node, wrapping in `s` on
    /// periodic grids; `None` on the non-periodic border.
    fn neighbours(&self, iy: usize, is: usize) -> Option<[usize; 8]> {
        let (ns, ny) = (self.s.len(), self.y1.len());
        if iy == 0 || iy == ny - 1 {
            return None;
        }
        let periodic = self.is_periodic_in_s();
        let (left, right) = if periodic {
            // column ns - 1 duplicates column 0
            let m = ns - 1;
            if is == m {
                return None;
            }
            ((is + m - 1) % m, (is + 1) % m)
        } else {
            if is == 0 || is == ns - 1 {
                return None;
            }
            (is - 1, is + 1)
        };
        let cols = [left, is, right];
        let mut out = [0; 8];
        let mut n = 0;
        for dy in [iy - 1, iy, iy + 1] {
            for &c in &cols {
                if dy == iy && c == is {
                    continue;
                }
                out[n] = dy * ns + c;
                n += 1;
            }
        }
        Some(out)
    }
}

/// Nodes where the grid diverges: 8-neighbour extrema standing out from
/// the mean of their neighbours by at least `min_excess`, plus masked nodes.
/// Adjacent flagged nodes are merged and one representative per cluster is
/// returned.
///
/// A logarithmic singularity makes its nearest node stand out by a fraction of
/// `|Γ₁Γ₂|/2π`, while a smooth extremum stands out only by `O(h²)`.
pub fn divergence_sinks(grid: &LevelGrid, min_excess: f64) -> Vec<ReducedPoint> {
    let (ns, ny) = (grid.s.len(), grid.y1.len());
    let score: Vec<f64> = (0..ns * ny)
        .map(|idx| {
            let (iy, is) = (idx / ns, idx % ns);
            let c = grid.values[idx];
            let nb = match grid.neighbours(iy, is) {
                Some(nb) => nb,
                None => return 0.0,
            };
            if grid.masked[idx] {
                return f64::INFINITY;
            }
            let vals = nb.map(|j| grid.values[j]);
            if vals.iter().any(|v| !v.is_finite()) {
                return 0.0;
            }
            // ties occur when a singular line falls midway between columns
            let is_max = vals.iter().all(|&v| v <= c);
            let is_min = vals.iter().all(|&v| v >= c);
            let excess = (c - vals.iter().sum::<f64>() / 8.0).abs();
            if (is_max || is_min) && excess >= min_excess {
                excess
            } else {
                0.0
            }
        })
        .collect();

    let mut seen = vec![false; ns * ny];
    let mut sinks = Vec::new();
    for start in 0..ns * ny {
        if seen[start] || score[start] == 0.0 {
            continue;
        }
        seen[start] = true;
        let mut stack = vec![start];
        let mut best = start;
        while let Some(idx) = stack.pop() {
            if score[idx] > score[best] {
                best = idx;
            }
            if let Some(nb) = grid.neighbours(idx / ns, idx % ns) {
                for j in nb {
                    if !seen[j] && score[j] > 0.0 {
                        seen[j] = true;
                        stack.push(j);
                    }
                }
            }
        }
        sinks.push(ReducedPoint { s: grid.s[best % ns], y1: grid.y1[best / ns] });
    }
    sinks
}

/// A local minimum of `|∇H|` on the grid and the result of refining it.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GradientCandidate {
    pub node: ReducedPoint,
    pub node_gradient: f64,
    /// Newton limit, if the iteration converged to `|∇H| ≤ 1e-10`.
    pub refined: Option<ReducedPoint>,
}

fn newton_refine(start: ReducedPoint, params: &ReducedParams, max_move: f64) -> Option<ReducedPoint> {
    let mut p = start;
    let h = 1e-6;
    for _ in 0..40 {
        let g = reduced_gradient(p, params).ok()?;
        if g[0].hypot(g[1]) <= 1e-10 {
            return Some(p);
        }
        let gs = |ds: f64, dy: f64| reduced_gradient(ReducedPoint { s: p.s + ds, y1: p.y1 + dy }, params);
        let (sp, sm, yp, ym) = (gs(h, 0.0).ok()?, gs(-h, 0.0).ok()?, gs(0.0, h).ok()?, gs(0.0, -h).ok()?);
        let (a, b) = ((sp[0] - sm[0]) / (2.0 * h), (yp[0] - ym[0]) / (2.0 * h));
        let (c, d) = ((sp[1] - sm[1]) / (2.0 * h), (yp[1] - ym[1]) / (2.0 * h));
        let det = a * d - b * c;
        if det == 0.0 || !det.is_finite() {
            return None;
        }
        p.s -= (d * g[0] - b * g[1]) / det;
        p.y1 -= (a * g[1] - c * g[0]) / det;
        if (p.s - start.s).hypot(p.y1 - start.y1) > max_move {
            return None;
        }
    }
    let g = reduced_gradient(p, params).ok()?;
    (g[0].hypot(g[1]) <= 1e-10).then_some(p)
}

/// Evaluates `|∇H|` at every unmasked node, keeps the 8-neighbour minima and
/// tries to refine each one to a critical point within a few cells.
pub fn gradient_scan(params: &ReducedParams, grid: &LevelGrid) -> Vec<GradientCandidate> {
    let (ns, ny) = (grid.s.len(), grid.y1.len());
    let norms: Vec<f64> = (0..ns * ny)
        .into_par_iter()
        .map(|idx| {
            if grid.masked[idx] {
                return f64::NAN;
            }
            let p = ReducedPoint { s: grid.s[idx % ns], y1: grid.y1[idx / ns] };
            reduced_gradient(p, params).map(|g| g[0].hypot(g[1])).unwrap_or(f64::NAN)
        })
        .collect();
    let cell = grid.ds().hypot(grid.dy());
    let minima: Vec<usize> = (0..ns * ny)
        .filter(|&idx| {
            let c = norms[idx];
            c.is_finite()
                && grid
                    .neighbours(idx / ns, idx % ns)
                    .is_some_and(|nb| nb.iter().all(|&j| norms[j].is_finite() && norms[j] >= c))
        })
        .collect();
    minima
        .par_iter()
        .map(|&idx| {
            let node = ReducedPoint { s: grid.s[idx % ns], y1: grid.y1[idx / ns] };
            GradientCandidate { node, node_gradient: norms[idx], refined: newton_refine(node, params, 4.0 * cell) }
        })
        .collect()
}
