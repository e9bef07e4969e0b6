//! Vortex configurations on the Klein bottle chart and on its covering torus.
//!
//! The chart is the square `[-π/2, π/2)²`. Its orientable double cover is the
//! `2π × π` torus with lattice `2πℤ + iπℤ`, and the deck involution is
//! `μ(z) = z̄ + π`. A vortex of strength `Γ` at `z` is the same point of the
//! bottle as a vortex of strength `-Γ` at `μ(z)`.

use std::f64::consts::{FRAC_PI_2, PI};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{CollisionKind, Error, Result};

/// Minimum separation (direct or through `μ`) accepted by the Hamiltonians.
pub const COLLISION_DISTANCE: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Vortex {
    pub x: f64,
    pub y: f64,
    /// Twisted strength: its sign is tied to the lift the coordinates describe.
    pub gamma: f64,
}

impl Vortex {
    pub fn new(x: f64, y: f64, gamma: f64) -> Self {
        Vortex { x, y, gamma }
    }

    pub fn z(&self) -> Complex64 {
        Complex64::new(self.x, self.y)
    }

    /// The same bottle point described through the other sheet.
    pub fn mu(&self) -> Self {
        Vortex::new(self.x + PI, -self.y, -self.gamma)
    }
}

/// `μ(z) = z̄ + π`.
pub fn mu(z: Complex64) -> Complex64 {
    z.conj() + PI
}

/// Reduces `v` into `[lo, lo + period)`.
pub fn wrap(v: f64, lo: f64, period: f64) -> f64 {
    let r = (v - lo).rem_euclid(period) + lo;
    // rem_euclid can round up to exactly `period`
    if r >= lo + period {
        lo
    } else {
        r
    }
}

/// Like [`wrap`], but leaves values already in range bit-identical.
pub(crate) fn wrap_if_outside(v: f64, lo: f64, period: f64) -> f64 {
    if (lo..lo + period).contains(&v) {
        v
    } else {
        wrap(v, lo, period)
    }
}

/// Smallest representative of `d` modulo the torus lattice `2πℤ + iπℤ`.
pub fn lattice_reduce(d: Complex64) -> Complex64 {
    Complex64::new(wrap(d.re, -PI, 2.0 * PI), wrap(d.im, -FRAC_PI_2, PI))
}

/// Distance between two cover points modulo the torus lattice.
pub fn torus_distance(a: Complex64, b: Complex64) -> f64 {
    lattice_reduce(a - b).norm()
}

/// Separation of two bottle points, taking the smaller of the direct and the
/// `μ`-image distances on the cover.
pub fn twisted_distance(a: Complex64, b: Complex64) -> (f64, CollisionKind) {
    let direct = torus_distance(a, b);
    let image = torus_distance(a, mu(b));
    if image < direct {
        (image, CollisionKind::Image)
    } else {
        (direct, CollisionKind::Direct)
    }
}

/// Closest pair of a configuration, by twisted distance.
pub fn closest_pair(vortices: &[Vortex]) -> Option<(usize, usize, f64, CollisionKind)> {
    let mut best: Option<(usize, usize, f64, CollisionKind)> = None;
    for i in 0..vortices.len() {
        for j in i + 1..vortices.len() {
            let (d, kind) = twisted_distance(vortices[i].z(), vortices[j].z());
            if best.is_none_or(|b| d < b.2) {
                best = Some((i, j, d, kind));
            }
        }
    }
    best
}

pub(crate) fn check_collisions(vortices: &[Vortex], threshold: f64) -> Result<()> {
    match closest_pair(vortices) {
        Some((first, second, distance, kind)) if distance < threshold => {
            Err(Error::Collision { first, second, kind, distance })
        }
        _ => Ok(()),
    }
}

/// Chart representative of a cover point: `x` is reduced modulo `2π`, the
/// second sheet is folded back with `μ` (flipping `Γ`), and `y` is reduced
/// into `[-π/2, π/2)`.
pub fn fold_to_chart(v: Vortex) -> (Vortex, bool) {
    let mut x = wrap_if_outside(v.x, -FRAC_PI_2, 2.0 * PI);
    let mut y = v.y;
    let mut gamma = v.gamma;
    let flipped = x >= FRAC_PI_2;
    if flipped {
        x -= PI;
        y = -y;
        gamma = -gamma;
    }
    y = wrap_if_outside(y, -FRAC_PI_2, PI);
    (Vortex::new(x, y, gamma), flipped)
}

/// A collision-free configuration of vortices on the Klein bottle.
///
/// Coordinates are not forced into the fundamental domain: every energy in
/// this crate is periodic, so any chart representative is accepted.
/// [`KleinState::canonical`] produces the fundamental-domain representative.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct KleinState {
    vortices: Vec<Vortex>,
}

impl KleinState {
    pub fn new(vortices: Vec<Vortex>) -> Result<Self> {
        for (i, v) in vortices.iter().enumerate() {
            if !(v.x.is_finite() && v.y.is_finite() && v.gamma.is_finite()) {
                return Err(Error::InvalidInput(format!("vortex {i} has a non-finite field")));
            }
            if v.gamma == 0.0 {
                return Err(Error::InvalidInput(format!("vortex {i} has zero strength")));
            }
        }
        check_collisions(&vortices, COLLISION_DISTANCE)?;
        Ok(KleinState { vortices })
    }

    /// Wraps vortices already known to be valid.
    pub(crate) fn from_vortices_unchecked(vortices: Vec<Vortex>) -> Self {
        KleinState { vortices }
    }

    pub fn vortices(&self) -> &[Vortex] {
        &self.vortices
    }

    pub fn len(&self) -> usize {
        self.vortices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vortices.is_empty()
    }

    /// Replaces vortex `k` by its description on the other sheet.
    pub fn with_mu_applied(&self, k: usize) -> Self {
        let mut vortices = self.vortices.clone();
        vortices[k] = vortices[k].mu();
        KleinState { vortices }
    }

    /// Moves vortex `k` by `shift` without changing its strength.
    pub fn with_shift(&self, k: usize, shift: Complex64) -> Self {
        let mut vortices = self.vortices.clone();
        vortices[k].x += shift.re;
        vortices[k].y += shift.im;
        KleinState { vortices }
    }

    /// Every vortex moved horizontally by `s`.
    pub fn translated(&self, s: f64) -> Self {
        let vortices = self.vortices.iter().map(|v| Vortex::new(v.x + s, v.y, v.gamma)).collect();
        KleinState { vortices }
    }

    /// Fundamental-domain representative of every vortex.
    pub fn canonical(&self) -> Self {
        let vortices = self.vortices.iter().map(|&v| fold_to_chart(v).0).collect();
        KleinState { vortices }
    }
}

/// Vortices on the `2π × π` covering torus with ordinary (untwisted) strengths.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TorusState {
    positions: Vec<Complex64>,
    gammas: Vec<f64>,
}

impl TorusState {
    pub fn new(positions: Vec<Complex64>, gammas: Vec<f64>) -> Result<Self> {
        if positions.len() != gammas.len() {
            return Err(Error::InvalidInput(format!("{} positions but {} strengths", positions.len(), gammas.len())));
        }
        if positions.iter().any(|z| !(z.re.is_finite() && z.im.is_finite())) || gammas.iter().any(|g| !g.is_finite()) {
            return Err(Error::InvalidInput("non-finite torus state".into()));
        }
        for i in 0..positions.len() {
            for j in i + 1..positions.len() {
                let distance = torus_distance(positions[i], positions[j]);
                if distance < COLLISION_DISTANCE {
                    return Err(Error::Collision { first: i, second: j, kind: CollisionKind::Direct, distance });
                }
            }
        }
        Ok(TorusState { positions, gammas })
    }

    pub fn positions(&self) -> &[Complex64] {
        &self.positions
    }

    pub fn gammas(&self) -> &[f64] {
        &self.gammas
    }

    pub fn len(&self) -> usize {
        self.positions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.positions.is_empty()
    }

    /// Unordered pairs `(Γ_k Γ_l, z_k - z_l)`.
    pub(crate) fn pairs(&self) -> impl Iterator<Item = (f64, Complex64)> + '_ {
        let n = self.positions.len();
        (0..n).flat_map(move |k| {
            (k + 1..n).map(move |l| (self.gammas[k] * self.gammas[l], self.positions[k] - self.positions[l]))
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn wrap_lands_in_half_open_interval() {
        assert_eq!(wrap(PI, -PI, 2.0 * PI), -PI);
        assert!((wrap(0.3 + 4.0 * PI, -PI, 2.0 * PI) - 0.3).abs() < 1e-14);
        let w = wrap(-1e-18, 0.0, 1.0);
        assert!((0.0..1.0).contains(&w));
    }

    #[test]
    fn fold_handles_both_sheets() {
        let (v, flipped) = fold_to_chart(Vortex::new(0.2, 0.3, 1.0));
        assert!(!flipped && (v.x - 0.2).abs() < 1e-15 && (v.y - 0.3).abs() < 1e-15 && v.gamma == 1.0);

        let (v, flipped) = fold_to_chart(Vortex::new(0.2 + PI, 0.3, 1.0));
        assert!(flipped);
        assert!((v.x - 0.2).abs() < 1e-15 && (v.y + 0.3).abs() < 1e-15 && v.gamma == -1.0);

        let (v, _) = fold_to_chart(Vortex::new(0.2, 0.3 + PI, 1.0));
        assert!((v.x - 0.2).abs() < 1e-15 && (v.y - 0.3).abs() < 1e-14 && v.gamma == 1.0);
    }

    #[test]
    fn image_collisions_are_rejected() {
        let a = Vortex::new(0.1, 0.4, 1.0);
        let b = Vortex::new(0.1 + PI, -0.4, 2.0);
        match KleinState::new(vec![a, b]) {
            Err(Error::Collision { kind, .. }) => assert_eq!(kind, CollisionKind::Image),
            other => panic!("unexpected {other:?}"),
        }
        let c = Vortex::new(0.1, 0.4 + PI, 2.0);
        match KleinState::new(vec![a, c]) {
            Err(Error::Collision { kind, .. }) => assert_eq!(kind, CollisionKind::Direct),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn zero_strength_rejected() {
        assert!(KleinState::new(vec![Vortex::new(0.0, 0.0, 0.0)]).is_err());
    }

    #[test]
    fn torus_state_checks_lattice_collisions() {
        let z = Complex64::new(0.3, 0.2);
        let w = z + Complex64::new(2.0 * PI, -PI);
        assert!(TorusState::new(vec![z, w], vec![1.0, 1.0]).is_err());
        assert!(TorusState::new(vec![z], vec![1.0, 2.0]).is_err());
    }
}
