//! Energies of point-vortex systems on the `2π × π` torus and on the Klein bottle.
//!
//! Two theta-function forms of the torus energy are provided: [`ham_torus_h1`]
//! (lattice summed row by row, nome `e^{-π/2}`) and [`ham_torus_h2`] (column
//! by column, nome `e^{-2π}`). They differ by the constant
//! `-(log 2 / 4π) Σ Γ_k Γ_l`.
//!
//! On the bottle, [`ham_klein`] is the energy built from the first form. It is
//! invariant under the deck map on any single vortex, and periodic with
//! periods `2π` (horizontal) and `π` (vertical). [`ham_h0`], built from the
//! second form, is kept only because its failure to be `μ`-invariant is a
//! useful negative control.

use std::f64::consts::{FRAC_PI_2, PI};

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::state::{check_collisions, twisted_distance, KleinState, TorusState, Vortex, COLLISION_DISTANCE};
use crate::theta::{self, log_deriv_theta1, log_deriv_theta2, Nome};

const I: Complex64 = Complex64::new(0.0, 1.0);

fn ln_abs(v: Complex64) -> f64 {
    v.norm().ln()
}

/// `log|θ1(d/2, e^{-π/2})| - (Im d)^2 / 2π`, the pair kernel of `H₁ᵀ`.
fn h1_kernel(d: Complex64) -> Result<f64> {
    Ok(ln_abs(theta::theta1(d / 2.0, Nome::klein())?) - d.im * d.im / (2.0 * PI))
}

/// `log|θ1(i d, e^{-2π})| - (Re d)^2 / 2π`, the pair kernel of `H₂ᵀ`.
fn h2_kernel(d: Complex64) -> Result<f64> {
    Ok(ln_abs(theta::theta1(I * d, Nome::rotated())?) - d.re * d.re / (2.0 * PI))
}

/// Torus energy with the lattice summed horizontally first.
pub fn ham_torus_h1(state: &TorusState) -> Result<f64> {
    let mut sum = 0.0;
    for (gg, d) in state.pairs() {
        sum += gg * h1_kernel(d)?;
    }
    Ok(-sum / (2.0 * PI))
}

/// Torus energy with the lattice summed vertically first.
pub fn ham_torus_h2(state: &TorusState) -> Result<f64> {
    let mut sum = 0.0;
    for (gg, d) in state.pairs() {
        sum += gg * h2_kernel(d)?;
    }
    Ok(-sum / (2.0 * PI))
}

/// The bottle energy obtained by folding `H₂ᵀ` with the square-model involution.
///
/// Evaluated exactly as the three-term expression (pair term, image term over
/// ordered pairs, and `log|θ1(2y_k, e^{-2π})|` self terms). It is *not*
/// invariant under `μ`: moving vortex 1 to the other sheet changes it by
/// `-½ Σ_{k≠1} Γ₁Γ_k`.
pub fn ham_h0(state: &KleinState) -> Result<f64> {
    let q = Nome::rotated();
    let v = state.vortices();
    let mut pair = 0.0;
    let mut image = 0.0;
    let mut own = 0.0;
    for k in 0..v.len() {
        for l in 0..v.len() {
            if k == l {
                continue;
            }
            let gg = v[k].gamma * v[l].gamma;
            if k < l {
                pair += gg * ln_abs(theta::theta1(I * (v[k].z() - v[l].z()), q)?);
            }
            image += gg * ln_abs(theta::theta1(I * (v[k].z() - v[l].z().conj() - PI), q)?);
        }
        let arg = Complex64::new(2.0 * v[k].y, 0.0);
        let distance = theta::distance_to_theta1_zero(arg, q);
        if distance < theta::ZERO_GUARD {
            return Err(Error::Pole { distance });
        }
        own += v[k].gamma * v[k].gamma * ln_abs(theta::theta1(arg, q)?);
    }
    Ok(-pair / (2.0 * PI) + image / (4.0 * PI) + own / (4.0 * PI))
}

/// Self-interaction bracket `log|θ1(iy - π/2, e^{-π/2})| - 2y²/π`.
fn robin_bracket(y: f64) -> Result<f64> {
    let w = Complex64::new(-FRAC_PI_2, y);
    Ok(ln_abs(theta::theta1(w, Nome::klein())?) - 2.0 * y * y / PI)
}

pub(crate) fn klein_energy(v: &[Vortex]) -> Result<f64> {
    check_collisions(v, COLLISION_DISTANCE)?;
    let q = Nome::klein();
    let mut direct = 0.0;
    let mut image = 0.0;
    let mut cross = 0.0;
    let mut own = 0.0;
    for a in 0..v.len() {
        for b in a + 1..v.len() {
            let gg = v[a].gamma * v[b].gamma;
            direct += gg * ln_abs(theta::theta1((v[a].z() - v[b].z()) / 2.0, q)?);
            image += gg * ln_abs(theta::theta2((v[a].z() - v[b].z().conj()) / 2.0, q)?);
            cross += gg * v[a].y * v[b].y;
        }
        own += v[a].gamma * v[a].gamma * robin_bracket(v[a].y)?;
    }
    Ok(-direct / (2.0 * PI) + image / (2.0 * PI) - cross / (PI * PI) + own / (4.0 * PI))
}

/// The well-defined energy of `N` vortices on the Klein bottle.
///
/// ```text
/// H = -1/2π Σ_{α<β} ΓαΓβ log|θ1((zα - zβ)/2)| + 1/2π Σ_{α<β} ΓαΓβ log|θ2((zα - z̄β)/2)|
///     - 1/π² Σ_{α<β} ΓαΓβ yα yβ + 1/4π Σ_α Γα² (log|θ1(i yα - π/2)| - 2yα²/π)
/// ```
///
/// with nome `e^{-π/2}` throughout.
pub fn ham_klein(state: &KleinState) -> Result<f64> {
    klein_energy(state.vortices())
}

/// [`ham_klein`] with the `y`-coupling written before simplification,
/// `1/2π Σ ΓαΓβ ((yα - yβ)²/2π - (yα + yβ)²/2π)`.
pub fn ham_klein_unsimplified(state: &KleinState) -> Result<f64> {
    let v = state.vortices();
    let q = Nome::klein();
    let mut total = 0.0;
    for a in 0..v.len() {
        for b in a + 1..v.len() {
            let gg = v[a].gamma * v[b].gamma;
            let (ya, yb) = (v[a].y, v[b].y);
            total += -gg / (2.0 * PI) * ln_abs(theta::theta1((v[a].z() - v[b].z()) / 2.0, q)?);
            total += gg / (2.0 * PI) * ln_abs(theta::theta2((v[a].z() - v[b].z().conj()) / 2.0, q)?);
            total += gg / (2.0 * PI) * (((ya - yb).powi(2) - (ya + yb).powi(2)) / (2.0 * PI));
        }
        total += v[a].gamma * v[a].gamma / (4.0 * PI) * robin_bracket(v[a].y)?;
    }
    Ok(total)
}

/// Twisted Green's function of the Klein bottle.
pub fn green_klein(z: Complex64, w: Complex64) -> Result<f64> {
    let (distance, kind) = twisted_distance(z, w);
    if distance < COLLISION_DISTANCE {
        return Err(Error::Collision { first: 0, second: 1, kind, distance });
    }
    let q = Nome::klein();
    Ok(ln_abs(theta::theta1((z - w) / 2.0, q)?) / (2.0 * PI)
        - ln_abs(theta::theta2((z - w.conj()) / 2.0, q)?) / (2.0 * PI)
        + z.im * w.im / (PI * PI))
}

/// Robin function `R(y) = (log|θ1(iy - π/2, e^{-π/2})| - 2y²/π) / 2π`.
///
/// Even and `π/2`-periodic; equal to `log|θ4(2y, e^{-2π})| / 2π` up to a constant.
pub fn robin_klein(y: f64) -> Result<f64> {
    Ok(robin_bracket(y)? / (2.0 * PI))
}

/// `dR/dy = (i θ1'/θ1(iy - π/2) - 4y/π) / 2π`.
pub fn robin_klein_derivative(y: f64) -> Result<f64> {
    let l = log_deriv_theta1(Complex64::new(-FRAC_PI_2, y), Nome::klein())?;
    Ok(((I * l).re - 4.0 * y / PI) / (2.0 * PI))
}

/// Brute-force torus energy from the truncated lattice sum
/// `-1/2π Σ_{k<l} Γ_kΓ_l Σ_{|m|≤M, |n|≤N} log|z_k - z_l + πin + 2πm|`.
///
/// Divergent constants are removed row by row (`log 2π|m|` for every `m ≠ 0`)
/// and per row pair (`log 4cosh²(πn/2)`). The rectangular partial sum is only
/// conditionally convergent: compared with summing rows to completion first,
/// it picks up the harmonic term `arctan(N/2M)/π² · Re(d²)` from the strips
/// `|m| > M` it omits, and that term is removed here. The final
/// `-(Im d)²/2π` is the periodizing correction that also appears in
/// [`ham_torus_h1`].
///
/// The result differs from [`ham_torus_h1`] by a state-independent constant
/// plus a truncation error that vanishes as `M, N` grow; only differences
/// between states are meaningful.
pub fn ham_oracle_truncated(state: &TorusState, m_max: usize, n_max: usize) -> Result<f64> {
    if m_max == 0 || n_max == 0 {
        return Err(Error::InvalidInput("lattice truncation needs M, N ≥ 1".into()));
    }
    let shape = (n_max as f64 / (2.0 * m_max as f64)).atan() / (PI * PI);
    let mut total = 0.0;
    for (gg, d) in state.pairs() {
        let lattice = truncated_lattice_sum(d, m_max as i64, n_max as i64);
        let bracket = lattice - shape * (d * d).re - d.im * d.im / (2.0 * PI);
        total += gg * bracket;
    }
    Ok(-total / (2.0 * PI))
}

fn truncated_lattice_sum(d: Complex64, m_max: i64, n_max: i64) -> f64 {
    let two_pi = 2.0 * PI;
    let mut total = 0.0;
    for n in -n_max..=n_max {
        let w = d + Complex64::new(0.0, PI * n as f64);
        // m = 0 term, then log|1 + w/2πm| for m ≠ 0 (row constant removed)
        let mut row = 0.5 * w.norm_sqr().ln();
        for m in 1..=m_max {
            let scale = two_pi * m as f64;
            row += 0.5 * ((w + scale) / scale).norm_sqr().ln();
            row += 0.5 * ((w - scale) / scale).norm_sqr().ln();
        }
        if n != 0 {
            row -= (2.0 * (PI * n as f64 / 2.0).cosh()).ln();
        }
        total += row;
    }
    total
}

/// `(1/Γ_k) ∂H/∂z̄_k`, assembled analytically so that it stays finite at
/// `Γ_k = 0` (the field felt by a passive probe).
pub(crate) fn gradient_per_strength(v: &[Vortex], k: usize) -> Result<Complex64> {
    let q = Nome::klein();
    let zk = v[k].z();
    let mut acc = Complex64::new(0.0, 0.0);
    for (b, vb) in v.iter().enumerate() {
        if b == k {
            continue;
        }
        let zb = vb.z();
        let direct = log_deriv_theta1((zk.conj() - zb.conj()) / 2.0, q)?;
        let image = log_deriv_theta2((zk.conj() - zb) / 2.0, q)?;
        acc += vb.gamma * (-direct / (8.0 * PI) + image / (8.0 * PI) - I * vb.y / (2.0 * PI * PI));
    }
    if v[k].gamma != 0.0 {
        // ∂/∂z̄ log|θ1(iy - π/2)| = ¼ (L(w̄) - L(w)), w = iy - π/2
        let w = Complex64::new(-FRAC_PI_2, v[k].y);
        let self_term = 0.25 * (log_deriv_theta1(w.conj(), q)? - log_deriv_theta1(w, q)?) - 2.0 * I * v[k].y / PI;
        acc += v[k].gamma / (4.0 * PI) * self_term;
    }
    Ok(acc)
}

fn check_index(state: &KleinState, k: usize) -> Result<()> {
    if k >= state.len() {
        return Err(Error::InvalidInput(format!("vortex index {k} out of range for {} vortices", state.len())));
    }
    Ok(())
}

/// Wirtinger derivative `∂H/∂z̄_k = ½ (∂H/∂x_k + i ∂H/∂y_k)` of [`ham_klein`].
pub fn dham_dzbar(state: &KleinState, k: usize) -> Result<Complex64> {
    check_index(state, k)?;
    Ok(state.vortices()[k].gamma * gradient_per_strength(state.vortices(), k)?)
}

/// `∂H/∂z̄_k / Γ_k`; the velocity of vortex `k` is `-2i` times this.
pub fn dham_dzbar_per_strength(state: &KleinState, k: usize) -> Result<Complex64> {
    check_index(state, k)?;
    gradient_per_strength(state.vortices(), k)
}
