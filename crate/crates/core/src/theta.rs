//! Jacobi theta functions for complex argument and real nome.
//!
//! Conventions follow `q = e^{iπτ}` with `τ` purely imaginary:
//!
//! ```text
//! θ1(z, q) = 2 Σ_{n≥0} (-1)^n q^{(n+1/2)^2} sin((2n+1) z)
//! θ2(z, q) = 2 Σ_{n≥0}        q^{(n+1/2)^2} cos((2n+1) z)
//! θ4(z, q) = 1 + 2 Σ_{n≥1} (-1)^n q^{n^2}  cos(2n z)
//! ```
//!
//! Every term is formed as a single `exp(log-weight ± i k z)` so that large
//! `|Im z|` never overflows an intermediate `sin`/`cos`. The series is cut
//! once the running tail bound drops below [`TAIL_EPS`] times the accumulated
//! term magnitude. A term's magnitude bound is `q^{e_n} e^{k_n |Im z|}`;
//! evaluation is refused when that bound exceeds `e^700` for some `n`, which
//! for `q = e^{-π/2}` happens once `|Im z|` passes about 30 (and about 120
//! for `q = e^{-2π}`).

use std::f64::consts::{FRAC_PI_2, PI};

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Relative tail bound used to truncate every series.
pub const TAIL_EPS: f64 = 1e-16;
/// Hard cap on the number of series terms.
pub const MAX_TERMS: usize = 64;
/// Inputs closer than this to a zero of θ1 are rejected by [`log_deriv_theta1`].
pub const ZERO_GUARD: f64 = 1e-9;

const EXP_LIMIT: f64 = 700.0;

/// Real nome `q ∈ (0, 1)`.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct Nome(f64);

impl Nome {
    pub fn new(q: f64) -> Result<Self> {
        if q.is_finite() && q > 0.0 && q < 1.0 {
            Ok(Nome(q))
        } else {
            Err(Error::NomeOutOfRange(q))
        }
    }

    /// `e^{-π/2}`, the nome of the Klein-bottle Hamiltonian (lattice `τ = i/2`).
    pub fn klein() -> Self {
        Nome((-FRAC_PI_2).exp())
    }

    /// `e^{-2π}`, the nome of the rotated torus form (lattice `τ = 2i`).
    pub fn rotated() -> Self {
        Nome((-2.0 * PI).exp())
    }

    pub fn value(self) -> f64 {
        self.0
    }

    /// `Im τ` for `q = e^{iπτ}`.
    pub fn tau_imag(self) -> f64 {
        -self.0.ln() / PI
    }

    /// The quasi-period `πτ` as a complex number.
    pub fn quasi_period(self) -> Complex64 {
        Complex64::new(0.0, PI * self.tau_imag())
    }
}

#[derive(Clone, Copy)]
enum Parity {
    /// `e^{ikz} - e^{-ikz} = 2i sin(kz)`
    Odd,
    /// `e^{ikz} + e^{-ikz} = 2 cos(kz)`
    Even,
}

/// Sums `Σ_{n ≥ start} sign_n w_n q^{e_n} (e^{i k_n z} ± e^{-i k_n z})` where
/// `e_n = (n + shift)^2`, `k_n = 2(n + shift)`, `sign_n = (-1)^n` when
/// `alternating`, and `w_n = k_n` when `weighted` (term-wise derivative).
fn fourier_sum(
    z: Complex64,
    q: Nome,
    shift: f64,
    start: usize,
    alternating: bool,
    weighted: bool,
    parity: Parity,
) -> Result<Complex64> {
    let ln_q = q.0.ln();
    let (x, y) = (z.re, z.im);
    let ay = y.abs();

    let bound = |n: usize| -> f64 {
        let m = n as f64 + shift;
        let k = 2.0 * m;
        let w = if weighted { k.max(1.0).ln() } else { 0.0 };
        m * m * ln_q + k * ay + w
    };

    let mut sum = Complex64::new(0.0, 0.0);
    let mut magnitude = 0.0_f64;
    for n in start..start + MAX_TERMS {
        let log_bound = bound(n);
        if log_bound > EXP_LIMIT {
            return Err(Error::ThetaOverflow { im: y, q: q.0 });
        }
        let m = n as f64 + shift;
        let k = 2.0 * m;
        let a = m * m * ln_q;
        let plus = Complex64::from_polar((a - k * y).exp(), k * x);
        let minus = Complex64::from_polar((a + k * y).exp(), -k * x);
        let mut term = match parity {
            Parity::Odd => plus - minus,
            Parity::Even => plus + minus,
        };
        if weighted {
            term *= k;
        }
        if alternating && n % 2 == 1 {
            term = -term;
        }
        sum += term;
        magnitude += log_bound.exp();

        let next = bound(n + 1);
        if next < log_bound && next.exp() < TAIL_EPS * magnitude {
            return Ok(sum);
        }
    }
    Err(Error::ThetaNonConvergence { terms: MAX_TERMS })
}

const I: Complex64 = Complex64::new(0.0, 1.0);

/// `θ1(z, q)`.
pub fn theta1(z: Complex64, q: Nome) -> Result<Complex64> {
    // 2 sin(kz) = -i (e^{ikz} - e^{-ikz})
    Ok(-I * fourier_sum(z, q, 0.5, 0, true, false, Parity::Odd)?)
}

/// `θ2(z, q)`.
pub fn theta2(z: Complex64, q: Nome) -> Result<Complex64> {
    fourier_sum(z, q, 0.5, 0, false, false, Parity::Even)
}

/// `θ4(z, q)`.
pub fn theta4(z: Complex64, q: Nome) -> Result<Complex64> {
    Ok(1.0 + fourier_sum(z, q, 0.0, 1, true, false, Parity::Even)?)
}

/// `dθ1/dz`.
pub fn theta1_prime(z: Complex64, q: Nome) -> Result<Complex64> {
    // d/dz 2 sin(kz) = 2k cos(kz) = k (e^{ikz} + e^{-ikz})
    fourier_sum(z, q, 0.5, 0, true, true, Parity::Even)
}

/// `dθ2/dz`.
pub fn theta2_prime(z: Complex64, q: Nome) -> Result<Complex64> {
    // d/dz 2 cos(kz) = -2k sin(kz) = i k (e^{ikz} - e^{-ikz})
    Ok(I * fourier_sum(z, q, 0.5, 0, false, true, Parity::Odd)?)
}

/// Distance from `z` to the nearest zero `mπ + nπτ` of θ1.
pub fn distance_to_theta1_zero(z: Complex64, q: Nome) -> f64 {
    let period = PI * q.tau_imag();
    let m = (z.re / PI).round();
    let n = (z.im / period).round();
    (z - Complex64::new(m * PI, n * period)).norm()
}

/// `cot z`, written so that large `|Im z|` saturates to `∓i` instead of overflowing.
fn cot(z: Complex64) -> Complex64 {
    let (x2, y2) = (2.0 * z.re, 2.0 * z.im);
    let ch = y2.cosh();
    let num = Complex64::new(x2.sin() / ch, -y2.tanh());
    num / (1.0 - x2.cos() / ch)
}

/// `θ1'(z)/θ1(z)` from the cotangent-plus-Lambert-series form
/// `cot z + 4 Σ_{n≥1} q^{2n} sin 2z / (q^{4n} - 2 q^{2n} cos 2z + 1)`.
///
/// Each summand is evaluated as `-2i (a/(1-a) - b/(1-b))` with
/// `a = q^{2n} e^{2iz}`, `b = q^{2n} e^{-2iz}`, which is the same quantity
/// factored so that no intermediate grows with `|Im z|`.
pub fn log_deriv_theta1(z: Complex64, q: Nome) -> Result<Complex64> {
    let distance = distance_to_theta1_zero(z, q);
    if distance < ZERO_GUARD {
        return Err(Error::Pole { distance });
    }
    let ln_q = q.0.ln();
    let two_z = 2.0 * z;
    let base = cot(z);
    let mut series = Complex64::new(0.0, 0.0);
    let mut magnitude = base.norm();
    for n in 1..=MAX_TERMS {
        let lw = 2.0 * n as f64 * ln_q;
        let a = Complex64::from_polar((lw - two_z.im).exp(), two_z.re);
        let b = Complex64::from_polar((lw + two_z.im).exp(), -two_z.re);
        let term = -2.0 * I * (a / (1.0 - a) - b / (1.0 - b));
        if !term.re.is_finite() || !term.im.is_finite() {
            return Err(Error::ThetaOverflow { im: z.im, q: q.0 });
        }
        series += term;
        magnitude += term.norm();
        let (na, nb) = (a.norm(), b.norm());
        if na < 0.5 && nb < 0.5 && 4.0 * (na + nb) * q.0 * q.0 < TAIL_EPS * magnitude {
            return Ok(base + series);
        }
    }
    Err(Error::ThetaNonConvergence { terms: MAX_TERMS })
}

/// `θ2'(z)/θ2(z) = θ1'/θ1 (z + π/2)`.
pub fn log_deriv_theta2(z: Complex64, q: Nome) -> Result<Complex64> {
    log_deriv_theta1(z + FRAC_PI_2, q)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn rel(a: Complex64, b: Complex64) -> f64 {
        (a - b).norm() / a.norm().max(b.norm()).max(1e-14)
    }

    /// θ1 from its infinite product, an evaluation path independent of the series.
    fn theta1_product(z: Complex64, q: f64, factors: usize) -> Complex64 {
        let mut p = 2.0 * q.powf(0.25) * z.sin();
        for n in 1..=factors {
            let q2n = q.powi(2 * n as i32);
            p *= (1.0 - q2n) * (1.0 - 2.0 * q2n * (2.0 * z).cos() + q2n * q2n);
        }
        p
    }

    #[test]
    fn rejects_bad_nome() {
        assert!(Nome::new(0.0).is_err());
        assert!(Nome::new(1.0).is_err());
        assert!(Nome::new(f64::NAN).is_err());
        assert!(Nome::new(0.3).is_ok());
    }

    #[test]
    fn theta1_vanishes_at_origin() {
        assert_eq!(theta1(c(0.0, 0.0), Nome::klein()).unwrap(), c(0.0, 0.0));
    }

    #[test]
    fn theta1_antiperiodic_under_pi() {
        let q = Nome::klein();
        let z = c(0.3, 0.1);
        let a = theta1(z + PI, q).unwrap();
        let b = theta1(z, q).unwrap();
        assert!(rel(a, -b) < 1e-14);
    }

    #[test]
    fn theta1_matches_product_form() {
        let q = Nome::klein();
        let series = theta1(c(0.7, 0.0), q).unwrap();
        let product = theta1_product(c(0.7, 0.0), q.value(), 40);
        assert!(rel(series, product) <= 1e-13, "{series} vs {product}");
        for &(re, im) in &[(0.2, 0.5), (-1.1, 0.9), (2.5, -0.7)] {
            for qv in [Nome::klein(), Nome::rotated(), Nome::new(0.45).unwrap()] {
                let s = theta1(c(re, im), qv).unwrap();
                let p = theta1_product(c(re, im), qv.value(), 40);
                assert!(rel(s, p) <= 1e-13);
            }
        }
    }

    #[test]
    fn theta2_is_shifted_theta1() {
        let q = Nome::klein();
        let z = c(-0.2, 0.4);
        assert!(rel(theta2(z, q).unwrap(), theta1(z + FRAC_PI_2, q).unwrap()) < 1e-14);
        let w = c(1.1, -0.3);
        assert!(rel(theta2(-w, q).unwrap(), theta2(w, q).unwrap()) < 1e-15);
    }

    #[test]
    fn theta2_at_origin_matches_reverse_summation() {
        let q = Nome::klein().value();
        let forward = theta2(c(0.0, 0.0), Nome::klein()).unwrap();
        assert!(forward.im == 0.0 && forward.re > 0.0);
        let reversed: f64 = (0..30).rev().map(|n| 2.0 * q.powf((n as f64 + 0.5).powi(2))).sum();
        assert!((forward.re - reversed).abs() / reversed <= 1e-15);
    }

    #[test]
    fn theta4_definition_and_period() {
        for q in [Nome::klein(), Nome::rotated(), Nome::new(0.5).unwrap()] {
            let direct: f64 = 1.0 + 2.0 * (1..40).map(|n| (-1f64).powi(n) * q.value().powi(n * n)).sum::<f64>();
            let v = theta4(c(0.0, 0.0), q).unwrap();
            assert!((v.re - direct).abs() <= TAIL_EPS * 4.0 && v.im == 0.0);
        }
        let q = Nome::klein();
        assert!(rel(theta4(c(0.9 + PI, 0.0), q).unwrap(), theta4(c(0.9, 0.0), q).unwrap()) < 1e-14);
    }

    #[test]
    fn theta1_via_theta4_half_period_shift() {
        // θ1(z) = -i e^{iz + iπτ/4} θ4(z + πτ/2) with τ = 2i
        let q = Nome::rotated();
        let tau = c(0.0, 2.0);
        let z = c(0.5, 0.0);
        let lhs = theta1(z, q).unwrap();
        let rhs = -I * (I * z + I * PI * tau / 4.0).exp() * theta4(z + PI * tau / 2.0, q).unwrap();
        assert!(rel(lhs, rhs) < 1e-13, "{lhs} vs {rhs}");
    }

    #[test]
    fn theta1_prime_symmetries_and_finite_difference() {
        let q = Nome::klein();
        let z = c(0.4, 0.2);
        assert!(rel(theta1_prime(-z, q).unwrap(), theta1_prime(z, q).unwrap()) < 1e-14);
        assert!(rel(theta1_prime(z + PI, q).unwrap(), -theta1_prime(z, q).unwrap()) < 1e-14);

        let h = 1e-6;
        let x = c(0.6, 0.0);
        let fd = (theta1(x + h, q).unwrap() - theta1(x - h, q).unwrap()) / (2.0 * h);
        assert!((theta1_prime(x, q).unwrap() - fd).norm() <= 1e-8);
    }

    #[test]
    fn log_derivative_on_the_robin_line_is_imaginary() {
        let q = Nome::klein();
        let y: f64 = 0.3;
        let v = log_deriv_theta1(c(-FRAC_PI_2, y), q).unwrap();
        let qv = q.value();
        let mut expected = -y.tanh();
        for n in 1..60 {
            let q2n = qv.powi(2 * n);
            expected -= 4.0 * q2n * (2.0 * y).sinh() / (q2n * q2n + 2.0 * q2n * (2.0 * y).cosh() + 1.0);
        }
        assert!(v.re.abs() < 1e-15);
        assert!((v.im - expected).abs() < 1e-14);
    }

    #[test]
    fn log_derivative_matches_ratio_and_is_pi_periodic() {
        let q = Nome::klein();
        let z = c(0.8, 0.1);
        let ratio = theta1_prime(z, q).unwrap() / theta1(z, q).unwrap();
        assert!(rel(log_deriv_theta1(z, q).unwrap(), ratio) <= 1e-12);
        assert!(rel(log_deriv_theta1(z + PI, q).unwrap(), log_deriv_theta1(z, q).unwrap()) < 1e-13);
    }

    #[test]
    fn log_derivative_guards_zeros() {
        let q = Nome::klein();
        let zero = q.quasi_period() + PI;
        assert!(matches!(log_deriv_theta1(zero, q), Err(Error::Pole { .. })));
        assert!(matches!(log_deriv_theta1(c(1e-10, 0.0), q), Err(Error::Pole { .. })));
        assert!(log_deriv_theta1(c(1e-8, 0.0), q).is_ok());
    }

    #[test]
    fn overflow_is_reported() {
        let q = Nome::klein();
        assert!(theta1(c(0.1, 29.0), q).is_ok());
        assert!(matches!(theta1(c(0.1, 40.0), q), Err(Error::ThetaOverflow { .. })));
    }
}
