//! Bracketing and bisection for scalar functions of one variable.

/// Root of `f` in `[lo, hi]` by bisection, assuming `f(lo)` and `f(hi)` have
/// opposite signs. Stops when the bracket no longer shrinks in floating point.
pub fn bisect<F: FnMut(f64) -> f64>(mut f: F, mut lo: f64, mut hi: f64) -> f64 {
    let mut f_lo = f(lo);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo.min(hi) || mid >= lo.max(hi) {
            break;
        }
        let f_mid = f(mid);
        if f_mid == 0.0 {
            return mid;
        }
        if (f_mid > 0.0) == (f_lo > 0.0) {
            lo = mid;
            f_lo = f_mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// Adjacent sample pairs `(a, b)` with a strict sign change. Non-finite samples
/// never take part in a bracket.
pub fn sign_change_brackets(xs: &[f64], fs: &[f64]) -> Vec<(f64, f64)> {
    xs.windows(2)
        .zip(fs.windows(2))
        .filter(|(_, f)| f[0].is_finite() && f[1].is_finite() && f[0] * f[1] < 0.0)
        .map(|(x, _)| (x[0], x[1]))
        .collect()
}

/// `n ≥ 2` evenly spaced points from `a` to `b`, both included.
pub fn linspace(a: f64, b: f64, n: usize) -> Vec<f64> {
    assert!(n >= 2, "linspace needs at least two points");
    let step = (b - a) / (n - 1) as f64;
    (0..n).map(|i| if i == n - 1 { b } else { a + step * i as f64 }).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bisection_finds_cosine_zero() {
        let r = bisect(f64::cos, 1.0, 2.0);
        assert!((r - std::f64::consts::FRAC_PI_2).abs() < 1e-15);
    }

    #[test]
    fn brackets_skip_non_finite() {
        let xs = [0.0, 1.0, 2.0, 3.0];
        let fs = [1.0, -1.0, f64::NAN, 1.0];
        assert_eq!(sign_change_brackets(&xs, &fs), vec![(0.0, 1.0)]);
    }

    #[test]
    fn linspace_hits_endpoints() {
        let v = linspace(-1.0, 1.0, 5);
        assert_eq!(v, vec![-1.0, -0.5, 0.0, 0.5, 1.0]);
    }
}
