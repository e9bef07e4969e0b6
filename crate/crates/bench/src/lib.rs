//! Fixed inputs shared by the benchmarks.

use kleinvortex::{KleinState, Vortex};

/// A collision-free configuration of `n` vortices with alternating signs.
pub fn ring(n: usize) -> KleinState {
    let vortices = (0..n)
        .map(|k| {
            let t = k as f64 / n as f64;
            let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
            Vortex::new(-1.4 + 2.8 * t, 0.9 * (6.0 * t).sin(), sign * (1.0 + 0.1 * k as f64))
        })
        .collect();
    KleinState::new(vortices).expect("ring configuration is collision free")
}
