//! Discrete Hölder norms.

use crate::rough::area::TwoParamArea;
use crate::rough::path::HolderPath;

/// Below this many pairs the sup runs over all grid pairs.
pub const DEFAULT_PAIR_BUDGET: usize = 1 << 22;

/// `sup |x_{s,t}| / (t-s)^alpha` over grid pairs.
///
/// With `(n+1)^2` pairs within `pair_budget` the sup is exhaustive;
/// otherwise it runs over all dyadic-scale pairs `(i, i + 2^l)` (which
/// include adjacent pairs) and is a lower bound on the continuum norm.
pub fn holder_norm(x: &HolderPath, alpha: f64, pair_budget: usize) -> f64 {
    assert!(alpha > 0.0 && alpha < 1.0, "alpha must lie in (0,1)");
    let n_points = x.len();
    let h = x.grid.h();
    let mut best = 0.0f64;
    if n_points * n_points <= pair_budget {
        for i in 0..n_points {
            for j in i + 1..n_points {
                let dt = h * (j - i) as f64;
                best = best.max(x.increment(i, j).norm() / dt.powf(alpha));
            }
        }
    } else {
        let n_steps = n_points - 1;
        let mut step = 1usize;
        while step <= n_steps {
            let w = (h * step as f64).powf(alpha);
            for i in 0..=(n_steps - step) {
                best = best.max(x.increment(i, i + step).norm() / w);
            }
            step *= 2;
        }
    }
    best
}

/// Two-parameter Hölder norm of an area over its stored pairs.
pub fn area_holder_norm(a: &TwoParamArea, beta: f64) -> f64 {
    a.holder_norm(beta)
}
