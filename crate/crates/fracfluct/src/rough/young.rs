//! Left-point Young integration on the grid.

use crate::error::{Error, Result};
use crate::rough::path::HolderPath;

/// Cumulative left-point Riemann sum `t -> sum_{k < t} Y_k (X_{k+1} - X_k)`,
/// starting at zero. `Y` values must be `p x q` and `X` values `q x 1`.
pub fn young_integral(y: &HolderPath, x: &HolderPath) -> Result<HolderPath> {
    y.check_same_grid(x)?;
    let (_, q) = y.shape();
    let (qx, one) = x.shape();
    if one != 1 || qx != q {
        return Err(Error::DimensionMismatch(format!(
            "integrand is {:?}, integrator is {:?}",
            y.shape(),
            x.shape()
        )));
    }
    let mut values = Vec::with_capacity(y.len());
    let p = y.shape().0;
    let mut acc = nalgebra::DMatrix::zeros(p, 1);
    values.push(acc.clone());
    for k in 0..y.len() - 1 {
        let dx = x.increment(k, k + 1);
        acc += &y.values[k] * dx;
        values.push(acc.clone());
    }
    HolderPath::new(y.grid, values)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::TimeGrid;

    #[test]
    fn constant_integrand_telescopes() {
        let grid = TimeGrid::unit(64).unwrap();
        let one = HolderPath::from_scalar_fn(grid, |_| 1.0);
        let x = HolderPath::from_scalar_fn(grid, |t| t * t - 0.3);
        let z = young_integral(&one, &x).unwrap();
        for i in 0..z.len() {
            let expect = x.scalar_value(i) - x.scalar_value(0);
            assert!((z.scalar_value(i) - expect).abs() < 1e-14);
        }
    }

    #[test]
    fn smooth_pair_converges_first_order() {
        // integral of t d(t^2) over [0,1] = 2/3; left-point error is O(h).
        let mut errors = Vec::new();
        for k in [64usize, 128, 256, 512] {
            let grid = TimeGrid::unit(k).unwrap();
            let y = HolderPath::from_scalar_fn(grid, |t| t);
            let x = HolderPath::from_scalar_fn(grid, |t| t * t);
            let z = young_integral(&y, &x).unwrap();
            errors.push((z.scalar_value(k) - 2.0 / 3.0).abs());
        }
        for w in errors.windows(2) {
            assert!(w[0] / w[1] >= 1.8, "refinement ratio too small: {errors:?}");
        }
    }

    #[test]
    fn self_integral_of_smooth_path() {
        // integral of X dX -> (X_1^2 - X_0^2)/2 for smooth X.
        let mut errors = Vec::new();
        for k in [64usize, 128, 256] {
            let grid = TimeGrid::unit(k).unwrap();
            let x = HolderPath::from_scalar_fn(grid, |t| (1.3 * t).sin() + 0.5);
            let z = young_integral(&x, &x).unwrap();
            let x1 = x.scalar_value(k);
            let x0 = x.scalar_value(0);
            errors.push((z.scalar_value(k) - 0.5 * (x1 * x1 - x0 * x0)).abs());
        }
        for w in errors.windows(2) {
            assert!(w[0] / w[1] >= 1.8);
        }
    }

    #[test]
    fn additivity_is_exact() {
        let grid = TimeGrid::unit(32).unwrap();
        let y = HolderPath::from_scalar_fn(grid, |t| (2.0 * t).cos());
        let x = HolderPath::from_scalar_fn(grid, |t| t.powi(3));
        let z = young_integral(&y, &x).unwrap();
        // The cumulative sum telescopes exactly: z_t - z_u is the integral
        // over [u, t] computed from the same one-step terms.
        let u = 13;
        let t = 29;
        let mut manual = 0.0;
        for k in u..t {
            manual += y.scalar_value(k) * (x.scalar_value(k + 1) - x.scalar_value(k));
        }
        assert!(((z.scalar_value(t) - z.scalar_value(u)) - manual).abs() < 1e-15);
    }

    #[test]
    fn grid_mismatch_errors() {
        let a = HolderPath::from_scalar_fn(TimeGrid::unit(8).unwrap(), |t| t);
        let b = HolderPath::from_scalar_fn(TimeGrid::unit(16).unwrap(), |t| t);
        assert!(young_integral(&a, &b).is_err());
    }
}
