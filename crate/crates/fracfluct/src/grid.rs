//! Uniform time grids and the Hurst parameter.

use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};

/// A uniform grid on `[t_start, t_end]` with `n_steps` steps
/// (`n_steps + 1` points).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TimeGrid {
    t_start: f64,
    t_end: f64,
    n_steps: usize,
}

impl TimeGrid {
    pub fn new(t_start: f64, t_end: f64, n_steps: usize) -> Result<Self> {
        if !(t_end > t_start) || !t_start.is_finite() || !t_end.is_finite() {
            return Err(Error::Domain(format!(
                "need t_end > t_start, got [{t_start}, {t_end}]"
            )));
        }
        if n_steps == 0 {
            return Err(Error::Domain("n_steps must be >= 1".into()));
        }
        Ok(TimeGrid { t_start, t_end, n_steps })
    }

    /// Unit-interval grid, the default in experiments.
    pub fn unit(n_steps: usize) -> Result<Self> {
        TimeGrid::new(0.0, 1.0, n_steps)
    }

    pub fn t_start(&self) -> f64 {
        self.t_start
    }

    pub fn t_end(&self) -> f64 {
        self.t_end
    }

    pub fn n_steps(&self) -> usize {
        self.n_steps
    }

    /// Number of grid points, `n_steps + 1`.
    pub fn len(&self) -> usize {
        self.n_steps + 1
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Step size `h = (t_end - t_start) / n_steps`.
    pub fn h(&self) -> f64 {
        (self.t_end - self.t_start) / self.n_steps as f64
    }

    pub fn point(&self, i: usize) -> f64 {
        debug_assert!(i <= self.n_steps);
        self.t_start + self.h() * i as f64
    }

    pub fn times(&self) -> impl Iterator<Item = f64> + '_ {
        (0..self.len()).map(move |i| self.point(i))
    }

    /// Index of the grid point closest to `t`.
    pub fn closest_index(&self, t: f64) -> usize {
        let k = ((t - self.t_start) / self.h()).round() as isize;
        k.clamp(0, self.n_steps as isize) as usize
    }
}

/// Hurst parameter restricted to the regime `1/2 < H < 1`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HurstParameter(f64);

impl HurstParameter {
    pub fn new(value: f64) -> Result<Self> {
        if !(value > 0.5 && value < 1.0) {
            return Err(Error::Domain(format!(
                "Hurst parameter must lie in (1/2, 1), got {value}"
            )));
        }
        Ok(HurstParameter(value))
    }

    pub fn value(&self) -> f64 {
        self.0
    }

    /// The shorthand exponent `alpha = H - 1/2`, in (0, 1/2).
    pub fn alpha(&self) -> f64 {
        self.0 - 0.5
    }
}
