//! Grid-indexed paths.

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};
use crate::grid::TimeGrid;

/// A path on a uniform grid with matrix values (vectors are `d x 1`).
/// Increments follow the shorthand `x_{s,t} = x_t - x_s`.
#[derive(Debug, Clone, PartialEq)]
pub struct HolderPath {
    pub grid: TimeGrid,
    pub values: Vec<DMatrix<f64>>,
}

impl HolderPath {
    pub fn new(grid: TimeGrid, values: Vec<DMatrix<f64>>) -> Result<Self> {
        if values.len() != grid.len() {
            return Err(Error::GridMismatch(format!(
                "{} values on a grid with {} points",
                values.len(),
                grid.len()
            )));
        }
        if let Some(first) = values.first() {
            let shape = first.shape();
            if values.iter().any(|v| v.shape() != shape) {
                return Err(Error::DimensionMismatch("path values have mixed shapes".into()));
            }
        }
        Ok(HolderPath { grid, values })
    }

    /// Scalar path from a function of time.
    pub fn from_scalar_fn(grid: TimeGrid, f: impl Fn(f64) -> f64) -> Self {
        let values = grid.times().map(|t| DMatrix::from_element(1, 1, f(t))).collect();
        HolderPath { grid, values }
    }

    /// Vector path from per-point column vectors.
    pub fn from_vectors(grid: TimeGrid, values: Vec<DVector<f64>>) -> Result<Self> {
        let values = values
            .into_iter()
            .map(|v| DMatrix::from_column_slice(v.len(), 1, v.as_slice()))
            .collect();
        HolderPath::new(grid, values)
    }

    pub fn zero_like(&self) -> HolderPath {
        let shape = self.shape();
        HolderPath {
            grid: self.grid,
            values: vec![DMatrix::zeros(shape.0, shape.1); self.values.len()],
        }
    }

    pub fn shape(&self) -> (usize, usize) {
        self.values[0].shape()
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// `x_j - x_i` as a fresh matrix.
    pub fn increment(&self, i: usize, j: usize) -> DMatrix<f64> {
        &self.values[j] - &self.values[i]
    }

    pub fn scalar_value(&self, i: usize) -> f64 {
        debug_assert_eq!(self.shape(), (1, 1));
        self.values[i][(0, 0)]
    }

    pub fn scale(&self, s: f64) -> HolderPath {
        HolderPath {
            grid: self.grid,
            values: self.values.iter().map(|v| v * s).collect(),
        }
    }

    pub fn add(&self, other: &HolderPath) -> Result<HolderPath> {
        self.check_same_grid(other)?;
        if self.shape() != other.shape() {
            return Err(Error::DimensionMismatch("path shapes differ".into()));
        }
        Ok(HolderPath {
            grid: self.grid,
            values: self
                .values
                .iter()
                .zip(&other.values)
                .map(|(a, b)| a + b)
                .collect(),
        })
    }

    pub fn sub(&self, other: &HolderPath) -> Result<HolderPath> {
        self.add(&other.scale(-1.0))
    }

    pub fn sup_norm(&self) -> f64 {
        self.values.iter().map(|v| v.norm()).fold(0.0, f64::max)
    }

    pub fn check_same_grid(&self, other: &HolderPath) -> Result<()> {
        if self.grid != other.grid {
            return Err(Error::GridMismatch("paths live on different grids".into()));
        }
        Ok(())
    }

    /// Stack two vector paths vertically (used for joint lifts).
    pub fn stack(&self, other: &HolderPath) -> Result<HolderPath> {
        self.check_same_grid(other)?;
        if self.shape().1 != 1 || other.shape().1 != 1 {
            return Err(Error::DimensionMismatch("stack expects column-vector paths".into()));
        }
        let (da, db) = (self.shape().0, other.shape().0);
        let values = self
            .values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| {
                let mut v = DMatrix::zeros(da + db, 1);
                v.view_mut((0, 0), (da, 1)).copy_from(a);
                v.view_mut((da, 0), (db, 1)).copy_from(b);
                v
            })
            .collect();
        HolderPath::new(self.grid, values)
    }
}

/// Time-dependent linear YDE coefficient: at each grid point, one `p x p`
/// matrix per driver component, acting as `(A_t z) dx = sum_j M_j z dx_j`.
#[derive(Debug, Clone)]
pub struct CoeffPath {
    pub grid: TimeGrid,
    /// `comps[t][j]` is the matrix for driver component `j` at grid point `t`.
    pub comps: Vec<Vec<DMatrix<f64>>>,
}

impl CoeffPath {
    pub fn new(grid: TimeGrid, comps: Vec<Vec<DMatrix<f64>>>) -> Result<Self> {
        if comps.len() != grid.len() {
            return Err(Error::GridMismatch("coefficient path length != grid".into()));
        }
        Ok(CoeffPath { grid, comps })
    }

    /// Constant scalar coefficient `a` with one driver component.
    pub fn constant_scalar(grid: TimeGrid, a: f64) -> Self {
        CoeffPath {
            grid,
            comps: vec![vec![DMatrix::from_element(1, 1, a)]; grid.len()],
        }
    }

    pub fn driver_dim(&self) -> usize {
        self.comps[0].len()
    }

    pub fn state_dim(&self) -> usize {
        self.comps[0][0].nrows()
    }

    /// Frobenius norm of the stacked coefficient at grid point `t`.
    pub fn norm_at(&self, t: usize) -> f64 {
        self.comps[t].iter().map(|m| m.norm_squared()).sum::<f64>().sqrt()
    }

    pub fn sup_norm(&self) -> f64 {
        (0..self.comps.len()).map(|t| self.norm_at(t)).fold(0.0, f64::max)
    }

    /// Hölder-type norm over dyadic pairs of the stacked coefficient.
    pub fn holder_norm(&self, alpha: f64, pair_budget: usize) -> f64 {
        let flat = self.as_flat_path();
        crate::rough::holder::holder_norm(&flat, alpha, pair_budget)
    }

    /// Flatten to a vector path (stacking all components) for norm purposes.
    pub fn as_flat_path(&self) -> HolderPath {
        let p = self.state_dim();
        let q = self.driver_dim();
        let values = self
            .comps
            .iter()
            .map(|ms| {
                let mut v = DMatrix::zeros(p * p * q, 1);
                let mut idx = 0;
                for m in ms {
                    for x in m.iter() {
                        v[(idx, 0)] = *x;
                        idx += 1;
                    }
                }
                v
            })
            .collect();
        HolderPath { grid: self.grid, values }
    }

    pub fn sub(&self, other: &CoeffPath) -> Result<CoeffPath> {
        if self.grid != other.grid {
            return Err(Error::GridMismatch("coefficient paths on different grids".into()));
        }
        let comps = self
            .comps
            .iter()
            .zip(&other.comps)
            .map(|(a, b)| a.iter().zip(b).map(|(x, y)| x - y).collect())
            .collect();
        Ok(CoeffPath { grid: self.grid, comps })
    }
}
