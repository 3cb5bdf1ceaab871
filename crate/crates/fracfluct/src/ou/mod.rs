//! The stationary Ornstein–Uhlenbeck fast process.
//!
//! `dy_t = -A y_t dt + dW_t` with symmetric positive definite `A`. The
//! invariant measure is `N(0, A^{-1}/2)` and one-step transitions are
//! sampled exactly, so no discretisation error enters through the fast
//! variable. A polynomial function calculus (degree <= 4) provides the
//! semigroup, invariant means, and the eigen-decomposition used by the
//! fractional potential in `limit`.

pub mod poly;

pub use poly::{invariant_mean, semigroup_apply, PolyFunction};

use nalgebra::{DMatrix, DVector};
use rand::Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};
use crate::grid::TimeGrid;
use crate::rng::substream;

/// Specification of the OU fast process.
#[derive(Debug, Clone)]
pub struct OuSpec {
    drift: DMatrix<f64>,
    /// Orthonormal eigenvectors of the drift (columns).
    eigvecs: DMatrix<f64>,
    /// Eigenvalues of the drift, all > 0.
    eigvals: DVector<f64>,
}

impl OuSpec {
    pub fn new(drift: DMatrix<f64>) -> Result<Self> {
        if drift.nrows() != drift.ncols() || drift.nrows() == 0 {
            return Err(Error::DimensionMismatch("drift matrix must be square".into()));
        }
        let sym_err = (&drift - drift.transpose()).abs().max();
        if sym_err > 1e-12 * drift.abs().max().max(1.0) {
            return Err(Error::Domain("drift matrix must be symmetric".into()));
        }
        let eig = drift.clone().symmetric_eigen();
        let min = eig.eigenvalues.min();
        if min <= 0.0 {
            return Err(Error::Domain(format!(
                "drift matrix must be positive definite (min eigenvalue {min:.3e})"
            )));
        }
        Ok(OuSpec { drift, eigvecs: eig.eigenvectors, eigvals: eig.eigenvalues })
    }

    /// Scalar OU with rate `a > 0`.
    pub fn scalar(a: f64) -> Result<Self> {
        OuSpec::new(DMatrix::from_element(1, 1, a))
    }

    pub fn dimension(&self) -> usize {
        self.drift.nrows()
    }

    pub fn drift(&self) -> &DMatrix<f64> {
        &self.drift
    }

    /// Spectral gap rate: the smallest eigenvalue of the drift.
    pub fn gap_rate(&self) -> f64 {
        self.eigvals.min()
    }

    pub fn eigvals(&self) -> &DVector<f64> {
        &self.eigvals
    }

    pub fn eigvecs(&self) -> &DMatrix<f64> {
        &self.eigvecs
    }

    /// Stationary covariance `A^{-1}/2`.
    pub fn stationary_cov(&self) -> DMatrix<f64> {
        let d = self.dimension();
        let inv_half = DMatrix::from_fn(d, d, |i, j| {
            (0..d)
                .map(|k| self.eigvecs[(i, k)] * self.eigvecs[(j, k)] / (2.0 * self.eigvals[k]))
                .sum()
        });
        inv_half
    }

    /// `e^{-A tau}` as a dense matrix.
    fn exp_neg(&self, tau: f64) -> DMatrix<f64> {
        let d = self.dimension();
        DMatrix::from_fn(d, d, |i, j| {
            (0..d)
                .map(|k| {
                    self.eigvecs[(i, k)] * self.eigvecs[(j, k)] * (-self.eigvals[k] * tau).exp()
                })
                .sum()
        })
    }

    /// Factor `L` with `L L^T = Sigma_tau = (I - e^{-2 A tau}) A^{-1} / 2`.
    fn transition_noise_factor(&self, tau: f64) -> DMatrix<f64> {
        let d = self.dimension();
        DMatrix::from_fn(d, d, |i, j| {
            let lam = self.eigvals[j];
            let var = (1.0 - (-2.0 * lam * tau).exp()) / (2.0 * lam);
            self.eigvecs[(i, j)] * var.sqrt()
        })
    }

    /// Factor for the stationary law `N(0, A^{-1}/2)`.
    fn stationary_noise_factor(&self) -> DMatrix<f64> {
        let d = self.dimension();
        DMatrix::from_fn(d, d, |i, j| {
            self.eigvecs[(i, j)] / (2.0 * self.eigvals[j]).sqrt()
        })
    }
}

/// Path of the accelerated fast process: `values[i]` is `y_{t_i / epsilon}`.
#[derive(Debug, Clone)]
pub struct FastPath {
    pub grid: TimeGrid,
    pub epsilon: f64,
    pub values: Vec<DVector<f64>>,
}

impl FastPath {
    pub fn dimension(&self) -> usize {
        self.values[0].len()
    }
}

/// Exact sampling of the stationary OU path at the accelerated times
/// `t_i / epsilon`. Independent of any fBm stream by construction (the
/// caller keeps the streams separate).
pub fn sample_ou(spec: &OuSpec, grid: TimeGrid, epsilon: f64, seed: u64) -> Result<FastPath> {
    if !(epsilon > 0.0) || !epsilon.is_finite() {
        return Err(Error::Domain(format!("epsilon must be positive, got {epsilon}")));
    }
    let tau = grid.h() / epsilon;
    let propagator = spec.exp_neg(tau);
    let noise = spec.transition_noise_factor(tau);
    let stat = spec.stationary_noise_factor();
    let d = spec.dimension();

    let mut rng = substream(seed, &[0x_0e, 0]);
    let mut draw = |rng: &mut rand_chacha::ChaCha12Rng| {
        DVector::from_fn(d, |_, _| rng.sample::<f64, _>(StandardNormal))
    };

    let mut values = Vec::with_capacity(grid.len());
    let mut y = &stat * draw(&mut rng);
    values.push(y.clone());
    for _ in 0..grid.n_steps() {
        y = &propagator * &y + &noise * draw(&mut rng);
        values.push(y.clone());
    }
    Ok(FastPath { grid, epsilon, values })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_nonpositive_epsilon() {
        let spec = OuSpec::scalar(1.0).unwrap();
        let grid = TimeGrid::unit(4).unwrap();
        assert!(sample_ou(&spec, grid, 0.0, 1).is_err());
        assert!(sample_ou(&spec, grid, -0.1, 1).is_err());
    }

    #[test]
    fn rejects_bad_drift() {
        assert!(OuSpec::new(DMatrix::from_row_slice(2, 2, &[1.0, 0.5, 0.1, 1.0])).is_err());
        assert!(OuSpec::scalar(-1.0).is_err());
    }

    #[test]
    fn long_step_transition_reaches_stationarity() {
        // tau -> infinity: transition covariance -> A^{-1}/2.
        let spec = OuSpec::new(DMatrix::from_row_slice(2, 2, &[2.0, 0.3, 0.3, 1.0])).unwrap();
        let f = spec.transition_noise_factor(1e3);
        let cov = &f * f.transpose();
        let stat = spec.stationary_cov();
        assert!((cov - stat).abs().max() < 1e-12);
    }

    #[test]
    fn stationary_variance_and_autocovariance() {
        // dimension 1, A = 1: Var(y) = 1/2 and lag-tau autocov = e^{-tau}/2.
        let spec = OuSpec::scalar(1.0).unwrap();
        let grid = TimeGrid::unit(64).unwrap();
        let eps = 0.25; // tau = h/eps
        let tau = grid.h() / eps;
        let n_paths = 4000usize;
        let (mut var_acc, mut lag_acc, mut count) = (0.0, 0.0, 0usize);
        for s in 0..n_paths {
            let p = sample_ou(&spec, grid, eps, s as u64).unwrap();
            for i in 0..p.values.len() - 1 {
                var_acc += p.values[i][0] * p.values[i][0];
                lag_acc += p.values[i][0] * p.values[i + 1][0];
                count += 1;
            }
        }
        let var = var_acc / count as f64;
        let lag = lag_acc / count as f64;
        // Samples within a path are correlated; be generous with the band.
        assert!((var - 0.5).abs() < 0.01, "var {var}");
        assert!((lag - 0.5 * (-tau).exp()).abs() < 0.01, "lag {lag}");
    }

    #[test]
    fn determinism() {
        let spec = OuSpec::scalar(2.0).unwrap();
        let grid = TimeGrid::unit(16).unwrap();
        let a = sample_ou(&spec, grid, 0.1, 7).unwrap();
        let b = sample_ou(&spec, grid, 0.1, 7).unwrap();
        assert_eq!(a.values, b.values);
    }
}
