//! Exact sampling of multi-channel fractional Brownian motion.
//!
//! The default method is circulant embedding of the fractional Gaussian
//! noise covariance (exact, O(n log n)). When the embedding fails to be
//! nonnegative definite the sampler can fall back to a dense Cholesky of
//! the increment covariance, bounded to `n_steps <= 4096`.

use std::sync::Arc;

use nalgebra::DMatrix;
use rand::Rng;
use rand_distr::StandardNormal;
use rustfft::num_complex::Complex;
use rustfft::{Fft, FftPlanner};

use crate::error::{Error, Result};
use crate::grid::{HurstParameter, TimeGrid};
use crate::rng::substream;

/// fBm covariance `E[B_s B_t] = (s^{2H} + t^{2H} - |t-s|^{2H}) / 2`.
pub fn fbm_covariance(s: f64, t: f64, h: HurstParameter) -> Result<f64> {
    if s < 0.0 || t < 0.0 {
        return Err(Error::Domain(format!("times must be nonnegative, got ({s}, {t})")));
    }
    let two_h = 2.0 * h.value();
    Ok(0.5 * (s.powf(two_h) + t.powf(two_h) - (t - s).abs().powf(two_h)))
}

/// Stationary fGn covariance at integer lag `k` for step `h_step`:
/// `gamma(k) = h^{2H} (|k+1|^{2H} - 2|k|^{2H} + |k-1|^{2H}) / 2`.
fn fgn_autocovariance(k: usize, h_step: f64, hurst: f64) -> f64 {
    let two_h = 2.0 * hurst;
    let k = k as f64;
    0.5 * h_step.powf(two_h)
        * ((k + 1.0).powf(two_h) - 2.0 * k.powf(two_h) + (k - 1.0).abs().powf(two_h))
}

/// A sampled fBm path: `channels` independent components on a common grid,
/// all starting at zero.
#[derive(Debug, Clone)]
pub struct FbmPath {
    pub grid: TimeGrid,
    pub channels: usize,
    /// `values[i]` is the m-vector at grid point `i`; `values[0] = 0`.
    pub values: Vec<Vec<f64>>,
}

impl FbmPath {
    pub fn value(&self, i: usize, channel: usize) -> f64 {
        self.values[i][channel]
    }

    /// Increment `B_t - B_s` for grid indices `i <= j`.
    pub fn increment(&self, i: usize, j: usize, channel: usize) -> f64 {
        self.values[j][channel] - self.values[i][channel]
    }
}

/// What to do when the circulant embedding has negative eigenvalues.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FallbackPolicy {
    /// Fail with [`Error::CirculantEmbedding`].
    Error,
    /// Use a dense Cholesky factor of the increment covariance (n <= 4096).
    DenseCholesky,
}

enum Method {
    Circulant { eig_sqrt: Vec<f64>, fft: Arc<dyn Fft<f64>> },
    Cholesky { factor: DMatrix<f64> },
}

/// Reusable sampler: the embedding eigenvalues (or Cholesky factor) are
/// computed once per (grid, H) and shared across paths and threads.
pub struct FbmSampler {
    grid: TimeGrid,
    hurst: HurstParameter,
    channels: usize,
    method: Method,
}

const CHOLESKY_MAX_STEPS: usize = 4096;
/// Relative tolerance below which a negative embedding eigenvalue is
/// treated as rounding noise rather than an indefinite embedding.
const EIG_ROUNDING_TOL: f64 = 1e-10;

impl FbmSampler {
    pub fn new(
        grid: TimeGrid,
        hurst: HurstParameter,
        channels: usize,
        policy: FallbackPolicy,
    ) -> Result<Self> {
        if channels == 0 {
            return Err(Error::Domain("channel count must be >= 1".into()));
        }
        let n = grid.n_steps();
        let h_step = grid.h();
        let hv = hurst.value();

        // First row of the circulant embedding of the fGn Toeplitz matrix.
        let m = 2 * n;
        let mut row: Vec<Complex<f64>> = Vec::with_capacity(m);
        for j in 0..=n {
            row.push(Complex::new(fgn_autocovariance(j, h_step, hv), 0.0));
        }
        for j in (1..n).rev() {
            row.push(Complex::new(fgn_autocovariance(j, h_step, hv), 0.0));
        }
        debug_assert_eq!(row.len(), m);

        let mut planner = FftPlanner::new();
        let fft = planner.plan_fft_forward(m);
        fft.process(&mut row);

        let max_eig = row.iter().map(|z| z.re).fold(f64::NEG_INFINITY, f64::max);
        let min_eig = row.iter().map(|z| z.re).fold(f64::INFINITY, f64::min);

        if min_eig >= -EIG_ROUNDING_TOL * max_eig.max(1.0) {
            let eig_sqrt = row.iter().map(|z| z.re.max(0.0).sqrt()).collect();
            return Ok(FbmSampler {
                grid,
                hurst,
                channels,
                method: Method::Circulant { eig_sqrt, fft },
            });
        }

        match policy {
            FallbackPolicy::Error => Err(Error::CirculantEmbedding { min_eig }),
            FallbackPolicy::DenseCholesky => {
                if n > CHOLESKY_MAX_STEPS {
                    return Err(Error::Domain(format!(
                        "Cholesky fallback is bounded to n_steps <= {CHOLESKY_MAX_STEPS}, got {n}"
                    )));
                }
                let cov = DMatrix::from_fn(n, n, |i, j| {
                    fgn_autocovariance(i.abs_diff(j), h_step, hv)
                });
                let chol = cov
                    .cholesky()
                    .ok_or_else(|| Error::Domain("increment covariance is not PD".into()))?;
                Ok(FbmSampler {
                    grid,
                    hurst,
                    channels,
                    method: Method::Cholesky { factor: chol.l() },
                })
            }
        }
    }

    pub fn grid(&self) -> &TimeGrid {
        &self.grid
    }

    pub fn hurst(&self) -> HurstParameter {
        self.hurst
    }

    /// Draw one path. Deterministic given `(seed, grid, H, channels)`;
    /// channel c uses the substream tagged `(FBM, c)` of `seed`.
    pub fn sample(&self, seed: u64) -> FbmPath {
        let n = self.grid.n_steps();
        let mut values = vec![vec![0.0; self.channels]; n + 1];
        for c in 0..self.channels {
            let mut rng = substream(seed, &[0x_fb, c as u64]);
            let incs = match &self.method {
                Method::Circulant { eig_sqrt, fft } => {
                    circulant_increments(eig_sqrt, fft.as_ref(), n, &mut rng)
                }
                Method::Cholesky { factor } => {
                    let z: Vec<f64> =
                        (0..n).map(|_| rng.sample::<f64, _>(StandardNormal)).collect();
                    let zv = nalgebra::DVector::from_vec(z);
                    (factor * zv).iter().copied().collect()
                }
            };
            let mut acc = 0.0;
            for (i, dx) in incs.iter().enumerate() {
                acc += dx;
                values[i + 1][c] = acc;
            }
        }
        FbmPath { grid: self.grid, channels: self.channels, values }
    }
}

fn circulant_increments(
    eig_sqrt: &[f64],
    fft: &dyn Fft<f64>,
    n: usize,
    rng: &mut impl Rng,
) -> Vec<f64> {
    let m = 2 * n;
    let mut z: Vec<Complex<f64>> = vec![Complex::new(0.0, 0.0); m];
    let g0: f64 = rng.sample(StandardNormal);
    z[0] = Complex::new(eig_sqrt[0] * g0, 0.0);
    if n >= 1 {
        let gn: f64 = rng.sample(StandardNormal);
        z[n] = Complex::new(eig_sqrt[n] * gn, 0.0);
    }
    let half = std::f64::consts::FRAC_1_SQRT_2;
    for k in 1..n {
        let a: f64 = rng.sample(StandardNormal);
        let b: f64 = rng.sample(StandardNormal);
        let zk = Complex::new(a * half, b * half) * eig_sqrt[k];
        z[k] = zk;
        z[m - k] = zk.conj();
    }
    fft.process(&mut z);
    let scale = 1.0 / (m as f64).sqrt();
    z.iter().take(n).map(|v| v.re * scale).collect()
}

/// One-shot convenience wrapper around [`FbmSampler`] with the Cholesky
/// fallback enabled.
pub fn sample_fbm(
    grid: TimeGrid,
    hurst: HurstParameter,
    channels: usize,
    seed: u64,
) -> Result<FbmPath> {
    Ok(FbmSampler::new(grid, hurst, channels, FallbackPolicy::DenseCholesky)?.sample(seed))
}
