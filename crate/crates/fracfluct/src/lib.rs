//! Numerical toolkit for slow/fast systems driven by fractional Brownian
//! motion with Hurst parameter H > 1/2.
//!
//! The crate is organised around the pipeline it supports:
//!
//! * [`fbm`] — exact sampling of multi-channel fractional Brownian motion
//!   (circulant embedding with a dense Cholesky fallback).
//! * [`ou`] — the stationary Ornstein–Uhlenbeck fast process: exact
//!   transitions, and a symbolic polynomial calculus for its semigroup and
//!   invariant measure.
//! * [`rough`] — Young integration, discrete Lévy areas satisfying Chen's
//!   relation exactly on the grid, Hölder norms, a controlled-YDE solver,
//!   and computable Grönwall/residue bound certificates.
//! * [`multiscale`] — simulation of the slow/fast system, its averaged
//!   limit, the rescaled fluctuation, and the function-valued noise
//!   processes with their rough lifts.
//! * [`limit`] — the limiting covariance kernel (via a fractional potential
//!   of the fast generator), exact sampling of the limiting Gaussian noise,
//!   and the limiting fluctuation equation.
//! * [`cumulant`] — set partitions, pair-partition diagrams, exact
//!   moment/cumulant conversion, empirical joint cumulants, and quadrature
//!   of the singular diagram integrals with scaling-exponent extraction.
//! * [`harness`] — seeded, worker-count-invariant Monte Carlo experiments
//!   with CSV/JSON/plot-data emission.
//!
//! Every sampler is deterministic given its seed; replicate streams are
//! derived from (master seed, replicate index) so results do not depend on
//! the number of worker threads. See `examples/` for one runnable program
//! per capability, and the `fracfluct` binary for the experiment CLI.

pub mod cumulant;
pub mod error;
pub mod fbm;
pub mod grid;
pub mod harness;
pub mod limit;
pub mod multiscale;
pub mod ou;
pub mod quad;
pub mod rng;
pub mod rough;

pub use error::{Error, Result};
pub use grid::{HurstParameter, TimeGrid};
