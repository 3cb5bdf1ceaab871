//! Controlled Young differential equations
//! `Y_t = Y_0 + int_0^t A_s Y_s dX_s + (f_t - f_0)`.

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};
use crate::rough::path::{CoeffPath, HolderPath};

const BLOWUP_NORM: f64 = 1e12;

#[derive(Debug, Clone, Copy)]
pub enum SolveMode {
    /// Explicit one-step scheme
    /// `Y_{k+1} = Y_k + A_k Y_k X_{k,k+1} + f_{k,k+1}`.
    Euler,
    /// Picard iteration of the integral map to a sup-norm tolerance.
    Picard { tol: f64, max_iter: usize },
}

fn check_inputs(a: &CoeffPath, x: &HolderPath, f: &HolderPath, y0: &DVector<f64>) -> Result<()> {
    if a.grid != x.grid || x.grid != f.grid {
        return Err(Error::GridMismatch("coefficient, driver, forcing grids differ".into()));
    }
    if x.shape().1 != 1 || f.shape().1 != 1 {
        return Err(Error::DimensionMismatch("driver and forcing must be vector paths".into()));
    }
    if a.driver_dim() != x.shape().0 {
        return Err(Error::DimensionMismatch(format!(
            "coefficient has {} driver components, driver has {}",
            a.driver_dim(),
            x.shape().0
        )));
    }
    if a.state_dim() != y0.len() || f.shape().0 != y0.len() {
        return Err(Error::DimensionMismatch("state dimensions differ".into()));
    }
    Ok(())
}

fn euler(
    a: &CoeffPath,
    x: &HolderPath,
    f: &HolderPath,
    y0: &DVector<f64>,
) -> Result<Vec<DMatrix<f64>>> {
    let p = y0.len();
    let n = x.len();
    let mut values = Vec::with_capacity(n);
    let mut y = DMatrix::from_column_slice(p, 1, y0.as_slice());
    values.push(y.clone());
    let mut step_buf = DMatrix::zeros(p, 1);
    for k in 0..n - 1 {
        let dx = x.increment(k, k + 1);
        step_buf.copy_from(&(&f.values[k + 1] - &f.values[k]));
        for (j, m) in a.comps[k].iter().enumerate() {
            step_buf.gemm(dx[(j, 0)], m, &y, 1.0);
        }
        y += &step_buf;
        let norm = y.norm();
        if !norm.is_finite() || norm > BLOWUP_NORM {
            return Err(Error::BlowUp { step: k + 1, norm });
        }
        values.push(y.clone());
    }
    Ok(values)
}

/// Solve the controlled YDE on the grid of the inputs.
pub fn solve_controlled_yde(
    a: &CoeffPath,
    x: &HolderPath,
    f: &HolderPath,
    y0: &DVector<f64>,
    mode: SolveMode,
) -> Result<HolderPath> {
    check_inputs(a, x, f, y0)?;
    match mode {
        SolveMode::Euler => Ok(HolderPath { grid: x.grid, values: euler(a, x, f, y0)? }),
        SolveMode::Picard { tol, max_iter } => {
            let p = y0.len();
            let n = x.len();
            let y0m = DMatrix::from_column_slice(p, 1, y0.as_slice());
            // Start from the pure-forcing profile.
            let mut current: Vec<DMatrix<f64>> =
                (0..n).map(|k| &y0m + &f.values[k] - &f.values[0]).collect();
            let mut last_delta = f64::INFINITY;
            for _ in 0..max_iter {
                // Phi(z)_t = y0 + sum_{k<t} A_k z_k X_{k,k+1} + f_{0,t}
                let mut next = Vec::with_capacity(n);
                let mut integral = DMatrix::zeros(p, 1);
                next.push(y0m.clone());
                for k in 0..n - 1 {
                    let dx = x.increment(k, k + 1);
                    for (j, m) in a.comps[k].iter().enumerate() {
                        integral.gemm(dx[(j, 0)], m, &current[k], 1.0);
                    }
                    let mut v = &y0m + &integral;
                    v += &f.values[k + 1];
                    v -= &f.values[0];
                    let norm = v.norm();
                    if !norm.is_finite() || norm > BLOWUP_NORM {
                        return Err(Error::BlowUp { step: k + 1, norm });
                    }
                    next.push(v);
                }
                last_delta = current
                    .iter()
                    .zip(&next)
                    .map(|(aa, bb)| (aa - bb).norm())
                    .fold(0.0, f64::max);
                current = next;
                if last_delta < tol {
                    return Ok(HolderPath { grid: x.grid, values: current });
                }
            }
            Err(Error::Domain(format!(
                "Picard iteration did not reach tol {tol} in {max_iter} steps (last delta {last_delta:.3e})"
            )))
        }
    }
}
