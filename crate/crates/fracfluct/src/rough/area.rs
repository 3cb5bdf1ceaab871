//! Discrete two-parameter areas and Chen's relation.
//!
//! The lift of a pair of paths is built from one-step trapezoid areas and
//! extended over longer intervals by the Chen recursion itself, so
//! `delta A_{s,u,t} = X_{s,u} (x) Y_{u,t}` holds exactly (to rounding) on
//! every grid triple. Over a pair `(s, t)` the entry equals the trapezoid
//! approximation of `int_s^t X_{s,r} (x) dY_r`.

use std::collections::BTreeMap;

use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::grid::TimeGrid;
use crate::rough::path::HolderPath;

/// Which (s, t) pairs an area is materialised on.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PairSet {
    /// All grid pairs `i < j`. Memory is O(n^2); callers must keep
    /// `n_steps <= 4096`.
    Full,
    /// Pairs `(i, i + 2^l)` for every level `l` and offset `i`.
    Dyadic,
}

const FULL_MAX_STEPS: usize = 4096;

/// Two-parameter array `A_{s,t}` on a pair set, valued in `rows x cols`
/// matrices. `A_{t,t} = 0` implicitly.
#[derive(Debug, Clone)]
pub struct TwoParamArea {
    pub grid: TimeGrid,
    rows: usize,
    cols: usize,
    storage: Storage,
}

#[derive(Debug, Clone)]
enum Storage {
    /// Row-major upper triangle, pairs `i < j`.
    Full { entries: Vec<DMatrix<f64>> },
    Dyadic { entries: BTreeMap<(usize, usize), DMatrix<f64>> },
}

fn full_index(i: usize, j: usize, n_points: usize) -> usize {
    debug_assert!(i < j && j < n_points);
    // offset of row i: i*n_points - i(i+1)/2 - i  (pairs strictly above diag)
    i * (2 * n_points - i - 3) / 2 + j - 1
}

impl TwoParamArea {
    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    /// Entry `A_{i,j}` for `i < j`; `None` when the pair is not stored.
    pub fn entry(&self, i: usize, j: usize) -> Option<&DMatrix<f64>> {
        if i >= j {
            return None;
        }
        match &self.storage {
            Storage::Full { entries } => entries.get(full_index(i, j, self.grid.len())),
            Storage::Dyadic { entries } => entries.get(&(i, j)),
        }
    }

    pub fn pairs(&self) -> Vec<(usize, usize)> {
        match &self.storage {
            Storage::Full { .. } => {
                let n = self.grid.len();
                (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).collect()
            }
            Storage::Dyadic { entries } => entries.keys().copied().collect(),
        }
    }

    /// Largest entry norm; the natural scale for defect tolerances.
    pub fn scale(&self) -> f64 {
        match &self.storage {
            Storage::Full { entries } => entries.iter().map(|m| m.norm()).fold(0.0, f64::max),
            Storage::Dyadic { entries } => {
                entries.values().map(|m| m.norm()).fold(0.0, f64::max)
            }
        }
    }

    /// Entrywise linear combination `self + c * other` on the common pair set.
    pub fn axpy(&self, c: f64, other: &TwoParamArea) -> Result<TwoParamArea> {
        if self.grid != other.grid {
            return Err(Error::GridMismatch("areas on different grids".into()));
        }
        if (self.rows, self.cols) != (other.rows, other.cols) {
            return Err(Error::DimensionMismatch("area shapes differ".into()));
        }
        let storage = match (&self.storage, &other.storage) {
            (Storage::Full { entries: a }, Storage::Full { entries: b }) => Storage::Full {
                entries: a.iter().zip(b).map(|(x, y)| x + y * c).collect(),
            },
            (Storage::Dyadic { entries: a }, Storage::Dyadic { entries: b }) => {
                let mut out = BTreeMap::new();
                for (k, x) in a {
                    let y = b.get(k).ok_or_else(|| {
                        Error::GridMismatch("dyadic pair sets differ".into())
                    })?;
                    out.insert(*k, x + y * c);
                }
                Storage::Dyadic { entries: out }
            }
            _ => return Err(Error::GridMismatch("mixed pair-set representations".into())),
        };
        Ok(TwoParamArea { grid: self.grid, rows: self.rows, cols: self.cols, storage })
    }

    pub fn map(&self, f: impl Fn(&DMatrix<f64>) -> DMatrix<f64>) -> TwoParamArea {
        let storage = match &self.storage {
            Storage::Full { entries } => {
                Storage::Full { entries: entries.iter().map(&f).collect() }
            }
            Storage::Dyadic { entries } => Storage::Dyadic {
                entries: entries.iter().map(|(k, v)| (*k, f(v))).collect(),
            },
        };
        let (rows, cols) = match &storage {
            Storage::Full { entries } => entries
                .first()
                .map(|m| m.shape())
                .unwrap_or((self.rows, self.cols)),
            Storage::Dyadic { entries } => entries
                .values()
                .next()
                .map(|m| m.shape())
                .unwrap_or((self.rows, self.cols)),
        };
        TwoParamArea { grid: self.grid, rows, cols, storage }
    }

    /// Sup over stored pairs of `|A_{s,t}| / (t-s)^beta`.
    pub fn holder_norm(&self, beta: f64) -> f64 {
        let h = self.grid.h();
        let mut best = 0.0f64;
        let mut visit = |i: usize, j: usize, m: &DMatrix<f64>| {
            let dt = h * (j - i) as f64;
            best = best.max(m.norm() / dt.powf(beta));
        };
        match &self.storage {
            Storage::Full { entries } => {
                let n = self.grid.len();
                for i in 0..n {
                    for j in i + 1..n {
                        visit(i, j, &entries[full_index(i, j, n)]);
                    }
                }
            }
            Storage::Dyadic { entries } => {
                for (&(i, j), m) in entries {
                    visit(i, j, m);
                }
            }
        }
        best
    }

    /// Perturb one stored entry (test helper for defect detection).
    pub fn perturb_entry(&mut self, i: usize, j: usize, delta: f64) {
        match &mut self.storage {
            Storage::Full { entries } => {
                let idx = full_index(i, j, self.grid.len());
                entries[idx][(0, 0)] += delta;
            }
            Storage::Dyadic { entries } => {
                if let Some(m) = entries.get_mut(&(i, j)) {
                    m[(0, 0)] += delta;
                }
            }
        }
    }
}

fn dyadic_pairs(n_steps: usize) -> Vec<(usize, usize)> {
    let mut pairs = Vec::new();
    let mut step = 1usize;
    while step <= n_steps {
        for i in 0..=(n_steps - step) {
            pairs.push((i, i + step));
        }
        step *= 2;
    }
    pairs
}

/// Trapezoid lift `A_{s,t} ~ int_s^t X_{s,r} (x) dY_r` of two vector paths.
///
/// One-step areas are `X_{k,k+1} (x) Y_{k,k+1} / 2`; longer entries follow
/// the Chen recursion, which makes the lift weakly geometric: for `Y = X`,
/// `A + A^T = X_{s,t} (x) X_{s,t}` exactly.
pub fn levy_area(x: &HolderPath, y: &HolderPath, pairs: PairSet) -> Result<TwoParamArea> {
    x.check_same_grid(y)?;
    if x.shape().1 != 1 || y.shape().1 != 1 {
        return Err(Error::DimensionMismatch("levy_area expects column-vector paths".into()));
    }
    let n_steps = x.grid.n_steps();
    let dx_dim = x.shape().0;
    let dy_dim = y.shape().0;

    match pairs {
        PairSet::Full => {
            if n_steps > FULL_MAX_STEPS {
                return Err(Error::Domain(format!(
                    "full areas are bounded to n_steps <= {FULL_MAX_STEPS}, got {n_steps}"
                )));
            }
            let n_points = n_steps + 1;
            let mut entries =
                vec![DMatrix::zeros(dx_dim, dy_dim); n_points * (n_points - 1) / 2];
            for i in 0..n_points - 1 {
                let mut acc = DMatrix::zeros(dx_dim, dy_dim);
                for j in i + 1..n_points {
                    // A(i, j) = A(i, j-1) + (X_{i,j-1} + X_{j-1,j}/2) (x) Y_{j-1,j}
                    let xl = x.increment(i, j - 1) + x.increment(j - 1, j) * 0.5;
                    let dy = y.increment(j - 1, j);
                    acc += xl * dy.transpose();
                    entries[full_index(i, j, n_points)] = acc.clone();
                }
            }
            Ok(TwoParamArea {
                grid: x.grid,
                rows: dx_dim,
                cols: dy_dim,
                storage: Storage::Full { entries },
            })
        }
        PairSet::Dyadic => {
            let mut entries = BTreeMap::new();
            for (i, j) in dyadic_pairs(n_steps) {
                let mut acc = DMatrix::zeros(dx_dim, dy_dim);
                for k in i..j {
                    let xl = x.increment(i, k) + x.increment(k, k + 1) * 0.5;
                    acc += xl * y.increment(k, k + 1).transpose();
                }
                entries.insert((i, j), acc);
            }
            Ok(TwoParamArea {
                grid: x.grid,
                rows: dx_dim,
                cols: dy_dim,
                storage: Storage::Dyadic { entries },
            })
        }
    }
}

const EXHAUSTIVE_TRIPLE_POINTS: usize = 129;

/// Triples `(s, u, t)` on which the Chen defect is evaluated: exhaustive for
/// small full areas, dyadic midpoint triples otherwise.
fn defect_triples(area: &TwoParamArea) -> Vec<(usize, usize, usize)> {
    let n_points = area.grid.len();
    match &area.storage {
        Storage::Full { .. } if n_points <= EXHAUSTIVE_TRIPLE_POINTS => {
            let mut out = Vec::new();
            for s in 0..n_points {
                for u in s + 1..n_points {
                    for t in u + 1..n_points {
                        out.push((s, u, t));
                    }
                }
            }
            out
        }
        Storage::Full { .. } => {
            let n_steps = area.grid.n_steps();
            let mut out = Vec::new();
            let mut step = 2usize;
            while step <= n_steps {
                for i in 0..=(n_steps - step) {
                    out.push((i, i + step / 2, i + step));
                }
                step *= 2;
            }
            out
        }
        Storage::Dyadic { .. } => {
            let n_steps = area.grid.n_steps();
            let mut out = Vec::new();
            let mut step = 2usize;
            while step <= n_steps {
                for i in 0..=(n_steps - step) {
                    out.push((i, i + step / 2, i + step));
                }
                step *= 2;
            }
            out
        }
    }
}

/// Max over grid triples of
/// `| A_{s,t} - A_{s,u} - A_{u,t} - X_{s,u} (x) Y_{u,t} |`.
pub fn chen_defect(area: &TwoParamArea, x: &HolderPath, y: &HolderPath) -> f64 {
    let mut worst = 0.0f64;
    for (s, u, t) in defect_triples(area) {
        let (Some(a_st), Some(a_su), Some(a_ut)) =
            (area.entry(s, t), area.entry(s, u), area.entry(u, t))
        else {
            continue;
        };
        let cross = x.increment(s, u) * y.increment(u, t).transpose();
        let defect = (a_st - a_su - a_ut - cross).norm();
        worst = worst.max(defect);
    }
    worst
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::TimeGrid;

    #[test]
    fn constant_path_has_zero_area() {
        let grid = TimeGrid::unit(16).unwrap();
        let x = HolderPath::from_scalar_fn(grid, |_| 3.0);
        let y = HolderPath::from_scalar_fn(grid, |t| t * t);
        let a = levy_area(&x, &y, PairSet::Full).unwrap();
        assert!(a.scale() < 1e-15);
    }

    #[test]
    fn smooth_pair_area_refines_to_integral() {
        // X = t, Y = t^2: A_{0,1} -> int_0^1 r d(r^2) = 2/3.
        let mut errors = Vec::new();
        for k in [32usize, 64, 128] {
            let grid = TimeGrid::unit(k).unwrap();
            let x = HolderPath::from_scalar_fn(grid, |t| t);
            let y = HolderPath::from_scalar_fn(grid, |t| t * t);
            let a = levy_area(&x, &y, PairSet::Full).unwrap();
            errors.push((a.entry(0, k).unwrap()[(0, 0)] - 2.0 / 3.0).abs());
        }
        for w in errors.windows(2) {
            assert!(w[0] / w[1] > 1.8, "{errors:?}");
        }
    }

    #[test]
    fn chen_exact_for_constructed_lifts() {
        let grid = TimeGrid::unit(32).unwrap();
        let x = HolderPath::from_scalar_fn(grid, |t| (5.0 * t).sin());
        let y = HolderPath::from_scalar_fn(grid, |t| (3.0 * t).cos() + t);
        let a = levy_area(&x, &y, PairSet::Full).unwrap();
        let defect = chen_defect(&a, &x, &y);
        assert!(defect <= 1e-12 * a.scale().max(1.0), "defect {defect}");
    }

    #[test]
    fn chen_detects_corruption() {
        let grid = TimeGrid::unit(16).unwrap();
        let x = HolderPath::from_scalar_fn(grid, |t| t);
        let y = HolderPath::from_scalar_fn(grid, |t| t * t);
        let mut a = levy_area(&x, &y, PairSet::Full).unwrap();
        a.perturb_entry(2, 9, 1.0);
        assert!(chen_defect(&a, &x, &y) >= 1.0);
    }

    #[test]
    fn weakly_geometric_symmetric_part() {
        // A_{s,t} + A_{s,t}^T = X_{s,t} (x) X_{s,t} when Y = X.
        let grid = TimeGrid::unit(24).unwrap();
        let vals = grid
            .times()
            .map(|t| {
                nalgebra::DVector::from_vec(vec![(2.0 * t).sin(), t * t - 0.4 * t])
            })
            .collect();
        let x = HolderPath::from_vectors(grid, vals).unwrap();
        let a = levy_area(&x, &x, PairSet::Full).unwrap();
        for (s, t) in [(0usize, 24usize), (3, 17), (10, 11)] {
            let sym = a.entry(s, t).unwrap() + a.entry(s, t).unwrap().transpose();
            let inc = x.increment(s, t);
            let outer = &inc * inc.transpose();
            assert!((sym - outer).norm() < 1e-13);
        }
    }

    #[test]
    fn dyadic_matches_full_on_dyadic_pairs() {
        let grid = TimeGrid::unit(32).unwrap();
        let x = HolderPath::from_scalar_fn(grid, |t| (7.0 * t).sin());
        let y = HolderPath::from_scalar_fn(grid, |t| t.powi(3) - t);
        let full = levy_area(&x, &y, PairSet::Full).unwrap();
        let dy = levy_area(&x, &y, PairSet::Dyadic).unwrap();
        for (i, j) in dy.pairs() {
            let d = (full.entry(i, j).unwrap() - dy.entry(i, j).unwrap()).norm();
            assert!(d < 1e-14);
        }
        let defect = chen_defect(&dy, &x, &y);
        assert!(defect < 1e-13 * dy.scale().max(1.0));
    }
}
