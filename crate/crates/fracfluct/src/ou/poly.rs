//! Polynomial observables of the OU state, degree <= 4.
//!
//! The family is closed under the OU semigroup, and every operation used by
//! the effective-limit computations reduces to a spectral multiplier in the
//! tensor-Hermite basis adapted to the invariant measure `N(0, A^{-1}/2)`:
//! a Hermite component with multi-index `K` (in the drift eigenbasis)
//! carries decay rate `sum_i K_i lambda_i`, so `P_t` multiplies it by
//! `exp(-rate * t)` and the invariant mean is the constant component.

use std::collections::BTreeMap;

use nalgebra::DVector;

use crate::error::{Error, Result};
use crate::ou::OuSpec;

pub const MAX_DEGREE: u32 = 4;

type Exps = Vec<u8>;

/// A multivariate polynomial in the OU state.
#[derive(Debug, Clone, PartialEq)]
pub struct PolyFunction {
    dim: usize,
    terms: BTreeMap<Exps, f64>,
}

fn degree(e: &Exps) -> u32 {
    e.iter().map(|&k| k as u32).sum()
}

impl PolyFunction {
    pub fn zero(dim: usize) -> Self {
        PolyFunction { dim, terms: BTreeMap::new() }
    }

    pub fn constant(dim: usize, c: f64) -> Self {
        let mut p = PolyFunction::zero(dim);
        if c != 0.0 {
            p.terms.insert(vec![0; dim], c);
        }
        p
    }

    /// The coordinate function `y -> y_i`.
    pub fn coordinate(dim: usize, i: usize) -> Self {
        assert!(i < dim);
        let mut e = vec![0u8; dim];
        e[i] = 1;
        let mut p = PolyFunction::zero(dim);
        p.terms.insert(e, 1.0);
        p
    }

    /// Build from `(exponents, coefficient)` pairs.
    pub fn from_terms(dim: usize, terms: &[(Vec<u8>, f64)]) -> Result<Self> {
        let mut p = PolyFunction::zero(dim);
        for (e, c) in terms {
            if e.len() != dim {
                return Err(Error::DimensionMismatch(format!(
                    "exponent vector of length {} in dimension {dim}",
                    e.len()
                )));
            }
            if degree(e) > MAX_DEGREE {
                return Err(Error::Domain(format!(
                    "degree {} exceeds the cap {MAX_DEGREE}",
                    degree(e)
                )));
            }
            p.add_term(e.clone(), *c);
        }
        Ok(p)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Exps, &f64)> {
        self.terms.iter()
    }

    pub fn degree(&self) -> u32 {
        self.terms.keys().map(degree).max().unwrap_or(0)
    }

    fn add_term(&mut self, e: Exps, c: f64) {
        if c == 0.0 {
            return;
        }
        let entry = self.terms.entry(e).or_insert(0.0);
        *entry += c;
        if *entry == 0.0 {
            // keep the map canonical
        }
    }

    fn prune(mut self, tol: f64) -> Self {
        self.terms.retain(|_, c| c.abs() > tol);
        self
    }

    pub fn add(&self, other: &PolyFunction) -> PolyFunction {
        assert_eq!(self.dim, other.dim);
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(e.clone(), *c);
        }
        out.prune(0.0)
    }

    pub fn scale(&self, s: f64) -> PolyFunction {
        let mut out = self.clone();
        for c in out.terms.values_mut() {
            *c *= s;
        }
        out.prune(0.0)
    }

    pub fn sub(&self, other: &PolyFunction) -> PolyFunction {
        self.add(&other.scale(-1.0))
    }

    /// Polynomial product; errors when the result would exceed the degree cap.
    pub fn mul(&self, other: &PolyFunction) -> Result<PolyFunction> {
        assert_eq!(self.dim, other.dim);
        let mut out = PolyFunction::zero(self.dim);
        for (ea, ca) in &self.terms {
            for (eb, cb) in &other.terms {
                let e: Exps = ea.iter().zip(eb).map(|(a, b)| a + b).collect();
                if degree(&e) > MAX_DEGREE {
                    return Err(Error::Domain(format!(
                        "product degree {} exceeds the cap {MAX_DEGREE}",
                        degree(&e)
                    )));
                }
                out.add_term(e, ca * cb);
            }
        }
        Ok(out.prune(0.0))
    }

    pub fn eval(&self, y: &DVector<f64>) -> f64 {
        assert_eq!(y.len(), self.dim);
        self.terms
            .iter()
            .map(|(e, c)| {
                c * e
                    .iter()
                    .enumerate()
                    .map(|(i, &k)| y[i].powi(k as i32))
                    .product::<f64>()
            })
            .sum()
    }

    /// Substitute `y = M w` (exact; degree is preserved).
    pub fn compose_linear(&self, m: &nalgebra::DMatrix<f64>) -> PolyFunction {
        assert_eq!(m.nrows(), self.dim);
        let new_dim = m.ncols();
        let mut out = PolyFunction::zero(new_dim);
        for (e, c) in &self.terms {
            let mut prod = PolyFunction::constant(new_dim, *c);
            for (i, &k) in e.iter().enumerate() {
                let lin = PolyFunction {
                    dim: new_dim,
                    terms: (0..new_dim)
                        .filter(|&j| m[(i, j)] != 0.0)
                        .map(|j| {
                            let mut ex = vec![0u8; new_dim];
                            ex[j] = 1;
                            (ex, m[(i, j)])
                        })
                        .collect(),
                };
                for _ in 0..k {
                    prod = prod.mul(&lin).expect("degree preserved by linear substitution");
                }
            }
            out = out.add(&prod);
        }
        out.prune(0.0)
    }

    pub fn max_abs_coeff(&self) -> f64 {
        self.terms.values().fold(0.0, |m, c| m.max(c.abs()))
    }
}

/// Univariate monomial -> Hermite conversion for variance `s2`.
/// Row k gives `z^k` in the basis `h_0..h_4` with
/// `h_0=1, h_1=z, h_2=z^2-s2, h_3=z^3-3 s2 z, h_4=z^4-6 s2 z^2+3 s2^2`.
fn mono_to_hermite_rows(s2: f64) -> [[f64; 5]; 5] {
    [
        [1.0, 0.0, 0.0, 0.0, 0.0],
        [0.0, 1.0, 0.0, 0.0, 0.0],
        [s2, 0.0, 1.0, 0.0, 0.0],
        [0.0, 3.0 * s2, 0.0, 1.0, 0.0],
        [3.0 * s2 * s2, 0.0, 6.0 * s2, 0.0, 1.0],
    ]
}

fn hermite_to_mono_rows(s2: f64) -> [[f64; 5]; 5] {
    [
        [1.0, 0.0, 0.0, 0.0, 0.0],
        [0.0, 1.0, 0.0, 0.0, 0.0],
        [-s2, 0.0, 1.0, 0.0, 0.0],
        [0.0, -3.0 * s2, 0.0, 1.0, 0.0],
        [3.0 * s2 * s2, 0.0, -6.0 * s2, 0.0, 1.0],
    ]
}

/// Tensor-Hermite coefficients (multi-index over drift eigendirections).
struct HermiteRep {
    dim: usize,
    coeffs: BTreeMap<Exps, f64>,
}

fn basis_change(
    terms: &BTreeMap<Exps, f64>,
    dim: usize,
    rows: &[[[f64; 5]; 5]],
) -> BTreeMap<Exps, f64> {
    let mut out: BTreeMap<Exps, f64> = BTreeMap::new();
    for (e, c) in terms {
        // Expand coordinate by coordinate.
        let mut partial: Vec<(Exps, f64)> = vec![(Vec::with_capacity(dim), *c)];
        for (i, &k) in e.iter().enumerate() {
            let row = &rows[i][k as usize];
            let mut next = Vec::with_capacity(partial.len() * 3);
            for (pe, pc) in &partial {
                for (j, &w) in row.iter().enumerate() {
                    if w != 0.0 {
                        let mut ne = pe.clone();
                        ne.push(j as u8);
                        next.push((ne, pc * w));
                    }
                }
            }
            partial = next;
        }
        for (ne, nc) in partial {
            *out.entry(ne).or_insert(0.0) += nc;
        }
    }
    out.retain(|_, c| *c != 0.0);
    out
}

fn to_hermite(spec: &OuSpec, f: &PolyFunction) -> HermiteRep {
    let dim = spec.dimension();
    // Eigencoordinates z = Q^T y, i.e. substitute y = Q z.
    let in_z = f.compose_linear(spec.eigvecs());
    let rows: Vec<[[f64; 5]; 5]> = (0..dim)
        .map(|i| mono_to_hermite_rows(1.0 / (2.0 * spec.eigvals()[i])))
        .collect();
    HermiteRep { dim, coeffs: basis_change(&in_z.terms, dim, &rows) }
}

fn from_hermite(spec: &OuSpec, rep: &HermiteRep) -> PolyFunction {
    let rows: Vec<[[f64; 5]; 5]> = (0..rep.dim)
        .map(|i| hermite_to_mono_rows(1.0 / (2.0 * spec.eigvals()[i])))
        .collect();
    let in_z = PolyFunction { dim: rep.dim, terms: basis_change(&rep.coeffs, rep.dim, &rows) };
    // Back to the original coordinates: z = Q^T y.
    in_z.compose_linear(&spec.eigvecs().transpose())
        .prune(1e-300)
}

/// Apply a spectral multiplier: the Hermite component with decay rate `mu`
/// is scaled by `map(mu)`. The constant component has rate 0.
pub fn apply_spectral(
    spec: &OuSpec,
    f: &PolyFunction,
    map: impl Fn(f64) -> f64,
) -> Result<PolyFunction> {
    if f.dim() != spec.dimension() {
        return Err(Error::DimensionMismatch(format!(
            "polynomial dimension {} vs OU dimension {}",
            f.dim(),
            spec.dimension()
        )));
    }
    let mut rep = to_hermite(spec, f);
    for (k, c) in rep.coeffs.iter_mut() {
        let rate: f64 = k
            .iter()
            .enumerate()
            .map(|(i, &ki)| ki as f64 * spec.eigvals()[i])
            .sum();
        *c *= map(rate);
    }
    Ok(from_hermite(spec, &rep))
}

/// `P_t f` in closed form: the conditional expectation
/// `y -> E[f(y_t) | y_0 = y]` for the OU process.
pub fn semigroup_apply(spec: &OuSpec, f: &PolyFunction, t: f64) -> Result<PolyFunction> {
    if t < 0.0 {
        return Err(Error::Domain(format!("semigroup time must be >= 0, got {t}")));
    }
    apply_spectral(spec, f, |rate| (-rate * t).exp())
}

/// `integral of f` against the invariant measure `N(0, A^{-1}/2)`.
pub fn invariant_mean(spec: &OuSpec, f: &PolyFunction) -> Result<f64> {
    if f.dim() != spec.dimension() {
        return Err(Error::DimensionMismatch(format!(
            "polynomial dimension {} vs OU dimension {}",
            f.dim(),
            spec.dimension()
        )));
    }
    let rep = to_hermite(spec, f);
    Ok(rep.coeffs.get(&vec![0u8; f.dim()]).copied().unwrap_or(0.0))
}

/// Sup over Hermite components of `|coef|`, a basis-adapted size used by the
/// spectral-gap checks.
pub fn hermite_norm_centered(spec: &OuSpec, f: &PolyFunction) -> Result<f64> {
    let rep = to_hermite(spec, f);
    Ok(rep
        .coeffs
        .iter()
        .filter(|(k, _)| k.iter().any(|&x| x > 0))
        .fold(0.0, |m, (_, c)| m.max(c.abs())))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use nalgebra::DMatrix;

    fn poly_close(a: &PolyFunction, b: &PolyFunction, tol: f64) -> bool {
        a.sub(b).max_abs_coeff() <= tol
    }

    #[test]
    fn semigroup_on_coordinate() {
        // f(y) = y, A = 1: P_t f = e^{-t} y.
        let spec = OuSpec::scalar(1.0).unwrap();
        let f = PolyFunction::coordinate(1, 0);
        let pt = semigroup_apply(&spec, &f, 0.7).unwrap();
        let expect = f.scale((-0.7f64).exp());
        assert!(poly_close(&pt, &expect, 1e-14));
    }

    #[test]
    fn semigroup_fixes_constants() {
        let spec = OuSpec::scalar(3.0).unwrap();
        let f = PolyFunction::constant(1, 4.2);
        for t in [0.0, 0.5, 10.0] {
            assert!(poly_close(&semigroup_apply(&spec, &f, t).unwrap(), &f, 1e-14));
        }
    }

    #[test]
    fn semigroup_on_square() {
        // f(y) = y^2, A = 1: P_t f = e^{-2t} y^2 + (1 - e^{-2t})/2.
        let spec = OuSpec::scalar(1.0).unwrap();
        let f = PolyFunction::from_terms(1, &[(vec![2], 1.0)]).unwrap();
        let t = 0.3;
        let pt = semigroup_apply(&spec, &f, t).unwrap();
        let e2 = (-2.0 * t).exp();
        let expect =
            PolyFunction::from_terms(1, &[(vec![2], e2), (vec![0], (1.0 - e2) / 2.0)]).unwrap();
        assert!(poly_close(&pt, &expect, 1e-14));
    }

    #[test]
    fn semigroup_property() {
        // P_s P_t = P_{s+t} exactly on coefficients.
        let spec =
            OuSpec::new(DMatrix::from_row_slice(2, 2, &[1.5, 0.4, 0.4, 0.9])).unwrap();
        let f = PolyFunction::from_terms(
            2,
            &[(vec![1, 0], 1.0), (vec![0, 2], -0.5), (vec![2, 2], 0.25), (vec![3, 1], 0.1)],
        )
        .unwrap();
        let a = semigroup_apply(&spec, &semigroup_apply(&spec, &f, 0.4).unwrap(), 0.9).unwrap();
        let b = semigroup_apply(&spec, &f, 1.3).unwrap();
        assert!(poly_close(&a, &b, 1e-12), "defect {}", a.sub(&b).max_abs_coeff());
    }

    #[test]
    fn invariant_means() {
        let spec = OuSpec::scalar(1.0).unwrap();
        let y = PolyFunction::coordinate(1, 0);
        let y2 = y.mul(&y).unwrap();
        let y4 = y2.mul(&y2).unwrap();
        assert_abs_diff_eq!(invariant_mean(&spec, &y).unwrap(), 0.0, epsilon = 1e-15);
        assert_abs_diff_eq!(invariant_mean(&spec, &y2).unwrap(), 0.5, epsilon = 1e-14);
        // Gaussian fourth moment: 3 sigma^4 = 3/4.
        assert_abs_diff_eq!(invariant_mean(&spec, &y4).unwrap(), 0.75, epsilon = 1e-14);
    }

    #[test]
    fn mean_is_semigroup_invariant() {
        let spec =
            OuSpec::new(DMatrix::from_row_slice(2, 2, &[2.0, -0.3, -0.3, 1.0])).unwrap();
        let f = PolyFunction::from_terms(
            2,
            &[(vec![1, 1], 1.0), (vec![0, 3], 0.7), (vec![4, 0], -0.2), (vec![0, 0], 0.1)],
        )
        .unwrap();
        let m0 = invariant_mean(&spec, &f).unwrap();
        for t in [0.1, 1.0, 5.0] {
            let mt = invariant_mean(&spec, &semigroup_apply(&spec, &f, t).unwrap()).unwrap();
            assert_abs_diff_eq!(mt, m0, epsilon = 1e-12);
        }
    }

    #[test]
    fn spectral_gap_decay() {
        // Centered observables decay at least at the gap rate in the Hermite norm.
        let spec =
            OuSpec::new(DMatrix::from_row_slice(2, 2, &[1.2, 0.2, 0.2, 2.0])).unwrap();
        let c = spec.gap_rate();
        let raw = PolyFunction::from_terms(
            2,
            &[(vec![2, 1], 0.8), (vec![1, 0], -1.0), (vec![0, 4], 0.3)],
        )
        .unwrap();
        let mean = invariant_mean(&spec, &raw).unwrap();
        let f = raw.sub(&PolyFunction::constant(2, mean));
        let base = hermite_norm_centered(&spec, &f).unwrap();
        for t in [1.0, 2.0, 4.0] {
            let pt = semigroup_apply(&spec, &f, t).unwrap();
            let norm = hermite_norm_centered(&spec, &pt).unwrap();
            assert!(
                norm <= (-c * t).exp() * base * (1.0 + 1e-12),
                "t={t}: {norm} vs {}",
                (-c * t).exp() * base
            );
        }
    }

    #[test]
    fn empirical_path_statistics_match_semigroup() {
        // E[y_0^2 y_tau^2] for the stationary scalar OU equals
        // invariant_mean(y^2 * P_tau(y^2)).
        let spec = OuSpec::scalar(1.0).unwrap();
        let grid = crate::grid::TimeGrid::unit(8).unwrap();
        let eps = 0.5;
        let tau = grid.h() / eps;
        let y2 = PolyFunction::from_terms(1, &[(vec![2], 1.0)]).unwrap();
        let pt = semigroup_apply(&spec, &y2, tau).unwrap();
        let expect = invariant_mean(&spec, &y2.mul(&pt).unwrap()).unwrap();
        let n_paths = 60_000usize;
        let mut acc = 0.0;
        for s in 0..n_paths {
            let p = crate::ou::sample_ou(&spec, grid, eps, s as u64).unwrap();
            acc += p.values[0][0].powi(2) * p.values[1][0].powi(2);
        }
        let mean = acc / n_paths as f64;
        // Var of y0^2 y1^2 is O(1); 3 SE band.
        let se = (3.0f64 / n_paths as f64).sqrt();
        assert!((mean - expect).abs() < 3.0 * se, "{mean} vs {expect}");
    }

    #[test]
    fn degree_cap_enforced() {
        let y2 = PolyFunction::from_terms(1, &[(vec![2], 1.0)]).unwrap();
        let y4 = y2.mul(&y2).unwrap();
        assert!(y4.mul(&y2).is_err());
        assert!(PolyFunction::from_terms(1, &[(vec![5], 1.0)]).is_err());
    }
}
