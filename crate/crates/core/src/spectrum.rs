//! Local spectral radii, the two point spectra, and eigenvectors.
//!
//! `r_{e_i}(A)` is the largest cycle geometric mean over classes with
//! access to `i`; `ρ_{e_i}(A)` is the largest Perron root over the same
//! classes. The max-algebra spectrum `σ_⊗(A)` is the set of values
//! `r_{e_i}(A)` and the distinguished spectrum `σ_D(A)` the set of values
//! `ρ_{e_i}(A)`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{self, maxplus_closure, Condensation};
use crate::logdomain::{LogMatrix, NEG_INF};
use crate::matrix::{NonnegMatrix, NonnegVector};

/// Relative tolerance used to merge equal spectral values.
pub const SPECTRUM_MERGE_TOL: f64 = 1e-9;

/// Relative residual accepted for constructed eigenvectors.
pub const EIGEN_RESIDUAL_TOL: f64 = 1e-9;

pub(crate) fn rel_eq(a: f64, b: f64, tol: f64) -> bool {
    let s = a.abs().max(b.abs());
    s == 0.0 || (a - b).abs() <= tol * s
}

/// Sorted distinct values, merging neighbours within `rel_tol`.
pub fn distinct_values(values: &[f64], rel_tol: f64) -> Vec<f64> {
    let mut v = values.to_vec();
    v.sort_by(|a, b| a.total_cmp(b));
    let mut out: Vec<f64> = Vec::new();
    for x in v {
        match out.last() {
            Some(&last) if rel_eq(last, x, rel_tol) => {}
            _ => out.push(x),
        }
    }
    out
}

fn check_index(a: &NonnegMatrix, i: usize) -> Result<()> {
    if i < a.n() {
        Ok(())
    } else {
        Err(Error::IndexOutOfRange { index: i, n: a.n() })
    }
}

/// Maximum cycle geometric mean `r_⊗(A)`.
pub fn max_cycle_mean(a: &NonnegMatrix) -> f64 {
    graph::ln_max_cycle_mean(&LogMatrix::from_matrix(a)).exp()
}

/// Perron root of an irreducible (or `1 × 1`) matrix.
pub fn perron_root(b: &NonnegMatrix) -> Result<f64> {
    let w = LogMatrix::from_matrix(b);
    if b.n() > 1 && graph::strongly_connected_classes(&w).len() != 1 {
        return Err(Error::Reducible);
    }
    Ok(graph::perron_log_block(w.weights(), b.n())?.ln_root.exp())
}

/// Classical spectral radius `ρ(A)`, the largest class Perron root.
pub fn spectral_radius(a: &NonnegMatrix) -> Result<f64> {
    Ok(Condensation::new(a)?.ln_spectral_radius().exp())
}

/// `r_{e_i}(A)` (zero-based `i`).
pub fn local_r(a: &NonnegMatrix, i: usize) -> Result<f64> {
    check_index(a, i)?;
    Ok(Condensation::new(a)?.ln_local_r(i).0.exp())
}

/// `ρ_{e_i}(A)` (zero-based `i`).
pub fn local_rho(a: &NonnegMatrix, i: usize) -> Result<f64> {
    check_index(a, i)?;
    Ok(Condensation::new(a)?.ln_local_rho(i).0.exp())
}

/// A local spectral radius at a vector. `zero_vector` flags the `x = 0`
/// convention, where the value is 0.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct AtVector {
    pub value: f64,
    pub zero_vector: bool,
}

fn max_over_support(per_index: &[f64], x: &NonnegVector) -> Result<AtVector> {
    if x.len() != per_index.len() {
        return Err(Error::DimensionMismatch {
            left: per_index.len(),
            right: x.len(),
        });
    }
    let support = x.support();
    if support.is_empty() {
        return Ok(AtVector {
            value: 0.0,
            zero_vector: true,
        });
    }
    let value = support.iter().map(|&i| per_index[i]).fold(0.0, f64::max);
    Ok(AtVector {
        value,
        zero_vector: false,
    })
}

/// `r_x(A)`: the largest `r_{e_j}(A)` over the support of `x`.
pub fn local_r_at(a: &NonnegMatrix, x: &NonnegVector) -> Result<AtVector> {
    let profile = spectrum(a)?;
    max_over_support(&profile.r, x)
}

/// `ρ_x(A)`: the largest `ρ_{e_j}(A)` over the support of `x`.
pub fn local_rho_at(a: &NonnegMatrix, x: &NonnegVector) -> Result<AtVector> {
    let profile = spectrum(a)?;
    max_over_support(&profile.rho, x)
}

/// Per-index local radii in both semirings and the resulting spectra.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SpectralProfile {
    pub n: usize,
    /// Classes of the digraph, ordered by smallest member.
    pub classes: Vec<Vec<usize>>,
    /// `r_{e_i}(A)`.
    pub r: Vec<f64>,
    /// `ρ_{e_i}(A)`.
    pub rho: Vec<f64>,
    /// `σ_⊗(A)`, ascending.
    pub sigma_max: Vec<f64>,
    /// `σ_D(A)`, ascending.
    pub sigma_dist: Vec<f64>,
    /// Class attaining `r_{e_i}`, lowest index on ties.
    pub r_witness: Vec<usize>,
    /// Class attaining `ρ_{e_i}`, lowest index on ties.
    pub rho_witness: Vec<usize>,
}

impl SpectralProfile {
    pub fn from_condensation(c: &Condensation) -> Self {
        let n = c.n();
        let (r, r_witness): (Vec<f64>, Vec<usize>) = (0..n)
            .map(|i| {
                let (v, w) = c.ln_local_r(i);
                (v.exp(), w)
            })
            .unzip();
        let (rho, rho_witness): (Vec<f64>, Vec<usize>) = (0..n)
            .map(|i| {
                let (v, w) = c.ln_local_rho(i);
                (v.exp(), w)
            })
            .unzip();
        Self {
            n,
            classes: c.classes().to_vec(),
            sigma_max: distinct_values(&r, SPECTRUM_MERGE_TOL),
            sigma_dist: distinct_values(&rho, SPECTRUM_MERGE_TOL),
            r,
            rho,
            r_witness,
            rho_witness,
        }
    }

    /// `r_⊗(A)`.
    pub fn max_cycle_mean(&self) -> f64 {
        self.r.iter().copied().fold(0.0, f64::max)
    }

    /// `ρ(A)`.
    pub fn spectral_radius(&self) -> f64 {
        self.rho.iter().copied().fold(0.0, f64::max)
    }

    /// First index whose `r_{e_i}` equals `lambda`.
    pub fn max_witness_index(&self, lambda: f64) -> Option<usize> {
        self.r
            .iter()
            .position(|&v| rel_eq(v, lambda, SPECTRUM_MERGE_TOL))
    }

    /// First index whose `ρ_{e_i}` equals `lambda`.
    pub fn dist_witness_index(&self, lambda: f64) -> Option<usize> {
        self.rho
            .iter()
            .position(|&v| rel_eq(v, lambda, SPECTRUM_MERGE_TOL))
    }
}

pub fn spectrum(a: &NonnegMatrix) -> Result<SpectralProfile> {
    Ok(SpectralProfile::from_condensation(&Condensation::new(a)?))
}

/// Among classes with access to `target` whose value matches `lambda`,
/// one that no other matching class has access to (lowest index first).
fn select_maximal_class(
    c: &Condensation,
    target: usize,
    ln_values: &[f64],
    lambda: f64,
) -> Option<usize> {
    let candidates: Vec<usize> = (0..c.class_count())
        .filter(|&mu| {
            c.has_access(mu, target) && rel_eq(ln_values[mu].exp(), lambda, SPECTRUM_MERGE_TOL)
        })
        .collect();
    candidates.iter().copied().find(|&mu| {
        !candidates
            .iter()
            .any(|&nu| nu != mu && c.has_access(nu, mu))
    })
}

fn relative_residual(av: &[f64], lambda: f64, v: &NonnegVector) -> f64 {
    let err = av
        .iter()
        .zip(v.entries())
        .map(|(x, y)| (x - lambda * y).abs())
        .fold(0.0, f64::max);
    err / (lambda * v.norm())
}

/// Relative residual `‖A ⊗ v - λ v‖ / (λ ‖v‖)`, or `‖A ⊗ v‖` when `λ = 0`.
pub fn max_residual(a: &NonnegMatrix, lambda: f64, v: &NonnegVector) -> Result<f64> {
    let av = a.max_vec_mul(v)?;
    Ok(if lambda == 0.0 {
        av.norm() / v.norm()
    } else {
        relative_residual(av.entries(), lambda, v)
    })
}

/// As [`max_residual`] for the classical product.
pub fn dist_residual(a: &NonnegMatrix, lambda: f64, v: &NonnegVector) -> Result<f64> {
    let av = a.mul_vec(v)?;
    Ok(if lambda == 0.0 {
        av.norm() / v.norm()
    } else {
        relative_residual(av.entries(), lambda, v)
    })
}

/// For `λ = 0`: no cycle reaches the witness, so its ancestors form a DAG
/// and one of them has a zero column. That unit vector is annihilated in
/// both semirings.
fn zero_eigenvector(a: &NonnegMatrix, witness: usize) -> Result<NonnegVector> {
    let c = Condensation::new(a)?;
    if c.ln_local_r(witness).0 > f64::NEG_INFINITY {
        return Err(Error::NotAnEigenvalue { lambda: 0.0 });
    }
    let target = c.class_of(witness);
    (0..a.n())
        .find(|&j| c.has_access(c.class_of(j), target) && (0..a.n()).all(|u| a.get(u, j) == 0.0))
        .map(|j| NonnegVector::unit(a.n(), j))
        .ok_or(Error::NotAnEigenvalue { lambda: 0.0 })
}

fn validate_lambda(lambda: f64) -> Result<()> {
    if lambda.is_finite() && lambda > 0.0 {
        Ok(())
    } else {
        Err(Error::NotAnEigenvalue { lambda })
    }
}

/// A nonzero `v >= 0` with `A ⊗ v = λ v`, where `λ = r_{e_w}(A)` for the
/// witness index `w`.
///
/// Built from the Kleene star of `A / λ` restricted to the initial
/// segment of a class attaining `λ`, taking the column at a critical
/// vertex of that class.
pub fn max_eigenvector(a: &NonnegMatrix, lambda: f64, witness: usize) -> Result<NonnegVector> {
    check_index(a, witness)?;
    if lambda == 0.0 {
        return zero_eigenvector(a, witness);
    }
    validate_lambda(lambda)?;
    let c = Condensation::new(a)?;
    let (ln_r, _) = c.ln_local_r(witness);
    if !rel_eq(ln_r.exp(), lambda, SPECTRUM_MERGE_TOL) {
        return Err(Error::NotAnEigenvalue { lambda });
    }
    let ln_values: Vec<f64> = (0..c.class_count()).map(|mu| c.ln_mcgm(mu)).collect();
    let mu = select_maximal_class(&c, c.class_of(witness), &ln_values, lambda)
        .ok_or(Error::NotAnEigenvalue { lambda })?;

    let seg = c.ancestors_of_class(mu);
    let m = seg.len();
    let block = c.weights().submatrix(&seg).shift(-c.ln_mcgm(mu));
    let closure = maxplus_closure(block.weights(), m);
    let z = seg
        .iter()
        .enumerate()
        .filter(|(_, &v)| c.class_of(v) == mu)
        .map(|(k, _)| k)
        .fold(None, |best: Option<usize>, k| match best {
            Some(b) if closure[b * m + b] >= closure[k * m + k] => Some(b),
            _ => Some(k),
        })
        .expect("class is nonempty");
    let col: Vec<f64> = (0..m)
        .map(|u| {
            if u == z {
                0.0f64.max(closure[z * m + z])
            } else {
                closure[u * m + z]
            }
        })
        .collect();
    let top = col.iter().copied().fold(NEG_INF, f64::max);
    let mut v = vec![0.0; a.n()];
    for (k, &u) in seg.iter().enumerate() {
        v[u] = (col[k] - top).exp();
    }
    let v = NonnegVector::new(v)?;
    let av = a.max_vec_mul(&v)?;
    let residual = relative_residual(av.entries(), lambda, &v);
    if residual > EIGEN_RESIDUAL_TOL {
        return Err(Error::EigenvectorResidual { residual });
    }
    Ok(v)
}

/// `Σ_{k>=0} M^k` by doubling, for `M` with spectral radius below one.
fn neumann_sum(m_mat: &[f64], m: usize) -> Option<Vec<f64>> {
    let mul = |x: &[f64], y: &[f64]| {
        let mut out = vec![0.0; m * m];
        for i in 0..m {
            for k in 0..m {
                let a = x[i * m + k];
                if a == 0.0 {
                    continue;
                }
                for j in 0..m {
                    out[i * m + j] += a * y[k * m + j];
                }
            }
        }
        out
    };
    let mut sum = vec![0.0; m * m];
    for i in 0..m {
        sum[i * m + i] = 1.0;
    }
    let mut p = m_mat.to_vec();
    for _ in 0..64 {
        let ps = mul(&p, &sum);
        let sum_norm = sum.iter().copied().fold(0.0, f64::max);
        let inc_norm = ps.iter().copied().fold(0.0, f64::max);
        if !inc_norm.is_finite() || inc_norm > 1e200 {
            return None;
        }
        sum.iter_mut().zip(&ps).for_each(|(s, d)| *s += d);
        if inc_norm <= 1e-18 * sum_norm {
            return Some(sum);
        }
        p = mul(&p, &p);
    }
    None
}

/// A nonzero `v >= 0` with `A v = λ v`, where `λ = ρ_{e_w}(A)` for the
/// witness index `w`.
///
/// The Perron vector of a class attaining `λ` (with no ancestor class of
/// equal Perron root) is extended to its ancestors one class at a time,
/// solving `(λ I - A_νν) v_ν = inflow` with a Neumann series.
pub fn dist_eigenvector(a: &NonnegMatrix, lambda: f64, witness: usize) -> Result<NonnegVector> {
    check_index(a, witness)?;
    if lambda == 0.0 {
        return zero_eigenvector(a, witness);
    }
    validate_lambda(lambda)?;
    let c = Condensation::new(a)?;
    let (ln_rho, _) = c.ln_local_rho(witness);
    if !rel_eq(ln_rho.exp(), lambda, SPECTRUM_MERGE_TOL) {
        return Err(Error::NotAnEigenvalue { lambda });
    }
    let ln_values: Vec<f64> = (0..c.class_count()).map(|mu| c.ln_perron(mu)).collect();
    let mu = select_maximal_class(&c, c.class_of(witness), &ln_values, lambda)
        .ok_or(Error::NotAnEigenvalue { lambda })?;
    let lam = c.perron(mu);
    let n = a.n();
    let mut v = vec![0.0; n];
    let pv = c.perron_block(mu)?;
    for (k, &u) in c.classes()[mu].iter().enumerate() {
        v[u] = pv.ln_vector[k].exp();
    }

    // Ancestor classes, descendants first: a class reaching more classes
    // comes later.
    let mut order: Vec<usize> = (0..c.class_count())
        .filter(|&nu| nu != mu && c.has_access(nu, mu))
        .collect();
    let reach = |nu: usize| {
        (0..c.class_count())
            .filter(|&t| c.has_access(nu, t))
            .count()
    };
    order.sort_by_key(|&nu| (reach(nu), nu));

    for nu in order {
        let members = &c.classes()[nu];
        let m = members.len();
        let inflow: Vec<f64> = members
            .iter()
            .map(|&u| {
                (0..n)
                    .filter(|&w| c.class_of(w) != nu)
                    .map(|w| a.get(u, w) * v[w])
                    .sum()
            })
            .collect();
        let scaled: Vec<f64> = members
            .iter()
            .flat_map(|&u| members.iter().map(move |&w| (u, w)))
            .map(|(u, w)| a.get(u, w) / lam)
            .collect();
        let series = neumann_sum(&scaled, m).ok_or(Error::NeumannDiverged { class: nu })?;
        for (r, &u) in members.iter().enumerate() {
            v[u] = (0..m).map(|s| series[r * m + s] * inflow[s]).sum::<f64>() / lam;
        }
    }

    let top = v.iter().copied().fold(0.0, f64::max);
    let v = NonnegVector::new(v.iter().map(|x| x / top).collect())?;
    let av = a.mul_vec(&v)?;
    let residual = relative_residual(av.entries(), lambda, &v);
    if residual > EIGEN_RESIDUAL_TOL {
        return Err(Error::EigenvectorResidual { residual });
    }
    Ok(v)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(rows: &[&[f64]]) -> NonnegMatrix {
        NonnegMatrix::from_rows(rows).unwrap()
    }

    fn close(a: f64, b: f64, tol: f64) -> bool {
        rel_eq(a, b, tol)
    }

    #[test]
    fn example_pair_local_r() {
        let axb = m(&[&[1.0, 2.0], &[0.0, 0.0]]);
        let bxa = m(&[&[1.0, 0.0], &[3.0, 0.0]]);
        assert!(close(local_r(&axb, 0).unwrap(), 1.0, 1e-12));
        assert!(close(local_r(&axb, 1).unwrap(), 1.0, 1e-12));
        assert!(close(local_r(&bxa, 0).unwrap(), 1.0, 1e-12));
        assert_eq!(local_r(&bxa, 1).unwrap(), 0.0);
    }

    #[test]
    fn diagonal_local_values() {
        let d = NonnegMatrix::diag(&[0.5, 3.0, 2.0]).unwrap();
        for (i, &di) in [0.5, 3.0, 2.0].iter().enumerate() {
            assert!(close(local_r(&d, i).unwrap(), di, 1e-15));
            assert!(close(local_rho(&d, i).unwrap(), di, 1e-15));
        }
        assert!(close(max_cycle_mean(&d), 3.0, 1e-15));
    }

    #[test]
    fn swap_matrix_local_rho() {
        let a = m(&[&[0.0, 1.0 / 3.0], &[1.0 / 3.0, 0.0]]);
        assert!(close(local_rho(&a, 0).unwrap(), 1.0 / 3.0, 1e-15));
        assert!(close(local_rho(&a, 1).unwrap(), 1.0 / 3.0, 1e-15));
        assert!(close(perron_root(&a).unwrap(), 1.0 / 3.0, 1e-15));
    }

    #[test]
    fn perron_root_rejects_reducible() {
        assert_eq!(
            perron_root(&m(&[&[1.0, 0.0], &[1.0, 2.0]])),
            Err(Error::Reducible)
        );
        assert_eq!(perron_root(&m(&[&[2.5]])).unwrap(), 2.5);
        assert_eq!(perron_root(&m(&[&[0.0]])).unwrap(), 0.0);
    }

    #[test]
    fn index_errors() {
        let a = NonnegMatrix::identity(2);
        assert!(matches!(local_r(&a, 2), Err(Error::IndexOutOfRange { .. })));
        assert!(matches!(
            local_rho(&a, 5),
            Err(Error::IndexOutOfRange { .. })
        ));
        assert!(local_r_at(&a, &NonnegVector::ones(3)).is_err());
    }

    #[test]
    fn at_vector_reduces_to_support_max() {
        let a = m(&[&[1.0, 0.0, 0.0], &[1.0, 2.0, 0.0], &[0.0, 0.0, 0.5]]);
        let e2 = NonnegVector::unit(3, 2);
        assert!(close(
            local_r_at(&a, &e2).unwrap().value,
            local_r(&a, 2).unwrap(),
            0.0
        ));
        let ones = NonnegVector::ones(3);
        assert!(close(
            local_r_at(&a, &ones).unwrap().value,
            max_cycle_mean(&a),
            1e-15
        ));
        assert!(close(
            local_rho_at(&a, &ones).unwrap().value,
            spectral_radius(&a).unwrap(),
            1e-15
        ));
        let zero = local_rho_at(&a, &NonnegVector::zeros(3)).unwrap();
        assert_eq!(
            zero,
            AtVector {
                value: 0.0,
                zero_vector: true
            }
        );
    }

    #[test]
    fn example_spectra() {
        let a = NonnegMatrix::diag(&[1.0, 2.0]).unwrap();
        let p = spectrum(&a).unwrap();
        assert_eq!(p.sigma_max.len(), 2);
        assert!(close(p.sigma_max[0], 1.0, 1e-12) && close(p.sigma_max[1], 2.0, 1e-12));
        assert_eq!(p.sigma_max.len(), p.sigma_dist.len());
        for k in 1..=5 {
            let ak = m(&[&[1.0, 0.0], &[1.0 / k as f64, 2.0]]);
            let p = spectrum(&ak).unwrap();
            assert_eq!(p.sigma_max.len(), 1);
            assert_eq!(p.sigma_dist.len(), 1);
            assert!(close(p.sigma_max[0], 2.0, 1e-12));
            assert!(close(p.sigma_dist[0], 2.0, 1e-12));
        }
        let z = spectrum(&NonnegMatrix::zeros(3)).unwrap();
        assert_eq!(z.sigma_max, vec![0.0]);
        assert_eq!(z.sigma_dist, vec![0.0]);
    }

    #[test]
    fn max_eigenvector_irreducible_is_positive() {
        let b = m(&[&[0.0, 1.0], &[0.25, 0.0]]);
        let v = max_eigenvector(&b, 0.5, 0).unwrap();
        assert!(v.entries().iter().all(|&x| x > 0.0));
        let bv = b.max_vec_mul(&v).unwrap();
        for i in 0..2 {
            assert!((bv.get(i) - 0.5 * v.get(i)).abs() < 1e-15);
        }
    }

    #[test]
    fn eigenvectors_of_diagonal() {
        let d = NonnegMatrix::diag(&[1.0, 2.0]).unwrap();
        assert_eq!(max_eigenvector(&d, 1.0, 0).unwrap().entries(), &[1.0, 0.0]);
        assert_eq!(dist_eigenvector(&d, 2.0, 1).unwrap().entries(), &[0.0, 1.0]);
        assert!(matches!(
            max_eigenvector(&d, 1.5, 0),
            Err(Error::NotAnEigenvalue { .. })
        ));
        assert!(matches!(
            dist_eigenvector(&d, 0.0, 0),
            Err(Error::NotAnEigenvalue { .. })
        ));
    }

    #[test]
    fn dist_eigenvector_symmetric_swap() {
        let a = m(&[&[0.0, 1.0 / 3.0], &[1.0 / 3.0, 0.0]]);
        let v = dist_eigenvector(&a, 1.0 / 3.0, 0).unwrap();
        assert!((v.get(0) - 1.0).abs() < 1e-14 && (v.get(1) - 1.0).abs() < 1e-14);
    }

    #[test]
    fn dist_eigenvector_reducible_chain() {
        // 0 -> 1: class {1} (root 2) is reached from class {0} (root 1).
        let a = m(&[&[1.0, 0.5], &[0.0, 2.0]]);
        let p = spectrum(&a).unwrap();
        assert!(close(p.rho[0], 1.0, 1e-14));
        assert!(close(p.rho[1], 2.0, 1e-14));
        let v = dist_eigenvector(&a, 2.0, 1).unwrap();
        assert!(v.get(0) > 0.0 && v.get(1) > 0.0);
        // (2 - 1) v0 = 0.5 v1
        assert!((v.get(0) - 0.5 * v.get(1)).abs() < 1e-14);
        assert_eq!(dist_eigenvector(&a, 1.0, 0).unwrap().entries(), &[1.0, 0.0]);
        assert!(matches!(
            dist_eigenvector(&a, 2.0, 0),
            Err(Error::NotAnEigenvalue { .. })
        ));
    }

    #[test]
    fn distinct_values_merges_near_duplicates() {
        let v = distinct_values(&[2.0, 1.0, 2.0 * (1.0 + 1e-12), 0.0, 0.0], 1e-9);
        assert_eq!(v, vec![0.0, 1.0, 2.0]);
    }

    #[test]
    fn zero_eigenvalue_uses_a_source_vertex() {
        // 0 -> 1 -> 2, plus a loop at 2.
        let a =
            NonnegMatrix::from_rows(&[[0.0, 1.0, 0.0], [0.0, 0.0, 3.0], [0.0, 0.0, 2.0]]).unwrap();
        let p = spectrum(&a).unwrap();
        assert_eq!(p.r, vec![0.0, 0.0, 2.0]);
        for v in [
            max_eigenvector(&a, 0.0, 1).unwrap(),
            dist_eigenvector(&a, 0.0, 1).unwrap(),
        ] {
            assert_eq!(v, NonnegVector::unit(3, 0));
            assert_eq!(max_residual(&a, 0.0, &v).unwrap(), 0.0);
            assert_eq!(dist_residual(&a, 0.0, &v).unwrap(), 0.0);
        }
        assert!(max_eigenvector(&a, 0.0, 2).is_err());
    }
}
