//! Matrices stored as natural logarithms of their entries.
//!
//! Zero entries are `-inf`. Max-times products become max-plus products
//! and classical products become log-sum-exp products, so powers with
//! exponents in the hundreds or thousands stay representable.

use crate::error::Result;
use crate::matrix::NonnegMatrix;

pub(crate) const NEG_INF: f64 = f64::NEG_INFINITY;

/// `ln` of a nonnegative matrix; absent edges are `-inf`.
#[derive(Clone, Debug, PartialEq)]
pub struct LogMatrix {
    n: usize,
    w: Vec<f64>,
}

impl LogMatrix {
    pub fn from_matrix(a: &NonnegMatrix) -> Self {
        let w = a
            .entries()
            .iter()
            .map(|&v| if v > 0.0 { v.ln() } else { NEG_INF })
            .collect();
        Self { n: a.n(), w }
    }

    pub(crate) fn from_raw(n: usize, w: Vec<f64>) -> Self {
        debug_assert_eq!(w.len(), n * n);
        debug_assert!(w.iter().all(|v| !v.is_nan() && *v != f64::INFINITY));
        Self { n, w }
    }

    /// Max-plus identity: `0` on the diagonal, `-inf` elsewhere.
    pub fn identity(n: usize) -> Self {
        let mut w = vec![NEG_INF; n * n];
        for i in 0..n {
            w[i * n + i] = 0.0;
        }
        Self { n, w }
    }

    /// Exponentiates back; fails on overflow.
    pub fn to_matrix(&self) -> Result<NonnegMatrix> {
        NonnegMatrix::from_computed(self.n, self.w.iter().map(|v| v.exp()).collect())
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.w[i * self.n + j]
    }

    pub fn weights(&self) -> &[f64] {
        &self.w
    }

    #[inline]
    pub fn has_edge(&self, i: usize, j: usize) -> bool {
        self.get(i, j) > NEG_INF
    }

    /// `ln ‖A‖`.
    pub fn max_entry(&self) -> f64 {
        self.w.iter().copied().fold(NEG_INF, f64::max)
    }

    /// Log of the Hadamard power `A^(t)`.
    pub fn hadamard_power(&self, t: f64) -> Self {
        debug_assert!(t > 0.0);
        Self {
            n: self.n,
            w: self.w.iter().map(|&v| v * t).collect(),
        }
    }

    /// Log of `e^c · A`.
    pub fn shift(&self, c: f64) -> Self {
        Self {
            n: self.n,
            w: self.w.iter().map(|&v| v + c).collect(),
        }
    }

    /// Log of `A ⊗ B`.
    pub fn max_mul(&self, other: &Self) -> Self {
        assert_eq!(self.n, other.n);
        let n = self.n;
        let mut out = vec![NEG_INF; n * n];
        for i in 0..n {
            for k in 0..n {
                let a = self.w[i * n + k];
                if a == NEG_INF {
                    continue;
                }
                for j in 0..n {
                    let v = a + other.w[k * n + j];
                    if v > out[i * n + j] {
                        out[i * n + j] = v;
                    }
                }
            }
        }
        Self { n, w: out }
    }

    /// Log of the classical product `AB`.
    pub fn sum_mul(&self, other: &Self) -> Self {
        assert_eq!(self.n, other.n);
        let n = self.n;
        let mut out = vec![NEG_INF; n * n];
        let mut terms = vec![NEG_INF; n];
        for i in 0..n {
            for j in 0..n {
                let mut top = NEG_INF;
                for k in 0..n {
                    let v = self.w[i * n + k] + other.w[k * n + j];
                    terms[k] = v;
                    if v > top {
                        top = v;
                    }
                }
                if top == NEG_INF {
                    continue;
                }
                let s: f64 = terms.iter().map(|&v| (v - top).exp()).sum();
                out[i * n + j] = top + s.ln();
            }
        }
        Self { n, w: out }
    }

    pub fn submatrix(&self, idx: &[usize]) -> Self {
        let m = idx.len();
        let mut w = Vec::with_capacity(m * m);
        for &i in idx {
            for &j in idx {
                w.push(self.get(i, j));
            }
        }
        Self { n: m, w }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn products_agree_with_linear_domain() {
        let a =
            NonnegMatrix::from_rows(&[[0.5, 2.0, 0.0], [0.0, 1.5, 3.0], [4.0, 0.0, 0.25]]).unwrap();
        let b =
            NonnegMatrix::from_rows(&[[1.0, 0.0, 2.0], [0.5, 0.5, 0.0], [0.0, 3.0, 1.0]]).unwrap();
        let la = LogMatrix::from_matrix(&a);
        let lb = LogMatrix::from_matrix(&b);
        let mx = la.max_mul(&lb).to_matrix().unwrap();
        let sm = la.sum_mul(&lb).to_matrix().unwrap();
        assert!(mx.max_rel_diff(&a.max_mul(&b).unwrap()) < 1e-14);
        assert!(sm.max_rel_diff(&a.mul(&b).unwrap()) < 1e-14);
        assert!(la.to_matrix().unwrap().max_rel_diff(&a) < 1e-15);
    }

    #[test]
    fn hadamard_power_beyond_float_range() {
        let a = NonnegMatrix::from_rows(&[[1e3, 0.0], [1e-3, 2.0]]).unwrap();
        let p = LogMatrix::from_matrix(&a).hadamard_power(1024.0);
        assert!((p.get(0, 0) - 1024.0 * 1e3f64.ln()).abs() < 1e-9);
        assert_eq!(p.get(0, 1), NEG_INF);
        assert!(p.to_matrix().is_err());
    }
}
