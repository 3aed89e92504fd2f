//! Dense nonnegative matrices and vectors.
//!
//! Every operation exists in two flavours: the classical semiring
//! `(+, ×)` and the max-times semiring `(max, ×)`. Hadamard (entrywise)
//! products and powers and the max-entry norm round out the set.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

fn check_entry(row: usize, col: usize, value: f64) -> Result<()> {
    if value.is_finite() && value >= 0.0 {
        Ok(())
    } else {
        Err(Error::InvalidEntry { row, col, value })
    }
}

/// Square matrix with finite nonnegative entries, stored row-major.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "MatrixRepr", into = "MatrixRepr")]
pub struct NonnegMatrix {
    n: usize,
    data: Vec<f64>,
}

/// On-disk JSON form: `{"n": 2, "rows": [[..], [..]]}`.
#[derive(Serialize, Deserialize)]
struct MatrixRepr {
    n: usize,
    rows: Vec<Vec<f64>>,
}

impl TryFrom<MatrixRepr> for NonnegMatrix {
    type Error = Error;

    fn try_from(repr: MatrixRepr) -> Result<Self> {
        let m = NonnegMatrix::from_rows(&repr.rows)?;
        if m.n != repr.n {
            return Err(Error::DimensionMismatch {
                left: repr.n,
                right: m.n,
            });
        }
        Ok(m)
    }
}

impl From<NonnegMatrix> for MatrixRepr {
    fn from(m: NonnegMatrix) -> Self {
        MatrixRepr {
            n: m.n,
            rows: m.rows(),
        }
    }
}

impl NonnegMatrix {
    /// Builds an `n × n` matrix from row-major entries.
    pub fn new(n: usize, data: Vec<f64>) -> Result<Self> {
        if n == 0 {
            return Err(Error::EmptyMatrix);
        }
        if data.len() != n * n {
            return Err(Error::WrongEntryCount {
                expected: n * n,
                got: data.len(),
            });
        }
        for (k, &v) in data.iter().enumerate() {
            check_entry(k / n, k % n, v)?;
        }
        Ok(Self { n, data })
    }

    pub fn from_rows<R: AsRef<[f64]>>(rows: &[R]) -> Result<Self> {
        let n = rows.len();
        if n == 0 {
            return Err(Error::EmptyMatrix);
        }
        let mut data = Vec::with_capacity(n * n);
        for r in rows {
            let r = r.as_ref();
            if r.len() != n {
                return Err(Error::DimensionMismatch {
                    left: n,
                    right: r.len(),
                });
            }
            data.extend_from_slice(r);
        }
        Self::new(n, data)
    }

    /// Wraps computed data, rejecting overflowed (non-finite) results.
    pub(crate) fn from_computed(n: usize, data: Vec<f64>) -> Result<Self> {
        if data.iter().any(|v| !v.is_finite()) {
            return Err(Error::Overflow);
        }
        debug_assert!(data.iter().all(|&v| v >= 0.0));
        Ok(Self { n, data })
    }

    pub fn zeros(n: usize) -> Self {
        assert!(n > 0, "matrix dimension must be positive");
        Self {
            n,
            data: vec![0.0; n * n],
        }
    }

    /// The identity, which is also the unit of the max-times semiring.
    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n);
        for i in 0..n {
            m.data[i * n + i] = 1.0;
        }
        m
    }

    /// All-ones matrix, the unit of the Hadamard product.
    pub fn ones(n: usize) -> Self {
        assert!(n > 0, "matrix dimension must be positive");
        Self {
            n,
            data: vec![1.0; n * n],
        }
    }

    pub fn diag(d: &[f64]) -> Result<Self> {
        let n = d.len();
        if n == 0 {
            return Err(Error::EmptyMatrix);
        }
        let mut data = vec![0.0; n * n];
        for (i, &v) in d.iter().enumerate() {
            check_entry(i, i, v)?;
            data[i * n + i] = v;
        }
        Ok(Self { n, data })
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.n + j]
    }

    pub fn entries(&self) -> &[f64] {
        &self.data
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.n..(i + 1) * self.n]
    }

    pub fn rows(&self) -> Vec<Vec<f64>> {
        self.data.chunks(self.n).map(|r| r.to_vec()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&v| v == 0.0)
    }

    fn same_dim(&self, other: &Self) -> Result<()> {
        if self.n == other.n {
            Ok(())
        } else {
            Err(Error::DimensionMismatch {
                left: self.n,
                right: other.n,
            })
        }
    }

    /// `(A ⊗ B)_ij = max_k a_ik b_kj`.
    pub fn max_mul(&self, other: &Self) -> Result<Self> {
        self.same_dim(other)?;
        let n = self.n;
        let mut out = vec![0.0; n * n];
        for i in 0..n {
            for k in 0..n {
                let a = self.data[i * n + k];
                if a == 0.0 {
                    continue;
                }
                for j in 0..n {
                    let v = a * other.data[k * n + j];
                    if v > out[i * n + j] {
                        out[i * n + j] = v;
                    }
                }
            }
        }
        Self::from_computed(n, out)
    }

    /// `(A ⊗ x)_i = max_j a_ij x_j`.
    pub fn max_vec_mul(&self, x: &NonnegVector) -> Result<NonnegVector> {
        if x.len() != self.n {
            return Err(Error::DimensionMismatch {
                left: self.n,
                right: x.len(),
            });
        }
        let out = (0..self.n)
            .map(|i| {
                self.row(i)
                    .iter()
                    .zip(x.entries())
                    .map(|(a, b)| a * b)
                    .fold(0.0, f64::max)
            })
            .collect();
        NonnegVector::from_computed(out)
    }

    /// `k`-th max-times power; `k = 0` gives the identity.
    pub fn max_power(&self, k: u32) -> Result<Self> {
        let mut acc = Self::identity(self.n);
        for _ in 0..k {
            acc = acc.max_mul(self)?;
        }
        Ok(acc)
    }

    /// Entrywise maximum, the max-algebra sum.
    pub fn oplus(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, f64::max)
    }

    /// Entrywise (Hadamard) product.
    pub fn hadamard(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, |a, b| a * b)
    }

    /// Entrywise `t`-th power with `0^t = 0`.
    pub fn hadamard_power(&self, t: f64) -> Result<Self> {
        if !(t > 0.0 && t.is_finite()) {
            return Err(Error::InvalidExponent(t));
        }
        let data = self
            .data
            .iter()
            .map(|&a| if a == 0.0 { 0.0 } else { a.powf(t) })
            .collect();
        Self::from_computed(self.n, data)
    }

    /// Classical sum.
    pub fn add(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, |a, b| a + b)
    }

    fn zip_with(&self, other: &Self, f: impl Fn(f64, f64) -> f64) -> Result<Self> {
        self.same_dim(other)?;
        let data = self
            .data
            .iter()
            .zip(&other.data)
            .map(|(&a, &b)| f(a, b))
            .collect();
        Self::from_computed(self.n, data)
    }

    /// Classical matrix product.
    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.same_dim(other)?;
        let n = self.n;
        let mut out = vec![0.0; n * n];
        for i in 0..n {
            for k in 0..n {
                let a = self.data[i * n + k];
                if a == 0.0 {
                    continue;
                }
                for j in 0..n {
                    out[i * n + j] += a * other.data[k * n + j];
                }
            }
        }
        Self::from_computed(n, out)
    }

    pub fn mul_vec(&self, x: &NonnegVector) -> Result<NonnegVector> {
        if x.len() != self.n {
            return Err(Error::DimensionMismatch {
                left: self.n,
                right: x.len(),
            });
        }
        let out = (0..self.n)
            .map(|i| {
                self.row(i)
                    .iter()
                    .zip(x.entries())
                    .map(|(a, b)| a * b)
                    .sum()
            })
            .collect();
        NonnegVector::from_computed(out)
    }

    /// Classical `k`-th power; `k = 0` gives the identity.
    pub fn pow(&self, k: u32) -> Result<Self> {
        let mut acc = Self::identity(self.n);
        for _ in 0..k {
            acc = acc.mul(self)?;
        }
        Ok(acc)
    }

    /// `‖A‖ = max_ij a_ij`.
    pub fn norm(&self) -> f64 {
        self.data.iter().copied().fold(0.0, f64::max)
    }

    pub fn transpose(&self) -> Self {
        let n = self.n;
        let mut data = vec![0.0; n * n];
        for i in 0..n {
            for j in 0..n {
                data[j * n + i] = self.data[i * n + j];
            }
        }
        Self { n, data }
    }

    pub fn scale(&self, c: f64) -> Result<Self> {
        if !(c.is_finite() && c >= 0.0) {
            return Err(Error::InvalidScalar(c));
        }
        Self::from_computed(self.n, self.data.iter().map(|a| a * c).collect())
    }

    /// Principal submatrix on the given (ordered) index set.
    pub fn submatrix(&self, idx: &[usize]) -> Self {
        let m = idx.len();
        assert!(m > 0, "empty index set");
        let mut data = Vec::with_capacity(m * m);
        for &i in idx {
            for &j in idx {
                data.push(self.get(i, j));
            }
        }
        Self { n: m, data }
    }

    /// Entrywise `self <= other`.
    pub fn le(&self, other: &Self) -> bool {
        self.n == other.n && self.data.iter().zip(&other.data).all(|(a, b)| a <= b)
    }

    /// Largest relative entrywise difference, `|a - b| / max(|a|, |b|)`, zero where both vanish.
    pub fn max_rel_diff(&self, other: &Self) -> f64 {
        assert_eq!(self.n, other.n);
        self.data
            .iter()
            .zip(&other.data)
            .map(|(&a, &b)| {
                let s = a.abs().max(b.abs());
                if s == 0.0 {
                    0.0
                } else {
                    (a - b).abs() / s
                }
            })
            .fold(0.0, f64::max)
    }
}

/// Vector with finite nonnegative entries.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<f64>", into = "Vec<f64>")]
pub struct NonnegVector {
    data: Vec<f64>,
}

impl TryFrom<Vec<f64>> for NonnegVector {
    type Error = Error;

    fn try_from(v: Vec<f64>) -> Result<Self> {
        NonnegVector::new(v)
    }
}

impl From<NonnegVector> for Vec<f64> {
    fn from(v: NonnegVector) -> Self {
        v.data
    }
}

impl NonnegVector {
    pub fn new(data: Vec<f64>) -> Result<Self> {
        if data.is_empty() {
            return Err(Error::EmptyMatrix);
        }
        for (index, &value) in data.iter().enumerate() {
            if !(value.is_finite() && value >= 0.0) {
                return Err(Error::InvalidVectorEntry { index, value });
            }
        }
        Ok(Self { data })
    }

    pub(crate) fn from_computed(data: Vec<f64>) -> Result<Self> {
        if data.iter().any(|v| !v.is_finite()) {
            return Err(Error::Overflow);
        }
        Ok(Self { data })
    }

    pub fn zeros(n: usize) -> Self {
        assert!(n > 0);
        Self { data: vec![0.0; n] }
    }

    pub fn ones(n: usize) -> Self {
        assert!(n > 0);
        Self { data: vec![1.0; n] }
    }

    /// Standard basis vector `e_i` (zero-based `i`).
    pub fn unit(n: usize, i: usize) -> Self {
        assert!(i < n, "unit vector index out of range");
        let mut data = vec![0.0; n];
        data[i] = 1.0;
        Self { data }
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.data.len()
    }

    pub fn is_empty(&self) -> bool {
        self.data.is_empty()
    }

    #[inline]
    pub fn get(&self, i: usize) -> f64 {
        self.data[i]
    }

    pub fn entries(&self) -> &[f64] {
        &self.data
    }

    /// `‖x‖ = max_i x_i`.
    pub fn norm(&self) -> f64 {
        self.data.iter().copied().fold(0.0, f64::max)
    }

    /// Indices of nonzero entries.
    pub fn support(&self) -> Vec<usize> {
        (0..self.data.len())
            .filter(|&i| self.data[i] != 0.0)
            .collect()
    }

    pub fn scale(&self, c: f64) -> Result<Self> {
        if !(c.is_finite() && c >= 0.0) {
            return Err(Error::InvalidScalar(c));
        }
        Self::from_computed(self.data.iter().map(|v| v * c).collect())
    }
}
