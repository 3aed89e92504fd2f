//! Registry of inequalities and identities for Hadamard products,
//! max products and local spectral radii, plus a randomized suite.
//!
//! Notation in statements: `∘` Hadamard product, `⊗` max product,
//! juxtaposition the classical product, `X^(a)` the Hadamard power,
//! `r` the max cycle geometric mean, `r_x`/`ρ_x` local radii at `x`,
//! `‖·‖` the largest entry.
//!
//! Rows marked `proved: false` are statements that fail in general; they
//! are kept so that their counterexamples can be replayed.

use std::fs;
use std::path::{Path, PathBuf};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrix::{NonnegMatrix, NonnegVector};
use crate::oracles::{generate_with, random_vector, GeneratorSpec, SupportKind};
use crate::report::{CheckReport, CHAIN_TOL};
use crate::spectrum;

/// Relative tolerance of the equality rows.
pub const IDENTITY_TOL: f64 = 1e-12;

/// Arguments for a registry row. Unused fields are ignored.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct Inputs {
    pub matrices: Vec<NonnegMatrix>,
    /// Defaults to the all-ones vector.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub x: Option<NonnegVector>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub alpha: Vec<f64>,
    /// Zero-based; `None` checks every index.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub index: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub t: Option<f64>,
    /// `(l, m)` for the product-of-means row: `matrices[i*m + j] = A_{ij}`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub grid: Option<(usize, usize)>,
}

impl Inputs {
    pub fn of(matrices: Vec<NonnegMatrix>) -> Self {
        Self {
            matrices,
            ..Self::default()
        }
    }

    pub fn with_x(mut self, x: NonnegVector) -> Self {
        self.x = Some(x);
        self
    }

    pub fn with_alpha(mut self, alpha: Vec<f64>) -> Self {
        self.alpha = alpha;
        self
    }

    pub fn with_index(mut self, i: usize) -> Self {
        self.index = Some(i);
        self
    }

    pub fn with_t(mut self, t: f64) -> Self {
        self.t = Some(t);
        self
    }

    pub fn with_grid(mut self, l: usize, m: usize) -> Self {
        self.grid = Some((l, m));
        self
    }

    fn n(&self) -> usize {
        self.matrices[0].n()
    }

    fn x(&self) -> Result<NonnegVector> {
        match &self.x {
            Some(x) if x.len() != self.n() => Err(Error::DimensionMismatch {
                left: self.n(),
                right: x.len(),
            }),
            Some(x) => Ok(x.clone()),
            None => Ok(NonnegVector::ones(self.n())),
        }
    }

    fn indices(&self) -> Result<Vec<usize>> {
        match self.index {
            Some(i) if i >= self.n() => Err(Error::IndexOutOfRange {
                index: i,
                n: self.n(),
            }),
            Some(i) => Ok(vec![i]),
            None => Ok((0..self.n()).collect()),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Arity {
    Single,
    Pair,
    /// Any number of matrices, at least one.
    Many,
    /// An even number, at least two.
    Even,
    /// An odd number.
    Odd,
    /// `l × m` matrices laid out by `Inputs::grid`.
    Grid,
}

type Evaluator = fn(&Inputs) -> Result<CheckReport>;

pub struct Row {
    pub key: &'static str,
    pub statement: &'static str,
    pub arity: Arity,
    pub proved: bool,
    eval: Evaluator,
}

impl Row {
    pub fn run(&self, inputs: &Inputs) -> Result<CheckReport> {
        check_arity(self.arity, inputs)?;
        let mut r = (self.eval)(inputs)?;
        r.key = self.key.to_string();
        r.statement = self.statement.to_string();
        r.proved = self.proved;
        Ok(r.with_digest(inputs))
    }
}

fn check_arity(arity: Arity, inputs: &Inputs) -> Result<()> {
    let k = inputs.matrices.len();
    let ok = match arity {
        Arity::Single => k == 1,
        Arity::Pair => k == 2,
        Arity::Many => k >= 1,
        Arity::Even => k >= 2 && k.is_multiple_of(2),
        Arity::Odd => k % 2 == 1,
        Arity::Grid => matches!(inputs.grid, Some((l, m)) if l >= 1 && m >= 1 && l * m == k),
    };
    if !ok {
        let expected = match arity {
            Arity::Single => 1,
            Arity::Pair | Arity::Even => 2,
            Arity::Grid => inputs.grid.map(|(l, m)| l * m).unwrap_or(1),
            Arity::Many | Arity::Odd => 1,
        };
        return Err(Error::Arity { expected, got: k });
    }
    let n = inputs.matrices[0].n();
    if let Some(m) = inputs.matrices.iter().find(|m| m.n() != n) {
        return Err(Error::DimensionMismatch {
            left: n,
            right: m.n(),
        });
    }
    Ok(())
}

// ---- building blocks -------------------------------------------------------

fn r(a: &NonnegMatrix) -> f64 {
    spectrum::max_cycle_mean(a)
}

fn r_at(a: &NonnegMatrix, x: &NonnegVector) -> Result<f64> {
    Ok(spectrum::local_r_at(a, x)?.value)
}

fn rho_at(a: &NonnegMatrix, x: &NonnegVector) -> Result<f64> {
    Ok(spectrum::local_rho_at(a, x)?.value)
}

fn local_r_all(a: &NonnegMatrix) -> Result<Vec<f64>> {
    Ok(spectrum::spectrum(a)?.r)
}

fn hadamard_all<'a>(ms: impl IntoIterator<Item = &'a NonnegMatrix>) -> Result<NonnegMatrix> {
    let mut it = ms.into_iter();
    let first = it.next().ok_or(Error::EmptyMatrix)?.clone();
    it.try_fold(first, |acc, m| acc.hadamard(m))
}

fn max_product<'a>(ms: impl IntoIterator<Item = &'a NonnegMatrix>) -> Result<NonnegMatrix> {
    let mut it = ms.into_iter();
    let first = it.next().ok_or(Error::EmptyMatrix)?.clone();
    it.try_fold(first, |acc, m| acc.max_mul(m))
}

fn product<'a>(ms: impl IntoIterator<Item = &'a NonnegMatrix>) -> Result<NonnegMatrix> {
    let mut it = ms.into_iter();
    let first = it.next().ok_or(Error::EmptyMatrix)?.clone();
    it.try_fold(first, |acc, m| acc.mul(m))
}

/// `P_j = A_j A_{j+1} ... A_m A_1 ... A_{j-1}` under the given product.
fn cyclic_products(ms: &[NonnegMatrix], max: bool) -> Result<Vec<NonnegMatrix>> {
    let m = ms.len();
    (0..m)
        .map(|j| {
            let order = (0..m).map(|k| &ms[(j + k) % m]);
            if max {
                max_product(order)
            } else {
                product(order)
            }
        })
        .collect()
}

fn weighted_hadamard(ms: &[NonnegMatrix], alpha: &[f64]) -> Result<NonnegMatrix> {
    let powered = ms
        .iter()
        .zip(alpha)
        .map(|(a, &t)| a.hadamard_power(t))
        .collect::<Result<Vec<_>>>()?;
    hadamard_all(&powered)
}

fn check_alpha(inputs: &Inputs, m: usize) -> Result<()> {
    if inputs.alpha.len() != m {
        return Err(Error::Arity {
            expected: m,
            got: inputs.alpha.len(),
        });
    }
    if let Some(&a) = inputs.alpha.iter().find(|a| !(a.is_finite() && **a >= 0.0)) {
        return Err(Error::InvalidExponent(a));
    }
    Ok(())
}

/// `None` if the weights are all positive, otherwise the reason.
fn positive_alpha(alpha: &[f64]) -> Option<String> {
    if alpha.iter().all(|&a| a > 0.0) {
        None
    } else {
        Some("needs every weight positive".into())
    }
}

fn na(reason: impl Into<String>) -> Result<CheckReport> {
    Ok(CheckReport::not_applicable("", "", reason))
}

fn per_index(inputs: &Inputs, f: impl Fn(usize) -> CheckReport) -> Result<CheckReport> {
    let parts: Vec<CheckReport> = inputs
        .indices()?
        .into_iter()
        .map(|i| {
            let mut p = f(i);
            p.key = format!("i={i}");
            p
        })
        .collect();
    if parts.len() == 1 {
        Ok(parts.into_iter().next().unwrap())
    } else {
        Ok(CheckReport::bundle("", "", parts))
    }
}

fn chain(values: Vec<f64>) -> CheckReport {
    CheckReport::chain("", "", values)
}

fn part(key: &str, mut r: CheckReport) -> CheckReport {
    r.key = key.to_string();
    r
}

/// Matrix sequence in the even-length norm bound: transposes on odd
/// positions (first factor) and on even positions (second factor).
fn even_pattern(ms: &[NonnegMatrix]) -> (Vec<NonnegMatrix>, Vec<NonnegMatrix>) {
    let first = ms
        .iter()
        .enumerate()
        .map(|(j, a)| if j % 2 == 0 { a.transpose() } else { a.clone() })
        .collect();
    let second = ms
        .iter()
        .enumerate()
        .map(|(j, a)| if j % 2 == 1 { a.transpose() } else { a.clone() })
        .collect();
    (first, second)
}

/// The length-`2m` sequence for odd `m`:
/// `A_1 ⊗ A_2^T ⊗ ... ⊗ A_m ⊗ A_1^T ⊗ A_2 ⊗ ... ⊗ A_m^T`.
fn odd_pattern(ms: &[NonnegMatrix]) -> Vec<NonnegMatrix> {
    let first = ms
        .iter()
        .enumerate()
        .map(|(j, a)| if j % 2 == 1 { a.transpose() } else { a.clone() });
    let second = ms
        .iter()
        .enumerate()
        .map(|(j, a)| if j % 2 == 0 { a.transpose() } else { a.clone() });
    first.chain(second).collect()
}

// ---- evaluators ------------------------------------------------------------

fn ev_humu(i: &Inputs) -> Result<CheckReport> {
    let ms = &i.matrices;
    let m = ms.len() as f64;
    let ps = cyclic_products(ms, true)?;
    Ok(chain(vec![
        r(&hadamard_all(ms)?),
        r(&hadamard_all(&ps)?).powf(1.0 / m),
        r(&max_product(ms)?),
    ]))
}

fn ev_maxmixmax(i: &Inputs) -> Result<CheckReport> {
    let (a, b) = (&i.matrices[0], &i.matrices[1]);
    let ab = a.max_mul(b)?;
    let ba = b.max_mul(a)?;
    Ok(chain(vec![
        r(&a.hadamard(b)?),
        r(&ab.hadamard(&ba)?).sqrt(),
        r(&ab),
    ]))
}

fn ev_kvmax(i: &Inputs) -> Result<CheckReport> {
    let (a, b) = (&i.matrices[0], &i.matrices[1]);
    let h = a.hadamard(b)?;
    Ok(chain(vec![r(&h), h.norm(), r(&a.transpose().max_mul(b)?)]))
}

fn ev_hadamard_sq(i: &Inputs) -> Result<CheckReport> {
    let (a, b) = (&i.matrices[0], &i.matrices[1]);
    let lhs = r(&a.max_mul(b)?.hadamard(&b.max_mul(a)?)?);
    let rhs = r(&a.max_power(2)?.max_mul(&b.max_power(2)?)?);
    Ok(chain(vec![lhs, rhs]))
}

fn ev_diag_fixpoint(i: &Inputs) -> Result<CheckReport> {
    let (a, b) = (&i.matrices[0], &i.matrices[1]);
    let rab = r(&a.max_mul(b)?);
    let hit = (0..a.n())
        .map(|k| a.get(k, k) * b.get(k, k))
        .filter(|&d| rab <= d * (1.0 + CHAIN_TOL))
        .fold(None, |best: Option<f64>, d| {
            Some(best.map_or(d, |b| b.max(d)))
        });
    let Some(d) = hit else {
        return na("no diagonal product dominates r(A⊗B)");
    };
    let rh = r(&a.hadamard(b)?);
    Ok(CheckReport::bundle(
        "",
        "",
        vec![
            part(
                "r(A⊗B)=a_ii b_ii",
                CheckReport::equality("", "", rab, d, IDENTITY_TOL),
            ),
            part(
                "r(A∘B)=a_ii b_ii",
                CheckReport::equality("", "", rh, d, IDENTITY_TOL),
            ),
        ],
    ))
}

fn ev_wgm_local_max(i: &Inputs) -> Result<CheckReport> {
    let ms = &i.matrices;
    check_alpha(i, ms.len())?;
    if let Some(why) = positive_alpha(&i.alpha) {
        return na(why);
    }
    let lhs = local_r_all(&weighted_hadamard(ms, &i.alpha)?)?;
    let each = ms.iter().map(local_r_all).collect::<Result<Vec<_>>>()?;
    per_index(i, |k| {
        let rhs = each
            .iter()
            .zip(&i.alpha)
            .map(|(v, &a)| v[k].powf(a))
            .product();
        chain(vec![lhs[k], rhs])
    })
}

fn ev_had_local_max(i: &Inputs) -> Result<CheckReport> {
    let ms = &i.matrices;
    let lhs = local_r_all(&hadamard_all(ms)?)?;
    let each = ms.iter().map(local_r_all).collect::<Result<Vec<_>>>()?;
    per_index(i, |k| {
        chain(vec![lhs[k], each.iter().map(|v| v[k]).product()])
    })
}

fn ev_pj_local_max(i: &Inputs) -> Result<CheckReport> {
    let ms = &i.matrices;
    let m = ms.len() as f64;
    let ps = cyclic_products(ms, true)?;
    let lhs = local_r_all(&hadamard_all(ms)?)?;
    let mid = local_r_all(&hadamard_all(&ps)?)?;
    let each = ps.iter().map(local_r_all).collect::<Result<Vec<_>>>()?;
    per_index(i, |k| {
        let rhs: f64 = each.iter().map(|v| v[k]).product();
        chain(vec![lhs[k], mid[k].powf(1.0 / m), rhs.powf(1.0 / m)])
    })
}

fn ev_pair_local_max(i: &Inputs) -> Result<CheckReport> {
    let (a, b) = (&i.matrices[0], &i.matrices[1]);
    let ab = a.max_mul(b)?;
    let ba = b.max_mul(a)?;
    let lhs = local_r_all(&a.hadamard(b)?)?;
    let mid = local_r_all(&ab.hadamard(&ba)?)?;
    let (rab, rba) = (local_r_all(&ab)?, local_r_all(&ba)?);
    per_index(i, |k| {
        chain(vec![lhs[k], mid[k].sqrt(), (rab[k] * rba[k]).sqrt()])
    })
}

fn ev_lradius_bundle(i: &Inputs) -> Result<CheckReport> {
    let ms = &i.matrices;
    let x = i.x()?;
    let t = i.t.unwrap_or(2.0);
    if !(t.is_finite() && t > 0.0) {
        return Err(Error::InvalidExponent(t));
    }
    let m = ms.len() as f64;
    let a = &ms[0];
    let mut parts = vec![part(
        "schur_power",
        CheckReport::equality(
            "",
            "",
            r_at(&a.hadamard_power(t)?, &x)?,
            r_at(a, &x)?.powf(t),
            IDENTITY_TOL,
        ),
    )];
    if i.alpha.len() == ms.len() && positive_alpha(&i.alpha).is_none() {
        check_alpha(i, ms.len())?;
        let lhs = r_at(&weighted_hadamard(ms, &i.alpha)?, &x)?;
        let rhs = ms
            .iter()
            .zip(&i.alpha)
            .map(|(a, &w)| Ok(r_at(a, &x)?.powf(w)))
            .product::<Result<f64>>()?;
        parts.push(part("weighted_mean", chain(vec![lhs, rhs])));
    }
    let rhs = ms.iter().map(|a| r_at(a, &x)).product::<Result<f64>>()?;
    parts.push(part(
        "hadamard",
        chain(vec![r_at(&hadamard_all(ms)?, &x)?, rhs]),
    ));
    let ps = cyclic_products(ms, true)?;
    let pj = ps.iter().map(|p| r_at(p, &x)).product::<Result<f64>>()?;
    parts.push(part(
        "cyclic",
        chain(vec![
            r_at(&hadamard_all(ms)?, &x)?,
            r_at(&hadamard_all(&ps)?, &x)?.powf(1.0 / m),
            pj.powf(1.0 / m),
        ]),
    ));
    if ms.len() >= 2 {
        let (a, b) = (&ms[0], &ms[1]);
        let ab = a.max_mul(b)?;
        let ba = b.max_mul(a)?;
        parts.push(part(
            "pair",
            chain(vec![
                r_at(&a.hadamard(b)?, &x)?,
                r_at(&ab.hadamard(&ba)?, &x)?.sqrt(),
                (r_at(&ab, &x)? * r_at(&ba, &x)?).sqrt(),
            ]),
        ));
    }
    Ok(CheckReport::bundle("", "", parts))
}

fn t_at_least_one(i: &Inputs) -> Result<Option<f64>> {
    let t = i.t.unwrap_or(2.0);
    if !t.is_finite() || t <= 0.0 {
        return Err(Error::InvalidExponent(t));
    }
    Ok(if t >= 1.0 { Some(t) } else { None })
}

fn ev_rho_schur_t(i: &Inputs) -> Result<CheckReport> {
    let Some(t) = t_at_least_one(i)? else {
        return na("needs t >= 1");
    };
    let x = i.x()?;
    let a = &i.matrices[0];
    Ok(chain(vec![
        rho_at(&a.hadamard_power(t)?, &x)?,
        rho_at(a, &x)?.powf(t),
    ]))
}

fn ev_rho_t_chain(i: &Inputs) -> Result<CheckReport> {
    let Some(t) = t_at_least_one(i)? else {
        return na("needs t >= 1");
    };
    let x = i.x()?;
    let powered = i
        .matrices
        .iter()
        .map(|a| a.hadamard_power(t))
        .collect::<Result<Vec<_>>>()?;
    let prod = product(&i.matrices)?;
    Ok(chain(vec![
        rho_at(&product(&powered)?, &x)?,
        rho_at(&prod.hadamard_power(t)?, &x)?,
        rho_at(&prod, &x)?.powf(t),
    ]))
}

fn weights_sum_at_least_one(alpha: &[f64]) -> Option<String> {
    if let Some(why) = positive_alpha(alpha) {
        return Some(why);
    }
    if alpha.iter().sum::<f64>() < 1.0 {
        return Some("needs the weights to sum to at least 1".into());
    }
    None
}

fn ev_rho_wgm(i: &Inputs) -> Result<CheckReport> {
    let ms = &i.matrices;
    check_alpha(i, ms.len())?;
    if let Some(why) = weights_sum_at_least_one(&i.alpha) {
        return na(why);
    }
    let x = i.x()?;
    let lhs = rho_at(&weighted_hadamard(ms, &i.alpha)?, &x)?;
    let rhs = ms
        .iter()
        .zip(&i.alpha)
        .map(|(a, &w)| Ok(rho_at(a, &x)?.powf(w)))
        .product::<Result<f64>>()?;
    Ok(chain(vec![lhs, rhs]))
}

fn ev_rho_b_chain(i: &Inputs) -> Result<CheckReport> {
    let (l, m) = i.grid.expect("arity checked");
    check_alpha(i, m)?;
    if let Some(why) = weights_sum_at_least_one(&i.alpha) {
        return na(why);
    }
    let x = i.x()?;
    let at = |row: usize, col: usize| &i.matrices[row * m + col];
    let rows = (0..l)
        .map(|row| {
            let means = (0..m)
                .map(|col| at(row, col).hadamard_power(i.alpha[col]))
                .collect::<Result<Vec<_>>>()?;
            hadamard_all(&means)
        })
        .collect::<Result<Vec<_>>>()?;
    let b = product(&rows)?;
    let cols = (0..m)
        .map(|col| product((0..l).map(|row| at(row, col))))
        .collect::<Result<Vec<_>>>()?;
    let mid = weighted_hadamard(&cols, &i.alpha)?;
    let rhs = cols
        .iter()
        .zip(&i.alpha)
        .map(|(c, &w)| Ok(rho_at(c, &x)?.powf(w)))
        .product::<Result<f64>>()?;
    Ok(chain(vec![rho_at(&b, &x)?, rho_at(&mid, &x)?, rhs]))
}

fn ev_rho_hadamard(i: &Inputs) -> Result<CheckReport> {
    let x = i.x()?;
    let rhs = i
        .matrices
        .iter()
        .map(|a| rho_at(a, &x))
        .product::<Result<f64>>()?;
    Ok(chain(vec![rho_at(&hadamard_all(&i.matrices)?, &x)?, rhs]))
}

fn ev_rho_pj(i: &Inputs) -> Result<CheckReport> {
    let ms = &i.matrices;
    let x = i.x()?;
    let m = ms.len() as f64;
    let ps = cyclic_products(ms, false)?;
    let prod = ps.iter().map(|p| rho_at(p, &x)).product::<Result<f64>>()?;
    let mut parts = vec![part(
        "cyclic",
        chain(vec![
            rho_at(&hadamard_all(ms)?, &x)?,
            rho_at(&hadamard_all(&ps)?, &x)?.powf(1.0 / m),
            prod.powf(1.0 / m),
        ]),
    )];
    if ms.len() >= 2 {
        let (a, b) = (&ms[0], &ms[1]);
        let ab = a.mul(b)?;
        let ba = b.mul(a)?;
        parts.push(part(
            "pair",
            chain(vec![
                rho_at(&a.hadamard(b)?, &x)?,
                rho_at(&ab.hadamard(&ba)?, &x)?.sqrt(),
                (rho_at(&ab, &x)? * rho_at(&ba, &x)?).sqrt(),
            ]),
        ));
    }
    Ok(CheckReport::bundle("", "", parts))
}

fn ev_norm_sq_identity(i: &Inputs) -> Result<CheckReport> {
    let a = &i.matrices[0];
    let at = a.transpose();
    let sq = a.norm() * a.norm();
    Ok(CheckReport::bundle(
        "",
        "",
        vec![
            part(
                "A^T⊗A",
                CheckReport::equality("", "", sq, r(&at.max_mul(a)?), IDENTITY_TOL),
            ),
            part(
                "A⊗A^T",
                CheckReport::equality("", "", sq, r(&a.max_mul(&at)?), IDENTITY_TOL),
            ),
        ],
    ))
}

fn ev_jordan_pair_refined(i: &Inputs) -> Result<CheckReport> {
    let (a, b) = (&i.matrices[0], &i.matrices[1]);
    let atb = a.transpose().max_mul(b)?;
    let bta = b.transpose().max_mul(a)?;
    Ok(chain(vec![
        a.hadamard(b)?.norm(),
        r(&atb.hadamard(&bta)?).sqrt(),
        r(&atb),
    ]))
}

fn ev_norm_sq_even(i: &Inputs) -> Result<CheckReport> {
    let (first, second) = even_pattern(&i.matrices);
    let h = hadamard_all(&i.matrices)?.norm();
    Ok(chain(vec![
        h * h,
        r(&max_product(&first)?) * r(&max_product(&second)?),
    ]))
}

fn ev_norm_sq_odd(i: &Inputs) -> Result<CheckReport> {
    let h = hadamard_all(&i.matrices)?.norm();
    Ok(chain(vec![
        h * h,
        r(&max_product(&odd_pattern(&i.matrices))?),
    ]))
}

fn ev_jordan_triple(i: &Inputs) -> Result<CheckReport> {
    let (a, b) = (&i.matrices[0], &i.matrices[1]);
    let lhs = hadamard_all([a, &b.transpose(), a])?.norm();
    Ok(chain(vec![lhs, max_product([a, b, a])?.norm()]))
}

// Statements that fail in general.

fn ev_local_kvmax(i: &Inputs) -> Result<CheckReport> {
    let (a, b) = (&i.matrices[0], &i.matrices[1]);
    let lhs = local_r_all(&a.hadamard(b)?)?;
    let rhs = local_r_all(&a.transpose().max_mul(b)?)?;
    per_index(i, |k| chain(vec![lhs[k], rhs[k]]))
}

fn ev_local_maxmul(i: &Inputs) -> Result<CheckReport> {
    let (a, b) = (&i.matrices[0], &i.matrices[1]);
    let lhs = local_r_all(&a.hadamard(b)?)?;
    let rhs = local_r_all(&a.max_mul(b)?)?;
    per_index(i, |k| chain(vec![lhs[k], rhs[k]]))
}

fn ev_local_submult(i: &Inputs) -> Result<CheckReport> {
    let (a, b) = (&i.matrices[0], &i.matrices[1]);
    let lhs = local_r_all(&a.max_mul(b)?)?;
    let (ra, rb) = (local_r_all(a)?, local_r_all(b)?);
    per_index(i, |k| chain(vec![lhs[k], ra[k] * rb[k]]))
}

fn ev_local_swap(i: &Inputs) -> Result<CheckReport> {
    let (a, b) = (&i.matrices[0], &i.matrices[1]);
    let ab = local_r_all(&a.max_mul(b)?)?;
    let ba = local_r_all(&b.max_mul(a)?)?;
    per_index(i, |k| {
        CheckReport::equality("", "", ab[k], ba[k], IDENTITY_TOL)
    })
}

fn ev_local_fixpoint(i: &Inputs) -> Result<CheckReport> {
    let (a, b) = (&i.matrices[0], &i.matrices[1]);
    let ab = local_r_all(&a.max_mul(b)?)?;
    let h = local_r_all(&a.hadamard(b)?)?;
    per_index(i, |k| {
        CheckReport::equality("", "", ab[k], h[k], IDENTITY_TOL)
    })
}

static REGISTRY: &[Row] = &[
    Row {
        key: "humu",
        statement: "r(A_1∘...∘A_m) <= r(P_1∘...∘P_m)^(1/m) <= r(A_1⊗...⊗A_m), P_j = A_j⊗...⊗A_{j-1}",
        arity: Arity::Many,
        proved: true,
        eval: ev_humu,
    },
    Row {
        key: "maxmixmax",
        statement: "r(A∘B) <= r((A⊗B)∘(B⊗A))^(1/2) <= r(A⊗B)",
        arity: Arity::Pair,
        proved: true,
        eval: ev_maxmixmax,
    },
    Row {
        key: "kvmax",
        statement: "r(A∘B) <= ‖A∘B‖ <= r(A^T⊗B)",
        arity: Arity::Pair,
        proved: true,
        eval: ev_kvmax,
    },
    Row {
        key: "hadamard_sq",
        statement: "r((A⊗B)∘(B⊗A)) <= r(A^2⊗B^2) (max powers)",
        arity: Arity::Pair,
        proved: true,
        eval: ev_hadamard_sq,
    },
    Row {
        key: "diag_fixpoint",
        statement: "r(A⊗B) <= a_ii b_ii implies r(A⊗B) = r(A∘B) = a_ii b_ii",
        arity: Arity::Pair,
        proved: true,
        eval: ev_diag_fixpoint,
    },
    Row {
        key: "wgm_local_max",
        statement: "r_{e_i}(A_1^(a_1)∘...∘A_m^(a_m)) <= r_{e_i}(A_1)^a_1 ... r_{e_i}(A_m)^a_m, a_j > 0",
        arity: Arity::Many,
        proved: true,
        eval: ev_wgm_local_max,
    },
    Row {
        key: "had_local_max",
        statement: "r_{e_i}(A_1∘...∘A_m) <= r_{e_i}(A_1) ... r_{e_i}(A_m)",
        arity: Arity::Many,
        proved: true,
        eval: ev_had_local_max,
    },
    Row {
        key: "pj_local_max",
        statement: "r_{e_i}(A_1∘...∘A_m) <= r_{e_i}(P_1∘...∘P_m)^(1/m) <= (r_{e_i}(P_1)...r_{e_i}(P_m))^(1/m)",
        arity: Arity::Many,
        proved: true,
        eval: ev_pj_local_max,
    },
    Row {
        key: "pair_local_max",
        statement: "r_{e_i}(A∘B) <= r_{e_i}((A⊗B)∘(B⊗A))^(1/2) <= (r_{e_i}(A⊗B) r_{e_i}(B⊗A))^(1/2)",
        arity: Arity::Pair,
        proved: true,
        eval: ev_pair_local_max,
    },
    Row {
        key: "lradius_bundle",
        statement: "at x: r_x(A^(t)) = r_x(A)^t; weighted-mean, Hadamard, cyclic and pair bounds for r_x",
        arity: Arity::Many,
        proved: true,
        eval: ev_lradius_bundle,
    },
    Row {
        key: "rho_schur_t",
        statement: "ρ_x(A^(t)) <= ρ_x(A)^t, t >= 1",
        arity: Arity::Single,
        proved: true,
        eval: ev_rho_schur_t,
    },
    Row {
        key: "rho_t_chain",
        statement: "ρ_x(A_1^(t)...A_m^(t)) <= ρ_x((A_1...A_m)^(t)) <= ρ_x(A_1...A_m)^t, t >= 1",
        arity: Arity::Many,
        proved: true,
        eval: ev_rho_t_chain,
    },
    Row {
        key: "rho_wgm",
        statement: "ρ_x(A_1^(a_1)∘...∘A_m^(a_m)) <= ρ_x(A_1)^a_1 ... ρ_x(A_m)^a_m, Σa_j >= 1",
        arity: Arity::Many,
        proved: true,
        eval: ev_rho_wgm,
    },
    Row {
        key: "rho_B_chain",
        statement: "ρ_x(Π_i ∘_j A_ij^(a_j)) <= ρ_x(∘_j (A_1j...A_lj)^(a_j)) <= Π_j ρ_x(A_1j...A_lj)^a_j, Σa_j >= 1",
        arity: Arity::Grid,
        proved: true,
        eval: ev_rho_b_chain,
    },
    Row {
        key: "rho_hadamard",
        statement: "ρ_x(A_1∘...∘A_m) <= ρ_x(A_1)...ρ_x(A_m)",
        arity: Arity::Many,
        proved: true,
        eval: ev_rho_hadamard,
    },
    Row {
        key: "rho_pj",
        statement: "ρ_x(A_1∘...∘A_m) <= ρ_x(P_1∘...∘P_m)^(1/m) <= (ρ_x(P_1)...ρ_x(P_m))^(1/m), P_j = A_j...A_{j-1}",
        arity: Arity::Many,
        proved: true,
        eval: ev_rho_pj,
    },
    Row {
        key: "norm_sq_identity",
        statement: "‖A‖^2 = r(A^T⊗A) = r(A⊗A^T)",
        arity: Arity::Single,
        proved: true,
        eval: ev_norm_sq_identity,
    },
    Row {
        key: "jordan_pair_refined",
        statement: "‖A∘B‖ <= r((A^T⊗B)∘(B^T⊗A))^(1/2) <= r(A^T⊗B)",
        arity: Arity::Pair,
        proved: true,
        eval: ev_jordan_pair_refined,
    },
    Row {
        key: "norm_sq_even",
        statement: "m even: ‖A_1∘...∘A_m‖^2 <= r(A_1^T⊗A_2⊗A_3^T⊗...⊗A_m) r(A_1⊗A_2^T⊗...⊗A_m^T)",
        arity: Arity::Even,
        proved: true,
        eval: ev_norm_sq_even,
    },
    Row {
        key: "norm_sq_odd",
        statement: "m odd: ‖A_1∘...∘A_m‖^2 <= r(A_1⊗A_2^T⊗...⊗A_m⊗A_1^T⊗A_2⊗...⊗A_m^T)",
        arity: Arity::Odd,
        proved: true,
        eval: ev_norm_sq_odd,
    },
    Row {
        key: "jordan_triple",
        statement: "‖A∘B^T∘A‖ <= ‖A⊗B⊗A‖",
        arity: Arity::Pair,
        proved: true,
        eval: ev_jordan_triple,
    },
    Row {
        key: "local_kvmax",
        statement: "r_{e_i}(A∘B) <= r_{e_i}(A^T⊗B)",
        arity: Arity::Pair,
        proved: false,
        eval: ev_local_kvmax,
    },
    Row {
        key: "local_maxmul",
        statement: "r_{e_i}(A∘B) <= r_{e_i}(A⊗B)",
        arity: Arity::Pair,
        proved: false,
        eval: ev_local_maxmul,
    },
    Row {
        key: "local_submult",
        statement: "r_{e_i}(A⊗B) <= r_{e_i}(A) r_{e_i}(B)",
        arity: Arity::Pair,
        proved: false,
        eval: ev_local_submult,
    },
    Row {
        key: "local_swap",
        statement: "r_{e_i}(A⊗B) = r_{e_i}(B⊗A)",
        arity: Arity::Pair,
        proved: false,
        eval: ev_local_swap,
    },
    Row {
        key: "local_fixpoint",
        statement: "r_{e_i}(A⊗B) = r_{e_i}(A∘B)",
        arity: Arity::Pair,
        proved: false,
        eval: ev_local_fixpoint,
    },
];

pub fn registry() -> &'static [Row] {
    REGISTRY
}

pub fn find(key: &str) -> Result<&'static Row> {
    REGISTRY
        .iter()
        .find(|r| r.key == key)
        .ok_or_else(|| Error::Parse(format!("unknown check {key:?}")))
}

pub fn run_check(key: &str, inputs: &Inputs) -> Result<CheckReport> {
    find(key)?.run(inputs)
}

// ---- pinned fixtures -------------------------------------------------------

/// A check with a fixed input and its expected outcome.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Fixture {
    pub key: String,
    pub inputs: Inputs,
    /// `true` if the check must report a violation.
    pub expect_violation: bool,
}

impl Fixture {
    pub fn run(&self) -> Result<(CheckReport, bool)> {
        let r = run_check(&self.key, &self.inputs)?;
        let ok = r.verdict.is_violated() == self.expect_violation;
        Ok((r, ok))
    }
}

fn mat(rows: &[[f64; 2]; 2]) -> NonnegMatrix {
    NonnegMatrix::from_rows(rows).expect("fixture matrix")
}

/// The counterexamples to the per-index analogues, and positive controls on
/// the same matrices.
pub fn pinned_fixtures() -> Vec<Fixture> {
    let swap = mat(&[[0.0, 1.0], [1.0, 0.0]]);
    let b4 = mat(&[[0.0, 1.0], [0.25, 0.0]]);
    let e11 = mat(&[[1.0, 0.0], [0.0, 0.0]]);
    let full = mat(&[[1.0, 2.0], [3.0, 4.0]]);
    let pair = |a: &NonnegMatrix, b: &NonnegMatrix| Inputs::of(vec![a.clone(), b.clone()]);
    let fx = |key: &str, inputs: Inputs, expect_violation: bool| Fixture {
        key: key.into(),
        inputs,
        expect_violation,
    };
    vec![
        fx("local_kvmax", pair(&swap, &b4).with_index(0), true),
        fx("local_maxmul", pair(&swap, &b4).with_index(0), true),
        fx("local_submult", pair(&e11, &full).with_index(1), true),
        fx("local_swap", pair(&e11, &full).with_index(1), true),
        fx("local_fixpoint", pair(&e11, &full).with_index(1), true),
        fx("kvmax", pair(&swap, &b4), false),
        fx("had_local_max", pair(&e11, &full), false),
        fx("norm_sq_identity", Inputs::of(vec![b4.clone()]), false),
        fx("maxmixmax", pair(&e11, &full), false),
    ]
}

// ---- randomized suite ------------------------------------------------------

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SuiteConfig {
    pub trials: usize,
    pub seed: u64,
    pub n_range: (usize, usize),
    /// Where to write reproducers for violations, if anywhere.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dump: Option<PathBuf>,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        Self {
            trials: 500,
            seed: 0,
            n_range: (2, 6),
            dump: None,
        }
    }
}

/// Reproducer written for each violation.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Reproducer {
    pub key: String,
    pub matrices: Vec<NonnegMatrix>,
    pub x: Option<NonnegVector>,
    pub alpha: Vec<f64>,
    pub lhs: f64,
    pub rhs: f64,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct SuiteSummary {
    pub trials: usize,
    pub checks: usize,
    pub not_applicable: usize,
    pub near_tight: usize,
    pub violations: Vec<Reproducer>,
}

const DENSITIES: [f64; 3] = [0.3, 0.7, 1.0];
const ALPHA_SUMS: [f64; 3] = [1.0, 1.5, 3.0];
const SUPPORTS: [SupportKind; 3] = [SupportKind::Full, SupportKind::Singleton, SupportKind::Half];

fn draw_alpha(rng: &mut ChaCha8Rng, m: usize, total: f64) -> Vec<f64> {
    // Normalized exponential draws: a flat Dirichlet sample.
    let e: Vec<f64> = (0..m)
        .map(|_| -(1.0 - rng.gen::<f64>()).ln() + 1e-3)
        .collect();
    let s: f64 = e.iter().sum();
    e.into_iter().map(|v| v * total / s).collect()
}

/// The inputs used for every proved row in one trial.
pub fn trial_inputs(rng: &mut ChaCha8Rng, n_range: (usize, usize)) -> Vec<(&'static str, Inputs)> {
    let n = rng.gen_range(n_range.0..=n_range.1);
    let density = DENSITIES[rng.gen_range(0..DENSITIES.len())];
    let spec = GeneratorSpec::general(n, n, density);
    let m = rng.gen_range(2..=4);
    let mats: Vec<NonnegMatrix> = (0..m).map(|_| generate_with(&spec, n, rng)).collect();
    let support = SUPPORTS[rng.gen_range(0..SUPPORTS.len())];
    let x = random_vector(n, support, rng);
    let total = ALPHA_SUMS[rng.gen_range(0..ALPHA_SUMS.len())];
    let alpha = draw_alpha(rng, m, total);
    let t = rng.gen_range(1.0..4.0);
    let l = rng.gen_range(2..=3);
    let grid: Vec<NonnegMatrix> = (0..l * m).map(|_| generate_with(&spec, n, rng)).collect();

    // A pair whose diagonal dominates: a_kk = ‖A‖ and b_kk = ‖B‖ force
    // r(A⊗B) <= a_kk b_kk.
    let k = rng.gen_range(0..n);
    let mut dom = [mats[0].clone(), mats[1].clone()];
    for d in dom.iter_mut() {
        let mut rows = d.rows();
        rows[k][k] = d.norm().max(1e-3);
        *d = NonnegMatrix::from_rows(&rows).expect("finite");
    }

    let many = Inputs::of(mats.clone())
        .with_x(x.clone())
        .with_alpha(alpha.clone())
        .with_t(t);
    let pair = Inputs::of(mats[..2].to_vec()).with_x(x.clone());
    let single = Inputs::of(vec![mats[0].clone()])
        .with_x(x.clone())
        .with_t(t);
    let even_len = m - m % 2;
    let odd_len = if m % 2 == 1 { m } else { m - 1 };
    vec![
        ("humu", many.clone()),
        ("maxmixmax", pair.clone()),
        ("kvmax", pair.clone()),
        ("hadamard_sq", pair.clone()),
        ("diag_fixpoint", Inputs::of(dom.to_vec())),
        ("wgm_local_max", many.clone()),
        ("had_local_max", many.clone()),
        ("pj_local_max", many.clone()),
        ("pair_local_max", pair.clone()),
        ("lradius_bundle", many.clone()),
        ("rho_schur_t", single.clone()),
        ("rho_t_chain", many.clone()),
        ("rho_wgm", many.clone()),
        (
            "rho_B_chain",
            Inputs::of(grid)
                .with_x(x.clone())
                .with_alpha(alpha.clone())
                .with_grid(l, m),
        ),
        ("rho_hadamard", many.clone()),
        ("rho_pj", many.clone()),
        ("norm_sq_identity", Inputs::of(vec![mats[0].clone()])),
        ("jordan_pair_refined", pair.clone()),
        ("norm_sq_even", Inputs::of(mats[..even_len].to_vec())),
        ("norm_sq_odd", Inputs::of(mats[..odd_len].to_vec())),
        ("jordan_triple", pair),
    ]
}

fn worst_leaf(r: &CheckReport) -> &CheckReport {
    if r.parts.is_empty() {
        return r;
    }
    r.parts
        .iter()
        .map(worst_leaf)
        .find(|p| p.verdict.is_violated())
        .unwrap_or(r)
}

/// Runs every proved row on `trials` random draws. Reports are passed to
/// `sink` as they are produced.
pub fn run_suite(config: &SuiteConfig, mut sink: impl FnMut(&CheckReport)) -> Result<SuiteSummary> {
    if config.trials == 0 {
        return Err(Error::InvalidGrid("trials must be at least 1".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let mut summary = SuiteSummary {
        trials: config.trials,
        ..SuiteSummary::default()
    };
    for _ in 0..config.trials {
        for (key, inputs) in trial_inputs(&mut rng, config.n_range) {
            let report = run_check(key, &inputs)?;
            summary.checks += 1;
            match &report.verdict {
                crate::report::Verdict::NotApplicable(_) => summary.not_applicable += 1,
                crate::report::Verdict::NearTight => summary.near_tight += 1,
                _ => {}
            }
            if report.is_failure() {
                let leaf = worst_leaf(&report);
                summary.violations.push(Reproducer {
                    key: key.to_string(),
                    matrices: inputs.matrices.clone(),
                    x: inputs.x.clone(),
                    alpha: inputs.alpha.clone(),
                    lhs: leaf.lhs,
                    rhs: leaf.rhs,
                });
            }
            sink(&report);
        }
    }
    if let Some(path) = &config.dump {
        if !summary.violations.is_empty() {
            write_reproducers(path, &summary.violations)?;
        }
    }
    Ok(summary)
}

pub fn write_reproducers(path: &Path, violations: &[Reproducer]) -> Result<()> {
    let text = serde_json::to_string_pretty(violations).map_err(|e| Error::Io(e.to_string()))?;
    fs::write(path, text).map_err(|e| Error::Io(format!("{}: {e}", path.display())))
}
