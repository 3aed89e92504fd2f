//! Power series of matrices in both semirings, multivariate polynomials,
//! and checks of the corresponding spectral mapping statements.
//!
//! For `f(z) = Σ α_j z^j`:
//! * `f_⊗(A) = ⊕_j α_j A^j_⊗` (needs `α_j >= 0` and `r_⊗(A) < R_f`);
//! * `f(A) = Σ_j α_j A^j` (needs `ρ(A) < R_f` and a nonnegative result).

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{self, Condensation};
use crate::logdomain::{LogMatrix, NEG_INF};
use crate::matrix::NonnegMatrix;
use crate::report::CheckReport;
use crate::spectrum::{self, distinct_values, SPECTRUM_MERGE_TOL};

/// Relative tolerance for max-algebra spectral mapping checks.
pub const MAX_MAP_TOL: f64 = 1e-9;
/// Relative tolerance for classical spectral mapping checks.
pub const DIST_MAP_TOL: f64 = 1e-7;
/// Relative tolerance for the pairwise commutation test.
pub const COMMUTE_TOL: f64 = 1e-12;
/// Custom prefixes are only evaluated below this fraction of the
/// estimated radius.
pub const CUSTOM_RADIUS_MARGIN: f64 = 0.95;
/// Entries of a classical evaluation below `-NEGATIVE_TOL · max(1, ‖F‖)`
/// mean the result is genuinely not nonnegative.
pub const NEGATIVE_TOL: f64 = 1e-9;

const CLASSICAL_SERIES_TOL: f64 = 1e-13;
const CLASSICAL_TERM_CAP: usize = 100_000;

#[derive(Clone, Debug, PartialEq)]
pub enum Generator {
    Exp,
    Cosh,
    Sinh,
    /// `α_j = λ^{-j}`, i.e. `f(z) = λ / (λ - z)`.
    Geometric(f64),
    /// A finite coefficient list, evaluated as a polynomial.
    Custom(Vec<f64>),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SignMode {
    Nonnegative,
    Signed,
}

#[derive(Clone, Debug, PartialEq)]
pub struct PowerSeries {
    generator: Generator,
}

fn ln_factorial(j: u64) -> f64 {
    if j <= 256 {
        (2..=j).map(|k| (k as f64).ln()).sum()
    } else {
        // Stirling series; error below 1e-17 relative for j > 256.
        let x = j as f64 + 1.0;
        (x - 0.5) * x.ln() - x + 0.5 * (2.0 * std::f64::consts::PI).ln() + 1.0 / (12.0 * x)
            - 1.0 / (360.0 * x.powi(3))
            + 1.0 / (1260.0 * x.powi(5))
    }
}

impl PowerSeries {
    pub fn exp() -> Self {
        Self {
            generator: Generator::Exp,
        }
    }

    pub fn cosh() -> Self {
        Self {
            generator: Generator::Cosh,
        }
    }

    pub fn sinh() -> Self {
        Self {
            generator: Generator::Sinh,
        }
    }

    pub fn geometric(lambda: f64) -> Result<Self> {
        if !(lambda.is_finite() && lambda > 0.0) {
            return Err(Error::InvalidScalar(lambda));
        }
        Ok(Self {
            generator: Generator::Geometric(lambda),
        })
    }

    pub fn custom(coeffs: Vec<f64>) -> Result<Self> {
        if coeffs.is_empty() {
            return Err(Error::Parse("empty coefficient list".into()));
        }
        if let Some(&c) = coeffs.iter().find(|c| !c.is_finite()) {
            return Err(Error::InvalidScalar(c));
        }
        Ok(Self {
            generator: Generator::Custom(coeffs),
        })
    }

    /// `f(z) = z`.
    pub fn identity() -> Self {
        Self {
            generator: Generator::Custom(vec![0.0, 1.0]),
        }
    }

    pub fn generator(&self) -> &Generator {
        &self.generator
    }

    pub fn sign_mode(&self) -> SignMode {
        match &self.generator {
            Generator::Custom(c) if c.iter().any(|&a| a < 0.0) => SignMode::Signed,
            _ => SignMode::Nonnegative,
        }
    }

    pub fn coefficient(&self, j: usize) -> f64 {
        self.ln_abs_coefficient(j).exp()
            * match &self.generator {
                Generator::Custom(c) if c.get(j).is_some_and(|&a| a < 0.0) => -1.0,
                _ => 1.0,
            }
    }

    /// `ln |α_j|`, `-inf` for vanishing coefficients.
    fn ln_abs_coefficient(&self, j: usize) -> f64 {
        let parity_ok = match &self.generator {
            Generator::Cosh => j.is_multiple_of(2),
            Generator::Sinh => j % 2 == 1,
            _ => true,
        };
        if !parity_ok {
            return NEG_INF;
        }
        match &self.generator {
            Generator::Exp | Generator::Cosh | Generator::Sinh => -ln_factorial(j as u64),
            Generator::Geometric(l) => -(j as f64) * l.ln(),
            Generator::Custom(c) => match c.get(j) {
                Some(&a) if a != 0.0 => a.abs().ln(),
                _ => NEG_INF,
            },
        }
    }

    /// Radius of convergence: exact for the named series; for a custom
    /// prefix, `min_{j >= 8} |α_j|^{-1/j}` over nonzero stored terms.
    pub fn radius(&self) -> f64 {
        match &self.generator {
            Generator::Exp | Generator::Cosh | Generator::Sinh => f64::INFINITY,
            Generator::Geometric(l) => *l,
            Generator::Custom(c) => c
                .iter()
                .enumerate()
                .skip(8)
                .filter(|(_, a)| **a != 0.0)
                .map(|(j, a)| (-a.abs().ln() / j as f64).exp())
                .fold(f64::INFINITY, f64::min),
        }
    }

    /// Values at or above this are rejected.
    fn admissible_bound(&self) -> f64 {
        match &self.generator {
            Generator::Custom(_) => CUSTOM_RADIUS_MARGIN * self.radius(),
            _ => self.radius(),
        }
    }

    fn check_inside(&self, value: f64) -> Result<()> {
        if value < self.admissible_bound() {
            Ok(())
        } else {
            Err(Error::OutsideRadius {
                value,
                radius: self.radius(),
            })
        }
    }

    fn require_nonnegative(&self) -> Result<()> {
        match self.sign_mode() {
            SignMode::Nonnegative => Ok(()),
            SignMode::Signed => Err(Error::SignedSeries),
        }
    }

    /// Classical scalar value `f(x)` for `0 <= x` inside the radius.
    pub fn eval_scalar(&self, x: f64) -> Result<f64> {
        if !(x.is_finite() && x >= 0.0) {
            return Err(Error::InvalidScalar(x));
        }
        self.check_inside(x)?;
        let v = match &self.generator {
            Generator::Exp => x.exp(),
            Generator::Cosh => x.cosh(),
            Generator::Sinh => x.sinh(),
            Generator::Geometric(l) => l / (l - x),
            Generator::Custom(c) => c.iter().rev().fold(0.0, |acc, &a| acc * x + a),
        };
        if v.is_finite() {
            Ok(v)
        } else {
            Err(Error::Overflow)
        }
    }

    /// `ln sup_j α_j e^{j s}` for a nonnegative series inside its radius.
    fn ln_sup_terms(&self, s: f64) -> f64 {
        if s == NEG_INF {
            return self.ln_abs_coefficient(0);
        }
        match &self.generator {
            Generator::Exp | Generator::Cosh | Generator::Sinh => {
                // Terms are unimodal along each parity class with the peak
                // at floor(t).
                let j0 = s.exp().floor();
                let j0 = if j0 > 1e15 { 1e15 } else { j0 } as i64;
                (j0 - 2..=j0 + 2)
                    .filter(|&j| j >= 0)
                    .map(|j| self.ln_abs_coefficient(j as usize) + j as f64 * s)
                    .fold(NEG_INF, f64::max)
            }
            Generator::Geometric(_) => 0.0,
            Generator::Custom(c) => (0..c.len())
                .map(|j| self.ln_abs_coefficient(j) + j as f64 * s)
                .fold(NEG_INF, f64::max),
        }
    }

    /// `ln sup_{j > J} α_j r^j`, an upper bound for the named series.
    fn ln_tail_sup(&self, big_j: usize, ln_r: f64) -> f64 {
        let next = big_j + 1;
        match &self.generator {
            Generator::Exp | Generator::Cosh | Generator::Sinh => {
                let r = ln_r.exp();
                if next as f64 >= r {
                    -ln_factorial(next as u64) + next as f64 * ln_r
                } else {
                    PowerSeries::exp().ln_sup_terms(ln_r)
                }
            }
            Generator::Geometric(l) => next as f64 * (ln_r - l.ln()),
            Generator::Custom(c) => {
                if next >= c.len() {
                    NEG_INF
                } else {
                    (next..c.len())
                        .map(|j| self.ln_abs_coefficient(j) + j as f64 * ln_r)
                        .fold(NEG_INF, f64::max)
                }
            }
        }
    }
}

impl fmt::Display for PowerSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.generator {
            Generator::Exp => write!(f, "exp"),
            Generator::Cosh => write!(f, "cosh"),
            Generator::Sinh => write!(f, "sinh"),
            Generator::Geometric(l) => write!(f, "geom:{l:?}"),
            Generator::Custom(c) => {
                let parts: Vec<String> = c.iter().map(|a| format!("{a:?}")).collect();
                write!(f, "coeffs:{}", parts.join(","))
            }
        }
    }
}

impl FromStr for PowerSeries {
    type Err = Error;

    /// `exp | cosh | sinh | geom:<lambda> | coeffs:a0,a1,...`
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let number = |t: &str| {
            t.trim()
                .parse::<f64>()
                .map_err(|_| Error::Parse(format!("bad number {t:?}")))
        };
        match s {
            "exp" => Ok(Self::exp()),
            "cosh" => Ok(Self::cosh()),
            "sinh" => Ok(Self::sinh()),
            _ => {
                if let Some(rest) = s.strip_prefix("geom:") {
                    Self::geometric(number(rest)?)
                } else if let Some(rest) = s.strip_prefix("coeffs:") {
                    Self::custom(rest.split(',').map(number).collect::<Result<Vec<_>>>()?)
                } else {
                    Err(Error::Parse(format!(
                        "unknown series {s:?}; expected exp, cosh, sinh, geom:<lambda> or coeffs:a0,a1,..."
                    )))
                }
            }
        }
    }
}

impl Serialize for PowerSeries {
    fn serialize<S: serde::Serializer>(
        &self,
        serializer: S,
    ) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for PowerSeries {
    fn deserialize<D: serde::Deserializer<'de>>(
        deserializer: D,
    ) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// `f_⊗(t) = sup_j α_j t^j`.
pub fn eval_scalar_max(f: &PowerSeries, t: f64) -> Result<f64> {
    f.require_nonnegative()?;
    if !(t.is_finite() && t >= 0.0) {
        return Err(Error::InvalidScalar(t));
    }
    f.check_inside(t)?;
    let v = f.ln_sup_terms(if t > 0.0 { t.ln() } else { NEG_INF }).exp();
    if v.is_finite() {
        Ok(v)
    } else {
        Err(Error::Overflow)
    }
}

/// `f_⊗(A) = ⊕_j α_j A^j_⊗`.
///
/// Summation stops once every entry is certified final: a path of length
/// `j >= n` splits into a path of length `l < n` plus cycles, so
/// `(A^j_⊗)_uv <= max_{l<n} (A^l_⊗)_uv r^{j-l}` with `r = r_⊗(A)`, and the
/// whole tail is bounded by that prefix times `sup_{j>J} α_j r^j`.
pub fn eval_matrix_max(f: &PowerSeries, a: &NonnegMatrix) -> Result<NonnegMatrix> {
    f.require_nonnegative()?;
    let w = LogMatrix::from_matrix(a);
    let ln_r = graph::ln_max_cycle_mean(&w);
    f.check_inside(ln_r.exp())?;
    let n = a.n();

    let max_terms = match f.generator() {
        Generator::Custom(c) => c.len(),
        Generator::Exp | Generator::Cosh | Generator::Sinh => {
            64 * n + (2.0 * ln_r.exp()).ceil() as usize
        }
        Generator::Geometric(_) => 64 * n,
    };
    // cosh and sinh only see walks of one parity; entries without such a
    // walk stay zero and need no certificate.
    let skip = match f.generator() {
        Generator::Cosh => no_walk_of_parity(&w, 0),
        Generator::Sinh => no_walk_of_parity(&w, 1),
        _ => vec![false; n * n],
    };
    let mut acc = vec![NEG_INF; n * n];
    let mut prefix = vec![NEG_INF; n * n];
    let mut power = LogMatrix::identity(n);
    for j in 0..max_terms {
        if j > 0 {
            power = power.max_mul(&w);
        }
        let c = f.ln_abs_coefficient(j);
        for (x, &p) in acc.iter_mut().zip(power.weights()) {
            *x = x.max(c + p);
        }
        if j < n && ln_r > NEG_INF {
            for (m, &p) in prefix.iter_mut().zip(power.weights()) {
                *m = m.max(p - j as f64 * ln_r);
            }
        }
        let done = if ln_r == NEG_INF {
            // No cycles: A^n_⊗ = 0.
            j + 1 >= n
        } else if j + 1 >= 2 * n {
            let tail = f.ln_tail_sup(j, ln_r);
            prefix
                .iter()
                .zip(&acc)
                .zip(&skip)
                .all(|((&m, &x), &zero)| zero || m == NEG_INF || m + tail <= x + 1e-15)
        } else {
            false
        };
        if done || power.max_entry() == NEG_INF {
            return LogMatrix::from_raw(n, acc).to_matrix();
        }
    }
    match f.generator() {
        Generator::Custom(_) => LogMatrix::from_raw(n, acc).to_matrix(),
        _ => Err(Error::TruncationCap { cap: max_terms }),
    }
}

/// `out[u*n + v]` is true iff no walk from `u` to `v` has length of the
/// given parity. Breadth-first search over (vertex, parity) pairs.
fn no_walk_of_parity(w: &LogMatrix, parity: usize) -> Vec<bool> {
    let n = w.n();
    let mut out = vec![true; n * n];
    for u in 0..n {
        let mut seen = vec![[false; 2]; n];
        seen[u][0] = true;
        let mut queue = std::collections::VecDeque::from([(u, 0usize)]);
        while let Some((v, p)) = queue.pop_front() {
            for t in 0..n {
                if w.get(v, t) > NEG_INF && !seen[t][1 - p] {
                    seen[t][1 - p] = true;
                    queue.push_back((t, 1 - p));
                }
            }
        }
        for v in 0..n {
            out[u * n + v] = !seen[v][parity];
        }
    }
    out
}

/// Row-sum norm.
fn norm_inf(a: &[f64], n: usize) -> f64 {
    a.chunks(n)
        .map(|r| r.iter().map(|v| v.abs()).sum::<f64>())
        .fold(0.0, f64::max)
}

fn dense_mul(x: &[f64], y: &[f64], n: usize) -> Vec<f64> {
    let mut out = vec![0.0; n * n];
    for i in 0..n {
        for k in 0..n {
            let a = x[i * n + k];
            if a == 0.0 {
                continue;
            }
            for j in 0..n {
                out[i * n + j] += a * y[k * n + j];
            }
        }
    }
    out
}

fn identity_dense(n: usize) -> Vec<f64> {
    let mut m = vec![0.0; n * n];
    for i in 0..n {
        m[i * n + i] = 1.0;
    }
    m
}

/// Turns a signed dense result into a nonnegative matrix, clamping float
/// noise and rejecting genuine negatives.
fn clamp_nonnegative(n: usize, data: Vec<f64>) -> Result<NonnegMatrix> {
    if data.iter().any(|v| !v.is_finite()) {
        return Err(Error::Overflow);
    }
    let scale = data.iter().map(|v| v.abs()).fold(1.0, f64::max);
    if let Some(&v) = data
        .iter()
        .filter(|&&v| v < -NEGATIVE_TOL * scale)
        .min_by(|a, b| a.total_cmp(b))
    {
        return Err(Error::NegativeResult { value: v });
    }
    NonnegMatrix::from_computed(n, data.into_iter().map(|v| v.max(0.0)).collect())
}

/// `f(A) = Σ_j α_j A^j`.
pub fn eval_matrix_classical(f: &PowerSeries, a: &NonnegMatrix) -> Result<NonnegMatrix> {
    let rho = spectrum::spectral_radius(a)?;
    f.check_inside(rho)?;
    let n = a.n();
    let ad = a.entries();
    let out = match f.generator() {
        Generator::Custom(c) => {
            // Horner.
            let mut acc = vec![0.0; n * n];
            for &alpha in c.iter().rev() {
                acc = dense_mul(&acc, ad, n);
                for i in 0..n {
                    acc[i * n + i] += alpha;
                }
            }
            acc
        }
        Generator::Geometric(l) => {
            // Σ_k B^k by doubling: S_{2k} = S_k + B^k S_k, B = A/λ.
            let b: Vec<f64> = ad.iter().map(|v| v / l).collect();
            let mut sum = identity_dense(n);
            let mut p = b;
            let mut done = false;
            for round in 0..64 {
                let inc = dense_mul(&p, &sum, n);
                let inc_norm = norm_inf(&inc, n);
                if !inc_norm.is_finite() {
                    return Err(Error::Overflow);
                }
                sum.iter_mut().zip(&inc).for_each(|(s, d)| *s += d);
                if inc_norm <= CLASSICAL_SERIES_TOL * (1.0 + norm_inf(&sum, n))
                    && (1usize << round) >= n
                {
                    done = true;
                    break;
                }
                p = dense_mul(&p, &p, n);
            }
            if !done {
                return Err(Error::TruncationCap { cap: 64 });
            }
            sum
        }
        Generator::Exp | Generator::Cosh | Generator::Sinh => {
            // Taylor terms T_j = A^j / j!; ‖Σ_{j>J} T_j‖ is bounded by
            // ‖T_J‖ · (q/(J+1)) / (1 - q/(J+2)) with q = ‖A‖_∞.
            let q = norm_inf(ad, n);
            let mut term = identity_dense(n);
            let mut acc = vec![0.0; n * n];
            let mut converged = false;
            for j in 0..CLASSICAL_TERM_CAP {
                if j > 0 {
                    term = dense_mul(&term, ad, n);
                    let inv = 1.0 / j as f64;
                    term.iter_mut().for_each(|v| *v *= inv);
                }
                if f.ln_abs_coefficient(j) > NEG_INF {
                    acc.iter_mut().zip(&term).for_each(|(s, t)| *s += t);
                }
                let jf = j as f64;
                if q < (jf + 2.0) / 2.0 {
                    let tail = norm_inf(&term, n) * (q / (jf + 1.0)) / (1.0 - q / (jf + 2.0));
                    if !tail.is_finite() {
                        return Err(Error::Overflow);
                    }
                    if tail < CLASSICAL_SERIES_TOL * (1.0 + norm_inf(&acc, n)) {
                        converged = true;
                        break;
                    }
                }
            }
            if !converged {
                return Err(Error::TruncationCap {
                    cap: CLASSICAL_TERM_CAP,
                });
            }
            acc
        }
    };
    clamp_nonnegative(n, out)
}

/// Relative gap with both-zero treated as equal.
fn rel_gap(a: f64, b: f64) -> f64 {
    let s = a.abs().max(b.abs());
    if s == 0.0 {
        0.0
    } else {
        (a - b).abs() / s
    }
}

/// Symmetric nearest-neighbour distance between two value sets.
pub fn set_discrepancy(x: &[f64], y: &[f64]) -> f64 {
    let one_way = |p: &[f64], q: &[f64]| {
        p.iter()
            .map(|&a| {
                q.iter()
                    .map(|&b| rel_gap(a, b))
                    .fold(f64::INFINITY, f64::min)
            })
            .fold(0.0, f64::max)
    };
    one_way(x, y).max(one_way(y, x))
}

/// `r_{e_i}(f_⊗(A)) = f_⊗(r_{e_i}(A))` for every `i`, and the set form.
pub fn check_spectral_map_max(f: &PowerSeries, a: &NonnegMatrix) -> Result<CheckReport> {
    let fa = eval_matrix_max(f, a)?;
    let pa = spectrum::spectrum(a)?;
    let pf = spectrum::spectrum(&fa)?;
    let mut parts = Vec::with_capacity(a.n() + 1);
    for i in 0..a.n() {
        parts.push(CheckReport::equality(
            &format!("spectral_map_max[{i}]"),
            "r_{e_i}(f⊗(A)) = f⊗(r_{e_i}(A))",
            pf.r[i],
            eval_scalar_max(f, pa.r[i])?,
            MAX_MAP_TOL,
        ));
    }
    let image = distinct_values(
        &pa.sigma_max
            .iter()
            .map(|&l| eval_scalar_max(f, l))
            .collect::<Result<Vec<_>>>()?,
        SPECTRUM_MERGE_TOL,
    );
    parts.push(CheckReport::within(
        "spectral_map_max[set]",
        "σ⊗(f⊗(A)) = f⊗(σ⊗(A))",
        set_discrepancy(&pf.sigma_max, &image),
        MAX_MAP_TOL,
    ));
    Ok(CheckReport::bundle(
        "spectral_map_max",
        "max-algebra spectral mapping for power series",
        parts,
    )
    .with_digest(&(f.to_string(), a)))
}

/// `σ_D(f(A)) = f(σ_D(A))`.
pub fn check_spectral_map_dist(f: &PowerSeries, a: &NonnegMatrix) -> Result<CheckReport> {
    let fa = eval_matrix_classical(f, a)?;
    let pa = spectrum::spectrum(a)?;
    let pf = spectrum::spectrum(&fa)?;
    let image = pa
        .sigma_dist
        .iter()
        .map(|&l| f.eval_scalar(l))
        .collect::<Result<Vec<_>>>()?;
    let image = distinct_values(&image, SPECTRUM_MERGE_TOL);
    Ok(CheckReport::within(
        "spectral_map_dist",
        "σ_D(f(A)) = f(σ_D(A))",
        set_discrepancy(&pf.sigma_dist, &image),
        DIST_MAP_TOL,
    )
    .with_digest(&(f.to_string(), a)))
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Monomial {
    pub coeff: f64,
    pub exponents: Vec<u32>,
}

impl Monomial {
    pub fn new(coeff: f64, exponents: Vec<u32>) -> Self {
        Self { coeff, exponents }
    }
}

fn validate_terms(arity: usize, terms: &[Monomial], nonnegative: bool) -> Result<()> {
    if terms.is_empty() {
        return Err(Error::Parse("polynomial has no terms".into()));
    }
    for t in terms {
        if t.exponents.len() != arity {
            return Err(Error::Arity {
                expected: arity,
                got: t.exponents.len(),
            });
        }
        if !t.coeff.is_finite() || (nonnegative && t.coeff < 0.0) {
            return Err(Error::InvalidScalar(t.coeff));
        }
    }
    Ok(())
}

/// `⊕_terms c ⊗ x_1^{k_1} ⊗ ... ⊗ x_m^{k_m}` with `c >= 0`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MaxPolynomial {
    arity: usize,
    terms: Vec<Monomial>,
}

impl MaxPolynomial {
    pub fn new(arity: usize, terms: Vec<Monomial>) -> Result<Self> {
        validate_terms(arity, &terms, true)?;
        Ok(Self { arity, terms })
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn terms(&self) -> &[Monomial] {
        &self.terms
    }

    pub fn eval_scalar(&self, x: &[f64]) -> f64 {
        self.terms
            .iter()
            .map(|t| {
                t.coeff
                    * t.exponents
                        .iter()
                        .zip(x)
                        .map(|(&e, &v)| v.powi(e as i32))
                        .product::<f64>()
            })
            .fold(0.0, f64::max)
    }
}

/// Real polynomial `Σ_terms c x_1^{k_1} ... x_m^{k_m}`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ClassicalPolynomial {
    arity: usize,
    terms: Vec<Monomial>,
}

impl ClassicalPolynomial {
    pub fn new(arity: usize, terms: Vec<Monomial>) -> Result<Self> {
        validate_terms(arity, &terms, false)?;
        Ok(Self { arity, terms })
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn terms(&self) -> &[Monomial] {
        &self.terms
    }

    pub fn eval_scalar(&self, x: &[f64]) -> f64 {
        self.terms
            .iter()
            .map(|t| {
                t.coeff
                    * t.exponents
                        .iter()
                        .zip(x)
                        .map(|(&e, &v)| v.powi(e as i32))
                        .product::<f64>()
            })
            .sum()
    }
}

fn check_family(arity: usize, mats: &[NonnegMatrix]) -> Result<usize> {
    if mats.len() != arity {
        return Err(Error::Arity {
            expected: arity,
            got: mats.len(),
        });
    }
    let n = mats.first().ok_or(Error::EmptyMatrix)?.n();
    if let Some(m) = mats.iter().find(|m| m.n() != n) {
        return Err(Error::DimensionMismatch {
            left: n,
            right: m.n(),
        });
    }
    Ok(n)
}

/// `p_⊗(A_1, ..., A_m)`, factors multiplied in variable order.
pub fn eval_max_multipoly(p: &MaxPolynomial, mats: &[NonnegMatrix]) -> Result<NonnegMatrix> {
    let n = check_family(p.arity, mats)?;
    let mut acc = NonnegMatrix::zeros(n);
    for t in &p.terms {
        let mut prod = NonnegMatrix::identity(n);
        for (a, &e) in mats.iter().zip(&t.exponents) {
            if e > 0 {
                prod = prod.max_mul(&a.max_power(e)?)?;
            }
        }
        acc = acc.oplus(&prod.scale(t.coeff)?)?;
    }
    Ok(acc)
}

/// `p(A_1, ..., A_m)`; fails if the result has genuinely negative entries.
pub fn eval_classical_multipoly(
    p: &ClassicalPolynomial,
    mats: &[NonnegMatrix],
) -> Result<NonnegMatrix> {
    let n = check_family(p.arity, mats)?;
    let mut acc = vec![0.0; n * n];
    for t in &p.terms {
        let mut prod = identity_dense(n);
        for (a, &e) in mats.iter().zip(&t.exponents) {
            for _ in 0..e {
                prod = dense_mul(&prod, a.entries(), n);
            }
        }
        acc.iter_mut()
            .zip(&prod)
            .for_each(|(s, v)| *s += t.coeff * v);
    }
    clamp_nonnegative(n, acc)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "semiring", rename_all = "snake_case")]
pub enum FamilyPolynomial {
    Max(MaxPolynomial),
    Classical(ClassicalPolynomial),
}

impl FamilyPolynomial {
    fn arity(&self) -> usize {
        match self {
            FamilyPolynomial::Max(p) => p.arity(),
            FamilyPolynomial::Classical(p) => p.arity(),
        }
    }

    fn eval_scalar(&self, x: &[f64]) -> f64 {
        match self {
            FamilyPolynomial::Max(p) => p.eval_scalar(x),
            FamilyPolynomial::Classical(p) => p.eval_scalar(x),
        }
    }
}

fn commute_gap(x: &NonnegMatrix, y: &NonnegMatrix) -> f64 {
    x.max_rel_diff(y)
}

/// Calls `visit` with every tuple drawn from the given value lists.
fn for_each_tuple(lists: &[Vec<f64>], visit: &mut dyn FnMut(&[f64])) {
    let mut idx = vec![0usize; lists.len()];
    let mut tuple: Vec<f64> = lists.iter().map(|l| l[0]).collect();
    loop {
        visit(&tuple);
        let mut k = 0;
        loop {
            if k == lists.len() {
                return;
            }
            idx[k] += 1;
            if idx[k] < lists[k].len() {
                tuple[k] = lists[k][idx[k]];
                break;
            }
            idx[k] = 0;
            tuple[k] = lists[k][0];
            k += 1;
        }
    }
}

fn all_distinct(values: &[f64]) -> bool {
    distinct_values(values, SPECTRUM_MERGE_TOL).len() == values.len()
}

/// Spectral statements for a pairwise commuting family `A_1, ..., A_m`
/// and a polynomial `p` in the matching semiring:
///
/// 1. for each `j` and `λ_j ∈ σ(A_j)` some completion `(λ_1, ..., λ_m)`
///    has `p(λ) ∈ σ(p(A))`;
/// 2. each element of `σ(p(A))` is `p(λ)` for some choice of `λ_j ∈ σ(A_j)`;
/// 3. the per-index equality `v_i(p(A)) = p(v_k(A_1), ..., v_k(A_m))`,
///    checked with `k = i` when some member or `p(A)` is irreducible, or
///    with some `k` when every matrix has pairwise distinct class values.
///    Otherwise this part is reported as not applicable.
pub fn check_commuting_family(p: &FamilyPolynomial, mats: &[NonnegMatrix]) -> Result<CheckReport> {
    let n = check_family(p.arity(), mats)?;
    let is_max = matches!(p, FamilyPolynomial::Max(_));
    for i in 0..mats.len() {
        for j in i + 1..mats.len() {
            let (ab, ba) = if is_max {
                (mats[i].max_mul(&mats[j])?, mats[j].max_mul(&mats[i])?)
            } else {
                (mats[i].mul(&mats[j])?, mats[j].mul(&mats[i])?)
            };
            if commute_gap(&ab, &ba) > COMMUTE_TOL {
                return Err(Error::NotCommuting(i, j));
            }
        }
    }
    let pa = match p {
        FamilyPolynomial::Max(q) => eval_max_multipoly(q, mats)?,
        FamilyPolynomial::Classical(q) => eval_classical_multipoly(q, mats)?,
    };
    let (tol, key) = if is_max {
        (MAX_MAP_TOL, "commuting_family_max")
    } else {
        (DIST_MAP_TOL, "commuting_family_dist")
    };

    let conds = mats
        .iter()
        .map(Condensation::new)
        .collect::<Result<Vec<_>>>()?;
    let cond_p = Condensation::new(&pa)?;
    let profiles: Vec<_> = conds
        .iter()
        .map(spectrum::SpectralProfile::from_condensation)
        .collect();
    let prof_p = spectrum::SpectralProfile::from_condensation(&cond_p);
    let spec = |pr: &spectrum::SpectralProfile| {
        if is_max {
            pr.sigma_max.clone()
        } else {
            pr.sigma_dist.clone()
        }
    };
    let local = |pr: &spectrum::SpectralProfile| if is_max { pr.r.clone() } else { pr.rho.clone() };
    let spectra: Vec<Vec<f64>> = profiles.iter().map(spec).collect();
    let sigma_p = spec(&prof_p);

    let dist_to_sigma = |v: f64| {
        sigma_p
            .iter()
            .map(|&s| rel_gap(v, s))
            .fold(f64::INFINITY, f64::min)
    };
    let mut worst1: f64 = 0.0;
    for j in 0..mats.len() {
        for &lambda in &spectra[j] {
            let mut lists = spectra.clone();
            lists[j] = vec![lambda];
            let mut best = f64::INFINITY;
            for_each_tuple(&lists, &mut |t| {
                best = best.min(dist_to_sigma(p.eval_scalar(t)))
            });
            worst1 = worst1.max(best);
        }
    }
    let mut worst2: f64 = 0.0;
    for &mu in &sigma_p {
        let mut best = f64::INFINITY;
        for_each_tuple(&spectra, &mut |t| {
            best = best.min(rel_gap(p.eval_scalar(t), mu))
        });
        worst2 = worst2.max(best);
    }

    let locals: Vec<Vec<f64>> = profiles.iter().map(local).collect();
    let local_p = local(&prof_p);
    let at = |k: usize| p.eval_scalar(&locals.iter().map(|l| l[k]).collect::<Vec<_>>());
    let irreducible = conds.iter().any(Condensation::is_irreducible) || cond_p.is_irreducible();
    let distinct = conds.iter().all(|c| {
        let vals: Vec<f64> = (0..c.class_count())
            .map(|mu| if is_max { c.mcgm(mu) } else { c.perron(mu) })
            .collect();
        all_distinct(&vals)
    });
    let per_index = if irreducible {
        let gap = (0..n)
            .map(|i| rel_gap(local_p[i], at(i)))
            .fold(0.0, f64::max);
        CheckReport::within(
            "per_index[k=i]",
            "v_i(p(A)) = p(v_i(A_1), ..., v_i(A_m))",
            gap,
            tol,
        )
    } else if distinct {
        let gap = (0..n)
            .map(|i| {
                (0..n)
                    .map(|k| rel_gap(local_p[i], at(k)))
                    .fold(f64::INFINITY, f64::min)
            })
            .fold(0.0, f64::max);
        CheckReport::within(
            "per_index[some k]",
            "v_i(p(A)) = p(v_k(A_1), ..., v_k(A_m)) for some k",
            gap,
            tol,
        )
    } else {
        CheckReport::not_applicable(
            "per_index",
            "v_i(p(A)) = p(v_k(A_1), ..., v_k(A_m))",
            "no irreducible member and class values are not distinct",
        )
    };

    let parts = vec![
        CheckReport::within(
            "direction_1",
            "each λ_j ∈ σ(A_j) extends to a tuple with p(λ) ∈ σ(p(A))",
            worst1,
            tol,
        ),
        CheckReport::within(
            "direction_2",
            "each element of σ(p(A)) is p(λ_1, ..., λ_m)",
            worst2,
            tol,
        ),
        per_index,
    ];
    Ok(
        CheckReport::bundle(key, "spectral mapping for a commuting family", parts)
            .with_digest(&(p, mats)),
    )
}
