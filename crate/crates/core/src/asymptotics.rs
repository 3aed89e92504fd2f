//! Limit formulas linking the two kinds of local spectral radius.
//!
//! * Hadamard powers: `ρ_{e_i}(A^(t))^{1/t}` decreases to `r_{e_i}(A)`.
//! * Max powers: `ρ_{e_i}(A^k_⊗)^{1/k}` tends to `r_{e_i}(A)` from above.
//! * Classical powers: `r_{e_i}(A^k)^{1/k}` tends to `ρ_{e_i}(A)` from below.
//! * `r_⊗(A^k)^{1/k}` tends to `ρ(A)` from below, not necessarily monotonically.
//!
//! Each trace also carries the `n`-scaled companion sequence, which
//! approaches the same limit from the other side. Powers are formed in the
//! log domain so large exponents never overflow.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::Condensation;
use crate::logdomain::LogMatrix;
use crate::matrix::NonnegMatrix;

/// Relative slack for the one-sided bounds.
pub const BOUND_SLACK: f64 = 1e-9;
/// Relative slack for monotonicity of the Hadamard-power trace.
pub const MONOTONE_SLACK: f64 = 1e-12;
/// Relative distance from the limit accepted at the last grid point.
pub const TERMINAL_TOL: f64 = 5e-2;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TraceKind {
    Schur,
    MaxPower,
    ClassicalPower,
    Bapat,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Monotonicity {
    Nonincreasing,
    None,
}

/// Which side of the limit the plain sequence lies on; the scaled
/// sequence lies on the other.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Side {
    Above,
    Below,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LimitTrace {
    pub kind: TraceKind,
    /// `None` for the whole-matrix trace of `r_⊗(A^k)^{1/k}`.
    pub index: Option<usize>,
    pub n: usize,
    pub grid: Vec<f64>,
    pub values: Vec<f64>,
    pub scaled: Vec<f64>,
    pub limit: f64,
    pub monotonicity: Monotonicity,
    pub side: Side,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TraceCheck {
    /// Grid points where `values` lie on the wrong side of the limit.
    pub bound_violations: Vec<usize>,
    /// Grid points where `scaled` lies on the wrong side of the limit.
    pub scaled_violations: Vec<usize>,
    /// `None` when no monotonicity is claimed.
    pub monotone: Option<bool>,
    pub terminal_gap: f64,
    pub terminal_ok: bool,
    /// `|last - limit| <= |mid - limit| + 1e-12`.
    pub tightening: bool,
}

impl TraceCheck {
    pub fn passed(&self) -> bool {
        self.bound_violations.is_empty()
            && self.scaled_violations.is_empty()
            && self.monotone != Some(false)
            && self.terminal_ok
    }
}

fn rel_gap(v: f64, limit: f64) -> f64 {
    if limit == 0.0 {
        if v == 0.0 {
            0.0
        } else {
            f64::INFINITY
        }
    } else {
        (v - limit).abs() / limit
    }
}

/// Whether `v` is at least `target` up to relative slack.
fn at_least(v: f64, target: f64) -> bool {
    v >= target * (1.0 - BOUND_SLACK)
}

fn at_most(v: f64, target: f64) -> bool {
    v <= target * (1.0 + BOUND_SLACK)
}

impl LimitTrace {
    pub fn last_value(&self) -> f64 {
        *self.values.last().expect("grid is nonempty")
    }

    pub fn check(&self) -> TraceCheck {
        type Bound = fn(f64, f64) -> bool;
        let (plain_ok, scaled_ok): (Bound, Bound) = match self.side {
            Side::Above => (at_least, at_most),
            Side::Below => (at_most, at_least),
        };
        let bound_violations = (0..self.values.len())
            .filter(|&j| !plain_ok(self.values[j], self.limit))
            .collect();
        let scaled_violations = (0..self.scaled.len())
            .filter(|&j| !scaled_ok(self.scaled[j], self.limit))
            .collect();
        let monotone = match self.monotonicity {
            Monotonicity::Nonincreasing => Some(
                self.values
                    .windows(2)
                    .all(|w| w[1] <= w[0] * (1.0 + MONOTONE_SLACK)),
            ),
            Monotonicity::None => None,
        };
        let last = self.last_value();
        let mid = self.values[self.values.len() / 2];
        let terminal_gap = rel_gap(last, self.limit);
        TraceCheck {
            bound_violations,
            scaled_violations,
            monotone,
            terminal_gap,
            terminal_ok: terminal_gap <= TERMINAL_TOL,
            tightening: (last - self.limit).abs() <= (mid - self.limit).abs() + 1e-12,
        }
    }
}

/// `{1, 2, 4, ..., 1024}`.
pub fn default_t_grid() -> Vec<f64> {
    (0..=10).map(|e| f64::from(1u32 << e)).collect()
}

pub const DEFAULT_K_MAX: u32 = 64;

fn validate_grid(grid: &[f64]) -> Result<()> {
    if grid.is_empty() {
        return Err(Error::InvalidGrid("empty grid".into()));
    }
    if let Some(t) = grid.iter().find(|t| !(t.is_finite() && **t > 0.0)) {
        return Err(Error::InvalidGrid(format!(
            "grid point {t} is not in (0, inf)"
        )));
    }
    if grid.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::InvalidGrid("grid is not strictly increasing".into()));
    }
    Ok(())
}

fn validate_k(k_max: u32) -> Result<()> {
    if k_max == 0 {
        Err(Error::InvalidGrid("k_max must be at least 1".into()))
    } else {
        Ok(())
    }
}

fn check_index(n: usize, i: usize) -> Result<()> {
    if i < n {
        Ok(())
    } else {
        Err(Error::IndexOutOfRange { index: i, n })
    }
}

/// Per-index log values of one quantity along a grid: `ln_q[j][i]`.
struct Samples {
    grid: Vec<f64>,
    ln_q: Vec<Vec<f64>>,
}

impl Samples {
    /// Builds per-index traces from `exp(ln_q / t)` and
    /// `exp((ln_q + scale) / t)`.
    #[allow(clippy::too_many_arguments)]
    fn trace(
        &self,
        kind: TraceKind,
        index: usize,
        n: usize,
        scale: f64,
        limit: f64,
        monotonicity: Monotonicity,
        side: Side,
    ) -> LimitTrace {
        let values = self
            .grid
            .iter()
            .zip(&self.ln_q)
            .map(|(t, q)| (q[index] / t).exp())
            .collect();
        let scaled = self
            .grid
            .iter()
            .zip(&self.ln_q)
            .map(|(t, q)| ((q[index] + scale) / t).exp())
            .collect();
        LimitTrace {
            kind,
            index: Some(index),
            n,
            grid: self.grid.clone(),
            values,
            scaled,
            limit,
            monotonicity,
            side,
        }
    }
}

fn k_grid(k_max: u32) -> Vec<f64> {
    (1..=k_max).map(f64::from).collect()
}

/// Hadamard-power traces for every index.
pub fn schur_traces(a: &NonnegMatrix, t_grid: &[f64]) -> Result<Vec<LimitTrace>> {
    validate_grid(t_grid)?;
    let w = LogMatrix::from_matrix(a);
    let base = Condensation::from_log(&w)?;
    let n = a.n();
    let ln_q = t_grid
        .iter()
        .map(|&t| {
            let c = Condensation::from_log(&w.hadamard_power(t))?;
            Ok((0..n).map(|i| c.ln_local_rho(i).0).collect())
        })
        .collect::<Result<Vec<Vec<f64>>>>()?;
    let s = Samples {
        grid: t_grid.to_vec(),
        ln_q,
    };
    let ln_n = (n as f64).ln();
    Ok((0..n)
        .map(|i| {
            let limit = base.ln_local_r(i).0.exp();
            s.trace(
                TraceKind::Schur,
                i,
                n,
                -ln_n,
                limit,
                Monotonicity::Nonincreasing,
                Side::Above,
            )
        })
        .collect())
}

/// `ρ_{e_i}(A^(t))^{1/t}` along `t_grid`, with limit `r_{e_i}(A)`.
pub fn schur_trace(a: &NonnegMatrix, i: usize, t_grid: &[f64]) -> Result<LimitTrace> {
    check_index(a.n(), i)?;
    Ok(schur_traces(a, t_grid)?.swap_remove(i))
}

/// Condensations of `A^1, ..., A^{k_max}` under the given product.
fn power_condensations(
    a: &NonnegMatrix,
    k_max: u32,
    product: fn(&LogMatrix, &LogMatrix) -> LogMatrix,
) -> Result<Vec<Condensation>> {
    let w = LogMatrix::from_matrix(a);
    let mut p = w.clone();
    let mut out = Vec::with_capacity(k_max as usize);
    for k in 1..=k_max {
        if k > 1 {
            p = product(&p, &w);
        }
        out.push(Condensation::from_log(&p)?);
    }
    Ok(out)
}

/// Max-power traces for every index.
pub fn max_power_traces(a: &NonnegMatrix, k_max: u32) -> Result<Vec<LimitTrace>> {
    validate_k(k_max)?;
    let n = a.n();
    let base = Condensation::new(a)?;
    let powers = power_condensations(a, k_max, LogMatrix::max_mul)?;
    let ln_q = powers
        .iter()
        .map(|c| (0..n).map(|i| c.ln_local_rho(i).0).collect())
        .collect();
    let s = Samples {
        grid: k_grid(k_max),
        ln_q,
    };
    let ln_n = (n as f64).ln();
    Ok((0..n)
        .map(|i| {
            let limit = base.ln_local_r(i).0.exp();
            s.trace(
                TraceKind::MaxPower,
                i,
                n,
                -ln_n,
                limit,
                Monotonicity::None,
                Side::Above,
            )
        })
        .collect())
}

/// `ρ_{e_i}(A^k_⊗)^{1/k}` for `k = 1..=k_max`, with limit `r_{e_i}(A)`.
pub fn max_power_trace(a: &NonnegMatrix, i: usize, k_max: u32) -> Result<LimitTrace> {
    check_index(a.n(), i)?;
    Ok(max_power_traces(a, k_max)?.swap_remove(i))
}

/// Classical-power traces for every index.
pub fn classical_power_traces(a: &NonnegMatrix, k_max: u32) -> Result<Vec<LimitTrace>> {
    validate_k(k_max)?;
    let n = a.n();
    let base = Condensation::new(a)?;
    let powers = power_condensations(a, k_max, LogMatrix::sum_mul)?;
    let ln_q = powers
        .iter()
        .map(|c| (0..n).map(|i| c.ln_local_r(i).0).collect())
        .collect();
    let s = Samples {
        grid: k_grid(k_max),
        ln_q,
    };
    let ln_n = (n as f64).ln();
    Ok((0..n)
        .map(|i| {
            let limit = base.ln_local_rho(i).0.exp();
            s.trace(
                TraceKind::ClassicalPower,
                i,
                n,
                ln_n,
                limit,
                Monotonicity::None,
                Side::Below,
            )
        })
        .collect())
}

/// `r_{e_i}(A^k)^{1/k}` for `k = 1..=k_max`, with limit `ρ_{e_i}(A)`.
pub fn classical_power_trace(a: &NonnegMatrix, i: usize, k_max: u32) -> Result<LimitTrace> {
    check_index(a.n(), i)?;
    Ok(classical_power_traces(a, k_max)?.swap_remove(i))
}

/// `r_⊗(A^k)^{1/k}` for `k = 1..=k_max`, with limit `ρ(A)`.
pub fn bapat_trace(a: &NonnegMatrix, k_max: u32) -> Result<LimitTrace> {
    validate_k(k_max)?;
    let n = a.n();
    let base = Condensation::new(a)?;
    let powers = power_condensations(a, k_max, LogMatrix::sum_mul)?;
    let grid = k_grid(k_max);
    let ln_q: Vec<f64> = powers.iter().map(|c| c.ln_max_cycle_mean()).collect();
    let ln_n = (n as f64).ln();
    let values = grid.iter().zip(&ln_q).map(|(k, q)| (q / k).exp()).collect();
    let scaled = grid
        .iter()
        .zip(&ln_q)
        .map(|(k, q)| ((q + ln_n) / k).exp())
        .collect();
    Ok(LimitTrace {
        kind: TraceKind::Bapat,
        index: None,
        n,
        grid,
        values,
        scaled,
        limit: base.ln_spectral_radius().exp(),
        monotonicity: Monotonicity::None,
        side: Side::Below,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(rows: &[&[f64]]) -> NonnegMatrix {
        NonnegMatrix::from_rows(rows).unwrap()
    }

    #[test]
    fn diagonal_traces_are_constant() {
        let d = NonnegMatrix::diag(&[0.5, 3.0]).unwrap();
        for tr in schur_traces(&d, &default_t_grid()).unwrap() {
            let di = [0.5, 3.0][tr.index.unwrap()];
            assert!(tr.values.iter().all(|v| (v - di).abs() <= 1e-14 * di));
            assert!(tr.check().passed());
        }
        for tr in max_power_traces(&d, 16)
            .unwrap()
            .into_iter()
            .chain(classical_power_traces(&d, 16).unwrap())
        {
            let di = [0.5, 3.0][tr.index.unwrap()];
            assert!(tr.values.iter().all(|v| (v - di).abs() <= 1e-13 * di));
        }
        let b = bapat_trace(&d, 16).unwrap();
        assert!(b.values.iter().all(|v| (v - 3.0).abs() <= 1e-13));
    }

    #[test]
    fn schur_trace_two_cycle_decreases_to_half() {
        // ρ(A^(t)) = 2^{-t}, so every value is exactly 1/2.
        let a = m(&[&[0.0, 1.0], &[0.25, 0.0]]);
        let tr = schur_trace(&a, 0, &default_t_grid()).unwrap();
        assert!((tr.limit - 0.5).abs() < 1e-15);
        assert!(tr.values.iter().all(|v| (v - 0.5).abs() < 1e-12));
        assert!(tr.check().passed());
    }

    #[test]
    fn schur_trace_strictly_decreasing_example() {
        let a = m(&[&[1.0, 1.0], &[1.0, 1.0]]);
        let tr = schur_trace(&a, 1, &default_t_grid()).unwrap();
        // ρ(A^(t)) = 2 for all t.
        for (t, v) in tr.grid.iter().zip(&tr.values) {
            assert!((v - 2f64.powf(1.0 / t)).abs() < 1e-12);
        }
        let c = tr.check();
        assert!(c.passed() && c.tightening);
        assert_eq!(c.monotone, Some(true));
    }

    #[test]
    fn max_power_lower_triangular() {
        let a = m(&[&[1.0, 0.0], &[0.5, 2.0]]);
        let tr = max_power_trace(&a, 0, 64).unwrap();
        assert!((tr.limit - 2.0).abs() < 1e-15);
        assert!((tr.values[0] - 2.0).abs() < 1e-12);
        assert!(tr.check().passed());
    }

    #[test]
    fn classical_power_symmetric_swap() {
        let a = m(&[&[0.0, 1.0 / 3.0], &[1.0 / 3.0, 0.0]]);
        let tr = classical_power_trace(&a, 0, 64).unwrap();
        assert!(tr.values.iter().all(|v| (v - 1.0 / 3.0).abs() < 1e-13));
        assert!(tr.check().passed());
    }

    #[test]
    fn bapat_permutation() {
        let p = m(&[&[0.0, 1.0], &[1.0, 0.0]]);
        let tr = bapat_trace(&p, 64).unwrap();
        assert!(tr.values.iter().all(|v| (v - 1.0).abs() < 1e-13));
        assert!(tr.check().passed());
    }

    #[test]
    fn huge_exponents_stay_finite() {
        let a = m(&[&[1e3, 1e-3, 0.0], &[2.0, 5e2, 1e3], &[1e-3, 0.0, 1e-3]]);
        for tr in schur_traces(&a, &default_t_grid()).unwrap() {
            assert!(tr.values.iter().chain(&tr.scaled).all(|v| v.is_finite()));
            assert!(tr.check().passed(), "{tr:?}");
        }
        for tr in classical_power_traces(&a, 64).unwrap() {
            assert!(tr.check().passed(), "{tr:?}");
        }
    }

    #[test]
    fn grid_errors() {
        let a = NonnegMatrix::identity(2);
        assert!(matches!(
            schur_trace(&a, 0, &[]),
            Err(Error::InvalidGrid(_))
        ));
        assert!(matches!(
            schur_trace(&a, 0, &[1.0, 1.0]),
            Err(Error::InvalidGrid(_))
        ));
        assert!(matches!(
            schur_trace(&a, 0, &[0.0, 1.0]),
            Err(Error::InvalidGrid(_))
        ));
        assert!(matches!(
            max_power_trace(&a, 0, 0),
            Err(Error::InvalidGrid(_))
        ));
        assert!(matches!(bapat_trace(&a, 0), Err(Error::InvalidGrid(_))));
        assert!(matches!(
            schur_trace(&a, 2, &[1.0]),
            Err(Error::IndexOutOfRange { .. })
        ));
    }

    #[test]
    fn nilpotent_traces_are_zero() {
        let a = m(&[&[0.0, 1.0], &[0.0, 0.0]]);
        for tr in classical_power_traces(&a, 8).unwrap() {
            assert_eq!(tr.limit, 0.0);
            assert!(tr.values.iter().all(|&v| v == 0.0));
            assert!(tr.check().passed());
        }
    }
}
