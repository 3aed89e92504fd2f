//! Brute-force reference computations and seeded random matrix generators.
//!
//! Nothing here shares code with the condensation-based routines: cycles
//! are enumerated directly, reachability comes from a boolean
//! Floyd–Warshall closure, and limits are approximated by iterating
//! vectors.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrix::{NonnegMatrix, NonnegVector};

/// Largest dimension accepted by the cycle enumerator.
pub const ENUMERATION_MAX_N: usize = 9;

/// Every simple cycle, each listed once starting from its smallest vertex.
pub fn simple_cycles(a: &NonnegMatrix) -> Result<Vec<Vec<usize>>> {
    let n = a.n();
    if n > ENUMERATION_MAX_N {
        return Err(Error::TooLarge {
            n,
            max: ENUMERATION_MAX_N,
        });
    }
    fn dfs(
        a: &NonnegMatrix,
        start: usize,
        path: &mut Vec<usize>,
        on_path: &mut [bool],
        out: &mut Vec<Vec<usize>>,
    ) {
        let u = *path.last().unwrap();
        for v in start..a.n() {
            if a.get(u, v) <= 0.0 {
                continue;
            }
            if v == start {
                out.push(path.clone());
            } else if !on_path[v] {
                on_path[v] = true;
                path.push(v);
                dfs(a, start, path, on_path, out);
                path.pop();
                on_path[v] = false;
            }
        }
    }
    let mut out = Vec::new();
    for s in 0..n {
        let mut on_path = vec![false; n];
        on_path[s] = true;
        dfs(a, s, &mut vec![s], &mut on_path, &mut out);
    }
    Ok(out)
}

/// Geometric mean of the weights along a cycle, in logs.
fn ln_cycle_mean(a: &NonnegMatrix, cycle: &[usize]) -> f64 {
    let k = cycle.len();
    let s: f64 = (0..k)
        .map(|j| a.get(cycle[j], cycle[(j + 1) % k]).ln())
        .sum();
    s / k as f64
}

/// `r_⊗(A)` as the largest geometric mean over all simple cycles.
pub fn oracle_mcgm_enumerate(a: &NonnegMatrix) -> Result<f64> {
    Ok(simple_cycles(a)?
        .iter()
        .map(|c| ln_cycle_mean(a, c).exp())
        .fold(0.0, f64::max))
}

/// Reflexive-transitive closure of the digraph `u → v ⇔ a_uv > 0`.
pub fn oracle_reachability(a: &NonnegMatrix) -> Vec<Vec<bool>> {
    let n = a.n();
    let mut r: Vec<Vec<bool>> = (0..n)
        .map(|u| (0..n).map(|v| u == v || a.get(u, v) > 0.0).collect())
        .collect();
    for k in 0..n {
        for u in 0..n {
            if r[u][k] {
                for v in 0..n {
                    if r[k][v] {
                        r[u][v] = true;
                    }
                }
            }
        }
    }
    r
}

/// Classes from mutual reachability, ordered by smallest member.
pub fn oracle_classes(a: &NonnegMatrix) -> Vec<Vec<usize>> {
    let r = oracle_reachability(a);
    let n = a.n();
    let mut seen = vec![false; n];
    let mut out = Vec::new();
    for u in 0..n {
        if seen[u] {
            continue;
        }
        let class: Vec<usize> = (u..n).filter(|&v| r[u][v] && r[v][u]).collect();
        for &v in &class {
            seen[v] = true;
        }
        out.push(class);
    }
    out
}

/// `r_{e_i}(A)`: best simple-cycle mean among cycles from which `i` is
/// reachable.
pub fn oracle_local_r(a: &NonnegMatrix, i: usize) -> Result<f64> {
    if i >= a.n() {
        return Err(Error::IndexOutOfRange { index: i, n: a.n() });
    }
    let reach = oracle_reachability(a);
    Ok(simple_cycles(a)?
        .iter()
        .filter(|c| reach[c[0]][i])
        .map(|c| ln_cycle_mean(a, c).exp())
        .fold(0.0, f64::max))
}

/// Max-plus vector iteration `x ← A ⊗ x` in logs; returns `ln ‖A^k ⊗ e_i‖`
/// for `k = 1..=k_max`.
fn ln_max_orbit(a: &NonnegMatrix, i: usize, k_max: usize) -> Vec<f64> {
    let n = a.n();
    let w: Vec<f64> = a
        .entries()
        .iter()
        .map(|&v| if v > 0.0 { v.ln() } else { f64::NEG_INFINITY })
        .collect();
    let mut x = vec![f64::NEG_INFINITY; n];
    x[i] = 0.0;
    let mut out = Vec::with_capacity(k_max);
    for _ in 0..k_max {
        let y: Vec<f64> = (0..n)
            .map(|u| {
                (0..n)
                    .map(|v| w[u * n + v] + x[v])
                    .fold(f64::NEG_INFINITY, f64::max)
            })
            .collect();
        x = y;
        out.push(x.iter().copied().fold(f64::NEG_INFINITY, f64::max));
    }
    out
}

/// Classical vector iteration `x ← A x`, renormalized each step; returns
/// `ln ‖A^k e_i‖` for `k = 1..=k_max`.
fn ln_sum_orbit(a: &NonnegMatrix, i: usize, k_max: usize) -> Vec<f64> {
    let n = a.n();
    let mut x = vec![0.0; n];
    x[i] = 1.0;
    let mut ln_scale = 0.0;
    let mut out = Vec::with_capacity(k_max);
    for _ in 0..k_max {
        let y: Vec<f64> = (0..n)
            .map(|u| (0..n).map(|v| a.get(u, v) * x[v]).sum())
            .collect();
        let top = y.iter().copied().fold(0.0, f64::max);
        if top == 0.0 {
            out.push(f64::NEG_INFINITY);
            x = y;
            continue;
        }
        ln_scale += top.ln();
        x = y.into_iter().map(|v| v / top).collect();
        out.push(ln_scale);
    }
    out
}

/// `‖A^{k_max}_⊗ ⊗ e_i‖^{1/k_max}`.
pub fn oracle_local_r_limit(a: &NonnegMatrix, i: usize, k_max: usize) -> Result<f64> {
    if i >= a.n() {
        return Err(Error::IndexOutOfRange { index: i, n: a.n() });
    }
    if k_max < a.n() {
        return Err(Error::InvalidGrid(format!(
            "k_max {k_max} is below n = {}",
            a.n()
        )));
    }
    let orbit = ln_max_orbit(a, i, k_max);
    Ok((orbit[k_max - 1] / k_max as f64).exp())
}

/// `max_{k_max/2 <= k <= k_max} ‖A^k e_i‖^{1/k}`, a finite stand-in for
/// the limsup.
pub fn oracle_local_rho_limit(a: &NonnegMatrix, i: usize, k_max: usize) -> Result<f64> {
    if i >= a.n() {
        return Err(Error::IndexOutOfRange { index: i, n: a.n() });
    }
    if k_max < a.n() {
        return Err(Error::InvalidGrid(format!(
            "k_max {k_max} is below n = {}",
            a.n()
        )));
    }
    let orbit = ln_sum_orbit(a, i, k_max);
    Ok((k_max / 2..=k_max)
        .filter(|&k| k >= 1)
        .map(|k| (orbit[k - 1] / k as f64).exp())
        .fold(0.0, f64::max))
}

/// Perron root of an irreducible matrix bracketed by Gelfand's formula:
/// `max_{i} (A^k)_{ii}^{1/k} <= ρ <= ‖A^k‖_∞^{1/k}` at `k = 2^rounds`.
pub fn oracle_perron_bracket(a: &NonnegMatrix, rounds: u32) -> (f64, f64) {
    let n = a.n();
    let mut p = a.clone();
    let mut ln_scale = 0.0;
    let mut k = 1.0;
    let rescale = |p: NonnegMatrix, ln_scale: &mut f64| {
        let top = p.norm();
        if top > 0.0 {
            *ln_scale += top.ln();
            p.scale(1.0 / top).expect("finite scale")
        } else {
            p
        }
    };
    p = rescale(p, &mut ln_scale);
    for _ in 0..rounds {
        p = p.mul(&p).expect("same size");
        ln_scale *= 2.0;
        k *= 2.0;
        p = rescale(p, &mut ln_scale);
    }
    let row_sum = (0..n)
        .map(|u| p.row(u).iter().sum::<f64>())
        .fold(0.0, f64::max);
    let diag = (0..n).map(|u| p.get(u, u)).fold(0.0, f64::max);
    let lower = if diag > 0.0 {
        ((diag.ln() + ln_scale) / k).exp()
    } else {
        0.0
    };
    let upper = if row_sum > 0.0 {
        ((row_sum.ln() + ln_scale) / k).exp()
    } else {
        0.0
    };
    (lower, upper)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Structure {
    General,
    /// A Hamiltonian cycle of small entries is added.
    Irreducible,
    Diagonal,
    /// One nonzero per row and column.
    PermutationLike,
    /// Entries above a block partition are zero.
    BlockTriangular {
        blocks: usize,
    },
    Symmetric,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GeneratorSpec {
    pub n_min: usize,
    pub n_max: usize,
    /// Probability that an entry is nonzero.
    pub density: f64,
    /// Magnitudes are log-uniform on `[lo, hi]`.
    pub magnitude: (f64, f64),
    pub structure: Structure,
}

impl GeneratorSpec {
    pub fn new(n_min: usize, n_max: usize, density: f64, structure: Structure) -> Self {
        Self {
            n_min,
            n_max,
            density,
            magnitude: (1e-3, 1e3),
            structure,
        }
    }

    pub fn general(n_min: usize, n_max: usize, density: f64) -> Self {
        Self::new(n_min, n_max, density, Structure::General)
    }

    fn validate(&self) -> Result<()> {
        let (lo, hi) = self.magnitude;
        if self.n_min == 0 || self.n_max < self.n_min {
            return Err(Error::InvalidGrid(format!(
                "bad size range {}..={}",
                self.n_min, self.n_max
            )));
        }
        if !(0.0..=1.0).contains(&self.density) {
            return Err(Error::InvalidScalar(self.density));
        }
        if !(lo > 0.0 && hi >= lo && hi.is_finite()) {
            return Err(Error::InvalidScalar(lo));
        }
        if let Structure::BlockTriangular { blocks } = self.structure {
            if blocks == 0 {
                return Err(Error::InvalidGrid("zero blocks".into()));
            }
        }
        Ok(())
    }
}

fn log_uniform<R: Rng + ?Sized>(rng: &mut R, (lo, hi): (f64, f64)) -> f64 {
    if lo == hi {
        lo
    } else {
        rng.gen_range(lo.ln()..hi.ln()).exp()
    }
}

/// A matrix determined by `(spec, seed)`.
pub fn generate(spec: &GeneratorSpec, seed: u64) -> Result<NonnegMatrix> {
    spec.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = rng.gen_range(spec.n_min..=spec.n_max);
    Ok(generate_with(spec, n, &mut rng))
}

/// Draws an `n × n` matrix following `spec` (its size range is ignored).
pub fn generate_with(spec: &GeneratorSpec, n: usize, rng: &mut impl Rng) -> NonnegMatrix {
    let mut d = vec![0.0; n * n];
    let entry = |rng: &mut dyn rand::RngCore| {
        if rng.gen_bool(spec.density) {
            log_uniform(rng, spec.magnitude)
        } else {
            0.0
        }
    };
    match spec.structure {
        Structure::General => {
            for v in d.iter_mut() {
                *v = entry(rng);
            }
        }
        Structure::Irreducible => {
            for v in d.iter_mut() {
                *v = entry(rng);
            }
            let mut perm: Vec<usize> = (0..n).collect();
            perm.shuffle(rng);
            let (lo, _) = spec.magnitude;
            for k in 0..n {
                let (u, v) = (perm[k], perm[(k + 1) % n]);
                if d[u * n + v] == 0.0 {
                    d[u * n + v] = log_uniform(rng, (lo, lo * 10.0));
                }
            }
        }
        Structure::Diagonal => {
            for i in 0..n {
                d[i * n + i] = entry(rng);
            }
        }
        Structure::PermutationLike => {
            let mut perm: Vec<usize> = (0..n).collect();
            perm.shuffle(rng);
            for (i, &j) in perm.iter().enumerate() {
                d[i * n + j] = log_uniform(rng, spec.magnitude);
            }
        }
        Structure::BlockTriangular { blocks } => {
            let blocks = blocks.min(n).max(1);
            let block_of = |i: usize| i * blocks / n;
            for u in 0..n {
                for v in 0..n {
                    if block_of(v) <= block_of(u) {
                        d[u * n + v] = entry(rng);
                    }
                }
            }
        }
        Structure::Symmetric => {
            for u in 0..n {
                for v in u..n {
                    let x = entry(rng);
                    d[u * n + v] = x;
                    d[v * n + u] = x;
                }
            }
        }
    }
    NonnegMatrix::new(n, d).expect("generated entries are finite and nonnegative")
}

/// How the support of a test vector is chosen.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SupportKind {
    Full,
    Singleton,
    Half,
}

/// A positive-on-support vector with log-uniform entries in `[1e-2, 1e2]`.
pub fn random_vector(n: usize, support: SupportKind, rng: &mut impl Rng) -> NonnegVector {
    let mut idx: Vec<usize> = (0..n).collect();
    idx.shuffle(rng);
    let k = match support {
        SupportKind::Full => n,
        SupportKind::Singleton => 1,
        SupportKind::Half => n.div_ceil(2),
    };
    let mut x = vec![0.0; n];
    for &i in &idx[..k] {
        x[i] = log_uniform(rng, (1e-2, 1e2));
    }
    NonnegVector::new(x).expect("finite")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(rows: &[&[f64]]) -> NonnegMatrix {
        NonnegMatrix::from_rows(rows).unwrap()
    }

    #[test]
    fn enumeration_examples() {
        assert!(
            (oracle_mcgm_enumerate(&m(&[&[0.0, 1.0], &[0.25, 0.0]])).unwrap() - 0.5).abs() < 1e-15
        );
        let upper = m(&[&[0.0, 1.0, 2.0], &[0.0, 0.0, 3.0], &[0.0, 0.0, 0.0]]);
        assert_eq!(oracle_mcgm_enumerate(&upper).unwrap(), 0.0);
        assert!(oracle_mcgm_enumerate(&NonnegMatrix::ones(10)).is_err());
        // complete digraph on 3 vertices with loops: 3 loops, 3 two-cycles, 2 three-cycles
        assert_eq!(simple_cycles(&NonnegMatrix::ones(3)).unwrap().len(), 8);
    }

    #[test]
    fn classes_and_local_r() {
        let a = m(&[&[1.0, 0.0], &[1.0, 2.0]]);
        assert_eq!(oracle_classes(&a), vec![vec![0], vec![1]]);
        assert_eq!(oracle_local_r(&a, 0).unwrap(), 2.0);
        assert_eq!(oracle_local_r(&a, 1).unwrap(), 2.0);
        let b = m(&[&[1.0, 1.0], &[0.0, 2.0]]);
        assert_eq!(oracle_local_r(&b, 0).unwrap(), 1.0);
        assert_eq!(oracle_local_r(&b, 1).unwrap(), 2.0);
    }

    #[test]
    fn limit_oracles() {
        let ab = m(&[&[1.0, 2.0], &[0.0, 0.0]]);
        let v = oracle_local_r_limit(&ab, 1, 64).unwrap();
        assert!((v - 1.0).abs() < 0.05);
        let d = NonnegMatrix::diag(&[0.5, 3.0]).unwrap();
        assert!((oracle_local_r_limit(&d, 1, 5).unwrap() - 3.0).abs() < 1e-14);
        assert!((oracle_local_rho_limit(&d, 0, 5).unwrap() - 0.5).abs() < 1e-14);
        let s = m(&[&[0.0, 1.0 / 3.0], &[1.0 / 3.0, 0.0]]);
        assert!((oracle_local_rho_limit(&s, 0, 64).unwrap() - 1.0 / 3.0).abs() < 1e-14);
    }

    #[test]
    fn perron_bracket_contains_root() {
        let a = m(&[&[1.0, 2.0], &[3.0, 4.0]]);
        let root = (5.0 + 33f64.sqrt()) / 2.0;
        let (lo, hi) = oracle_perron_bracket(&a, 10);
        assert!(lo <= root * (1.0 + 1e-12) && root <= hi * (1.0 + 1e-12));
        assert!(hi / lo < 1.01);
    }

    #[test]
    fn generator_structures() {
        let perm = GeneratorSpec::new(3, 3, 0.5, Structure::PermutationLike);
        let p = generate(&perm, 7).unwrap();
        for i in 0..3 {
            assert_eq!((0..3).filter(|&j| p.get(i, j) > 0.0).count(), 1);
            assert_eq!((0..3).filter(|&j| p.get(j, i) > 0.0).count(), 1);
        }
        let irr = GeneratorSpec::new(2, 8, 0.1, Structure::Irreducible);
        for seed in 0..20 {
            assert_eq!(oracle_classes(&generate(&irr, seed).unwrap()).len(), 1);
        }
        let sym = generate(&GeneratorSpec::new(4, 4, 0.7, Structure::Symmetric), 3).unwrap();
        assert_eq!(sym, sym.transpose());
        let bt = generate(
            &GeneratorSpec::new(6, 6, 1.0, Structure::BlockTriangular { blocks: 3 }),
            1,
        )
        .unwrap();
        assert_eq!(bt.get(0, 5), 0.0);
        assert!(bt.get(5, 0) > 0.0);
        let diag = generate(&GeneratorSpec::new(4, 4, 1.0, Structure::Diagonal), 1).unwrap();
        assert!((0..4).all(|i| (0..4).all(|j| i == j || diag.get(i, j) == 0.0)));
    }

    #[test]
    fn generator_is_deterministic() {
        let spec = GeneratorSpec::general(2, 6, 0.7);
        assert_eq!(generate(&spec, 42).unwrap(), generate(&spec, 42).unwrap());
        let a = generate(&spec, 1).unwrap();
        assert!(a
            .entries()
            .iter()
            .all(|&v| v == 0.0 || (1e-3..=1e3).contains(&v)));
        assert!(generate(&GeneratorSpec::general(3, 2, 0.5), 0).is_err());
    }

    #[test]
    fn vector_supports() {
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        assert_eq!(
            random_vector(5, SupportKind::Singleton, &mut rng)
                .support()
                .len(),
            1
        );
        assert_eq!(
            random_vector(5, SupportKind::Half, &mut rng)
                .support()
                .len(),
            3
        );
        assert_eq!(
            random_vector(5, SupportKind::Full, &mut rng)
                .support()
                .len(),
            5
        );
    }
}
