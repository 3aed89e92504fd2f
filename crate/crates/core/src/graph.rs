//! Strongly connected classes of the digraph of a nonnegative matrix.
//!
//! Edge convention: `u -> v` iff `a_uv > 0`. A class `μ` has access to a
//! vertex `i` when some vertex of `μ` reaches `i` along a (possibly empty)
//! directed path. Per class we record the maximum cycle geometric mean
//! (Karp, log domain) and the Perron root of the diagonal block.

use petgraph::algo::tarjan_scc;
use petgraph::graph::DiGraph;

use crate::error::{Error, Result};
use crate::logdomain::{LogMatrix, NEG_INF};
use crate::matrix::NonnegMatrix;

/// Relative width of the Collatz–Wielandt bracket accepted as converged.
pub const PERRON_TOL: f64 = 1e-12;

/// Squaring rounds of the accelerated power iteration; round `r` has
/// applied `2^(r+1) - 1` ordinary iterations.
const PERRON_MAX_ROUNDS: usize = 64;

/// Maximum mean weight cycle of a strongly connected block given by log
/// weights (Karp). Returns `-inf` for a single vertex without a loop.
pub(crate) fn karp_max_mean(w: &[f64], m: usize) -> f64 {
    debug_assert_eq!(w.len(), m * m);
    if m == 1 {
        return w[0];
    }
    // d[k][v]: heaviest walk with exactly k edges from vertex 0 to v.
    let mut d = vec![NEG_INF; (m + 1) * m];
    d[0] = 0.0;
    for k in 1..=m {
        for v in 0..m {
            let mut best = NEG_INF;
            for u in 0..m {
                let x = d[(k - 1) * m + u] + w[u * m + v];
                if x > best {
                    best = x;
                }
            }
            d[k * m + v] = best;
        }
    }
    let mut lambda = NEG_INF;
    for v in 0..m {
        let dm = d[m * m + v];
        if dm == NEG_INF {
            continue;
        }
        let mut worst = f64::INFINITY;
        for k in 0..m {
            let dk = d[k * m + v];
            if dk > NEG_INF {
                worst = worst.min((dm - dk) / (m - k) as f64);
            }
        }
        lambda = lambda.max(worst);
    }
    lambda
}

/// Max-plus transitive closure (paths with at least one edge), Floyd–Warshall.
pub(crate) fn maxplus_closure(w: &[f64], m: usize) -> Vec<f64> {
    let mut p = w.to_vec();
    for k in 0..m {
        for i in 0..m {
            let pik = p[i * m + k];
            if pik == NEG_INF {
                continue;
            }
            for j in 0..m {
                let v = pik + p[k * m + j];
                if v > p[i * m + j] {
                    p[i * m + j] = v;
                }
            }
        }
    }
    p
}

/// Perron root and vector of an irreducible block, both in log form.
#[derive(Clone, Debug)]
pub(crate) struct PerronBlock {
    pub ln_root: f64,
    /// `ln` of a positive Perron vector, normalized to max 0.
    pub ln_vector: Vec<f64>,
}

/// Perron root of a strongly connected block given by log weights.
///
/// The block is divided by its cycle mean and diagonally rescaled with a
/// max-algebra eigenvector, giving a matrix with entries in `[0, 1]`, a
/// unit entry in every row, and Perron root in `[1, m]`. Power iteration
/// runs on that matrix plus the identity (which is primitive), with
/// repeated squaring and Collatz–Wielandt brackets.
pub(crate) fn perron_log_block(w: &[f64], m: usize) -> Result<PerronBlock> {
    if m == 1 {
        return Ok(PerronBlock {
            ln_root: w[0],
            ln_vector: vec![0.0],
        });
    }
    let c = karp_max_mean(w, m);
    let shifted: Vec<f64> = w.iter().map(|&v| v - c).collect();
    let closure = maxplus_closure(&shifted, m);
    let mut z = 0;
    for v in 1..m {
        if closure[v * m + v] > closure[z * m + z] {
            z = v;
        }
    }
    let pot: Vec<f64> = (0..m)
        .map(|u| if u == z { 0.0 } else { closure[u * m + z] })
        .collect();
    let mut scaled = vec![0.0; m * m];
    for u in 0..m {
        for v in 0..m {
            let x = shifted[u * m + v];
            if x > NEG_INF {
                scaled[u * m + v] = (x + pot[v] - pot[u]).exp();
            }
        }
    }
    let (root, y) = power_iteration(&scaled, m)?;
    let mut ln_vector: Vec<f64> = y.iter().zip(&pot).map(|(&yi, &p)| yi.ln() + p).collect();
    let top = ln_vector.iter().copied().fold(NEG_INF, f64::max);
    ln_vector.iter_mut().for_each(|v| *v -= top);
    Ok(PerronBlock {
        ln_root: c + root.ln(),
        ln_vector,
    })
}

fn mat_vec(a: &[f64], x: &[f64], m: usize) -> Vec<f64> {
    (0..m)
        .map(|i| (0..m).map(|j| a[i * m + j] * x[j]).sum())
        .collect()
}

fn normalize_max(x: &mut [f64]) {
    let top = x.iter().copied().fold(0.0, f64::max);
    if top > 0.0 {
        x.iter_mut().for_each(|v| *v /= top);
    }
}

fn cw_bracket(a: &[f64], x: &[f64], m: usize) -> (f64, f64) {
    let y = mat_vec(a, x, m);
    let mut lo = f64::INFINITY;
    let mut hi = 0.0f64;
    for i in 0..m {
        if x[i] <= 0.0 {
            return (0.0, f64::INFINITY);
        }
        let r = y[i] / x[i];
        lo = lo.min(r);
        hi = hi.max(r);
    }
    (lo, hi)
}

/// Perron root and vector of an irreducible nonnegative matrix with
/// moderate entries, iterating on `B + I`.
fn power_iteration(b: &[f64], m: usize) -> Result<(f64, Vec<f64>)> {
    let mut shifted = b.to_vec();
    for i in 0..m {
        shifted[i * m + i] += 1.0;
    }
    let mut p = shifted.clone();
    normalize_max(&mut p);
    let mut x = vec![1.0; m];
    let mut best = (0.0, f64::INFINITY, x.clone());
    let mut converged = false;
    for _ in 0..PERRON_MAX_ROUNDS {
        x = mat_vec(&p, &x, m);
        normalize_max(&mut x);
        let (lo, hi) = cw_bracket(&shifted, &x, m);
        if hi - lo < best.1 - best.0 {
            best = (lo, hi, x.clone());
        }
        if hi - lo <= PERRON_TOL * hi {
            converged = true;
            break;
        }
        let mut sq = vec![0.0; m * m];
        for i in 0..m {
            for k in 0..m {
                let a = p[i * m + k];
                if a == 0.0 {
                    continue;
                }
                for j in 0..m {
                    sq[i * m + j] += a * p[k * m + j];
                }
            }
        }
        normalize_max(&mut sq);
        p = sq;
    }
    if !converged {
        return Err(Error::PerronNotConverged {
            lower: best.0 - 1.0,
            upper: best.1 - 1.0,
        });
    }
    // A few plain steps usually tighten the bracket to a couple of ulps.
    for _ in 0..8 {
        let mut y = mat_vec(&shifted, &best.2, m);
        normalize_max(&mut y);
        let (lo, hi) = cw_bracket(&shifted, &y, m);
        if hi - lo < best.1 - best.0 {
            best = (lo, hi, y);
        } else {
            break;
        }
    }
    let (lo, hi, x) = best;
    Ok((0.5 * (lo + hi) - 1.0, x))
}

/// Strongly connected components, ordered by smallest member, members ascending.
pub(crate) fn strongly_connected_classes(weights: &LogMatrix) -> Vec<Vec<usize>> {
    let n = weights.n();
    let mut g = DiGraph::<(), ()>::with_capacity(n, n * n);
    let nodes: Vec<_> = (0..n).map(|_| g.add_node(())).collect();
    for u in 0..n {
        for v in 0..n {
            if weights.has_edge(u, v) {
                g.add_edge(nodes[u], nodes[v], ());
            }
        }
    }
    let mut classes: Vec<Vec<usize>> = tarjan_scc(&g)
        .into_iter()
        .map(|c| {
            let mut c: Vec<usize> = c.into_iter().map(|ix| ix.index()).collect();
            c.sort_unstable();
            c
        })
        .collect();
    classes.sort_unstable_by_key(|c| c[0]);
    classes
}

/// `ln r_⊗(A)`: the best Karp value over all classes.
pub(crate) fn ln_max_cycle_mean(weights: &LogMatrix) -> f64 {
    strongly_connected_classes(weights)
        .iter()
        .map(|c| karp_max_mean(weights.submatrix(c).weights(), c.len()))
        .fold(NEG_INF, f64::max)
}

/// Class structure of `A` together with per-class spectral data.
#[derive(Clone, Debug)]
pub struct Condensation {
    weights: LogMatrix,
    classes: Vec<Vec<usize>>,
    class_of: Vec<usize>,
    access: Vec<Vec<bool>>,
    ln_mcgm: Vec<f64>,
    ln_perron: Vec<f64>,
}

impl Condensation {
    pub fn new(a: &NonnegMatrix) -> Result<Self> {
        Self::from_log(&LogMatrix::from_matrix(a))
    }

    /// Condenses a matrix given in log form.
    pub fn from_log(weights: &LogMatrix) -> Result<Self> {
        let n = weights.n();
        let classes = strongly_connected_classes(weights);
        let k = classes.len();
        let mut class_of = vec![0; n];
        for (mu, c) in classes.iter().enumerate() {
            for &v in c {
                class_of[v] = mu;
            }
        }

        let mut succ = vec![Vec::new(); k];
        for u in 0..n {
            for v in 0..n {
                let (cu, cv) = (class_of[u], class_of[v]);
                if cu != cv && weights.has_edge(u, v) && !succ[cu].contains(&cv) {
                    succ[cu].push(cv);
                }
            }
        }
        let mut access = vec![vec![false; k]; k];
        for (mu, row) in access.iter_mut().enumerate() {
            let mut stack = vec![mu];
            row[mu] = true;
            while let Some(c) = stack.pop() {
                for &d in &succ[c] {
                    if !row[d] {
                        row[d] = true;
                        stack.push(d);
                    }
                }
            }
        }

        let mut ln_mcgm = Vec::with_capacity(k);
        let mut ln_perron = Vec::with_capacity(k);
        for c in &classes {
            let block = weights.submatrix(c);
            let m = c.len();
            ln_mcgm.push(karp_max_mean(block.weights(), m));
            ln_perron.push(perron_log_block(block.weights(), m)?.ln_root);
        }

        Ok(Self {
            weights: weights.clone(),
            classes,
            class_of,
            access,
            ln_mcgm,
            ln_perron,
        })
    }

    pub fn n(&self) -> usize {
        self.class_of.len()
    }

    pub(crate) fn weights(&self) -> &LogMatrix {
        &self.weights
    }

    /// Classes ordered by smallest member; members ascending.
    pub fn classes(&self) -> &[Vec<usize>] {
        &self.classes
    }

    pub fn class_count(&self) -> usize {
        self.classes.len()
    }

    pub fn class_of(&self, v: usize) -> usize {
        self.class_of[v]
    }

    /// Reflexive-transitive access between classes.
    pub fn has_access(&self, from: usize, to: usize) -> bool {
        self.access[from][to]
    }

    pub fn access_matrix(&self) -> &[Vec<bool>] {
        &self.access
    }

    /// Whether the class contains a cycle (more than one vertex, or a loop).
    pub fn is_nontrivial(&self, mu: usize) -> bool {
        self.ln_mcgm[mu] > NEG_INF
    }

    pub fn ln_mcgm(&self, mu: usize) -> f64 {
        self.ln_mcgm[mu]
    }

    pub fn ln_perron(&self, mu: usize) -> f64 {
        self.ln_perron[mu]
    }

    /// Maximum cycle geometric mean of the class (0 without cycles).
    pub fn mcgm(&self, mu: usize) -> f64 {
        self.ln_mcgm[mu].exp()
    }

    /// Perron root of the diagonal block of the class.
    pub fn perron(&self, mu: usize) -> f64 {
        self.ln_perron[mu].exp()
    }

    pub fn is_irreducible(&self) -> bool {
        self.classes.len() == 1
    }

    /// Vertices with access to the class `mu` (its initial segment).
    pub fn ancestors_of_class(&self, mu: usize) -> Vec<usize> {
        (0..self.n())
            .filter(|&v| self.access[self.class_of[v]][mu])
            .collect()
    }

    fn best_accessing(&self, i: usize, values: &[f64]) -> (f64, usize) {
        let target = self.class_of[i];
        let mut best = (NEG_INF, target);
        for mu in 0..self.classes.len() {
            if self.access[mu][target] && values[mu] > best.0 {
                best = (values[mu], mu);
            }
        }
        best
    }

    /// `ln r_{e_i}(A)` and the lowest-index class attaining it.
    pub fn ln_local_r(&self, i: usize) -> (f64, usize) {
        self.best_accessing(i, &self.ln_mcgm)
    }

    /// `ln ρ_{e_i}(A)` and the lowest-index class attaining it.
    pub fn ln_local_rho(&self, i: usize) -> (f64, usize) {
        self.best_accessing(i, &self.ln_perron)
    }

    pub fn ln_max_cycle_mean(&self) -> f64 {
        self.ln_mcgm.iter().copied().fold(NEG_INF, f64::max)
    }

    pub fn ln_spectral_radius(&self) -> f64 {
        self.ln_perron.iter().copied().fold(NEG_INF, f64::max)
    }

    /// Perron root and vector of class `mu`.
    pub(crate) fn perron_block(&self, mu: usize) -> Result<PerronBlock> {
        let c = &self.classes[mu];
        perron_log_block(self.weights.submatrix(c).weights(), c.len())
    }
}
