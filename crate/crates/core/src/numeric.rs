//! Sampled realizations of a sign pattern: numeric Gramian rank, Monte Carlo
//! sweeps and a search for rank-deficient weights.
//!
//! A sample draws every edge magnitude from `U[0.5, 2.0]` and multiplies it by
//! the edge sign. Sample `k` of a sweep uses a ChaCha stream selected by `k`,
//! so serial and parallel runs produce the same report.

use nalgebra::{DMatrix, SymmetricEigen};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::{Sign, SignedNetwork};

pub const DEFAULT_TOLERANCE: f64 = 1e-9;
pub const DEFAULT_SEARCH_BUDGET: usize = 20_000;
const MAGNITUDE_RANGE: (f64, f64) = (0.5, 2.0);

#[derive(Debug, Error, Clone, PartialEq)]
pub enum NumericError {
    #[error("dimension mismatch: L is {l:?}, B is {b:?}")]
    DimensionMismatch { l: (usize, usize), b: (usize, usize) },
    #[error("tolerance must be positive, got {0}")]
    BadTolerance(f64),
    #[error("sample has {found} values, network needs {expected}")]
    SampleShape { expected: usize, found: usize },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EdgeWeight {
    pub a: u32,
    pub b: u32,
    pub value: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InputGain {
    pub input: u32,
    pub target: u32,
    pub value: f64,
}

/// Signed weights for every state edge (network edge order) and every input
/// edge.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WeightSample {
    pub weights: Vec<EdgeWeight>,
    pub input_gains: Vec<InputGain>,
}

impl WeightSample {
    /// Builds a sample from positive magnitudes, applying the network's signs.
    pub fn from_magnitudes(net: &SignedNetwork, edges: &[f64], gains: &[f64]) -> Result<Self, NumericError> {
        if edges.len() != net.edge_count() {
            return Err(NumericError::SampleShape { expected: net.edge_count(), found: edges.len() });
        }
        if gains.len() != net.input_edges().len() {
            return Err(NumericError::SampleShape { expected: net.input_edges().len(), found: gains.len() });
        }
        let weights = net
            .state_edges()
            .iter()
            .zip(edges)
            .map(|(e, &m)| EdgeWeight { a: e.a, b: e.b, value: m * e.sign.as_f64() })
            .collect();
        let input_gains = net
            .input_edges()
            .iter()
            .zip(gains)
            .map(|(e, &m)| InputGain { input: e.input, target: e.target, value: m * e.sign.as_f64() })
            .collect();
        Ok(WeightSample { weights, input_gains })
    }

    /// Every magnitude equal to one.
    pub fn unit(net: &SignedNetwork) -> Self {
        let e = vec![1.0; net.edge_count()];
        let g = vec![1.0; net.input_edges().len()];
        Self::from_magnitudes(net, &e, &g).expect("shapes match")
    }

    /// Edge magnitudes in edge order; these are the values of the symbolic
    /// edge variables.
    pub fn magnitudes(&self) -> Vec<f64> {
        self.weights.iter().map(|w| w.value.abs()).collect()
    }

    /// True when the sample belongs to the network's sign pattern.
    pub fn is_consistent_with(&self, net: &SignedNetwork) -> bool {
        let edges = net.state_edges();
        edges.len() == self.weights.len()
            && edges.iter().zip(&self.weights).all(|(e, w)| {
                e.a == w.a && e.b == w.b && w.value != 0.0 && (w.value > 0.0) == (e.sign == Sign::Positive)
            })
            && net.input_edges().len() == self.input_gains.len()
            && net.input_edges().iter().zip(&self.input_gains).all(|(e, g)| {
                e.input == g.input && e.target == g.target && g.value != 0.0 && (g.value > 0.0) == (e.sign == Sign::Positive)
            })
    }
}

fn draw(net: &SignedNetwork, rng: &mut ChaCha8Rng, fix_b: bool) -> WeightSample {
    let (lo, hi) = MAGNITUDE_RANGE;
    let e: Vec<f64> = (0..net.edge_count()).map(|_| rng.gen_range(lo..=hi)).collect();
    let g: Vec<f64> = (0..net.input_edges().len())
        .map(|_| if fix_b { 1.0 } else { rng.gen_range(lo..=hi) })
        .collect();
    WeightSample::from_magnitudes(net, &e, &g).expect("shapes match")
}

fn rng_for(seed: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

pub fn sample_weights(net: &SignedNetwork, rng_seed: u64) -> WeightSample {
    draw(net, &mut rng_for(rng_seed, 0), false)
}

/// Numeric Laplacian and input matrix of a sample.
pub fn realize(net: &SignedNetwork, sample: &WeightSample) -> Result<(DMatrix<f64>, DMatrix<f64>), NumericError> {
    if sample.weights.len() != net.edge_count() {
        return Err(NumericError::SampleShape { expected: net.edge_count(), found: sample.weights.len() });
    }
    if sample.input_gains.len() != net.input_edges().len() {
        return Err(NumericError::SampleShape { expected: net.input_edges().len(), found: sample.input_gains.len() });
    }
    let n = net.state_count();
    let mut l = DMatrix::zeros(n, n);
    for ((i, j, _), w) in net.edges_idx().zip(&sample.weights) {
        l[(i, j)] = w.value;
        l[(j, i)] = w.value;
        l[(i, i)] -= w.value;
        l[(j, j)] -= w.value;
    }
    let mut b = DMatrix::zeros(n, sample.input_gains.len());
    for (c, g) in sample.input_gains.iter().enumerate() {
        let r = net.index_of(g.target).expect("validated target");
        b[(r, c)] = g.value;
    }
    Ok((l, b))
}

/// Rank of `[B, LB, ..., L^(n-1) B]`, counting singular values above
/// `tol * sigma_max`. Block `k` is divided by `||L||^k` (infinity norm).
pub fn numeric_rank(l: &DMatrix<f64>, b: &DMatrix<f64>, tol: f64) -> Result<usize, NumericError> {
    let n = l.nrows();
    if l.ncols() != n || b.nrows() != n {
        return Err(NumericError::DimensionMismatch { l: l.shape(), b: b.shape() });
    }
    if tol.is_nan() || tol <= 0.0 {
        return Err(NumericError::BadTolerance(tol));
    }
    let m = b.ncols();
    if m == 0 || n == 0 {
        return Ok(0);
    }
    let norm = l.row_iter().map(|r| r.iter().map(|x| x.abs()).sum::<f64>()).fold(0.0, f64::max);
    let scale = if norm > 0.0 { 1.0 / norm } else { 1.0 };
    let mut c = DMatrix::zeros(n, n * m);
    let mut block = b.clone();
    for k in 0..n {
        if k > 0 {
            block = (l * &block) * scale;
        }
        c.view_mut((0, k * m), (n, m)).copy_from(&block);
    }
    let sv = c.singular_values();
    let max = sv.max();
    if max == 0.0 {
        return Ok(0);
    }
    Ok(sv.iter().filter(|&&s| s > tol * max).count())
}

/// Rank of a sample's Gramian.
pub fn sample_rank(net: &SignedNetwork, sample: &WeightSample, tol: f64) -> Result<usize, NumericError> {
    let (l, b) = realize(net, sample)?;
    numeric_rank(&l, &b, tol)
}

/// Rank deficiency that survives a tenfold tighter tolerance.
fn confirmed_rank(net: &SignedNetwork, sample: &WeightSample, tol: f64) -> usize {
    let n = net.state_count();
    let r = sample_rank(net, sample, tol).expect("sample fits network");
    if r < n {
        sample_rank(net, sample, tol / 10.0).expect("sample fits network")
    } else {
        r
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct MonteCarloOptions {
    pub samples: usize,
    pub seed: u64,
    pub tol: f64,
    /// Hold input gains at magnitude one.
    pub fix_b_magnitudes: bool,
    /// Samples evaluated before the random ones; they count toward `samples`.
    pub injected: Vec<WeightSample>,
}

impl Default for MonteCarloOptions {
    fn default() -> Self {
        MonteCarloOptions { samples: 1000, seed: 0, tol: DEFAULT_TOLERANCE, fix_b_magnitudes: false, injected: vec![] }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NumericReport {
    pub state_count: usize,
    pub samples_run: usize,
    pub min_rank_seen: usize,
    pub full_rank_count: usize,
    /// Samples deficient at `rank_tolerance` but full rank at a tenth of it.
    pub unconfirmed_deficient: usize,
    pub counterexample: Option<WeightSample>,
    pub counterexample_index: Option<usize>,
    pub rank_tolerance: f64,
    pub seed: u64,
    pub fix_b_magnitudes: bool,
}

pub fn monte_carlo_sc(net: &SignedNetwork, n_samples: usize, rng_seed: u64, tol: f64) -> NumericReport {
    monte_carlo_with(net, &MonteCarloOptions { samples: n_samples, seed: rng_seed, tol, ..Default::default() })
}

pub fn monte_carlo_with(net: &SignedNetwork, opts: &MonteCarloOptions) -> NumericReport {
    let n = net.state_count();
    let sample_at = |k: usize| -> WeightSample {
        match opts.injected.get(k) {
            Some(s) => s.clone(),
            None => draw(net, &mut rng_for(opts.seed, k as u64), opts.fix_b_magnitudes),
        }
    };
    // (rank at tol, confirmed rank)
    let ranks: Vec<(usize, usize)> = (0..opts.samples)
        .into_par_iter()
        .map(|k| {
            let s = sample_at(k);
            let r = sample_rank(net, &s, opts.tol).expect("sample fits network");
            let c = if r < n { confirmed_rank(net, &s, opts.tol) } else { r };
            (r, c)
        })
        .collect();
    let first = ranks.iter().position(|&(_, c)| c < n);
    NumericReport {
        state_count: n,
        samples_run: opts.samples,
        min_rank_seen: ranks.iter().map(|&(_, c)| c).min().unwrap_or(n),
        full_rank_count: ranks.iter().filter(|&&(_, c)| c == n).count(),
        unconfirmed_deficient: ranks.iter().filter(|&&(r, c)| r < n && c == n).count(),
        counterexample: first.map(sample_at),
        counterexample_index: first,
        rank_tolerance: opts.tol,
        seed: opts.seed,
        fix_b_magnitudes: opts.fix_b_magnitudes,
    }
}

/// Searches for a rank-deficient realization, spending at most `budget`
/// matrix evaluations.
///
/// Order: all weights equal; weights constant on the edge orbits of sign- and
/// input-preserving automorphisms; Levenberg-Marquardt on the eigenvector
/// condition `B^T v = 0` from random starts; plain random samples.
pub fn adversarial_search(net: &SignedNetwork, budget: usize) -> Option<WeightSample> {
    adversarial_search_seeded(net, budget, 0)
}

pub fn adversarial_search_seeded(net: &SignedNetwork, budget: usize, seed: u64) -> Option<WeightSample> {
    let n = net.state_count();
    let tol = DEFAULT_TOLERANCE;
    let mut spent = 0usize;
    let gains = vec![1.0; net.input_edges().len()];
    let try_mags = |mags: &[f64], spent: &mut usize| -> Option<WeightSample> {
        *spent += 1;
        let s = WeightSample::from_magnitudes(net, mags, &gains).ok()?;
        (confirmed_rank(net, &s, tol) < n).then_some(s)
    };
    if net.input_edges().is_empty() {
        return Some(WeightSample::unit(net));
    }
    let e = net.edge_count();
    if let Some(s) = try_mags(&vec![1.0; e], &mut spent) {
        return Some(s);
    }
    let mut rng = rng_for(seed, u64::MAX);
    let orbits = edge_orbits(net, budget / 4);
    spent += orbits.1;
    if orbits.0.iter().any(|o| o.len() > 1) {
        for _ in 0..4 {
            if spent >= budget {
                return None;
            }
            let mut mags = vec![0.0; e];
            for o in &orbits.0 {
                let v = rng.gen_range(0.5..=2.0);
                for &k in o {
                    mags[k] = v;
                }
            }
            if let Some(s) = try_mags(&mags, &mut spent) {
                return Some(s);
            }
        }
        for o in orbits.0.iter().filter(|o| o.len() > 1) {
            if spent >= budget {
                return None;
            }
            let mut mags: Vec<f64> = (0..e).map(|_| rng.gen_range(0.5..=2.0)).collect();
            for &k in o {
                mags[k] = 1.0;
            }
            if let Some(s) = try_mags(&mags, &mut spent) {
                return Some(s);
            }
        }
    }
    if e > 0 {
        while spent < budget {
            let start: Vec<f64> = (0..e).map(|_| rng.gen_range(0.5f64..=2.0).ln()).collect();
            for k in 0..n {
                if spent >= budget {
                    break;
                }
                if let Some(theta) = levenberg_marquardt(net, &start, k, &mut spent, budget) {
                    let mags: Vec<f64> = theta.iter().map(|t| t.exp()).collect();
                    if let Some(s) = try_mags(&mags, &mut spent) {
                        return Some(s);
                    }
                }
            }
            if let Some(s) = {
                let mags: Vec<f64> = (0..e).map(|_| rng.gen_range(0.5..=2.0)).collect();
                try_mags(&mags, &mut spent)
            } {
                return Some(s);
            }
        }
    }
    None
}

const THETA_BOUND: f64 = 4.6; // magnitudes within [0.01, 100]

/// Eigenvector `k` (ascending eigenvalue) of the Laplacian at log-magnitudes
/// `theta`, with unit input gains.
fn eigvec(net: &SignedNetwork, theta: &[f64], k: usize) -> nalgebra::DVector<f64> {
    let n = net.state_count();
    let mut l = DMatrix::zeros(n, n);
    for ((i, j, s), t) in net.edges_idx().zip(theta) {
        let w = t.exp() * s.as_f64();
        l[(i, j)] = w;
        l[(j, i)] = w;
        l[(i, i)] -= w;
        l[(j, j)] -= w;
    }
    let eig = SymmetricEigen::new(l);
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    eig.eigenvectors.column(order[k]).into_owned()
}

fn residual(net: &SignedNetwork, v: &nalgebra::DVector<f64>) -> nalgebra::DVector<f64> {
    let rows: Vec<f64> = net
        .input_edges()
        .iter()
        .map(|g| v[net.index_of(g.target).expect("validated target")] * g.sign.as_f64())
        .collect();
    nalgebra::DVector::from_vec(rows)
}

/// Drives `B^T v_k` to zero over log-magnitudes. Returns the final point when
/// the residual is negligible.
fn levenberg_marquardt(net: &SignedNetwork, start: &[f64], k: usize, spent: &mut usize, budget: usize) -> Option<Vec<f64>> {
    let e = start.len();
    let mut theta = start.to_vec();
    let mut v = eigvec(net, &theta, k);
    let mut r = residual(net, &v);
    let mut mu = 1e-3;
    let h = 1e-7;
    for _ in 0..60 {
        if *spent >= budget {
            return None;
        }
        if r.norm() < 1e-13 {
            return Some(theta);
        }
        let mut jac = DMatrix::zeros(r.len(), e);
        for p in 0..e {
            let mut t = theta.clone();
            t[p] += h;
            let mut vp = eigvec(net, &t, k);
            if vp.dot(&v) < 0.0 {
                vp = -vp;
            }
            let rp = residual(net, &vp);
            jac.set_column(p, &((rp - &r) / h));
        }
        *spent += e + 1;
        let jjt = &jac * jac.transpose();
        let mut improved = false;
        for _ in 0..8 {
            let m = &jjt + DMatrix::identity(r.len(), r.len()) * mu;
            let Some(step) = m.lu().solve(&r) else {
                mu *= 10.0;
                continue;
            };
            let delta = jac.transpose() * step;
            let cand: Vec<f64> = theta.iter().zip(delta.iter()).map(|(t, d)| (t - d).clamp(-THETA_BOUND, THETA_BOUND)).collect();
            let mut vc = eigvec(net, &cand, k);
            if vc.dot(&v) < 0.0 {
                vc = -vc;
            }
            let rc = residual(net, &vc);
            if rc.norm() < r.norm() {
                theta = cand;
                v = vc;
                r = rc;
                mu = (mu / 10.0).max(1e-12);
                improved = true;
                break;
            }
            mu *= 10.0;
        }
        if !improved {
            break;
        }
    }
    (r.norm() < 1e-10).then_some(theta)
}

/// Edge orbits under automorphisms of the state graph that preserve edge
/// signs and fix every input target. Returns the orbits and the search
/// effort spent; the search stops after `limit` branch steps.
fn edge_orbits(net: &SignedNetwork, limit: usize) -> (Vec<Vec<usize>>, usize) {
    let n = net.state_count();
    let edges: Vec<(usize, usize, Sign)> = net.edges_idx().collect();
    let mut sign = vec![vec![None; n]; n];
    for &(i, j, s) in &edges {
        sign[i][j] = Some(s);
        sign[j][i] = Some(s);
    }
    let fixed = net.attached_idx();
    let mut parent: Vec<usize> = (0..edges.len()).collect();
    fn find(p: &mut Vec<usize>, x: usize) -> usize {
        if p[x] != x {
            let r = find(p, p[x]);
            p[x] = r;
        }
        p[x]
    }
    let edge_id: std::collections::HashMap<(usize, usize), usize> =
        edges.iter().enumerate().map(|(k, &(i, j, _))| ((i, j), k)).collect();
    let mut perm = vec![usize::MAX; n];
    let mut used = vec![false; n];
    let mut steps = 0usize;
    #[allow(clippy::too_many_arguments)]
    fn extend(
        v: usize,
        n: usize,
        net: &SignedNetwork,
        sign: &[Vec<Option<Sign>>],
        fixed: &std::collections::BTreeSet<usize>,
        perm: &mut Vec<usize>,
        used: &mut Vec<bool>,
        steps: &mut usize,
        limit: usize,
        found: &mut dyn FnMut(&[usize]),
    ) {
        if *steps >= limit {
            return;
        }
        if v == n {
            found(perm);
            return;
        }
        for w in 0..n {
            *steps += 1;
            if used[w] || net.degree(net.label_of(v)) != net.degree(net.label_of(w)) {
                continue;
            }
            if fixed.contains(&v) != fixed.contains(&w) || (fixed.contains(&v) && v != w) {
                continue;
            }
            if (0..v).any(|u| sign[u][v] != sign[perm[u]][w]) {
                continue;
            }
            perm[v] = w;
            used[w] = true;
            extend(v + 1, n, net, sign, fixed, perm, used, steps, limit, found);
            used[w] = false;
            perm[v] = usize::MAX;
        }
    }
    let mut record = |p: &[usize]| {
        for (k, &(i, j, _)) in edges.iter().enumerate() {
            let (a, b) = (p[i].min(p[j]), p[i].max(p[j]));
            let img = edge_id[&(a, b)];
            let (x, y) = (find(&mut parent, k), find(&mut parent, img));
            parent[x] = y;
        }
    };
    extend(0, n, net, &sign, &fixed, &mut perm, &mut used, &mut steps, limit, &mut record);
    let mut groups: std::collections::BTreeMap<usize, Vec<usize>> = Default::default();
    for k in 0..edges.len() {
        let r = find(&mut parent, k);
        groups.entry(r).or_default().push(k);
    }
    (groups.into_values().collect(), steps)
}
