//! Exact enumeration on tiny graphs: Ising and random-cluster measures,
//! the Edwards–Sokal composition, Holley's lattice condition and
//! exhaustive checks of stochastic domination.

mod coupling;
mod domination;
mod gof;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::clusters::{BondBoundary, SiteBoundary};
use crate::planar_map::small;
use crate::samplers::Graph;

pub use coupling::{coupling_check, es_bond_marginals, TvReport};
pub use domination::{
    domination_evidence, holley_check, CertReport, DominationMode, DominationReport,
};
pub use gof::{chi_square_gof, sampler_gof, sampler_target, GofPlan, GofReport, SamplerCase};

/// Largest number of free sites in [`enumerate_ising`].
pub const MAX_FREE_SITES: usize = 20;
/// Largest number of edges in [`enumerate_fk`].
pub const MAX_FK_EDGES: usize = 24;

#[derive(Debug, Error, PartialEq)]
pub enum OracleError {
    #[error("too large: {0}")]
    TooLarge(String),
    #[error("supports differ: {0}")]
    SupportMismatch(String),
    #[error("measure has a nonpositive weight at configuration {0}")]
    NonPositive(usize),
    #[error("domain error: {0}")]
    Domain(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Cells {
    Sites,
    Bonds,
}

/// A normalized measure on `{0,1}^free`, the remaining cells held at
/// `base`. Configuration `i` sets cell `free[b]` to bit `b` of `i`.
#[derive(Debug, Clone, PartialEq)]
pub struct ExactMeasure {
    pub cells: Cells,
    pub free: Vec<usize>,
    pub base: Vec<u8>,
    pub weights: Vec<f64>,
}

/// Sum with Neumaier compensation.
pub(crate) fn compensated_sum(xs: impl IntoIterator<Item = f64>) -> f64 {
    let (mut sum, mut c) = (0.0f64, 0.0f64);
    for x in xs {
        let t = sum + x;
        if sum.abs() >= x.abs() {
            c += (sum - t) + x;
        } else {
            c += (x - t) + sum;
        }
        sum = t;
    }
    sum + c
}

/// Turns log-weights into probabilities in place, shifting by the maximum
/// before exponentiating.
pub(crate) fn normalize_logs(logs: &mut [f64]) {
    let max = logs.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    logs.par_iter_mut().for_each(|w| *w = (*w - max).exp());
    let z = compensated_sum(logs.iter().copied());
    logs.par_iter_mut().for_each(|w| *w /= z);
}

impl ExactMeasure {
    pub fn from_log_weights(
        cells: Cells,
        free: Vec<usize>,
        base: Vec<u8>,
        mut logs: Vec<f64>,
    ) -> Self {
        assert_eq!(logs.len(), 1usize << free.len());
        normalize_logs(&mut logs);
        ExactMeasure {
            cells,
            free,
            base,
            weights: logs,
        }
    }

    /// Independent Bernoulli(p) on the free cells of `like`.
    pub fn product_like(like: &ExactMeasure, p: f64) -> Self {
        let n = like.free.len();
        let (lp, lq) = (p.ln(), (1.0 - p).ln());
        let logs = (0..1usize << n)
            .map(|i| {
                let ones = i.count_ones() as f64;
                ones * lp + (n as f64 - ones) * lq
            })
            .collect();
        Self::from_log_weights(like.cells, like.free.clone(), like.base.clone(), logs)
    }

    /// Independent Bernoulli(p) on `n` cells, all free.
    pub fn product(cells: Cells, n: usize, p: f64) -> Self {
        let like = ExactMeasure {
            cells,
            free: (0..n).collect(),
            base: vec![0; n],
            weights: Vec::new(),
        };
        Self::product_like(&like, p)
    }

    pub fn n(&self) -> usize {
        self.free.len()
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    /// Full configuration of support point `i`.
    pub fn config(&self, i: usize) -> Vec<u8> {
        let mut c = self.base.clone();
        for (b, &cell) in self.free.iter().enumerate() {
            c[cell] = (i >> b & 1) as u8;
        }
        c
    }

    /// Bitmask over all cells of support point `i`.
    pub fn full_index(&self, i: usize) -> usize {
        let mut idx = self
            .base
            .iter()
            .enumerate()
            .fold(0usize, |acc, (c, &s)| acc | (usize::from(s) << c));
        for (b, &cell) in self.free.iter().enumerate() {
            idx &= !(1 << cell);
            idx |= (i >> b & 1) << cell;
        }
        idx
    }

    /// Probability vector over all `2^cells` configurations.
    pub fn dense(&self) -> Vec<f64> {
        let mut out = vec![0.0; 1usize << self.base.len()];
        for (i, &w) in self.weights.iter().enumerate() {
            out[self.full_index(i)] += w;
        }
        out
    }

    pub fn total(&self) -> f64 {
        compensated_sum(self.weights.iter().copied())
    }

    pub fn expect(&self, f: impl Fn(&[u8]) -> f64) -> f64 {
        compensated_sum(
            self.weights
                .iter()
                .enumerate()
                .map(|(i, &w)| w * f(&self.config(i))),
        )
    }

    /// Probability that `cell` is in state 1.
    pub fn marginal(&self, cell: usize) -> f64 {
        self.expect(|c| f64::from(c[cell]))
    }

    /// Mean spin over all cells, states read as ±1.
    pub fn magnetization(&self) -> f64 {
        let n = self.base.len() as f64;
        self.expect(|c| {
            c.iter()
                .map(|&s| if s == 1 { 1.0 } else { -1.0 })
                .sum::<f64>()
                / n
        })
    }

    /// Distribution of the pointwise product of two independent copies
    /// (state 1 where the copies agree).
    pub fn xor_square(&self) -> ExactMeasure {
        let m = self.len();
        let logs = (0..m)
            .map(|t| {
                let p: f64 = compensated_sum(
                    (0..m).map(|a| self.weights[a] * self.weights[a ^ t ^ (m - 1)]),
                );
                p.ln()
            })
            .collect();
        ExactMeasure::from_log_weights(
            self.cells,
            self.free.clone(),
            vec![1; self.base.len()],
            logs,
        )
    }

    pub fn same_support(&self, other: &ExactMeasure) -> bool {
        self.cells == other.cells && self.free == other.free && self.base.len() == other.base.len()
    }
}

/// A named small graph (see [`small::by_name`]) as used by the oracle.
/// Stars clamp only their leaves; other graphs use the vertices on the
/// outer face.
pub fn tiny_graph(name: &str) -> Option<Graph> {
    let map = small::by_name(name)?;
    let g = Graph::new(&map);
    Some(if name.starts_with("star") {
        let leaves = (1..map.num_vertices()).collect();
        g.with_boundary(leaves)
    } else {
        g
    })
}

/// Total-variation distance between two probability vectors.
pub fn total_variation(a: &[f64], b: &[f64]) -> f64 {
    0.5 * compensated_sum(a.iter().zip(b).map(|(x, y)| (x - y).abs()))
}

/// Exact Ising measure `∝ exp(J Σ σσ')`, boundary spins clamped under
/// `AllPlus`/`AllMinus`.
pub fn enumerate_ising(
    g: &Graph,
    j: f64,
    boundary: SiteBoundary,
) -> Result<ExactMeasure, OracleError> {
    let n = g.num_vertices();
    let forced = boundary.forced();
    let free: Vec<usize> = (0..n)
        .filter(|&v| forced.is_none() || !g.is_boundary(v))
        .collect();
    if free.len() > MAX_FREE_SITES {
        return Err(OracleError::TooLarge(format!(
            "{} free sites, limit {MAX_FREE_SITES}",
            free.len()
        )));
    }
    let mut base = vec![0u8; n];
    if let Some(s) = forced {
        for &v in g.boundary() {
            base[v] = s;
        }
    }
    let logs: Vec<f64> = (0..1usize << free.len())
        .into_par_iter()
        .map(|i| {
            let mut c = base.clone();
            for (b, &v) in free.iter().enumerate() {
                c[v] = (i >> b & 1) as u8;
            }
            let agree: i64 = g
                .edges()
                .iter()
                .map(|&(u, v)| if c[u] == c[v] { 1 } else { -1 })
                .sum();
            j * agree as f64
        })
        .collect();
    Ok(ExactMeasure::from_log_weights(
        Cells::Sites,
        free,
        base,
        logs,
    ))
}

/// Union-find with undo, for depth-first enumeration of bond
/// configurations.
struct RollbackSets {
    parent: Vec<usize>,
    rank: Vec<u8>,
    history: Vec<Option<(usize, usize, bool)>>,
    components: usize,
}

impl RollbackSets {
    fn new(n: usize) -> Self {
        RollbackSets {
            parent: (0..n).collect(),
            rank: vec![0; n],
            history: Vec::new(),
            components: n,
        }
    }

    fn find(&self, mut x: usize) -> usize {
        while self.parent[x] != x {
            x = self.parent[x];
        }
        x
    }

    fn union(&mut self, a: usize, b: usize) {
        let (mut ra, mut rb) = (self.find(a), self.find(b));
        if ra == rb {
            self.history.push(None);
            return;
        }
        if self.rank[ra] < self.rank[rb] {
            std::mem::swap(&mut ra, &mut rb);
        }
        let bumped = self.rank[ra] == self.rank[rb];
        self.parent[rb] = ra;
        if bumped {
            self.rank[ra] += 1;
        }
        self.components -= 1;
        self.history.push(Some((rb, ra, bumped)));
    }

    fn undo(&mut self) {
        if let Some((child, root, bumped)) = self.history.pop().expect("undo without union") {
            self.parent[child] = child;
            if bumped {
                self.rank[root] -= 1;
            }
            self.components += 1;
        }
    }
}

/// Log-weights `|ξ| ln p + (E - |ξ|) ln(1-p) + k(ξ) ln q` and component
/// counts `k(ξ)` for every bond configuration, indexed by edge bitmask.
pub(crate) fn fk_table(
    g: &Graph,
    p: f64,
    q: f64,
    boundary: BondBoundary,
) -> Result<(Vec<f64>, Vec<u8>), OracleError> {
    let ne = g.num_edges();
    if ne > MAX_FK_EDGES {
        return Err(OracleError::TooLarge(format!(
            "{ne} edges, limit {MAX_FK_EDGES}"
        )));
    }
    if !(0.0..=1.0).contains(&p) || !(q > 0.0) {
        return Err(OracleError::Domain(format!(
            "need p in [0,1] and q > 0, got p={p}, q={q}"
        )));
    }
    let (lp, lq, lqq) = (p.ln(), (1.0 - p).ln(), q.ln());
    let wired = boundary == BondBoundary::WiredRC;
    // High edges are fixed per block; each block is a contiguous range.
    let high = ne.min(6);
    let low = ne - high;
    let block = 1usize << low;
    let mut logs = vec![0.0; 1usize << ne];
    let mut ks = vec![0u8; 1usize << ne];
    logs.par_chunks_mut(block)
        .zip(ks.par_chunks_mut(block))
        .enumerate()
        .for_each(|(t, (lw, kk))| {
            let mut sets = RollbackSets::new(g.num_vertices());
            if wired {
                if let Some((&first, rest)) = g.boundary().split_first() {
                    for &v in rest {
                        sets.union(first, v);
                    }
                }
            }
            let mut acc = 0.0;
            for b in 0..high {
                let e = low + b;
                if t >> b & 1 == 1 {
                    let (u, v) = g.edge(e);
                    sets.union(u, v);
                    acc += lp;
                } else {
                    acc += lq;
                }
            }
            fk_dfs(g, &mut sets, 0, low, 0, acc, (lp, lq, lqq), lw, kk);
        });
    Ok((logs, ks))
}

#[allow(clippy::too_many_arguments)]
fn fk_dfs(
    g: &Graph,
    sets: &mut RollbackSets,
    e: usize,
    low: usize,
    mask: usize,
    acc: f64,
    logs: (f64, f64, f64),
    out: &mut [f64],
    ks: &mut [u8],
) {
    if e == low {
        out[mask] = acc + sets.components as f64 * logs.2;
        ks[mask] = sets.components as u8;
        return;
    }
    fk_dfs(g, sets, e + 1, low, mask, acc + logs.1, logs, out, ks);
    let (u, v) = g.edge(e);
    sets.union(u, v);
    fk_dfs(
        g,
        sets,
        e + 1,
        low,
        mask | 1 << e,
        acc + logs.0,
        logs,
        out,
        ks,
    );
    sets.undo();
}

/// Exact random-cluster measure `∝ p^{|ξ|} (1-p)^{E-|ξ|} q^{k(ξ)}`, with
/// `k` counting isolated vertices and the wired boundary as one cluster.
pub fn enumerate_fk(
    g: &Graph,
    p: f64,
    q: f64,
    boundary: BondBoundary,
) -> Result<ExactMeasure, OracleError> {
    let (logs, _) = fk_table(g, p, q, boundary)?;
    let ne = g.num_edges();
    Ok(ExactMeasure::from_log_weights(
        Cells::Bonds,
        (0..ne).collect(),
        vec![0; ne],
        logs,
    ))
}
