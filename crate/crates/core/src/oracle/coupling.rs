use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{
    enumerate_ising, fk_table, normalize_logs, total_variation, ExactMeasure, OracleError,
    MAX_FREE_SITES,
};
use crate::clusters::{BondBoundary, SiteBoundary};
use crate::samplers::{edge_weight_to_coupling, Graph};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TvReport {
    pub vertices: usize,
    pub edges: usize,
    pub p: f64,
    pub j: f64,
    pub boundary: BondBoundary,
    /// `ising_free` or `plus_minus_mixture`.
    pub reference: String,
    pub tv: f64,
}

/// In place `f(S) <- Σ_{T ⊆ S} f(T)` over bitmasks.
fn subset_sums(f: &mut [f64]) {
    // The low bits are summed inside cache-sized blocks first.
    const BLOCK: usize = 1 << 15;
    let block = BLOCK.min(f.len());
    f.par_chunks_mut(block).for_each(|chunk| {
        let mut half = 1;
        while half < chunk.len() {
            for pair in chunk.chunks_mut(2 * half) {
                let (lo, hi) = pair.split_at_mut(half);
                for (h, l) in hi.iter_mut().zip(lo.iter()) {
                    *h += *l;
                }
            }
            half *= 2;
        }
    });
    let mut half = block;
    while half < f.len() {
        f.par_chunks_mut(2 * half).for_each(|chunk| {
            let (lo, hi) = chunk.split_at_mut(half);
            for (h, l) in hi.iter_mut().zip(lo.iter()) {
                *h += *l;
            }
        });
        half *= 2;
    }
}

/// Exact Edwards–Sokal composition: random-cluster bonds at `(p, 2)`
/// coloured by independent uniform spins per cluster, compared in total
/// variation with the Ising measure at `J = -log(1-p)/2` (free) or with
/// the half-half mixture of the plus and minus measures (wired).
///
/// A spin configuration σ arises from bond set ξ with probability
/// `2^{-k(ξ)}` exactly when ξ only uses edges on which σ agrees, so the
/// composed law is a subset sum over the agreement set.
pub fn coupling_check(g: &Graph, p: f64, boundary: BondBoundary) -> Result<TvReport, OracleError> {
    if !(p > 0.0 && p < 1.0) {
        return Err(OracleError::Domain(format!("p = {p} is not in (0, 1)")));
    }
    let nv = g.num_vertices();
    if nv > MAX_FREE_SITES {
        return Err(OracleError::TooLarge(format!(
            "{nv} vertices, limit {MAX_FREE_SITES}"
        )));
    }
    let (mut table, ks) = fk_table(g, p, 2.0, boundary)?;
    normalize_logs(&mut table);
    table
        .par_iter_mut()
        .zip(ks.par_iter())
        .for_each(|(w, &k)| *w *= 0.5f64.powi(i32::from(k)));
    subset_sums(&mut table);
    let wired = boundary == BondBoundary::WiredRC;
    let edges = g.edges();
    let boundary_mask: usize = g.boundary().iter().map(|&v| 1usize << v).sum();
    let composed: Vec<f64> = (0..1usize << nv)
        .into_par_iter()
        .map(|sigma| {
            if wired {
                let b = sigma & boundary_mask;
                if b != 0 && b != boundary_mask {
                    return 0.0;
                }
            }
            let agree = edges
                .iter()
                .enumerate()
                .filter(|(_, &(u, v))| (sigma >> u & 1) == (sigma >> v & 1))
                .fold(0usize, |acc, (e, _)| acc | 1 << e);
            table[agree]
        })
        .collect();
    let j = edge_weight_to_coupling(p);
    let (reference, target) = if wired {
        let plus = enumerate_ising(g, j, SiteBoundary::AllPlus)?.dense();
        let minus = enumerate_ising(g, j, SiteBoundary::AllMinus)?.dense();
        let mix: Vec<f64> = plus
            .iter()
            .zip(&minus)
            .map(|(a, b)| 0.5 * (a + b))
            .collect();
        ("plus_minus_mixture", mix)
    } else {
        (
            "ising_free",
            enumerate_ising(g, j, SiteBoundary::Free)?.dense(),
        )
    };
    Ok(TvReport {
        vertices: nv,
        edges: edges.len(),
        p,
        j,
        boundary,
        reference: reference.into(),
        tv: total_variation(&composed, &target),
    })
}

/// Bond marginals of the other direction of the coupling: given σ from
/// `mu`, each agreeing edge opens with probability `p`.
pub fn es_bond_marginals(g: &Graph, mu: &ExactMeasure, p: f64) -> Vec<f64> {
    g.edges()
        .iter()
        .map(|&(u, v)| p * mu.expect(|c| f64::from(u8::from(c[u] == c[v]))))
        .collect()
}
