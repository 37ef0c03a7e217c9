use rand::Rng;

use super::{check_map, Graph, SamplerError};
use crate::clusters::{DisjointSets, SiteConfig};

/// Heat-bath probability of `+` at a vertex whose neighbours' spins sum
/// to `s`: `e^{Js} / (e^{Js} + e^{-Js})`.
pub fn heat_bath_plus_probability(s: i64, j: f64) -> f64 {
    1.0 / (1.0 + (-2.0 * j * s as f64).exp())
}

fn check_coupling(j: f64) -> Result<(), SamplerError> {
    if j >= 0.0 && j.is_finite() {
        Ok(())
    } else {
        Err(SamplerError::Domain(format!(
            "coupling J = {j} must be finite and nonnegative"
        )))
    }
}

/// One heat-bath pass over the unforced vertices in index order. Boundary
/// vertices stay fixed under `AllPlus`/`AllMinus`.
pub fn glauber_sweep<R: Rng + ?Sized>(
    g: &Graph,
    cfg: &mut SiteConfig,
    j: f64,
    rng: &mut R,
) -> Result<(), SamplerError> {
    check_map(g, cfg.map_ref)?;
    check_coupling(j)?;
    let dmax = g.max_degree() as i64;
    let table: Vec<f64> = (-dmax..=dmax)
        .map(|s| heat_bath_plus_probability(s, j))
        .collect();
    let forced = cfg.boundary_condition.forced().is_some();
    let states = &mut cfg.states;
    for v in 0..g.num_vertices() {
        if forced && g.is_boundary(v) {
            continue;
        }
        let plus = g.neighbors(v).iter().filter(|&&w| states[w] == 1).count() as i64;
        let s = 2 * plus - g.degree(v) as i64;
        states[v] = u8::from(rng.gen::<f64>() < table[(s + dmax) as usize]);
    }
    Ok(())
}

/// One Swendsen–Wang update: open each agreeing edge with probability
/// `1 - e^{-2J}`, then give every cluster a fresh uniform spin. Clusters
/// holding a forced boundary vertex keep the forced spin.
pub fn swendsen_wang_sweep<R: Rng + ?Sized>(
    g: &Graph,
    cfg: &mut SiteConfig,
    j: f64,
    rng: &mut R,
) -> Result<(), SamplerError> {
    check_map(g, cfg.map_ref)?;
    check_coupling(j)?;
    let p_bond = super::coupling_to_edge_weight(j);
    let forced = cfg.boundary_condition.forced();
    let mut ds = DisjointSets::new(g.num_vertices());
    if forced.is_some() {
        if let Some((&first, rest)) = g.boundary().split_first() {
            for &v in rest {
                ds.union(first, v);
            }
        }
    }
    for &(u, v) in g.edges() {
        if cfg.states[u] == cfg.states[v] && rng.gen::<f64>() < p_bond {
            ds.union(u, v);
        }
    }
    let (labels, count) = ds.canonical_labels();
    let pinned = forced.and_then(|s| g.boundary().first().map(|&b| (labels[b], s)));
    let colours: Vec<u8> = (0..count)
        .map(|c| match pinned {
            Some((l, s)) if l == c => s,
            _ => u8::from(rng.gen::<bool>()),
        })
        .collect();
    for (v, state) in cfg.states.iter_mut().enumerate() {
        *state = colours[labels[v]];
    }
    Ok(())
}
