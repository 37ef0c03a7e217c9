use rand::Rng;

use super::{check_map, Graph, SamplerError};
use crate::clusters::{BondBoundary, BondConfig, DisjointSets, SiteBoundary, SiteConfig};

fn wired_sets(g: &Graph, wired: bool) -> DisjointSets {
    let mut ds = DisjointSets::new(g.num_vertices());
    if wired {
        if let Some((&first, rest)) = g.boundary().split_first() {
            for &v in rest {
                ds.union(first, v);
            }
        }
    }
    ds
}

/// Breadth-first search over open edges other than `skip`. With a wired
/// boundary, reaching one boundary vertex reaches all of them.
struct Search {
    stamp: Vec<u32>,
    round: u32,
    queue: Vec<usize>,
}

impl Search {
    fn new(n: usize) -> Self {
        Search {
            stamp: vec![0; n],
            round: 0,
            queue: Vec::new(),
        }
    }

    fn connected(&mut self, g: &Graph, states: &[u8], skip: usize, wired: bool) -> bool {
        let (from, to) = g.edge(skip);
        if wired && g.is_boundary(from) && g.is_boundary(to) {
            return true;
        }
        self.round += 1;
        let round = self.round;
        self.queue.clear();
        self.queue.push(from);
        self.stamp[from] = round;
        let mut boundary_done = false;
        let mut head = 0;
        while head < self.queue.len() {
            let u = self.queue[head];
            head += 1;
            if wired && !boundary_done && g.is_boundary(u) {
                boundary_done = true;
                for &b in g.boundary() {
                    if b == to {
                        return true;
                    }
                    if self.stamp[b] != round {
                        self.stamp[b] = round;
                        self.queue.push(b);
                    }
                }
            }
            for (w, e) in g.incident(u) {
                if e == skip || states[e] == 0 || self.stamp[w] == round {
                    continue;
                }
                if w == to {
                    return true;
                }
                self.stamp[w] = round;
                self.queue.push(w);
            }
        }
        false
    }
}

/// One heat-bath pass over the edges in index order for the random-cluster
/// measure with weights `p`, `q`. An edge whose endpoints are joined
/// elsewhere opens with probability `p`, any other edge with
/// `p / (p + q(1 - p))`.
pub fn fk_heatbath_sweep<R: Rng + ?Sized>(
    g: &Graph,
    bonds: &mut BondConfig,
    p: f64,
    q: f64,
    rng: &mut R,
) -> Result<(), SamplerError> {
    check_map(g, bonds.map_ref)?;
    if !(p > 0.0 && p < 1.0) {
        return Err(SamplerError::Domain(format!("p = {p} is not in (0, 1)")));
    }
    if !(q >= 1.0 && q.is_finite()) {
        return Err(SamplerError::Domain(format!("q = {q} must be at least 1")));
    }
    let wired = bonds.boundary_condition == BondBoundary::WiredRC;
    let p_bridge = p / (p + q * (1.0 - p));
    let states = &mut bonds.states;
    // Components of the current open graph; valid unless `stale`.
    let mut ds = wired_sets(g, wired);
    let mut stale = true;
    let mut search = Search::new(g.num_vertices());
    for e in 0..g.num_edges() {
        let (u, v) = g.edge(e);
        let joined = if states[e] == 1 {
            search.connected(g, states, e, wired)
        } else {
            if stale {
                ds = wired_sets(g, wired);
                for (f, &(a, b)) in g.edges().iter().enumerate() {
                    if states[f] == 1 {
                        ds.union(a, b);
                    }
                }
                stale = false;
            }
            ds.same(u, v)
        };
        let open = rng.gen::<f64>() < if joined { p } else { p_bridge };
        match (states[e] == 1, open) {
            (false, true) => {
                ds.union(u, v);
            }
            // Closing a bridge may split a component.
            (true, false) if !joined => stale = true,
            _ => {}
        }
        states[e] = u8::from(open);
    }
    Ok(())
}

/// Colours every open cluster with an independent uniform spin. Under a
/// wired boundary the boundary cluster's spin decides whether the result
/// is reported as an `AllPlus` or `AllMinus` configuration.
pub fn edwards_sokal_color<R: Rng + ?Sized>(
    g: &Graph,
    bonds: &BondConfig,
    rng: &mut R,
) -> Result<SiteConfig, SamplerError> {
    check_map(g, bonds.map_ref)?;
    let wired = bonds.boundary_condition == BondBoundary::WiredRC;
    let mut ds = wired_sets(g, wired);
    for (e, &(a, b)) in g.edges().iter().enumerate() {
        if bonds.states[e] == 1 {
            ds.union(a, b);
        }
    }
    let (labels, count) = ds.canonical_labels();
    let colours: Vec<u8> = (0..count).map(|_| u8::from(rng.gen::<bool>())).collect();
    let states: Vec<u8> = labels.iter().map(|&l| colours[l]).collect();
    let boundary_condition = match (wired, g.boundary().first()) {
        (true, Some(&b)) if states[b] == 1 => SiteBoundary::AllPlus,
        (true, Some(_)) => SiteBoundary::AllMinus,
        _ => SiteBoundary::Free,
    };
    Ok(SiteConfig {
        map_ref: g.map_ref(),
        states,
        boundary_condition,
    })
}
