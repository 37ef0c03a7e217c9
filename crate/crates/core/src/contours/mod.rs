//! Bond configurations derived from a site configuration: agreement edges
//! φ on G, disagreement edges φ⁺ on G⁺, their union φ̄ on the
//! superposition Ḡ, and the interface η on Ḡ⁺. Also the boundary-touching
//! proxies for counting infinite clusters and contours.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::clusters::{
    site_labeling, BondBoundary, BondConfig, ClusterError, DisjointSets, SiteConfig,
};
use crate::planar_map::{CombinatorialMap, HalfEdge, LatticeMaps};

#[derive(Debug, Error, PartialEq)]
pub enum ContourError {
    #[error(transparent)]
    Cluster(#[from] ClusterError),
    #[error("vertex {vertex} of the interface graph has degree {degree}")]
    StructureViolation { vertex: usize, degree: usize },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DerivedConfigs {
    /// On G: 1 where the endpoints agree.
    pub phi: BondConfig,
    /// On G⁺, indexed like the edges of G: 1 where the crossed primal edge
    /// has disagreeing endpoints. Edges to `v_∞` are included.
    pub phi_plus: BondConfig,
    /// On Ḡ: a half edge carries the state of the edge it halves.
    pub bar_phi: BondConfig,
    /// On Ḡ⁺: 1 where the crossed edge of Ḡ is 0.
    pub eta: BondConfig,
}

fn bonds(map: &CombinatorialMap, states: Vec<u8>) -> BondConfig {
    BondConfig {
        map_ref: map.fingerprint(),
        states,
        boundary_condition: BondBoundary::FreeRC,
    }
}

pub fn derive(omega: &SiteConfig, maps: &LatticeMaps) -> Result<DerivedConfigs, ContourError> {
    omega.validate(&maps.primal)?;
    let s = &omega.states;
    let phi: Vec<u8> = maps
        .primal
        .edges()
        .map(|(u, v)| u8::from(s[u] == s[v]))
        .collect();
    let phi_plus: Vec<u8> = phi.iter().map(|&x| 1 - x).collect();
    let bar_phi: Vec<u8> = (0..maps.sup.bar.num_edges())
        .map(|f| match maps.sup.half(f) {
            HalfEdge::Primal { edge, .. } => phi[edge],
            HalfEdge::Dual { edge, .. } => phi_plus[edge],
        })
        .collect();
    // Edge f of Ḡ⁺ crosses edge f of Ḡ.
    let eta: Vec<u8> = (0..maps.sup.bar_dual.num_edges())
        .map(|f| 1 - bar_phi[maps.sup.crossed(f)])
        .collect();
    Ok(DerivedConfigs {
        phi: bonds(&maps.primal, phi),
        phi_plus: bonds(&maps.dual, phi_plus),
        bar_phi: bonds(&maps.sup.bar, bar_phi),
        eta: bonds(&maps.sup.bar_dual, eta),
    })
}

/// Every interior face has an even number of disagreement edges.
pub fn face_parity_check(map: &CombinatorialMap, omega: &SiteConfig) -> Result<bool, ContourError> {
    omega.check_map(map)?;
    let s = &omega.states;
    Ok((0..map.num_faces())
        .filter(|&f| map.is_interior_face(f))
        .all(|f| {
            map.face_darts(f)
                .filter(|&d| s[map.vertex_of(d)] != s[map.head(d)])
                .count()
                % 2
                == 0
        }))
}

/// `φ(e) + φ⁺(e⁺) = 1` on every edge of G with two interior faces.
pub fn complementarity_check(maps: &LatticeMaps, cfgs: &DerivedConfigs) -> bool {
    (0..maps.primal.num_edges())
        .filter(|&e| {
            let (a, b) = maps.primal.edge_faces(e);
            maps.primal.is_interior_face(a) && maps.primal.is_interior_face(b)
        })
        .all(|e| cfgs.phi.states[e] + cfgs.phi_plus.states[e] == 1)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum ContourShape {
    Cycle,
    /// Runs from the outer boundary back to it.
    BoundaryPath,
    Other,
}

/// Components of the interface η.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ContourReport {
    pub contour_count: usize,
    pub boundary_touching: usize,
    pub component_shapes: Vec<ContourShape>,
    /// Number of η edges in each component.
    pub lengths: Vec<usize>,
}

/// Checks that every finite vertex of Ḡ⁺ has η-degree 2 and classifies the
/// components. The vertex `v_∞` is split into one end per incident open
/// edge, so each component meeting it is a path between two boundary
/// points.
pub fn eta_structure_check(
    maps: &LatticeMaps,
    cfgs: &DerivedConfigs,
) -> Result<ContourReport, ContourError> {
    let m = &maps.sup.bar_dual;
    if cfgs.eta.map_ref != m.fingerprint() {
        return Err(ClusterError::MapMismatch {
            expected: m.fingerprint(),
            found: cfgs.eta.map_ref,
        }
        .into());
    }
    let inf = m.infinite_vertex();
    let n = m.num_vertices();
    let mut degree = vec![0usize; n];
    let mut ends = vec![0usize; n];
    let mut ds = DisjointSets::new(n);
    for (f, (u, v)) in m.edges().enumerate() {
        if cfgs.eta.states[f] == 0 {
            continue;
        }
        degree[u] += 1;
        degree[v] += 1;
        match (Some(u) == inf, Some(v) == inf) {
            (false, false) => {
                ds.union(u, v);
            }
            (true, false) => ends[v] += 1,
            (false, true) => ends[u] += 1,
            (true, true) => {}
        }
    }
    if let Some(vertex) = (0..n).find(|&x| Some(x) != inf && degree[x] != 2) {
        return Err(ContourError::StructureViolation {
            vertex,
            degree: degree[vertex],
        });
    }
    let (labels, count) = ds.canonical_labels();
    let mut comp_ends = vec![0usize; count];
    let mut comp_deg = vec![0usize; count];
    let mut comp_used = vec![false; count];
    for x in (0..n).filter(|&x| Some(x) != inf) {
        let c = labels[x];
        comp_ends[c] += ends[x];
        comp_deg[c] += degree[x];
        comp_used[c] = true;
    }
    let mut shapes = Vec::new();
    let mut lengths = Vec::new();
    for c in (0..count).filter(|&c| comp_used[c]) {
        // Each finite-finite edge is counted twice in comp_deg.
        lengths.push((comp_deg[c] + comp_ends[c]) / 2);
        shapes.push(match comp_ends[c] {
            0 => ContourShape::Cycle,
            2 => ContourShape::BoundaryPath,
            _ => ContourShape::Other,
        });
    }
    Ok(ContourReport {
        contour_count: shapes.len(),
        boundary_touching: shapes.iter().filter(|&&s| s != ContourShape::Cycle).count(),
        component_shapes: shapes,
        lengths,
    })
}

/// Interior faces of G sharing an edge with the unbounded face, i.e. the
/// finite neighbours of `v_∞` in G⁺.
pub fn boundary_faces(map: &CombinatorialMap) -> Vec<bool> {
    let mut out = vec![false; map.num_faces()];
    if let Some(outer) = map.outer_face() {
        for d in map.face_darts(outer) {
            out[map.face_of(map.twin(d))] = true;
        }
        out[outer] = false;
    }
    out
}

/// The finite-volume proxy for `(s0, s1, k+)`, with the data needed for the
/// `k = s0 + s1` comparison.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProxyReport {
    /// Boundary-touching 0-clusters.
    pub s0: usize,
    /// Boundary-touching 1-clusters.
    pub s1: usize,
    /// φ⁺-contours containing a boundary face.
    pub k_plus: usize,
    /// φ-contours (components of agreement edges with at least one edge)
    /// containing a boundary vertex.
    pub k: usize,
    /// Boundary-touching clusters made of a single vertex; these carry no
    /// φ-contour.
    pub boundary_singletons: usize,
}

impl ProxyReport {
    pub fn triple(&self) -> (usize, usize, usize) {
        (self.s0, self.s1, self.k_plus)
    }

    /// `k = s0 + s1`, which holds once boundary singletons are excluded.
    pub fn identity_holds(&self) -> bool {
        self.k + self.boundary_singletons == self.s0 + self.s1
    }
}

pub fn proxy_report(
    omega: &SiteConfig,
    maps: &LatticeMaps,
    cfgs: &DerivedConfigs,
) -> Result<ProxyReport, ContourError> {
    let g = &maps.primal;
    let lab = site_labeling(g, omega)?;
    let (mut s0, mut s1, mut singles) = (0, 0, 0);
    for c in 0..lab.count() {
        if lab.touches_boundary[c] {
            if lab.states[c] == 0 {
                s0 += 1;
            } else {
                s1 += 1;
            }
            if lab.sizes[c] == 1 {
                singles += 1;
            }
        }
    }

    // φ-contours, from φ alone.
    let mut ds = DisjointSets::new(g.num_vertices());
    let mut has_edge = vec![false; g.num_vertices()];
    for (e, (u, v)) in g.edges().enumerate() {
        if cfgs.phi.states[e] == 1 {
            ds.union(u, v);
            has_edge[u] = true;
            has_edge[v] = true;
        }
    }
    let mut seen = vec![false; g.num_vertices()];
    let mut k = 0;
    for &v in g.boundary_vertices() {
        let r = ds.find(v);
        if has_edge[v] && !seen[r] {
            seen[r] = true;
            k += 1;
        }
    }

    // φ⁺-contours on the finite part of G⁺; an edge to v_∞ belongs to the
    // contour of its finite end.
    let d = &maps.dual;
    let inf = d.infinite_vertex();
    let mut ds = DisjointSets::new(d.num_vertices());
    let mut has_edge = vec![false; d.num_vertices()];
    for (e, (u, v)) in d.edges().enumerate() {
        if cfgs.phi_plus.states[e] == 1 {
            has_edge[u] = true;
            has_edge[v] = true;
            if Some(u) != inf && Some(v) != inf {
                ds.union(u, v);
            }
        }
    }
    // Dual vertex f is face f of G.
    let bf = boundary_faces(g);
    let mut seen = vec![false; d.num_vertices()];
    let mut k_plus = 0;
    for f in (0..d.num_vertices()).filter(|&f| bf[f] && has_edge[f]) {
        let r = ds.find(f);
        if !seen[r] {
            seen[r] = true;
            k_plus += 1;
        }
    }
    Ok(ProxyReport {
        s0,
        s1,
        k_plus,
        k,
        boundary_singletons: singles,
    })
}

/// `(s0, s1, k+)` for `omega`.
pub fn proxy_triple(
    omega: &SiteConfig,
    maps: &LatticeMaps,
) -> Result<(usize, usize, usize), ContourError> {
    let cfgs = derive(omega, maps)?;
    Ok(proxy_report(omega, maps, &cfgs)?.triple())
}
