//! Site and bond configurations on a map and their connected clusters.
//! A cluster touching the outer boundary of the ball stands in for an
//! infinite cluster.

mod union_find;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::planar_map::CombinatorialMap;

pub use union_find::DisjointSets;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ClusterError {
    #[error("configuration belongs to map {found:#018x}, expected {expected:#018x}")]
    MapMismatch { expected: u64, found: u64 },
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum SiteBoundary {
    Free,
    AllPlus,
    AllMinus,
}

impl SiteBoundary {
    /// State imposed on boundary vertices, if any.
    pub fn forced(self) -> Option<u8> {
        match self {
            SiteBoundary::Free => None,
            SiteBoundary::AllPlus => Some(1),
            SiteBoundary::AllMinus => Some(0),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum BondBoundary {
    FreeRC,
    WiredRC,
}

/// Vertex states in {0, 1}; as spins, 0 is −1 and 1 is +1.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SiteConfig {
    pub map_ref: u64,
    pub states: Vec<u8>,
    pub boundary_condition: SiteBoundary,
}

impl SiteConfig {
    pub fn new(
        map: &CombinatorialMap,
        states: Vec<u8>,
        boundary: SiteBoundary,
    ) -> Result<Self, ClusterError> {
        let cfg = SiteConfig {
            map_ref: map.fingerprint(),
            states,
            boundary_condition: boundary,
        };
        cfg.validate(map)?;
        Ok(cfg)
    }

    pub fn constant(map: &CombinatorialMap, state: u8, boundary: SiteBoundary) -> Self {
        let mut states = vec![state; map.num_vertices()];
        if let Some(s) = boundary.forced() {
            for &v in map.boundary_vertices() {
                states[v] = s;
            }
        }
        SiteConfig {
            map_ref: map.fingerprint(),
            states,
            boundary_condition: boundary,
        }
    }

    pub fn from_spins(
        map: &CombinatorialMap,
        spins: &[i8],
        boundary: SiteBoundary,
    ) -> Result<Self, ClusterError> {
        let states = spins.iter().map(|&s| u8::from(s > 0)).collect();
        Self::new(map, states, boundary)
    }

    pub fn spin(&self, v: usize) -> i8 {
        if self.states[v] == 1 {
            1
        } else {
            -1
        }
    }

    pub fn spins(&self) -> Vec<i8> {
        (0..self.states.len()).map(|v| self.spin(v)).collect()
    }

    pub fn magnetization(&self) -> f64 {
        let n = self.states.len();
        if n == 0 {
            return 0.0;
        }
        self.spins().iter().map(|&s| f64::from(s)).sum::<f64>() / n as f64
    }

    pub fn check_map(&self, map: &CombinatorialMap) -> Result<(), ClusterError> {
        if self.map_ref != map.fingerprint() {
            return Err(ClusterError::MapMismatch {
                expected: map.fingerprint(),
                found: self.map_ref,
            });
        }
        Ok(())
    }

    pub fn validate(&self, map: &CombinatorialMap) -> Result<(), ClusterError> {
        self.check_map(map)?;
        if self.states.len() != map.num_vertices() {
            return Err(ClusterError::InvalidConfig(format!(
                "{} states for {} vertices",
                self.states.len(),
                map.num_vertices()
            )));
        }
        if let Some(v) = self.states.iter().position(|&s| s > 1) {
            return Err(ClusterError::InvalidConfig(format!(
                "vertex {v} has state {}",
                self.states[v]
            )));
        }
        if let Some(s) = self.boundary_condition.forced() {
            if let Some(&v) = map
                .boundary_vertices()
                .iter()
                .find(|&&v| self.states[v] != s)
            {
                return Err(ClusterError::InvalidConfig(format!(
                    "boundary vertex {v} violates {:?}",
                    self.boundary_condition
                )));
            }
        }
        Ok(())
    }
}

/// Edge states in {0, 1}, 1 meaning open.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BondConfig {
    pub map_ref: u64,
    pub states: Vec<u8>,
    pub boundary_condition: BondBoundary,
}

impl BondConfig {
    pub fn new(
        map: &CombinatorialMap,
        states: Vec<u8>,
        boundary: BondBoundary,
    ) -> Result<Self, ClusterError> {
        let cfg = BondConfig {
            map_ref: map.fingerprint(),
            states,
            boundary_condition: boundary,
        };
        cfg.validate(map)?;
        Ok(cfg)
    }

    pub fn constant(map: &CombinatorialMap, state: u8, boundary: BondBoundary) -> Self {
        BondConfig {
            map_ref: map.fingerprint(),
            states: vec![state; map.num_edges()],
            boundary_condition: boundary,
        }
    }

    pub fn open_count(&self) -> usize {
        self.states.iter().filter(|&&s| s == 1).count()
    }

    pub fn validate(&self, map: &CombinatorialMap) -> Result<(), ClusterError> {
        if self.map_ref != map.fingerprint() {
            return Err(ClusterError::MapMismatch {
                expected: map.fingerprint(),
                found: self.map_ref,
            });
        }
        if self.states.len() != map.num_edges() {
            return Err(ClusterError::InvalidConfig(format!(
                "{} states for {} edges",
                self.states.len(),
                map.num_edges()
            )));
        }
        if let Some(e) = self.states.iter().position(|&s| s > 1) {
            return Err(ClusterError::InvalidConfig(format!(
                "edge {e} has state {}",
                self.states[e]
            )));
        }
        Ok(())
    }
}

/// Per-state counts, serialized as `{"0": n0, "1": n1}`.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct StateCounts {
    #[serde(rename = "0")]
    pub zero: usize,
    #[serde(rename = "1")]
    pub one: usize,
}

impl StateCounts {
    pub fn get(&self, state: u8) -> usize {
        if state == 0 {
            self.zero
        } else {
            self.one
        }
    }

    fn bump(&mut self, state: u8) {
        if state == 0 {
            self.zero += 1;
        } else {
            self.one += 1;
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClusterReport {
    pub cluster_count_by_state: StateCounts,
    /// Cluster sizes, largest first.
    pub sizes: Vec<usize>,
    pub boundary_touching_by_state: StateCounts,
    /// `(s0, s1, k+)`: boundary-touching 0-clusters, 1-clusters and
    /// φ⁺-contours, present once contour data is attached.
    pub proxy_triple: Option<(usize, usize, usize)>,
}

/// A partition of the vertices into clusters, labelled in order of their
/// smallest vertex.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Labeling {
    pub labels: Vec<usize>,
    pub sizes: Vec<usize>,
    pub states: Vec<u8>,
    pub touches_boundary: Vec<bool>,
}

impl Labeling {
    fn from_sets(
        map: &CombinatorialMap,
        ds: &mut DisjointSets,
        state_of: impl Fn(usize) -> u8,
    ) -> Self {
        let (labels, count) = ds.canonical_labels();
        let mut sizes = vec![0; count];
        let mut states = vec![0; count];
        let mut touches_boundary = vec![false; count];
        for (v, &l) in labels.iter().enumerate() {
            sizes[l] += 1;
            states[l] = state_of(v);
        }
        for &v in map.boundary_vertices() {
            touches_boundary[labels[v]] = true;
        }
        Labeling {
            labels,
            sizes,
            states,
            touches_boundary,
        }
    }

    pub fn count(&self) -> usize {
        self.sizes.len()
    }

    /// Size of the largest cluster, optionally restricted to one state.
    pub fn largest(&self, state: Option<u8>) -> usize {
        (0..self.count())
            .filter(|&c| state.is_none_or(|s| self.states[c] == s))
            .map(|c| self.sizes[c])
            .max()
            .unwrap_or(0)
    }

    pub fn report(&self) -> ClusterReport {
        let mut counts = StateCounts::default();
        let mut touching = StateCounts::default();
        for c in 0..self.count() {
            counts.bump(self.states[c]);
            if self.touches_boundary[c] {
                touching.bump(self.states[c]);
            }
        }
        let mut sizes = self.sizes.clone();
        sizes.sort_unstable_by(|a, b| b.cmp(a));
        ClusterReport {
            cluster_count_by_state: counts,
            sizes,
            boundary_touching_by_state: touching,
            proxy_triple: None,
        }
    }
}

/// Maximal connected sets of equal-state vertices.
pub fn site_labeling(map: &CombinatorialMap, cfg: &SiteConfig) -> Result<Labeling, ClusterError> {
    cfg.validate(map)?;
    let mut ds = DisjointSets::new(map.num_vertices());
    for (u, v) in map.edges() {
        if cfg.states[u] == cfg.states[v] {
            ds.union(u, v);
        }
    }
    Ok(Labeling::from_sets(map, &mut ds, |v| cfg.states[v]))
}

pub fn label_site_clusters(
    map: &CombinatorialMap,
    cfg: &SiteConfig,
) -> Result<ClusterReport, ClusterError> {
    Ok(site_labeling(map, cfg)?.report())
}

/// Components of the open subgraph, isolated vertices included. Under
/// `WiredRC` the boundary vertices form a single component from the start.
/// Every component is reported under state 1.
pub fn bond_labeling(map: &CombinatorialMap, cfg: &BondConfig) -> Result<Labeling, ClusterError> {
    cfg.validate(map)?;
    let mut ds = bond_sets(map, &cfg.states, cfg.boundary_condition);
    Ok(Labeling::from_sets(map, &mut ds, |_| 1))
}

pub fn label_bond_clusters(
    map: &CombinatorialMap,
    cfg: &BondConfig,
) -> Result<ClusterReport, ClusterError> {
    Ok(bond_labeling(map, cfg)?.report())
}

pub(crate) fn bond_sets(
    map: &CombinatorialMap,
    states: &[u8],
    boundary: BondBoundary,
) -> DisjointSets {
    let mut ds = DisjointSets::new(map.num_vertices());
    if boundary == BondBoundary::WiredRC {
        if let Some((&first, rest)) = map.boundary_vertices().split_first() {
            for &v in rest {
                ds.union(first, v);
            }
        }
    }
    for (e, (u, v)) in map.edges().enumerate() {
        if states[e] == 1 {
            ds.union(u, v);
        }
    }
    ds
}

/// Number of components k(ξ) counting isolated vertices.
pub fn component_count(map: &CombinatorialMap, states: &[u8], boundary: BondBoundary) -> usize {
    bond_sets(map, states, boundary).canonical_labels().1
}
