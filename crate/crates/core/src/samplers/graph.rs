use crate::planar_map::CombinatorialMap;

/// Flat adjacency of a map, built once per chain.
#[derive(Debug, Clone)]
pub struct Graph {
    map_ref: u64,
    offsets: Vec<usize>,
    nbrs: Vec<usize>,
    nbr_edges: Vec<usize>,
    edges: Vec<(usize, usize)>,
    boundary: Vec<usize>,
    on_boundary: Vec<bool>,
}

impl Graph {
    pub fn new(map: &CombinatorialMap) -> Self {
        let n = map.num_vertices();
        let mut offsets = Vec::with_capacity(n + 1);
        let mut nbrs = Vec::with_capacity(map.num_darts());
        let mut nbr_edges = Vec::with_capacity(map.num_darts());
        for v in 0..n {
            offsets.push(nbrs.len());
            for d in map.vertex_darts(v) {
                nbrs.push(map.head(d));
                nbr_edges.push(map.edge_of(d));
            }
        }
        offsets.push(nbrs.len());
        Graph {
            map_ref: map.fingerprint(),
            offsets,
            nbrs,
            nbr_edges,
            edges: map.edges().collect(),
            boundary: map.boundary_vertices().to_vec(),
            on_boundary: map.boundary_mask(),
        }
    }

    /// Replaces the vertices treated as boundary, e.g. the leaves of a tree
    /// whose vertices all lie on the outer face.
    pub fn with_boundary(mut self, mut boundary: Vec<usize>) -> Self {
        boundary.sort_unstable();
        boundary.dedup();
        self.on_boundary = vec![false; self.num_vertices()];
        for &v in &boundary {
            self.on_boundary[v] = true;
        }
        self.boundary = boundary;
        self
    }

    pub fn map_ref(&self) -> u64 {
        self.map_ref
    }

    pub fn num_vertices(&self) -> usize {
        self.offsets.len() - 1
    }

    pub fn num_edges(&self) -> usize {
        self.edges.len()
    }

    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.nbrs[self.offsets[v]..self.offsets[v + 1]]
    }

    /// `(neighbour, edge)` pairs around `v`.
    pub fn incident(&self, v: usize) -> impl Iterator<Item = (usize, usize)> + '_ {
        let r = self.offsets[v]..self.offsets[v + 1];
        self.nbrs[r.clone()]
            .iter()
            .copied()
            .zip(self.nbr_edges[r].iter().copied())
    }

    pub fn degree(&self, v: usize) -> usize {
        self.offsets[v + 1] - self.offsets[v]
    }

    pub fn max_degree(&self) -> usize {
        (0..self.num_vertices())
            .map(|v| self.degree(v))
            .max()
            .unwrap_or(0)
    }

    pub fn edge(&self, e: usize) -> (usize, usize) {
        self.edges[e]
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn boundary(&self) -> &[usize] {
        &self.boundary
    }

    pub fn is_boundary(&self, v: usize) -> bool {
        self.on_boundary[v]
    }
}
