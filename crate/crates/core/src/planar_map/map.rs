use std::collections::BTreeSet;

use super::MapError;

/// A planar graph stored as darts (half-edges).
///
/// `next` rotates a dart counterclockwise around its origin vertex and
/// `twin` flips it to the opposite orientation of the same edge. The face
/// of a dart is the one on its left; faces are the orbits of
/// `twin ∘ next`.
///
/// A finite ball carries one unbounded face, `outer_face`, which is always
/// indexed last. A dual map instead carries the vertex standing for that
/// face, `infinite_vertex`, also indexed last.
#[derive(Debug, Clone)]
pub struct CombinatorialMap {
    twin: Vec<usize>,
    next: Vec<usize>,
    vertex_of: Vec<usize>,
    edge_of: Vec<usize>,
    face_of: Vec<usize>,
    vertex_dart: Vec<usize>,
    edge_dart: Vec<usize>,
    face_dart: Vec<usize>,
    boundary: Vec<usize>,
    outer_face: Option<usize>,
    infinite_vertex: Option<usize>,
    fingerprint: u64,
    embedding: Option<Vec<(f64, f64)>>,
}

impl PartialEq for CombinatorialMap {
    // Coordinates are presentation only.
    fn eq(&self, other: &Self) -> bool {
        self.twin == other.twin
            && self.next == other.next
            && self.vertex_of == other.vertex_of
            && self.edge_of == other.edge_of
            && self.face_of == other.face_of
            && self.boundary == other.boundary
            && self.outer_face == other.outer_face
            && self.infinite_vertex == other.infinite_vertex
    }
}

impl Eq for CombinatorialMap {}

/// Numbers the orbits of `step` by their smallest dart, moving the orbit
/// containing `last` (if any) to the final index.
fn number_orbits(
    n: usize,
    step: impl Fn(usize) -> usize,
    last: Option<usize>,
) -> Result<(Vec<usize>, Vec<usize>), MapError> {
    const UNSET: usize = usize::MAX;
    let mut label = vec![UNSET; n];
    let mut reps = Vec::new();
    for start in 0..n {
        if label[start] != UNSET {
            continue;
        }
        let id = reps.len();
        reps.push(start);
        let mut d = start;
        let mut guard = 0;
        loop {
            label[d] = id;
            d = step(d);
            guard += 1;
            if d == start {
                break;
            }
            if label[d] != UNSET || guard > n {
                return Err(MapError::InvalidMap("orbit is not a cycle".into()));
            }
        }
    }
    if let Some(special) = last {
        let old = label[special];
        let top = reps.len() - 1;
        if old != top {
            for l in label.iter_mut() {
                if *l > old {
                    *l -= 1;
                } else if *l == old {
                    *l = top;
                }
            }
            let rep = reps.remove(old);
            reps.push(rep);
        }
    }
    Ok((label, reps))
}

impl CombinatorialMap {
    /// Builds a map from a rotation system of a simple graph: `nbrs[v]`
    /// lists the neighbours of `v` in counterclockwise order. `outer`
    /// names a directed edge `(u, v)` whose left face is unbounded.
    pub fn from_rotation(
        nbrs: &[Vec<usize>],
        outer: Option<(usize, usize)>,
    ) -> Result<Self, MapError> {
        let mut first = Vec::with_capacity(nbrs.len() + 1);
        let mut total = 0;
        for list in nbrs {
            first.push(total);
            total += list.len();
        }
        first.push(total);
        let position = |v: usize, w: usize| -> Option<usize> {
            nbrs.get(v).and_then(|l| l.iter().position(|&x| x == w))
        };
        let mut twin = vec![0; total];
        let mut next = vec![0; total];
        for (v, list) in nbrs.iter().enumerate() {
            let deg = list.len();
            let uniq: BTreeSet<_> = list.iter().collect();
            if uniq.len() != deg || list.contains(&v) {
                return Err(MapError::InvalidMap(format!(
                    "rotation at vertex {v} has a loop or repeated neighbour"
                )));
            }
            for (j, &w) in list.iter().enumerate() {
                let d = first[v] + j;
                next[d] = first[v] + (j + 1) % deg;
                let back = position(w, v).ok_or_else(|| {
                    MapError::InvalidMap(format!("edge {v}-{w} is not symmetric"))
                })?;
                twin[d] = first[w] + back;
            }
        }
        let outer_dart = match outer {
            Some((u, w)) => Some(
                first[u]
                    + position(u, w).ok_or_else(|| {
                        MapError::InvalidMap(format!("outer edge {u}-{w} is missing"))
                    })?,
            ),
            None => None,
        };
        Self::from_permutations(twin, next, outer_dart, None)
    }

    /// Builds a map from its two permutations. `outer_dart` lies on the
    /// unbounded face; `infinite_dart` starts at the vertex standing for it.
    pub fn from_permutations(
        twin: Vec<usize>,
        next: Vec<usize>,
        outer_dart: Option<usize>,
        infinite_dart: Option<usize>,
    ) -> Result<Self, MapError> {
        let n = twin.len();
        if next.len() != n || !n.is_multiple_of(2) {
            return Err(MapError::InvalidMap(
                "dart arrays disagree in length".into(),
            ));
        }
        for d in 0..n {
            if twin[d] >= n || next[d] >= n || twin[d] == d || twin[twin[d]] != d {
                return Err(MapError::InvalidMap(format!(
                    "twin is not a fixed-point-free involution at dart {d}"
                )));
            }
        }
        let mut seen = vec![false; n];
        for &x in &next {
            if seen[x] {
                return Err(MapError::InvalidMap("next is not a permutation".into()));
            }
            seen[x] = true;
        }
        let (vertex_of, vertex_dart) = number_orbits(n, |d| next[d], infinite_dart)?;
        let (face_of, face_dart) = number_orbits(n, |d| twin[next[d]], outer_dart)?;
        let mut edge_of = vec![usize::MAX; n];
        let mut edge_dart = Vec::with_capacity(n / 2);
        for d in 0..n {
            if edge_of[d] == usize::MAX {
                edge_of[d] = edge_dart.len();
                edge_of[twin[d]] = edge_dart.len();
                edge_dart.push(d);
            }
        }
        let outer_face = outer_dart.map(|d| face_of[d]);
        let infinite_vertex = infinite_dart.map(|d| vertex_of[d]);
        let mut map = CombinatorialMap {
            twin,
            next,
            vertex_of,
            edge_of,
            face_of,
            vertex_dart,
            edge_dart,
            face_dart,
            boundary: Vec::new(),
            outer_face,
            infinite_vertex,
            fingerprint: 0,
            embedding: None,
        };
        map.boundary = map.compute_boundary();
        map.fingerprint = map.compute_fingerprint();
        Ok(map)
    }

    fn compute_boundary(&self) -> Vec<usize> {
        let mut set = BTreeSet::new();
        if let Some(f) = self.outer_face {
            for d in self.face_darts(f) {
                set.insert(self.vertex_of[d]);
            }
        } else if let Some(inf) = self.infinite_vertex {
            for d in self.vertex_darts(inf) {
                let w = self.head(d);
                if w != inf {
                    set.insert(w);
                }
            }
        }
        set.into_iter().collect()
    }

    fn compute_fingerprint(&self) -> u64 {
        // FNV-1a over the permutations; stable across runs and platforms.
        let mut h: u64 = 0xcbf2_9ce4_8422_2325;
        let mut feed = |x: u64| {
            for b in x.to_le_bytes() {
                h ^= b as u64;
                h = h.wrapping_mul(0x0100_0000_01b3);
            }
        };
        feed(self.twin.len() as u64);
        for (&t, &n) in self.twin.iter().zip(&self.next) {
            feed(t as u64);
            feed(n as u64);
        }
        feed(self.outer_face.map_or(u64::MAX, |f| f as u64));
        feed(self.infinite_vertex.map_or(u64::MAX, |v| v as u64));
        h
    }

    pub(crate) fn set_embedding(&mut self, coords: Vec<(f64, f64)>) {
        debug_assert_eq!(coords.len(), self.num_vertices());
        self.embedding = Some(coords);
    }

    pub fn num_darts(&self) -> usize {
        self.twin.len()
    }

    pub fn num_vertices(&self) -> usize {
        self.vertex_dart.len()
    }

    pub fn num_edges(&self) -> usize {
        self.edge_dart.len()
    }

    /// All faces, the unbounded one included.
    pub fn num_faces(&self) -> usize {
        self.face_dart.len()
    }

    pub fn num_interior_faces(&self) -> usize {
        self.num_faces() - usize::from(self.outer_face.is_some())
    }

    pub fn twin(&self, d: usize) -> usize {
        self.twin[d]
    }

    pub fn next(&self, d: usize) -> usize {
        self.next[d]
    }

    /// Next dart of the face on the left of `d`; the orbit runs clockwise
    /// around the face.
    pub fn face_step(&self, d: usize) -> usize {
        self.twin[self.next[d]]
    }

    pub fn vertex_of(&self, d: usize) -> usize {
        self.vertex_of[d]
    }

    pub fn head(&self, d: usize) -> usize {
        self.vertex_of[self.twin[d]]
    }

    pub fn edge_of(&self, d: usize) -> usize {
        self.edge_of[d]
    }

    pub fn face_of(&self, d: usize) -> usize {
        self.face_of[d]
    }

    pub fn edge_dart(&self, e: usize) -> usize {
        self.edge_dart[e]
    }

    pub fn edge_endpoints(&self, e: usize) -> (usize, usize) {
        let d = self.edge_dart[e];
        (self.vertex_of[d], self.head(d))
    }

    /// The two faces separated by edge `e`, left of its canonical dart first.
    pub fn edge_faces(&self, e: usize) -> (usize, usize) {
        let d = self.edge_dart[e];
        (self.face_of[d], self.face_of[self.twin[d]])
    }

    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        (0..self.num_edges()).map(move |e| self.edge_endpoints(e))
    }

    pub fn vertex_darts(&self, v: usize) -> OrbitIter<'_> {
        OrbitIter::new(self.vertex_dart[v], move |d| self.next[d])
    }

    pub fn face_darts(&self, f: usize) -> OrbitIter<'_> {
        OrbitIter::new(self.face_dart[f], move |d| self.twin[self.next[d]])
    }

    pub fn degree(&self, v: usize) -> usize {
        self.vertex_darts(v).count()
    }

    pub fn face_degree(&self, f: usize) -> usize {
        self.face_darts(f).count()
    }

    /// Neighbours of `v` in counterclockwise order (with multiplicity).
    pub fn neighbors(&self, v: usize) -> impl Iterator<Item = usize> + '_ {
        self.vertex_darts(v).map(move |d| self.head(d))
    }

    pub fn boundary_vertices(&self) -> &[usize] {
        &self.boundary
    }

    pub fn is_boundary(&self, v: usize) -> bool {
        self.boundary.binary_search(&v).is_ok()
    }

    pub fn boundary_mask(&self) -> Vec<bool> {
        let mut mask = vec![false; self.num_vertices()];
        for &v in &self.boundary {
            mask[v] = true;
        }
        mask
    }

    pub fn outer_face(&self) -> Option<usize> {
        self.outer_face
    }

    pub fn infinite_vertex(&self) -> Option<usize> {
        self.infinite_vertex
    }

    /// True if the face is bounded (not the outer face).
    pub fn is_interior_face(&self, f: usize) -> bool {
        Some(f) != self.outer_face
    }

    /// True if neither endpoint of `e` is the infinite vertex.
    pub fn is_interior_edge(&self, e: usize) -> bool {
        match self.infinite_vertex {
            None => true,
            Some(inf) => {
                let (u, v) = self.edge_endpoints(e);
                u != inf && v != inf
            }
        }
    }

    /// Identity used to match configurations to their map.
    pub fn fingerprint(&self) -> u64 {
        self.fingerprint
    }

    pub fn embedding(&self) -> Option<&[(f64, f64)]> {
        self.embedding.as_deref()
    }

    pub(crate) fn raw_twin(&self) -> &[usize] {
        &self.twin
    }

    pub(crate) fn raw_vertex_of(&self) -> &[usize] {
        &self.vertex_of
    }

    pub(crate) fn raw_face_of(&self) -> &[usize] {
        &self.face_of
    }

    /// `V - E + F`, counting the unbounded face (or the infinite vertex) once.
    pub fn euler_characteristic(&self) -> i64 {
        self.num_vertices() as i64 - self.num_edges() as i64 + self.num_faces() as i64
    }

    /// Exhaustive check of the dart axioms and of planarity via Euler's formula.
    pub fn validate(&self) -> Result<(), MapError> {
        let n = self.num_darts();
        for d in 0..n {
            if self.twin[self.twin[d]] != d || self.twin[d] == d {
                return Err(MapError::InvalidMap(format!(
                    "twin axiom fails at dart {d}"
                )));
            }
            if self.vertex_of[self.next[d]] != self.vertex_of[d] {
                return Err(MapError::InvalidMap(format!(
                    "next leaves the vertex at dart {d}"
                )));
            }
            if self.face_of[self.face_step(d)] != self.face_of[d] {
                return Err(MapError::InvalidMap(format!(
                    "face orbit broken at dart {d}"
                )));
            }
            if self.edge_of[self.twin[d]] != self.edge_of[d] {
                return Err(MapError::InvalidMap(format!(
                    "edge label broken at dart {d}"
                )));
            }
        }
        if self.euler_characteristic() != 2 {
            return Err(MapError::InvalidMap(format!(
                "Euler characteristic {} != 2",
                self.euler_characteristic()
            )));
        }
        Ok(())
    }
}

/// Iterates a cyclic orbit once, starting from a given dart.
pub struct OrbitIter<'a> {
    start: usize,
    current: Option<usize>,
    step: Box<dyn Fn(usize) -> usize + 'a>,
}

impl<'a> OrbitIter<'a> {
    fn new(start: usize, step: impl Fn(usize) -> usize + 'a) -> Self {
        OrbitIter {
            start,
            current: Some(start),
            step: Box::new(step),
        }
    }
}

impl Iterator for OrbitIter<'_> {
    type Item = usize;

    fn next(&mut self) -> Option<usize> {
        let d = self.current?;
        let n = (self.step)(d);
        self.current = (n != self.start).then_some(n);
        Some(d)
    }
}
