use serde::{Deserialize, Serialize};

use super::embed::regular_embedding;
use super::tiling::{Geometry, TilingSpec};
use super::{CombinatorialMap, MapError};

/// Largest radius accepted by [`build_ball`].
pub const MAX_RADIUS: u32 = 64;
/// Vertex budget for a single ball; {3,7} at radius 6 needs well under 1%.
pub const MAX_VERTICES: usize = 4_000_000;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BallSpec {
    pub tiling: TilingSpec,
    pub radius: u32,
}

impl BallSpec {
    pub fn new(tiling: TilingSpec, radius: u32) -> Self {
        BallSpec { tiling, radius }
    }
}

/// Rotation system under construction. For a vertex on the current
/// boundary the neighbour list runs counterclockwise from its predecessor
/// on the boundary to its successor; the unbounded region lies after the
/// last entry.
struct Grower {
    face_size: usize,
    degree: usize,
    nbrs: Vec<Vec<usize>>,
    faces: Vec<usize>,
}

impl Grower {
    fn seed(p: usize, q: usize) -> Self {
        let nbrs = (0..p).map(|i| vec![(i + 1) % p, (i + p - 1) % p]).collect();
        Grower {
            face_size: p,
            degree: q,
            nbrs,
            faces: vec![1; p],
        }
    }

    fn succ(&self, v: usize) -> usize {
        *self.nbrs[v].last().expect("boundary vertex has neighbours")
    }

    fn pred(&self, v: usize) -> usize {
        self.nbrs[v][0]
    }

    fn completes(&self, v: usize) -> bool {
        self.faces[v] + 1 == self.degree
    }

    fn is_boundary(&self, v: usize) -> bool {
        self.faces[v] < self.degree
    }

    /// Boundary vertices in successor order, starting from the smallest index.
    fn boundary_cycle(&self) -> Vec<usize> {
        let Some(start) = (0..self.nbrs.len()).find(|&v| self.is_boundary(v)) else {
            return Vec::new();
        };
        let mut cycle = vec![start];
        let mut v = self.succ(start);
        while v != start {
            cycle.push(v);
            v = self.succ(v);
        }
        cycle
    }

    /// Attaches one face in the unbounded sector after `v`'s last neighbour.
    /// Boundary vertices that the face completes are absorbed into it, so
    /// the face may run along several boundary edges.
    fn attach_face(&mut self, v: usize) -> Result<(), MapError> {
        let p = self.face_size;
        let mut start = v;
        let mut end = self.succ(v);
        let mut used = 1;
        while self.completes(start) {
            start = self.pred(start);
            used += 1;
            if used >= p {
                return Err(MapError::Inconsistent(
                    "face wraps the whole boundary".into(),
                ));
            }
        }
        while self.completes(end) {
            end = self.succ(end);
            used += 1;
            if used >= p {
                return Err(MapError::Inconsistent(
                    "face wraps the whole boundary".into(),
                ));
            }
        }
        let fresh = p - used - 1;
        if self.nbrs.len() + fresh > MAX_VERTICES {
            return Err(MapError::RadiusTooLarge {
                detail: format!("ball exceeds {MAX_VERTICES} vertices"),
            });
        }
        // Path end -> y_1 -> ... -> y_fresh -> start closes the face.
        let base = self.nbrs.len();
        let new_ids: Vec<usize> = (base..base + fresh).collect();
        let chain_start = new_ids.first().copied().unwrap_or(start);
        let chain_end = new_ids.last().copied().unwrap_or(end);
        if fresh == 0 && self.nbrs[start].contains(&end) {
            return Err(MapError::Inconsistent(format!(
                "closing edge {start}-{end} already exists"
            )));
        }
        for (i, _) in new_ids.iter().enumerate() {
            let later = if i + 1 < fresh { base + i + 1 } else { start };
            let earlier = if i == 0 { end } else { base + i - 1 };
            self.nbrs.push(vec![later, earlier]);
            self.faces.push(1);
        }
        // Every boundary vertex strictly inside the run gains this face.
        let mut w = self.succ(start);
        while w != end {
            self.faces[w] += 1;
            w = self.succ(w);
        }
        self.nbrs[start].push(chain_end);
        self.faces[start] += 1;
        self.nbrs[end].insert(0, chain_start);
        self.faces[end] += 1;
        Ok(())
    }

    fn grow_layer(&mut self) -> Result<(), MapError> {
        for v in self.boundary_cycle() {
            while self.is_boundary(v) {
                self.attach_face(v)?;
            }
        }
        Ok(())
    }
}

/// Builds the ball of face-radius `R` around a seed face: layer `r + 1`
/// adds every face sharing a vertex with layers `0..=r`.
///
/// Only regular tilings {p,q} are grown; the construction is deterministic.
pub fn build_ball(spec: &BallSpec) -> Result<CombinatorialMap, MapError> {
    let tiling = &spec.tiling;
    let class = tiling.classify();
    if class.geometry == Geometry::Spherical {
        return Err(MapError::UnsupportedTiling(format!(
            "{tiling} is spherical; only Euclidean and hyperbolic balls are built"
        )));
    }
    let p = tiling.regular_face_degree().ok_or_else(|| {
        MapError::UnsupportedTiling(format!("{tiling} is not a regular {{p,q}} tiling"))
    })?;
    let q = tiling.vertex_degree();
    if spec.radius > MAX_RADIUS {
        return Err(MapError::RadiusTooLarge {
            detail: format!("radius {} exceeds cap {MAX_RADIUS}", spec.radius),
        });
    }
    let mut grower = Grower::seed(p, q);
    for _ in 0..spec.radius {
        grower.grow_layer()?;
    }
    let boundary_start = grower.boundary_cycle()[0];
    let outer = (boundary_start, grower.succ(boundary_start));
    let mut map = CombinatorialMap::from_rotation(&grower.nbrs, Some(outer))?;
    let coords = regular_embedding(&map, p, q, class.geometry);
    map.set_embedding(coords);
    Ok(map)
}
