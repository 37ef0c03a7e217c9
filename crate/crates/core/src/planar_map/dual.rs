use super::{CombinatorialMap, MapError};

/// Planar dual, with `next` of the dual given by the face step of the
/// primal (the dual therefore carries the mirrored orientation). Dart `d`
/// of the dual crosses dart `d` of the primal, so
/// edge `e` of the dual is `e⁺` and the bijection is the identity on
/// edge indices in both directions. The unbounded face becomes the single
/// vertex `v_∞` (indexed last); faces of the dual are the primal vertices
/// with unchanged indices, so `dual(dual(m)) == m`.
pub fn dual(map: &CombinatorialMap) -> CombinatorialMap {
    let n = map.num_darts();
    let twin = map.raw_twin().to_vec();
    let next: Vec<usize> = (0..n).map(|d| map.face_step(d)).collect();
    let infinite_dart = map
        .outer_face()
        .map(|f| map.face_darts(f).next().expect("face has darts"));
    let outer_dart = map
        .infinite_vertex()
        .map(|v| map.vertex_darts(v).next().expect("vertex has darts"));
    let out = CombinatorialMap::from_permutations(twin, next, outer_dart, infinite_dart)
        .expect("dual of a valid map is valid");
    debug_assert_eq!(out.raw_vertex_of(), map.raw_face_of());
    debug_assert_eq!(out.raw_face_of(), map.raw_vertex_of());
    out
}

/// Role of a vertex of the superposition graph Ḡ.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SuperVertex {
    Primal(usize),
    /// An interior face of G, i.e. a finite vertex of G⁺.
    Dual(usize),
    /// Midpoint of edge `e` of G (equally of `e⁺`).
    Midpoint(usize),
}

/// Which half of which edge an edge of Ḡ is.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum HalfEdge {
    /// Half of primal edge `e`, between `vertex` and the midpoint.
    Primal { edge: usize, vertex: usize },
    /// Half of dual edge `e⁺`, between dual vertex `face` and the midpoint.
    Dual { edge: usize, face: usize },
}

/// The superposition Ḡ of G and the finite part of G⁺, its dual Ḡ⁺, and
/// the correspondences between their edges and the edges of G and G⁺.
#[derive(Debug, Clone)]
pub struct Superposition {
    pub bar: CombinatorialMap,
    pub bar_dual: CombinatorialMap,
    roles: Vec<SuperVertex>,
    halves: Vec<HalfEdge>,
    primal_halves: Vec<[usize; 2]>,
    dual_halves: Vec<[Option<usize>; 2]>,
}

impl Superposition {
    /// Role of vertex `x` of Ḡ.
    pub fn role(&self, x: usize) -> SuperVertex {
        self.roles[x]
    }

    /// What edge `f` of Ḡ is half of. Edge `f` of Ḡ⁺ crosses edge `f` of Ḡ.
    pub fn half(&self, f: usize) -> HalfEdge {
        self.halves[f]
    }

    /// The two Ḡ edges making up primal edge `e`.
    pub fn primal_halves(&self, e: usize) -> [usize; 2] {
        self.primal_halves[e]
    }

    /// The Ḡ edges making up dual edge `e⁺`; the half reaching `v_∞` does
    /// not exist in Ḡ.
    pub fn dual_halves(&self, e: usize) -> [Option<usize>; 2] {
        self.dual_halves[e]
    }

    /// The Ḡ edge crossed by edge `f` of Ḡ⁺.
    pub fn crossed(&self, f: usize) -> usize {
        f
    }
}

/// Builds Ḡ from G: vertices of G, interior faces of G (the finite
/// vertices of G⁺), and edge midpoints. Every vertex and every finite dual
/// vertex is joined to the midpoints of its incident edges. Every bounded
/// face of Ḡ is a quadrilateral `(u, mid(e), f, mid(e'))`.
pub fn superpose(map: &CombinatorialMap) -> Result<Superposition, MapError> {
    let outer = map.outer_face().ok_or_else(|| {
        MapError::InvalidMap("superposition needs a map with an unbounded face".into())
    })?;
    let nv = map.num_vertices();
    let nf = map.num_interior_faces();
    let ne = map.num_edges();
    // Faces other than the outer one are numbered 0..nf.
    let face_id = |f: usize| nv + if f < outer { f } else { f - 1 };
    let mid = |e: usize| nv + nf + e;
    let mut nbrs: Vec<Vec<usize>> = vec![Vec::new(); nv + nf + ne];
    let mut roles = Vec::with_capacity(nv + nf + ne);
    roles.extend((0..nv).map(SuperVertex::Primal));
    roles.extend(
        (0..map.num_faces())
            .filter(|&f| f != outer)
            .map(SuperVertex::Dual),
    );
    roles.extend((0..ne).map(SuperVertex::Midpoint));
    for (v, ring) in nbrs.iter_mut().enumerate().take(nv) {
        *ring = map.vertex_darts(v).map(|d| mid(map.edge_of(d))).collect();
    }
    for f in (0..map.num_faces()).filter(|&f| f != outer) {
        // Face orbits run clockwise around the face.
        let mut ring: Vec<usize> = map.face_darts(f).map(|d| mid(map.edge_of(d))).collect();
        ring.reverse();
        nbrs[face_id(f)] = ring;
    }
    for e in 0..ne {
        let d = map.edge_dart(e);
        let t = map.twin(d);
        let mut ring = vec![map.head(d)];
        if map.face_of(d) != outer {
            ring.push(face_id(map.face_of(d)));
        }
        ring.push(map.vertex_of(d));
        if map.face_of(t) != outer {
            ring.push(face_id(map.face_of(t)));
        }
        nbrs[mid(e)] = ring;
    }
    // Left of u -> mid(e) is unbounded when the left of u -> v is.
    let od = map.face_darts(outer).next().expect("outer face has darts");
    let start = map.vertex_of(od);
    let bar = CombinatorialMap::from_rotation(&nbrs, Some((start, mid(map.edge_of(od)))))?;
    let bar_dual = super::dual(&bar);

    let mut halves = Vec::with_capacity(bar.num_edges());
    let mut primal_halves = vec![[usize::MAX; 2]; ne];
    let mut dual_halves = vec![[None; 2]; ne];
    for f in 0..bar.num_edges() {
        let (a, b) = bar.edge_endpoints(f);
        let (end, m) = if a >= nv + nf { (b, a) } else { (a, b) };
        let e = m - nv - nf;
        let half = match roles[end] {
            SuperVertex::Primal(vertex) => {
                let slot = usize::from(primal_halves[e][0] != usize::MAX);
                primal_halves[e][slot] = f;
                HalfEdge::Primal { edge: e, vertex }
            }
            SuperVertex::Dual(face) => {
                let slot = usize::from(dual_halves[e][0].is_some());
                dual_halves[e][slot] = Some(f);
                HalfEdge::Dual { edge: e, face }
            }
            SuperVertex::Midpoint(_) => unreachable!("midpoints are never adjacent"),
        };
        halves.push(half);
    }
    Ok(Superposition {
        bar,
        bar_dual,
        roles,
        halves,
        primal_halves,
        dual_halves,
    })
}

/// A ball together with every derived map used by the contour machinery.
#[derive(Debug, Clone)]
pub struct LatticeMaps {
    pub primal: CombinatorialMap,
    pub dual: CombinatorialMap,
    pub sup: Superposition,
}

impl LatticeMaps {
    pub fn new(primal: CombinatorialMap) -> Result<Self, MapError> {
        let dual = dual(&primal);
        let sup = superpose(&primal)?;
        Ok(LatticeMaps { primal, dual, sup })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::planar_map::{build_ball, small, BallSpec, TilingSpec};

    fn ball(p: usize, q: usize, r: u32) -> CombinatorialMap {
        build_ball(&BallSpec::new(TilingSpec::regular(p, q).unwrap(), r)).unwrap()
    }

    #[test]
    fn dual_of_triangle() {
        let t = small::triangle();
        let d = dual(&t);
        d.validate().unwrap();
        assert_eq!(d.num_vertices(), 2);
        assert_eq!(d.num_edges(), 3);
        assert_eq!(d.infinite_vertex(), Some(1));
        for e in 0..3 {
            let (a, b) = d.edge_endpoints(e);
            assert_ne!(a, b);
        }
    }

    #[test]
    fn dual_is_an_involution() {
        for m in [
            small::triangle(),
            small::star(4),
            ball(4, 4, 1),
            ball(3, 7, 2),
        ] {
            let dd = dual(&dual(&m));
            assert_eq!(dd, m);
        }
    }

    #[test]
    fn dual_of_square_ball() {
        let m = ball(4, 4, 1);
        let d = dual(&m);
        d.validate().unwrap();
        assert_eq!(d.num_vertices(), 10);
        let inf = d.infinite_vertex().unwrap();
        assert_eq!(d.degree(inf), 12);
        for v in 0..inf {
            assert_eq!(d.degree(v), 4);
        }
        assert_eq!(d.boundary_vertices().len(), 8);
    }

    #[test]
    fn superposition_counts() {
        let m = ball(4, 4, 1);
        let s = superpose(&m).unwrap();
        s.bar.validate().unwrap();
        s.bar_dual.validate().unwrap();
        let d = dual(&m);
        let interior_dual_edges = (0..d.num_edges())
            .filter(|&e| d.is_interior_edge(e))
            .count();
        assert_eq!(interior_dual_edges, 12);
        // Each boundary edge of G also contributes the half of its dual edge
        // on the bounded side.
        let boundary_edges = m.num_edges() - interior_dual_edges;
        assert_eq!(boundary_edges, 12);
        assert_eq!(
            s.bar.num_edges(),
            2 * m.num_edges() + 2 * interior_dual_edges + boundary_edges
        );
        assert_eq!(s.bar.num_edges(), 84);
    }

    #[test]
    fn superposition_faces_are_quadrilaterals() {
        for m in [ball(4, 4, 1), ball(3, 7, 2), ball(7, 3, 2)] {
            let s = superpose(&m).unwrap();
            for f in 0..s.bar.num_faces() {
                if s.bar.is_interior_face(f) {
                    assert_eq!(s.bar.face_degree(f), 4);
                }
            }
            let inf = s.bar_dual.infinite_vertex().unwrap();
            for v in 0..s.bar_dual.num_vertices() {
                if v != inf {
                    assert_eq!(s.bar_dual.degree(v), 4);
                }
            }
            // Quadrilaterals are the corners (vertex, bounded face) of G.
            let corners: usize = (0..m.num_faces())
                .filter(|&f| m.is_interior_face(f))
                .map(|f| m.face_degree(f))
                .sum();
            assert_eq!(s.bar.num_interior_faces(), corners);
        }
    }

    #[test]
    fn half_edge_correspondence() {
        let m = ball(3, 7, 1);
        let s = superpose(&m).unwrap();
        for e in 0..m.num_edges() {
            let [a, b] = s.primal_halves(e);
            let (u, v) = m.edge_endpoints(e);
            let mut ends = Vec::new();
            for h in [a, b] {
                match s.half(h) {
                    HalfEdge::Primal { edge, vertex } => {
                        assert_eq!(edge, e);
                        ends.push(vertex);
                    }
                    other => panic!("unexpected {other:?}"),
                }
            }
            ends.sort();
            let mut want = vec![u, v];
            want.sort();
            assert_eq!(ends, want);
            let (fl, fr) = m.edge_faces(e);
            let present = s.dual_halves(e).iter().filter(|h| h.is_some()).count();
            let expected = [fl, fr].iter().filter(|&&f| m.is_interior_face(f)).count();
            assert_eq!(present, expected);
        }
    }
}
