//! Drawing coordinates for regular tilings. Hyperbolic balls go to the
//! Poincaré disk, Euclidean ones are scaled into the unit disk. Faces are
//! placed by reflecting an already placed neighbour across the shared edge.

use std::collections::VecDeque;
use std::f64::consts::PI;

use super::tiling::{Geometry, TilingSpec};
use super::CombinatorialMap;

type Point = (f64, f64);

fn sub(a: Point, b: Point) -> Point {
    (a.0 - b.0, a.1 - b.1)
}

fn norm2(a: Point) -> f64 {
    a.0 * a.0 + a.1 * a.1
}

fn reflect_in_line(z: Point, a: Point, b: Point) -> Point {
    let dir = sub(b, a);
    let len2 = norm2(dir);
    let rel = sub(z, a);
    let t = (rel.0 * dir.0 + rel.1 * dir.1) / len2;
    let foot = (a.0 + t * dir.0, a.1 + t * dir.1);
    (2.0 * foot.0 - z.0, 2.0 * foot.1 - z.1)
}

/// Circumcentre of three points, `None` when they are (nearly) collinear.
fn circumcenter(a: Point, b: Point, c: Point) -> Option<Point> {
    let d = 2.0 * (a.0 * (b.1 - c.1) + b.0 * (c.1 - a.1) + c.0 * (a.1 - b.1));
    if d.abs() < 1e-14 {
        return None;
    }
    let (na, nb, nc) = (norm2(a), norm2(b), norm2(c));
    Some((
        (na * (b.1 - c.1) + nb * (c.1 - a.1) + nc * (a.1 - b.1)) / d,
        (na * (c.0 - b.0) + nb * (a.0 - c.0) + nc * (b.0 - a.0)) / d,
    ))
}

/// Reflection across the hyperbolic geodesic through `a` and `b`.
fn reflect_hyperbolic(z: Point, a: Point, b: Point) -> Point {
    // The geodesic is the circle through a, b and the inverse of a in the
    // unit circle, or a diameter when those are collinear.
    let pivot = if norm2(a) > 1e-12 { a } else { b };
    let inv = (pivot.0 / norm2(pivot), pivot.1 / norm2(pivot));
    let cross = a.0 * b.1 - a.1 * b.0;
    if cross.abs() < 1e-12 {
        return reflect_in_line(z, a, b);
    }
    match circumcenter(a, b, inv) {
        Some(c) => {
            let r2 = norm2(sub(a, c));
            let rel = sub(z, c);
            let k = r2 / norm2(rel);
            (c.0 + k * rel.0, c.1 + k * rel.1)
        }
        None => reflect_in_line(z, a, b),
    }
}

pub(crate) fn regular_embedding(
    map: &CombinatorialMap,
    p: usize,
    q: usize,
    geometry: Geometry,
) -> Vec<Point> {
    let n = map.num_vertices();
    let mut coords: Vec<Option<Point>> = vec![None; n];
    let radius = match geometry {
        Geometry::Hyperbolic => {
            let cosh_r = 1.0 / ((PI / p as f64).tan() * (PI / q as f64).tan());
            (cosh_r.acosh() / 2.0).tanh()
        }
        _ => 1.0,
    };
    let reflect = |z: Point, a: Point, b: Point| match geometry {
        Geometry::Hyperbolic => reflect_hyperbolic(z, a, b),
        _ => reflect_in_line(z, a, b),
    };
    let Some(seed) = (0..map.num_faces()).find(|&f| map.is_interior_face(f)) else {
        return vec![(0.0, 0.0); n];
    };
    let darts: Vec<usize> = map.face_darts(seed).collect();
    for (k, &d) in darts.iter().enumerate() {
        let angle = 2.0 * PI * k as f64 / darts.len() as f64;
        coords[map.vertex_of(d)] = Some((radius * angle.cos(), radius * angle.sin()));
    }
    let mut placed = vec![false; map.num_faces()];
    placed[seed] = true;
    let mut queue = VecDeque::from([seed]);
    while let Some(f) = queue.pop_front() {
        let ring: Vec<usize> = map.face_darts(f).collect();
        for (i, &d) in ring.iter().enumerate() {
            let g = map.face_of(map.twin(d));
            if placed[g] || !map.is_interior_face(g) {
                continue;
            }
            placed[g] = true;
            queue.push_back(g);
            let a = coords[map.vertex_of(d)].expect("placed face has coordinates");
            let b = coords[map.head(d)].expect("placed face has coordinates");
            // The reflection reverses orientation: the j-th vertex of g
            // counted from twin(d) is the image of the (m-1-j)-th vertex of
            // f counted from d.
            let m = ring.len();
            let mut od = map.twin(d);
            for j in 0..m {
                let v = map.vertex_of(od);
                if (1..m - 1).contains(&j) && coords[v].is_none() {
                    let src = map.vertex_of(ring[(i + m - 1 - j) % m]);
                    let z = coords[src].expect("placed face has coordinates");
                    coords[v] = Some(reflect(z, a, b));
                }
                od = map.face_step(od);
            }
        }
    }
    let mut pts: Vec<Point> = coords
        .into_iter()
        .map(|c| c.unwrap_or((0.0, 0.0)))
        .collect();
    if geometry != Geometry::Hyperbolic {
        let max = pts.iter().map(|&z| norm2(z).sqrt()).fold(0.0, f64::max);
        if max > 0.0 {
            let s = 0.95 / max;
            for z in &mut pts {
                *z = (z.0 * s, z.1 * s);
            }
        }
    }
    pts
}

/// Drawing coordinates for any map: the stored embedding if there is one,
/// the regular embedding when every interior face has degree `p` and every
/// non-boundary vertex degree `q`, and otherwise a barycentric layout with
/// the outer face on the unit circle.
pub fn layout(map: &CombinatorialMap) -> Vec<Point> {
    if let Some(pts) = map.embedding() {
        return pts.to_vec();
    }
    if let Some((p, q)) = regular_degrees(map) {
        if let Ok(tiling) = TilingSpec::regular(p, q) {
            let geometry = tiling.classify().geometry;
            if geometry != Geometry::Spherical {
                return regular_embedding(map, p, q, geometry);
            }
        }
    }
    barycentric(map)
}

fn regular_degrees(map: &CombinatorialMap) -> Option<(usize, usize)> {
    let mut faces = (0..map.num_faces())
        .filter(|&f| map.is_interior_face(f))
        .map(|f| map.face_degree(f));
    let p = faces.next()?;
    if !faces.all(|m| m == p) {
        return None;
    }
    let mut inner = (0..map.num_vertices())
        .filter(|&v| !map.is_boundary(v))
        .map(|v| map.degree(v));
    let q = inner.next()?;
    inner.all(|d| d == q).then_some((p, q))
}

fn barycentric(map: &CombinatorialMap) -> Vec<Point> {
    let n = map.num_vertices();
    let mut pts = vec![(0.0, 0.0); n];
    let mut fixed = vec![false; n];
    let rim: Vec<usize> = match map.outer_face() {
        Some(f) => map.face_darts(f).map(|d| map.vertex_of(d)).collect(),
        None => (0..n).collect(),
    };
    for (k, &v) in rim.iter().enumerate() {
        if fixed[v] {
            continue;
        }
        let angle = 2.0 * PI * k as f64 / rim.len() as f64;
        pts[v] = (0.95 * angle.cos(), 0.95 * angle.sin());
        fixed[v] = true;
    }
    for _ in 0..500 {
        for v in 0..n {
            if fixed[v] || map.degree(v) == 0 {
                continue;
            }
            let (sx, sy, k) = map.neighbors(v).fold((0.0, 0.0, 0.0), |(x, y, k), u| {
                (x + pts[u].0, y + pts[u].1, k + 1.0)
            });
            pts[v] = (sx / k, sy / k);
        }
    }
    pts
}
