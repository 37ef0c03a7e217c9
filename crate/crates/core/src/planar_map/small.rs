//! Small planar graphs used by exact enumeration and sampler checks.

use super::CombinatorialMap;

/// A single edge.
pub fn k2() -> CombinatorialMap {
    CombinatorialMap::from_rotation(&[vec![1], vec![0]], Some((0, 1))).expect("valid map")
}

/// A triangle; its inner face is face 0.
pub fn triangle() -> CombinatorialMap {
    CombinatorialMap::from_rotation(&[vec![1, 2], vec![2, 0], vec![0, 1]], Some((0, 2)))
        .expect("valid map")
}

/// A cycle of length `n >= 3`.
pub fn cycle(n: usize) -> CombinatorialMap {
    assert!(n >= 3);
    let nbrs: Vec<Vec<usize>> = (0..n).map(|i| vec![(i + 1) % n, (i + n - 1) % n]).collect();
    CombinatorialMap::from_rotation(&nbrs, Some((0, n - 1))).expect("valid map")
}

/// The star K_{1,k}: centre 0 and leaves 1..=k.
pub fn star(k: usize) -> CombinatorialMap {
    assert!(k >= 1);
    let mut nbrs = vec![(1..=k).collect::<Vec<_>>()];
    nbrs.extend((0..k).map(|_| vec![0]));
    CombinatorialMap::from_rotation(&nbrs, Some((1, 0))).expect("valid map")
}

/// A `rows x cols` block of unit squares, vertices numbered row by row.
pub fn grid(rows: usize, cols: usize) -> CombinatorialMap {
    assert!(rows >= 1 && cols >= 1);
    let w = cols + 1;
    let h = rows + 1;
    let id = |x: usize, y: usize| y * w + x;
    let mut nbrs = vec![Vec::new(); w * h];
    for y in 0..h {
        for x in 0..w {
            // East, north, west, south is counterclockwise.
            let list = &mut nbrs[id(x, y)];
            if x + 1 < w {
                list.push(id(x + 1, y));
            }
            if y + 1 < h {
                list.push(id(x, y + 1));
            }
            if x > 0 {
                list.push(id(x - 1, y));
            }
            if y > 0 {
                list.push(id(x, y - 1));
            }
        }
    }
    // At the corner (0,0) the unbounded sector follows the north edge.
    CombinatorialMap::from_rotation(&nbrs, Some((id(0, 0), id(0, 1)))).expect("valid map")
}

/// Two triangles sharing an edge.
pub fn diamond() -> CombinatorialMap {
    // 0 and 2 are the shared edge; 1 below, 3 above.
    let nbrs = vec![vec![1, 2, 3], vec![2, 0], vec![3, 0, 1], vec![0, 2]];
    CombinatorialMap::from_rotation(&nbrs, Some((0, 3))).expect("valid map")
}

/// Looks a small graph up by name: `k2`, `triangle`, `square`, `diamond`,
/// `cycleN`, `starN`, `gridRxC` (e.g. `grid2x2`).
pub fn by_name(name: &str) -> Option<CombinatorialMap> {
    match name {
        "k2" => return Some(k2()),
        "triangle" => return Some(triangle()),
        "square" => return Some(cycle(4)),
        "diamond" => return Some(diamond()),
        _ => {}
    }
    if let Some(n) = name.strip_prefix("star").and_then(|s| s.parse().ok()) {
        return (n >= 1).then(|| star(n));
    }
    if let Some(n) = name.strip_prefix("cycle").and_then(|s| s.parse().ok()) {
        return (n >= 3).then(|| cycle(n));
    }
    if let Some(rest) = name.strip_prefix("grid") {
        let (r, c) = rest.split_once('x')?;
        let (r, c): (usize, usize) = (r.parse().ok()?, c.parse().ok()?);
        return (r >= 1 && c >= 1 && r * c <= 64).then(|| grid(r, c));
    }
    None
}
