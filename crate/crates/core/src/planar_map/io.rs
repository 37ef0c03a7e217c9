//! Line-oriented map format:
//!
//! ```text
//! map <V> <E> <F>
//! dart <id> twin <id> next <id> vertex <v> edge <e> face <f>
//! ...
//! boundary <v> <v> ...
//! ```
//!
//! `F` counts the unbounded face, which is always the last face index.

use std::fmt::Write as _;

use super::{CombinatorialMap, MapError};

pub fn to_text(map: &CombinatorialMap) -> String {
    let mut out = String::with_capacity(64 * map.num_darts());
    writeln!(
        out,
        "map {} {} {}",
        map.num_vertices(),
        map.num_edges(),
        map.num_faces()
    )
    .unwrap();
    for d in 0..map.num_darts() {
        writeln!(
            out,
            "dart {} twin {} next {} vertex {} edge {} face {}",
            d,
            map.twin(d),
            map.next(d),
            map.vertex_of(d),
            map.edge_of(d),
            map.face_of(d)
        )
        .unwrap();
    }
    out.push_str("boundary");
    for v in map.boundary_vertices() {
        write!(out, " {v}").unwrap();
    }
    out.push('\n');
    out
}

fn parse_err(line: usize, msg: impl Into<String>) -> MapError {
    MapError::Parse(format!("line {}: {}", line + 1, msg.into()))
}

fn field(tokens: &[&str], idx: usize, key: &str, line: usize) -> Result<usize, MapError> {
    if tokens.get(idx) != Some(&key) {
        return Err(parse_err(line, format!("expected `{key}`")));
    }
    tokens
        .get(idx + 1)
        .ok_or_else(|| parse_err(line, format!("missing value for `{key}`")))?
        .parse()
        .map_err(|_| parse_err(line, format!("bad value for `{key}`")))
}

/// Parses the format written by [`to_text`]. The map is rebuilt from its
/// permutations and the stored labels are checked against the result.
pub fn from_text(text: &str) -> Result<CombinatorialMap, MapError> {
    let mut lines = text
        .lines()
        .enumerate()
        .filter(|(_, l)| !l.trim().is_empty());
    let (hl, header) = lines
        .next()
        .ok_or_else(|| MapError::Parse("empty input".into()))?;
    let h: Vec<&str> = header.split_whitespace().collect();
    if h.len() != 4 || h[0] != "map" {
        return Err(parse_err(hl, "expected `map <V> <E> <F>`"));
    }
    let counts: Vec<usize> = h[1..]
        .iter()
        .map(|t| t.parse().map_err(|_| parse_err(hl, "bad count")))
        .collect::<Result<_, _>>()?;
    let (nv, ne, nf) = (counts[0], counts[1], counts[2]);
    let n = 2 * ne;
    let mut twin = vec![0; n];
    let mut next = vec![0; n];
    let mut labels = vec![(0, 0, 0); n];
    for d in 0..n {
        let (ln, line) = lines
            .next()
            .ok_or_else(|| MapError::Parse(format!("missing dart {d}")))?;
        let t: Vec<&str> = line.split_whitespace().collect();
        if field(&t, 0, "dart", ln)? != d {
            return Err(parse_err(ln, format!("expected dart {d}")));
        }
        twin[d] = field(&t, 2, "twin", ln)?;
        next[d] = field(&t, 4, "next", ln)?;
        labels[d] = (
            field(&t, 6, "vertex", ln)?,
            field(&t, 8, "edge", ln)?,
            field(&t, 10, "face", ln)?,
        );
        if twin[d] >= n || next[d] >= n {
            return Err(parse_err(ln, "dart index out of range"));
        }
    }
    let (bl, bline) = lines
        .next()
        .ok_or_else(|| MapError::Parse("missing boundary line".into()))?;
    let bt: Vec<&str> = bline.split_whitespace().collect();
    if bt.first() != Some(&"boundary") {
        return Err(parse_err(bl, "expected `boundary`"));
    }
    let boundary: Vec<usize> = bt[1..]
        .iter()
        .map(|t| t.parse().map_err(|_| parse_err(bl, "bad boundary vertex")))
        .collect::<Result<_, _>>()?;
    if let Some((ln, _)) = lines.next() {
        return Err(parse_err(ln, "trailing content"));
    }
    let outer_dart = (0..n).find(|&d| labels[d].2 + 1 == nf);
    let map = CombinatorialMap::from_permutations(twin, next, outer_dart, None)?;
    let consistent = map.num_vertices() == nv
        && map.num_faces() == nf
        && (0..n).all(|d| labels[d] == (map.vertex_of(d), map.edge_of(d), map.face_of(d)))
        && map.boundary_vertices() == boundary.as_slice();
    if !consistent {
        return Err(MapError::Parse(
            "labels do not match the permutations".into(),
        ));
    }
    Ok(map)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::planar_map::{build_ball, BallSpec, TilingSpec};

    #[test]
    fn triangle_text() {
        let m = crate::planar_map::small::triangle();
        let text = to_text(&m);
        assert!(text.starts_with("map 3 3 2\ndart 0 twin "));
        assert!(text.ends_with("boundary 0 1 2\n"));
        assert_eq!(from_text(&text).unwrap(), m);
    }

    #[test]
    fn ball_round_trip() {
        for (p, q, r) in [(3, 7, 2), (4, 4, 2), (7, 3, 2)] {
            let m = build_ball(&BallSpec::new(TilingSpec::regular(p, q).unwrap(), r)).unwrap();
            let text = to_text(&m);
            let back = from_text(&text).unwrap();
            assert_eq!(back, m);
            assert_eq!(to_text(&back), text);
        }
    }

    #[test]
    fn rejects_corruption() {
        let m = crate::planar_map::small::triangle();
        let text = to_text(&m).replace("next 1", "next 0");
        assert!(from_text(&text).is_err());
        assert!(from_text("mop 1 2 3").is_err());
        assert!(from_text(&format!("{}extra\n", to_text(&m))).is_err());
    }
}
