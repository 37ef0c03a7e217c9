use std::fmt;

use num_rational::Rational64;
use serde::{Deserialize, Serialize};

use super::MapError;

/// Cyclic vertex type of a vertex-transitive tiling: the degrees of the
/// `d` faces met around every vertex, in counterclockwise order.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "RawTilingSpec", into = "RawTilingSpec")]
pub struct TilingSpec {
    face_degrees: Vec<usize>,
}

#[derive(Serialize, Deserialize)]
struct RawTilingSpec {
    vertex_degree: usize,
    face_degrees: Vec<usize>,
}

impl TryFrom<RawTilingSpec> for TilingSpec {
    type Error = MapError;

    fn try_from(raw: RawTilingSpec) -> Result<Self, MapError> {
        if raw.vertex_degree != raw.face_degrees.len() {
            return Err(MapError::InvalidTiling(format!(
                "vertex_degree {} does not match {} face degrees",
                raw.vertex_degree,
                raw.face_degrees.len()
            )));
        }
        TilingSpec::new(raw.face_degrees)
    }
}

impl From<TilingSpec> for RawTilingSpec {
    fn from(spec: TilingSpec) -> Self {
        RawTilingSpec {
            vertex_degree: spec.vertex_degree(),
            face_degrees: spec.face_degrees,
        }
    }
}

impl TilingSpec {
    /// Validates the vertex type. Rejects degrees below 3 and cyclic
    /// types violating the local Archimedean rule: a face of odd degree
    /// must be flanked by two faces of equal degree, since the faces
    /// bordering an odd polygon cannot alternate around it.
    pub fn new(face_degrees: Vec<usize>) -> Result<Self, MapError> {
        let d = face_degrees.len();
        if d < 3 {
            return Err(MapError::InvalidTiling(format!(
                "vertex degree {d} is below 3"
            )));
        }
        if let Some(m) = face_degrees.iter().find(|&&m| m < 3) {
            return Err(MapError::InvalidTiling(format!(
                "face degree {m} is below 3"
            )));
        }
        for i in 0..d {
            let m = face_degrees[i];
            let before = face_degrees[(i + d - 1) % d];
            let after = face_degrees[(i + 1) % d];
            if m % 2 == 1 && before != after {
                return Err(MapError::UnrealizableTiling(format!(
                    "odd face of degree {m} at position {i} is flanked by faces of degree {before} and {after}"
                )));
            }
        }
        Ok(TilingSpec { face_degrees })
    }

    /// The regular tiling {p,q}: q faces of degree p at every vertex.
    pub fn regular(p: usize, q: usize) -> Result<Self, MapError> {
        TilingSpec::new(vec![p; q])
    }

    pub fn vertex_degree(&self) -> usize {
        self.face_degrees.len()
    }

    pub fn face_degrees(&self) -> &[usize] {
        &self.face_degrees
    }

    /// Returns `Some(p)` when every face has degree `p`.
    pub fn regular_face_degree(&self) -> Option<usize> {
        let p = self.face_degrees[0];
        self.face_degrees.iter().all(|&m| m == p).then_some(p)
    }

    pub fn classify(&self) -> GeometryClass {
        classify(self)
    }
}

impl fmt::Display for TilingSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.regular_face_degree() {
            Some(p) => write!(f, "{{{},{}}}", p, self.vertex_degree()),
            None => {
                let parts: Vec<String> = self.face_degrees.iter().map(|m| m.to_string()).collect();
                write!(f, "{}", parts.join("."))
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Geometry {
    Spherical,
    Euclidean,
    Hyperbolic,
}

impl fmt::Display for Geometry {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = match self {
            Geometry::Spherical => "Spherical",
            Geometry::Euclidean => "Euclidean",
            Geometry::Hyperbolic => "Hyperbolic",
        };
        f.write_str(name)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GeometryClass {
    pub geometry: Geometry,
    /// `(d - 2)/2 - sum(1/m_i)`, exact.
    pub curvature_gap: Rational64,
}

/// Sign of the angle-deficit `(d - 2)/2 - sum(1/m_i)` decides the geometry;
/// a positive gap means the tiling lives in the hyperbolic plane and is
/// non-amenable.
pub fn classify(spec: &TilingSpec) -> GeometryClass {
    let d = spec.vertex_degree() as i64;
    let angle_sum: Rational64 = spec
        .face_degrees()
        .iter()
        .map(|&m| Rational64::new(1, m as i64))
        .sum();
    let gap = Rational64::new(d - 2, 2) - angle_sum;
    let zero = Rational64::from_integer(0);
    let geometry = if gap < zero {
        Geometry::Spherical
    } else if gap == zero {
        Geometry::Euclidean
    } else {
        Geometry::Hyperbolic
    };
    GeometryClass {
        geometry,
        curvature_gap: gap,
    }
}
