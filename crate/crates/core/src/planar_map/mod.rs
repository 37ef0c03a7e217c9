//! Finite balls of regular planar tilings as combinatorial maps, with the
//! dual, the superposition graph and its dual.

mod ball;
mod dual;
mod embed;
mod io;
mod map;
pub mod small;
mod tiling;

use thiserror::Error;

pub use ball::{build_ball, BallSpec, MAX_RADIUS, MAX_VERTICES};
pub use dual::{dual, superpose, HalfEdge, LatticeMaps, SuperVertex, Superposition};
pub use embed::layout;
pub use io::{from_text, to_text};
pub use map::{CombinatorialMap, OrbitIter};
pub use tiling::{classify, Geometry, GeometryClass, TilingSpec};

#[derive(Debug, Error)]
pub enum MapError {
    #[error("invalid tiling: {0}")]
    InvalidTiling(String),
    #[error("unrealizable tiling: {0}")]
    UnrealizableTiling(String),
    #[error("unsupported tiling: {0}")]
    UnsupportedTiling(String),
    #[error("radius too large: {detail}")]
    RadiusTooLarge { detail: String },
    #[error("invalid map: {0}")]
    InvalidMap(String),
    #[error("inconsistent construction: {0}")]
    Inconsistent(String),
    #[error("parse error: {0}")]
    Parse(String),
}
