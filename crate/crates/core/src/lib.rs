//! Ising, random-cluster, site percolation and XOR-Ising models on finite
//! balls of planar vertex-transitive tilings, with exact enumeration on
//! small graphs to check the samplers and the coupling identities.

// Domain checks are written `!(x > 0.0)` so that NaN is rejected too.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod clusters;
pub mod contours;
pub mod experiments;
pub mod oracle;
pub mod planar_map;
pub mod samplers;
pub mod xor;
