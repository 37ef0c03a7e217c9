//! Markov chain and direct samplers for Bernoulli site percolation, the
//! Ising model and the random-cluster model, plus the threshold
//! arithmetic relating them.

mod fk;
mod graph;
mod ising;
mod thresholds;

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::clusters::{ClusterError, SiteBoundary, SiteConfig};

pub use fk::{edwards_sokal_color, fk_heatbath_sweep};
pub use graph::Graph;
pub use ising::{glauber_sweep, heat_bath_plus_probability, swendsen_wang_sweep};
pub use thresholds::{
    h_ising, h_xor, ising_window, j_bound_jj3, pcwl_bound, thresholds, xor_window, ThresholdReport,
};

#[derive(Debug, Error, PartialEq)]
pub enum SamplerError {
    #[error(transparent)]
    Cluster(#[from] ClusterError),
    #[error("domain error: {0}")]
    Domain(String),
}

/// Seed and stream of a chain. The stream id selects one of the 2^64
/// independent ChaCha8 streams of the key derived from `seed`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct RngSpec {
    pub seed: u64,
    pub stream_id: u64,
}

impl RngSpec {
    pub fn new(seed: u64, stream_id: u64) -> Self {
        RngSpec { seed, stream_id }
    }

    pub fn rng(&self) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        rng.set_stream(self.stream_id);
        rng
    }
}

/// Model parameters. `p` and `j` are linked by `p = 1 - e^{-2J}`, and
/// `k` is the dual coupling of `j`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CouplingParams {
    pub j: f64,
    pub k: f64,
    pub p: f64,
    pub q: f64,
    pub d: usize,
    pub h: f64,
}

impl CouplingParams {
    pub fn from_coupling(j: f64, d: usize) -> Result<Self, SamplerError> {
        if !(j >= 0.0 && j.is_finite()) {
            return Err(SamplerError::Domain(format!(
                "coupling {j} must be finite and nonnegative"
            )));
        }
        let k = if j == 0.0 {
            f64::INFINITY
        } else {
            crate::xor::dual_coupling(j).map_err(|e| SamplerError::Domain(e.to_string()))?
        };
        Ok(CouplingParams {
            j,
            k,
            p: coupling_to_edge_weight(j),
            q: 2.0,
            d,
            h: 0.0,
        })
    }
}

/// `p = 1 - e^{-2J}`.
pub fn coupling_to_edge_weight(j: f64) -> f64 {
    -(-2.0 * j).exp_m1()
}

/// `J = -log(1 - p) / 2`.
pub fn edge_weight_to_coupling(p: f64) -> f64 {
    -0.5 * (-p).ln_1p()
}

pub(crate) fn check_probability(p: f64, what: &str) -> Result<(), SamplerError> {
    if (0.0..=1.0).contains(&p) {
        Ok(())
    } else {
        Err(SamplerError::Domain(format!(
            "{what} = {p} is not in [0, 1]"
        )))
    }
}

pub(crate) fn check_map(g: &Graph, map_ref: u64) -> Result<(), SamplerError> {
    if g.map_ref() != map_ref {
        return Err(ClusterError::MapMismatch {
            expected: g.map_ref(),
            found: map_ref,
        }
        .into());
    }
    Ok(())
}

/// Independent Bernoulli(p) site states with free boundary.
pub fn sample_bernoulli<R: Rng + ?Sized>(
    g: &Graph,
    p: f64,
    rng: &mut R,
) -> Result<SiteConfig, SamplerError> {
    check_probability(p, "p")?;
    let states = (0..g.num_vertices())
        .map(|_| u8::from(rng.gen::<f64>() < p))
        .collect();
    Ok(SiteConfig {
        map_ref: g.map_ref(),
        states,
        boundary_condition: SiteBoundary::Free,
    })
}

/// A uniformly random spin configuration with the boundary forced as
/// requested; the usual starting point of a chain.
pub fn random_start<R: Rng + ?Sized>(g: &Graph, boundary: SiteBoundary, rng: &mut R) -> SiteConfig {
    let mut states: Vec<u8> = (0..g.num_vertices())
        .map(|_| u8::from(rng.gen::<bool>()))
        .collect();
    if let Some(s) = boundary.forced() {
        for &v in g.boundary() {
            states[v] = s;
        }
    }
    SiteConfig {
        map_ref: g.map_ref(),
        states,
        boundary_condition: boundary,
    }
}
