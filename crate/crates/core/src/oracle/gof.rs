use serde::{Deserialize, Serialize};
use statrs::distribution::{ChiSquared, ContinuousCDF};

use super::{enumerate_fk, enumerate_ising, ExactMeasure, OracleError};
use crate::clusters::{BondBoundary, BondConfig, SiteBoundary, SiteConfig};
use crate::samplers::{
    edge_weight_to_coupling, edwards_sokal_color, fk_heatbath_sweep, glauber_sweep, random_start,
    sample_bernoulli, swendsen_wang_sweep, Graph, RngSpec,
};

/// Smallest expected count kept as its own bin.
const MIN_EXPECTED: f64 = 5.0;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GofReport {
    pub samples: u64,
    pub bins: usize,
    pub statistic: f64,
    pub dof: usize,
    pub p_value: f64,
}

/// Pearson chi-square test of observed counts against exact
/// probabilities. Cells with expected count below 5 are pooled into one
/// bin; an observation in a zero-probability cell gives p-value 0.
pub fn chi_square_gof(counts: &[u64], probs: &[f64]) -> Result<GofReport, OracleError> {
    if counts.len() != probs.len() {
        return Err(OracleError::Domain(format!(
            "{} counts for {} cells",
            counts.len(),
            probs.len()
        )));
    }
    let n: u64 = counts.iter().sum();
    if n == 0 {
        return Err(OracleError::Domain("no samples".into()));
    }
    let total = n as f64;
    let mut bins: Vec<(f64, f64)> = Vec::new();
    let mut pooled = (0.0, 0.0);
    for (&c, &p) in counts.iter().zip(probs) {
        let expected = p * total;
        if p <= 0.0 {
            if c > 0 {
                return Ok(GofReport {
                    samples: n,
                    bins: 0,
                    statistic: f64::INFINITY,
                    dof: 0,
                    p_value: 0.0,
                });
            }
        } else if expected < MIN_EXPECTED {
            pooled.0 += c as f64;
            pooled.1 += expected;
        } else {
            bins.push((c as f64, expected));
        }
    }
    if pooled.1 > 0.0 {
        if pooled.1 >= MIN_EXPECTED || bins.is_empty() {
            bins.push(pooled);
        } else {
            let smallest = bins
                .iter_mut()
                .min_by(|a, b| a.1.total_cmp(&b.1))
                .expect("nonempty");
            smallest.0 += pooled.0;
            smallest.1 += pooled.1;
        }
    }
    let statistic: f64 = bins.iter().map(|&(o, e)| (o - e) * (o - e) / e).sum();
    let dof = bins.len().saturating_sub(1);
    let p_value = if dof == 0 {
        1.0
    } else {
        let dist = ChiSquared::new(dof as f64).map_err(|e| OracleError::Domain(e.to_string()))?;
        dist.sf(statistic)
    };
    Ok(GofReport {
        samples: n,
        bins: bins.len(),
        statistic,
        dof,
        p_value,
    })
}

/// A sampler together with its target measure.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "sampler", rename_all = "snake_case")]
pub enum SamplerCase {
    Bernoulli {
        p: f64,
    },
    Glauber {
        j: f64,
        boundary: SiteBoundary,
    },
    SwendsenWang {
        j: f64,
        boundary: SiteBoundary,
    },
    FkHeatBath {
        p: f64,
        q: f64,
        boundary: BondBoundary,
    },
    /// FK heat-bath bonds at `q = 2` coloured by [`edwards_sokal_color`].
    EdwardsSokal {
        p: f64,
        boundary: BondBoundary,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GofPlan {
    pub samples: u64,
    pub burn_in: usize,
    /// Sweeps between recorded samples.
    pub thinning: usize,
    pub rng: RngSpec,
}

fn site_mask(cfg: &SiteConfig) -> usize {
    cfg.states
        .iter()
        .enumerate()
        .fold(0, |acc, (v, &s)| acc | usize::from(s) << v)
}

fn bond_mask(cfg: &BondConfig) -> usize {
    cfg.states
        .iter()
        .enumerate()
        .fold(0, |acc, (e, &s)| acc | usize::from(s) << e)
}

fn fk_start(g: &Graph, boundary: BondBoundary) -> BondConfig {
    BondConfig {
        map_ref: g.map_ref(),
        states: vec![0; g.num_edges()],
        boundary_condition: boundary,
    }
}

fn sampler_err(e: impl std::fmt::Display) -> OracleError {
    OracleError::Domain(e.to_string())
}

/// Exact law of the states a [`SamplerCase`] produces, as a dense vector
/// over vertex (or edge) bitmasks.
pub fn sampler_target(g: &Graph, case: SamplerCase) -> Result<Vec<f64>, OracleError> {
    Ok(match case {
        SamplerCase::Bernoulli { p } => {
            let n = g.num_vertices();
            ExactMeasure::product(super::Cells::Sites, n, p).dense()
        }
        SamplerCase::Glauber { j, boundary } | SamplerCase::SwendsenWang { j, boundary } => {
            enumerate_ising(g, j, boundary)?.dense()
        }
        SamplerCase::FkHeatBath { p, q, boundary } => enumerate_fk(g, p, q, boundary)?.dense(),
        SamplerCase::EdwardsSokal { p, boundary } => {
            let j = edge_weight_to_coupling(p);
            match boundary {
                BondBoundary::FreeRC => enumerate_ising(g, j, SiteBoundary::Free)?.dense(),
                BondBoundary::WiredRC => {
                    let plus = enumerate_ising(g, j, SiteBoundary::AllPlus)?.dense();
                    let minus = enumerate_ising(g, j, SiteBoundary::AllMinus)?.dense();
                    plus.iter()
                        .zip(&minus)
                        .map(|(a, b)| 0.5 * (a + b))
                        .collect()
                }
            }
        }
    })
}

/// Runs one chain of `case` on `g` and tests the recorded states against
/// the exact measure.
pub fn sampler_gof(g: &Graph, case: SamplerCase, plan: &GofPlan) -> Result<GofReport, OracleError> {
    let target = sampler_target(g, case)?;
    let mut counts = vec![0u64; target.len()];
    let mut rng = plan.rng.rng();
    let thin = plan.thinning.max(1);
    match case {
        SamplerCase::Bernoulli { p } => {
            for _ in 0..plan.samples {
                counts[site_mask(&sample_bernoulli(g, p, &mut rng).map_err(sampler_err)?)] += 1;
            }
        }
        SamplerCase::Glauber { j, boundary } | SamplerCase::SwendsenWang { j, boundary } => {
            let glauber = matches!(case, SamplerCase::Glauber { .. });
            let mut cfg = random_start(g, boundary, &mut rng);
            let step = |cfg: &mut SiteConfig, rng: &mut _| {
                if glauber {
                    glauber_sweep(g, cfg, j, rng)
                } else {
                    swendsen_wang_sweep(g, cfg, j, rng)
                }
                .map_err(sampler_err)
            };
            for _ in 0..plan.burn_in {
                step(&mut cfg, &mut rng)?;
            }
            for _ in 0..plan.samples {
                for _ in 0..thin {
                    step(&mut cfg, &mut rng)?;
                }
                counts[site_mask(&cfg)] += 1;
            }
        }
        SamplerCase::FkHeatBath { p, q, boundary } => {
            let mut bonds = fk_start(g, boundary);
            for _ in 0..plan.burn_in {
                fk_heatbath_sweep(g, &mut bonds, p, q, &mut rng).map_err(sampler_err)?;
            }
            for _ in 0..plan.samples {
                for _ in 0..thin {
                    fk_heatbath_sweep(g, &mut bonds, p, q, &mut rng).map_err(sampler_err)?;
                }
                counts[bond_mask(&bonds)] += 1;
            }
        }
        SamplerCase::EdwardsSokal { p, boundary } => {
            let mut bonds = fk_start(g, boundary);
            for _ in 0..plan.burn_in {
                fk_heatbath_sweep(g, &mut bonds, p, 2.0, &mut rng).map_err(sampler_err)?;
            }
            for _ in 0..plan.samples {
                for _ in 0..thin {
                    fk_heatbath_sweep(g, &mut bonds, p, 2.0, &mut rng).map_err(sampler_err)?;
                }
                let spins = edwards_sokal_color(g, &bonds, &mut rng).map_err(sampler_err)?;
                counts[site_mask(&spins)] += 1;
            }
        }
    }
    chi_square_gof(&counts, &target)
}
