//! Parameter sweeps over tilings, radii and couplings, with per-chain
//! estimators written as JSON lines, plus the finite-size `p_c` proxy and
//! the growth-in-R trend test.

mod pc;
mod trend;

use std::io::Write;

use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::clusters::{
    site_labeling, BondBoundary, BondConfig, ClusterError, SiteBoundary, SiteConfig,
};
use crate::contours::{derive, proxy_report, ContourError};
use crate::planar_map::{build_ball, BallSpec, LatticeMaps, MapError, TilingSpec};
use crate::samplers::{
    fk_heatbath_sweep, glauber_sweep, random_start, sample_bernoulli, swendsen_wang_sweep, Graph,
    RngSpec, SamplerError,
};
use crate::xor::xor_of;

pub use pc::{estimate_pc_site, PcEstimate, PcPlan};
pub use trend::{growth_trend, Trend, TrendReport, BOOTSTRAP_RESAMPLES, TREND_CONFIDENCE};

/// Environment variable capping the total number of sweeps of a sweep run.
pub const BUDGET_ENV: &str = "HYPERPERC_BUDGET";

#[derive(Debug, Error)]
pub enum ExperimentError {
    #[error("config error: {0}")]
    Config(String),
    #[error("budget exceeded: {requested} sweeps requested, budget {budget}")]
    BudgetExceeded { requested: u64, budget: u64 },
    #[error("insufficient data: {0}")]
    InsufficientData(String),
    #[error(transparent)]
    Map(#[from] MapError),
    #[error(transparent)]
    Sampler(#[from] SamplerError),
    #[error(transparent)]
    Cluster(#[from] ClusterError),
    #[error(transparent)]
    Contour(#[from] ContourError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Model {
    Bernoulli,
    Ising,
    Fk,
    Xor,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Boundary {
    Free,
    Plus,
    Minus,
    Wired,
}

impl Boundary {
    pub fn site(self) -> Result<SiteBoundary, ExperimentError> {
        match self {
            Boundary::Free => Ok(SiteBoundary::Free),
            Boundary::Plus => Ok(SiteBoundary::AllPlus),
            Boundary::Minus => Ok(SiteBoundary::AllMinus),
            Boundary::Wired => Err(ExperimentError::Config(
                "wired boundary applies to the fk model only".into(),
            )),
        }
    }

    pub fn bond(self) -> Result<BondBoundary, ExperimentError> {
        match self {
            Boundary::Free => Ok(BondBoundary::FreeRC),
            Boundary::Wired => Ok(BondBoundary::WiredRC),
            _ => Err(ExperimentError::Config(
                "the fk model takes free or wired boundary".into(),
            )),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Dynamics {
    Glauber,
    SwendsenWang,
}

fn default_thinning() -> usize {
    10
}

fn default_burn_in() -> usize {
    1000
}

/// A sweep as read from TOML. `grid` holds `p` for the Bernoulli and FK
/// models and `J` for Ising and XOR.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub tiling: TilingSpec,
    pub radii: Vec<u32>,
    pub model: Model,
    pub grid: Vec<f64>,
    pub boundary: Boundary,
    pub chains: usize,
    /// Measured sweeps per chain; for Bernoulli, independent samples.
    pub sweeps: usize,
    #[serde(default = "default_burn_in")]
    pub burn_in: usize,
    #[serde(default = "default_thinning")]
    pub thinning: usize,
    pub seed: u64,
    /// FK cluster weight, default 2.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub q: Option<f64>,
    /// Ising and XOR dynamics, default Swendsen–Wang.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dynamics: Option<Dynamics>,
}

impl ExperimentConfig {
    pub fn from_toml(text: &str) -> Result<Self, ExperimentError> {
        let cfg: ExperimentConfig =
            toml::from_str(text).map_err(|e| ExperimentError::Config(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<(), ExperimentError> {
        let bad = |m: &str| Err(ExperimentError::Config(m.into()));
        if self.grid.is_empty() {
            return bad("grid is empty");
        }
        if self.radii.is_empty() {
            return bad("radii is empty");
        }
        if self.chains == 0 {
            return bad("chains must be at least 1");
        }
        if self.sweeps == 0 || self.thinning == 0 {
            return bad("sweeps and thinning must be positive");
        }
        if self.sweeps < self.thinning && self.model != Model::Bernoulli {
            return bad("sweeps must be at least thinning");
        }
        for &x in &self.grid {
            let ok = match self.model {
                Model::Bernoulli => (0.0..=1.0).contains(&x),
                Model::Fk => x > 0.0 && x < 1.0,
                Model::Ising | Model::Xor => x >= 0.0 && x.is_finite(),
            };
            if !ok {
                return bad(&format!(
                    "grid value {x} is out of range for {:?}",
                    self.model
                ));
            }
        }
        match self.model {
            Model::Bernoulli if self.boundary != Boundary::Free => {
                return bad("bernoulli takes free boundary")
            }
            Model::Fk => {
                self.boundary.bond()?;
                if !(self.q.unwrap_or(2.0) >= 1.0) {
                    return bad("q must be at least 1");
                }
            }
            Model::Ising | Model::Xor => {
                self.boundary.site()?;
            }
            Model::Bernoulli => {}
        }
        if self.q.is_some() && self.model != Model::Fk {
            return bad("q applies to the fk model only");
        }
        if self.dynamics.is_some() && !matches!(self.model, Model::Ising | Model::Xor) {
            return bad("dynamics applies to the ising and xor models only");
        }
        Ok(())
    }

    /// Sweeps the run performs (samples for Bernoulli).
    pub fn work(&self) -> u64 {
        let per_chain = match self.model {
            Model::Bernoulli => self.sweeps,
            Model::Xor => 2 * (self.burn_in + self.sweeps),
            Model::Ising | Model::Fk => self.burn_in + self.sweeps,
        } as u64;
        per_chain * (self.grid.len() * self.radii.len() * self.chains) as u64
    }

    fn param_name(&self) -> &'static str {
        match self.model {
            Model::Bernoulli | Model::Fk => "p",
            Model::Ising | Model::Xor => "J",
        }
    }
}

/// One estimator of one chain.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunRecord {
    pub tiling: TilingSpec,
    pub radius: u32,
    pub model: Model,
    pub param_name: String,
    pub param: f64,
    pub boundary: Boundary,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub q: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dynamics: Option<Dynamics>,
    pub chains: usize,
    pub sweeps: usize,
    pub burn_in: usize,
    pub thinning: usize,
    pub seed: u64,
    pub stream_id: u64,
    pub estimator: String,
    pub value: f64,
    pub stderr: f64,
    pub sample_count: usize,
}

/// Estimators for site-valued models.
pub const SITE_ESTIMATORS: [&str; 6] = [
    "boundary_plus_clusters",
    "boundary_minus_clusters",
    "phi_plus_contours",
    "largest_cluster_fraction",
    "largest_plus_cluster_fraction",
    "magnetization",
];

/// Estimators for the FK model.
pub const BOND_ESTIMATORS: [&str; 3] = [
    "boundary_clusters",
    "largest_cluster_fraction",
    "open_fraction",
];

pub fn estimators(model: Model) -> &'static [&'static str] {
    match model {
        Model::Fk => &BOND_ESTIMATORS,
        _ => &SITE_ESTIMATORS,
    }
}

fn site_observables(omega: &SiteConfig, maps: &LatticeMaps) -> Result<Vec<f64>, ExperimentError> {
    let cfgs = derive(omega, maps)?;
    let prox = proxy_report(omega, maps, &cfgs)?;
    let lab = site_labeling(&maps.primal, omega)?;
    let n = omega.states.len() as f64;
    Ok(vec![
        prox.s1 as f64,
        prox.s0 as f64,
        prox.k_plus as f64,
        lab.largest(None) as f64 / n,
        lab.largest(Some(1)) as f64 / n,
        omega.magnetization(),
    ])
}

fn bond_observables(bonds: &BondConfig, maps: &LatticeMaps) -> Result<Vec<f64>, ExperimentError> {
    let lab = crate::clusters::bond_labeling(&maps.primal, bonds)?;
    let touching = (0..lab.count())
        .filter(|&c| lab.touches_boundary[c])
        .count();
    let n = bonds.states.len().max(1) as f64;
    Ok(vec![
        touching as f64,
        lab.largest(None) as f64 / maps.primal.num_vertices() as f64,
        bonds.open_count() as f64 / n,
    ])
}

/// Mean and batch-means standard error (up to 20 batches).
pub fn mean_and_stderr(xs: &[f64]) -> (f64, f64) {
    let n = xs.len();
    if n == 0 {
        return (f64::NAN, f64::NAN);
    }
    let mean = xs.iter().sum::<f64>() / n as f64;
    let batches = n.min(20);
    if batches < 2 {
        return (mean, 0.0);
    }
    let size = n / batches;
    let means: Vec<f64> = (0..batches)
        .map(|b| xs[b * size..(b + 1) * size].iter().sum::<f64>() / size as f64)
        .collect();
    let bm = means.iter().sum::<f64>() / batches as f64;
    let var = means.iter().map(|m| (m - bm).powi(2)).sum::<f64>() / (batches - 1) as f64;
    (mean, (var / batches as f64).sqrt())
}

/// Runs one chain and returns one sample series per estimator.
fn run_chain(
    cfg: &ExperimentConfig,
    maps: &LatticeMaps,
    g: &Graph,
    param: f64,
    stream: u64,
) -> Result<Vec<Vec<f64>>, ExperimentError> {
    let mut rng = RngSpec::new(cfg.seed, stream).rng();
    let width = estimators(cfg.model).len();
    let mut series = vec![Vec::new(); width];
    let mut push = |obs: Vec<f64>| {
        for (s, x) in series.iter_mut().zip(obs) {
            s.push(x);
        }
    };
    let dynamics = cfg.dynamics.unwrap_or(Dynamics::SwendsenWang);
    let sweep =
        |c: &mut SiteConfig, r: &mut rand_chacha::ChaCha8Rng| -> Result<(), ExperimentError> {
            match dynamics {
                Dynamics::Glauber => glauber_sweep(g, c, param, r)?,
                Dynamics::SwendsenWang => swendsen_wang_sweep(g, c, param, r)?,
            }
            Ok(())
        };
    match cfg.model {
        Model::Bernoulli => {
            for _ in 0..cfg.sweeps {
                push(site_observables(
                    &sample_bernoulli(g, param, &mut rng)?,
                    maps,
                )?);
            }
        }
        Model::Ising => {
            let mut c = random_start(g, cfg.boundary.site()?, &mut rng);
            for _ in 0..cfg.burn_in {
                sweep(&mut c, &mut rng)?;
            }
            for t in 1..=cfg.sweeps {
                sweep(&mut c, &mut rng)?;
                if t % cfg.thinning == 0 {
                    push(site_observables(&c, maps)?);
                }
            }
        }
        Model::Xor => {
            let mut rng2 = RngSpec::new(cfg.seed, stream + 1).rng();
            let boundary = cfg.boundary.site()?;
            let mut a = random_start(g, boundary, &mut rng);
            let mut b = random_start(g, boundary, &mut rng2);
            for _ in 0..cfg.burn_in {
                sweep(&mut a, &mut rng)?;
                sweep(&mut b, &mut rng2)?;
            }
            for t in 1..=cfg.sweeps {
                sweep(&mut a, &mut rng)?;
                sweep(&mut b, &mut rng2)?;
                if t % cfg.thinning == 0 {
                    let x = xor_of(&a, &b).map_err(|e| ExperimentError::Config(e.to_string()))?;
                    push(site_observables(&x.sigma_xor, maps)?);
                }
            }
        }
        Model::Fk => {
            let q = cfg.q.unwrap_or(2.0);
            let mut bonds = BondConfig {
                map_ref: g.map_ref(),
                states: (0..g.num_edges())
                    .map(|_| u8::from(rng.gen::<bool>()))
                    .collect(),
                boundary_condition: cfg.boundary.bond()?,
            };
            for _ in 0..cfg.burn_in {
                fk_heatbath_sweep(g, &mut bonds, param, q, &mut rng)?;
            }
            for t in 1..=cfg.sweeps {
                fk_heatbath_sweep(g, &mut bonds, param, q, &mut rng)?;
                if t % cfg.thinning == 0 {
                    push(bond_observables(&bonds, maps)?);
                }
            }
        }
    }
    Ok(series)
}

/// Reads the sweep budget from [`BUDGET_ENV`]; unset means unlimited.
pub fn budget_from_env() -> Result<Option<u64>, ExperimentError> {
    match std::env::var(BUDGET_ENV) {
        Ok(v) => v.trim().parse().map(Some).map_err(|_| {
            ExperimentError::Config(format!("{BUDGET_ENV}={v} is not a nonnegative integer"))
        }),
        Err(_) => Ok(None),
    }
}

/// Runs every (grid point, radius, chain) unit and returns one record per
/// estimator and chain, ordered by grid point, radius, chain, estimator.
/// Chain `c` of unit index `u` uses stream `2u` (and `2u + 1` for the
/// second XOR copy), so the output depends only on the config.
pub fn run_sweep(
    cfg: &ExperimentConfig,
    budget: Option<u64>,
) -> Result<Vec<RunRecord>, ExperimentError> {
    cfg.validate()?;
    if let Some(budget) = budget {
        let requested = cfg.work();
        if requested > budget {
            return Err(ExperimentError::BudgetExceeded { requested, budget });
        }
    }
    let mut balls = Vec::with_capacity(cfg.radii.len());
    for &r in &cfg.radii {
        let maps = LatticeMaps::new(build_ball(&BallSpec::new(cfg.tiling.clone(), r))?)?;
        let g = Graph::new(&maps.primal);
        balls.push((maps, g));
    }
    let units: Vec<(usize, usize, usize)> = (0..cfg.grid.len())
        .flat_map(|i| {
            (0..cfg.radii.len()).flat_map(move |r| (0..cfg.chains).map(move |c| (i, r, c)))
        })
        .collect();
    let names = estimators(cfg.model);
    let results: Vec<Result<Vec<RunRecord>, ExperimentError>> = units
        .par_iter()
        .enumerate()
        .map(|(u, &(i, r, _))| {
            let stream = 2 * u as u64;
            let (maps, g) = &balls[r];
            let series = run_chain(cfg, maps, g, cfg.grid[i], stream)?;
            Ok(names
                .iter()
                .zip(series)
                .map(|(name, xs)| {
                    let (value, stderr) = mean_and_stderr(&xs);
                    RunRecord {
                        tiling: cfg.tiling.clone(),
                        radius: cfg.radii[r],
                        model: cfg.model,
                        param_name: cfg.param_name().into(),
                        param: cfg.grid[i],
                        boundary: cfg.boundary,
                        q: cfg.q,
                        dynamics: cfg.dynamics,
                        chains: cfg.chains,
                        sweeps: cfg.sweeps,
                        burn_in: cfg.burn_in,
                        thinning: cfg.thinning,
                        seed: cfg.seed,
                        stream_id: stream,
                        estimator: (*name).into(),
                        value,
                        stderr,
                        sample_count: xs.len(),
                    }
                })
                .collect())
        })
        .collect();
    let mut out = Vec::with_capacity(units.len() * names.len());
    for r in results {
        out.extend(r?);
    }
    Ok(out)
}

pub fn write_jsonl<W: Write>(records: &[RunRecord], mut w: W) -> std::io::Result<()> {
    for r in records {
        serde_json::to_writer(&mut w, r)?;
        w.write_all(b"\n")?;
    }
    w.flush()
}

pub fn read_jsonl(text: &str) -> Result<Vec<RunRecord>, serde_json::Error> {
    text.lines()
        .filter(|l| !l.trim().is_empty())
        .map(serde_json::from_str)
        .collect()
}
