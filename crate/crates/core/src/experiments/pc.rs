use serde::{Deserialize, Serialize};

use super::ExperimentError;
use crate::clusters::{DisjointSets, SiteBoundary};
use crate::planar_map::{build_ball, BallSpec, TilingSpec};
use crate::samplers::{sample_bernoulli, Graph, RngSpec};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PcPlan {
    /// Increasing values of `p`.
    pub grid: Vec<f64>,
    /// Configurations per `(R, p)`.
    pub samples: usize,
    pub seed: u64,
}

/// Finite-size proxy for the site threshold: the `p` at which the chance
/// that an open vertex of the seed face is joined to the outer boundary by
/// open vertices reaches one half.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PcEstimate {
    pub tiling: TilingSpec,
    pub radii: Vec<u32>,
    pub grid: Vec<f64>,
    pub samples: usize,
    /// `reach[i][k]`: estimated probability at `radii[i]`, `grid[k]`.
    pub reach: Vec<Vec<f64>>,
    /// Crossing of one half per radius, by linear interpolation.
    pub crossings: Vec<Option<f64>>,
    /// Intercept of the least-squares line of the crossings against `1/R`,
    /// clamped to the grid.
    pub estimate: f64,
    /// Smallest and largest of the crossings and the estimate.
    pub bracket: (f64, f64),
}

fn reaches(g: &Graph, seed_face: &[usize], states: &[u8]) -> bool {
    let mut ds = DisjointSets::new(g.num_vertices());
    for &(u, v) in g.edges() {
        if states[u] == 1 && states[v] == 1 {
            ds.union(u, v);
        }
    }
    let mut hit = vec![false; g.num_vertices()];
    for &b in g.boundary() {
        if states[b] == 1 {
            let r = ds.find(b);
            hit[r] = true;
        }
    }
    seed_face.iter().any(|&v| states[v] == 1 && hit[ds.find(v)])
}

fn crossing(grid: &[f64], reach: &[f64]) -> Option<f64> {
    let k = reach.iter().position(|&r| r >= 0.5)?;
    if k == 0 {
        return Some(grid[0]);
    }
    let (p0, p1, r0, r1) = (grid[k - 1], grid[k], reach[k - 1], reach[k]);
    Some(p0 + (0.5 - r0) * (p1 - p0) / (r1 - r0))
}

/// Value at `x = 0` of the least-squares line through `points`; the mean
/// when all `x` coincide.
fn extrapolate(points: &[(f64, f64)]) -> f64 {
    let n = points.len() as f64;
    let mx = points.iter().map(|p| p.0).sum::<f64>() / n;
    let my = points.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = points.iter().map(|p| (p.0 - mx).powi(2)).sum();
    if sxx == 0.0 {
        return my;
    }
    let sxy: f64 = points.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    my - sxy / sxx * mx
}

pub fn estimate_pc_site(
    tiling: &TilingSpec,
    radii: &[u32],
    plan: &PcPlan,
) -> Result<PcEstimate, ExperimentError> {
    if radii.len() < 3 {
        return Err(ExperimentError::InsufficientData(format!(
            "{} radii, need at least 3",
            radii.len()
        )));
    }
    if plan.grid.is_empty() || plan.samples == 0 || plan.grid.windows(2).any(|w| w[0] >= w[1]) {
        return Err(ExperimentError::Config(
            "grid must be nonempty and increasing, samples positive".into(),
        ));
    }
    // Vertices 0..m of a ball are the seed face.
    let m = tiling.face_degrees()[0];
    let seed_face: Vec<usize> = (0..m).collect();
    let mut reach = Vec::with_capacity(radii.len());
    for (i, &r) in radii.iter().enumerate() {
        let g = Graph::new(&build_ball(&BallSpec::new(tiling.clone(), r))?);
        let mut row = Vec::with_capacity(plan.grid.len());
        for (k, &p) in plan.grid.iter().enumerate() {
            let mut rng = RngSpec::new(plan.seed, (i * plan.grid.len() + k) as u64).rng();
            let mut hits = 0usize;
            for _ in 0..plan.samples {
                let omega = sample_bernoulli(&g, p, &mut rng)?;
                debug_assert_eq!(omega.boundary_condition, SiteBoundary::Free);
                hits += usize::from(reaches(&g, &seed_face, &omega.states));
            }
            row.push(hits as f64 / plan.samples as f64);
        }
        reach.push(row);
    }
    let crossings: Vec<Option<f64>> = reach.iter().map(|row| crossing(&plan.grid, row)).collect();
    let points: Vec<(f64, f64)> = radii
        .iter()
        .zip(&crossings)
        .filter_map(|(&r, c)| c.map(|c| (1.0 / f64::from(r.max(1)), c)))
        .collect();
    if points.len() < 2 {
        return Err(ExperimentError::InsufficientData(format!(
            "one half is crossed at {} radii, need at least 2",
            points.len()
        )));
    }
    let estimate = extrapolate(&points).clamp(plan.grid[0], plan.grid[plan.grid.len() - 1]);
    let values = points.iter().map(|&(_, c)| c).chain([estimate]);
    let lo = values.clone().fold(f64::INFINITY, f64::min);
    let hi = values.fold(f64::NEG_INFINITY, f64::max);
    Ok(PcEstimate {
        tiling: tiling.clone(),
        radii: radii.to_vec(),
        grid: plan.grid.clone(),
        samples: plan.samples,
        reach,
        crossings,
        estimate,
        bracket: (lo, hi),
    })
}
