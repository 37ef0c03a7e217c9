use std::collections::BTreeMap;

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::{ExperimentError, RunRecord};

pub const BOOTSTRAP_RESAMPLES: usize = 1000;
pub const TREND_CONFIDENCE: f64 = 0.95;
const BOOTSTRAP_SEED: u64 = 0x7e4d_0001;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Trend {
    Increasing,
    Flat,
    Decreasing,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrendReport {
    pub estimator: String,
    pub radii: Vec<u32>,
    pub chains: Vec<usize>,
    pub medians: Vec<f64>,
    pub means: Vec<f64>,
    /// Least-squares slope of the per-radius means against R.
    pub slope: f64,
    /// Fraction of bootstrap slopes above (below) zero.
    pub p_increasing: f64,
    pub p_decreasing: f64,
    /// Fraction of bootstrap resamples whose per-radius means are
    /// nondecreasing in R.
    pub monotone_fraction: f64,
    pub trend: Trend,
    pub confidence: f64,
    pub resamples: usize,
}

fn median(xs: &[f64]) -> f64 {
    let mut v = xs.to_vec();
    v.sort_by(f64::total_cmp);
    let n = v.len();
    if n % 2 == 1 {
        v[n / 2]
    } else {
        0.5 * (v[n / 2 - 1] + v[n / 2])
    }
}

fn slope(xs: &[f64], ys: &[f64]) -> f64 {
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    sxy / sxx
}

/// One-sided bootstrap test for growth of `estimator` in R. Chain values
/// are resampled with replacement within each radius; the trend is
/// increasing (decreasing) when at least [`TREND_CONFIDENCE`] of the
/// resampled slopes are positive (negative), flat otherwise.
pub fn growth_trend(
    records: &[RunRecord],
    estimator: &str,
) -> Result<TrendReport, ExperimentError> {
    let chosen: Vec<&RunRecord> = records
        .iter()
        .filter(|r| r.estimator == estimator)
        .collect();
    if let Some(first) = chosen.first() {
        if chosen.iter().any(|r| r.param != first.param) {
            return Err(ExperimentError::Config(format!(
                "records for {estimator} span several grid points; filter to one first"
            )));
        }
    }
    let mut by_r: BTreeMap<u32, Vec<f64>> = BTreeMap::new();
    for r in chosen {
        by_r.entry(r.radius).or_default().push(r.value);
    }
    if by_r.len() < 3 {
        return Err(ExperimentError::InsufficientData(format!(
            "{estimator}: {} radii, need at least 3",
            by_r.len()
        )));
    }
    if let Some((r, v)) = by_r.iter().find(|(_, v)| v.len() < 2) {
        return Err(ExperimentError::InsufficientData(format!(
            "{estimator}: radius {r} has {} chain(s), need at least 2",
            v.len()
        )));
    }
    let radii: Vec<u32> = by_r.keys().copied().collect();
    let xs: Vec<f64> = radii.iter().map(|&r| f64::from(r)).collect();
    let groups: Vec<&Vec<f64>> = by_r.values().collect();
    let mean = |v: &[f64]| v.iter().sum::<f64>() / v.len() as f64;
    let means: Vec<f64> = groups.iter().map(|v| mean(v)).collect();
    let medians: Vec<f64> = groups.iter().map(|v| median(v)).collect();

    let mut rng = ChaCha8Rng::seed_from_u64(BOOTSTRAP_SEED);
    let (mut up, mut down, mut mono) = (0usize, 0usize, 0usize);
    let mut ys = vec![0.0; groups.len()];
    for _ in 0..BOOTSTRAP_RESAMPLES {
        for (y, v) in ys.iter_mut().zip(&groups) {
            *y = (0..v.len())
                .map(|_| v[rng.gen_range(0..v.len())])
                .sum::<f64>()
                / v.len() as f64;
        }
        let s = slope(&xs, &ys);
        up += usize::from(s > 0.0);
        down += usize::from(s < 0.0);
        mono += usize::from(ys.windows(2).all(|w| w[0] <= w[1]));
    }
    let b = BOOTSTRAP_RESAMPLES as f64;
    let (p_inc, p_dec) = (up as f64 / b, down as f64 / b);
    let (trend, confidence) = if p_inc >= TREND_CONFIDENCE {
        (Trend::Increasing, p_inc)
    } else if p_dec >= TREND_CONFIDENCE {
        (Trend::Decreasing, p_dec)
    } else {
        (Trend::Flat, 1.0 - p_inc.max(p_dec))
    };
    Ok(TrendReport {
        estimator: estimator.into(),
        chains: groups.iter().map(|v| v.len()).collect(),
        radii,
        medians,
        slope: slope(&xs, &means),
        means,
        p_increasing: p_inc,
        p_decreasing: p_dec,
        monotone_fraction: mono as f64 / b,
        trend,
        confidence,
        resamples: BOOTSTRAP_RESAMPLES,
    })
}
