use serde::{Deserialize, Serialize};

use super::{ExactMeasure, OracleError};

/// Largest `n` for the 4^n pair check.
pub const MAX_HOLLEY_BITS: usize = 10;
/// Largest `n` for enumerating every increasing event.
pub const MAX_UPSET_BITS: usize = 5;

const REL_TOL: f64 = 1e-12;
// Pairs at equality lose about `eps / min(p, 1 - p)` when a product
// measure sits at a window edge close to 0 or 1.
const HOLLEY_REL_TOL: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CertReport {
    pub n: usize,
    pub pairs_checked: usize,
    /// True when the lattice condition holds for every pair, which proves
    /// `mu1 ≼ mu2`.
    pub holds: bool,
    /// A pair `(ω1, ω2)` violating the condition.
    pub witness: Option<(usize, usize)>,
    /// Smallest ratio `mu2(ω1 ∨ ω2) mu1(ω1 ∧ ω2) / (mu1(ω1) mu2(ω2))`.
    pub min_ratio: f64,
}

fn check_pair(mu1: &ExactMeasure, mu2: &ExactMeasure, limit: usize) -> Result<(), OracleError> {
    if !mu1.same_support(mu2) {
        return Err(OracleError::SupportMismatch(format!(
            "free cells {:?} vs {:?}",
            mu1.free, mu2.free
        )));
    }
    if mu1.n() > limit {
        return Err(OracleError::TooLarge(format!(
            "{} free cells, limit {limit}",
            mu1.n()
        )));
    }
    Ok(())
}

/// Holley's lattice condition
/// `mu2(ω1 ∨ ω2) mu1(ω1 ∧ ω2) >= mu1(ω1) mu2(ω2)` over all pairs, with a
/// relative tolerance of 1e-9.
pub fn holley_check(mu1: &ExactMeasure, mu2: &ExactMeasure) -> Result<CertReport, OracleError> {
    check_pair(mu1, mu2, MAX_HOLLEY_BITS)?;
    for mu in [mu1, mu2] {
        if let Some(i) = mu.weights.iter().position(|&w| !(w > 0.0)) {
            return Err(OracleError::NonPositive(i));
        }
    }
    let m = mu1.len();
    let mut witness = None;
    let mut min_ratio = f64::INFINITY;
    for a in 0..m {
        for b in 0..m {
            let lhs = mu2.weights[a | b] * mu1.weights[a & b];
            let rhs = mu1.weights[a] * mu2.weights[b];
            let ratio = lhs / rhs;
            if ratio < min_ratio {
                min_ratio = ratio;
            }
            if lhs < rhs * (1.0 - HOLLEY_REL_TOL) && witness.is_none() {
                witness = Some((a, b));
            }
        }
    }
    Ok(CertReport {
        n: mu1.n(),
        pairs_checked: m * m,
        holds: witness.is_none(),
        witness,
        min_ratio,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum DominationMode {
    /// Every increasing event; `n <= 5`.
    Exhaustive,
    /// Single-cell marginals and the mean number of ones, which are
    /// necessary conditions only.
    Marginal,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DominationReport {
    pub mode: DominationMode,
    pub events_checked: usize,
    /// `mu1(A) <= mu2(A)` held for every event checked.
    pub dominated: bool,
    /// Support points of a violating increasing event, or the violating
    /// cell in marginal mode.
    pub witness: Option<Vec<usize>>,
    pub max_violation: f64,
}

struct UpSets<'a> {
    order: Vec<usize>,
    inside: Vec<bool>,
    w1: &'a [f64],
    w2: &'a [f64],
    n: usize,
    events: usize,
    worst: f64,
    witness: Option<Vec<usize>>,
}

impl UpSets<'_> {
    // Points are decided from the top of the cube down, so an included
    // point's immediate successors are already decided.
    fn walk(&mut self, k: usize, s1: f64, s2: f64) {
        if k == self.order.len() {
            self.events += 1;
            let excess = s1 - s2;
            if excess > REL_TOL * s2.max(1e-300) && excess > self.worst {
                self.worst = excess;
                self.witness = Some((0..self.inside.len()).filter(|&x| self.inside[x]).collect());
            }
            return;
        }
        let x = self.order[k];
        self.walk(k + 1, s1, s2);
        let closed = (0..self.n).all(|b| x >> b & 1 == 1 || self.inside[x | 1 << b]);
        if closed {
            self.inside[x] = true;
            self.walk(k + 1, s1 + self.w1[x], s2 + self.w2[x]);
            self.inside[x] = false;
        }
    }
}

/// Evidence that `mu1 ≼ mu2`, i.e. `mu1(A) <= mu2(A)` for increasing `A`.
pub fn domination_evidence(
    mu1: &ExactMeasure,
    mu2: &ExactMeasure,
    mode: DominationMode,
) -> Result<DominationReport, OracleError> {
    match mode {
        DominationMode::Exhaustive => {
            check_pair(mu1, mu2, MAX_UPSET_BITS)?;
            let n = mu1.n();
            let mut order: Vec<usize> = (0..1usize << n).collect();
            order.sort_by_key(|&x| std::cmp::Reverse((x.count_ones(), x)));
            let mut walker = UpSets {
                order,
                inside: vec![false; 1 << n],
                w1: &mu1.weights,
                w2: &mu2.weights,
                n,
                events: 0,
                worst: 0.0,
                witness: None,
            };
            walker.walk(0, 0.0, 0.0);
            Ok(DominationReport {
                mode,
                events_checked: walker.events,
                dominated: walker.witness.is_none(),
                witness: walker.witness,
                max_violation: walker.worst,
            })
        }
        DominationMode::Marginal => {
            check_pair(mu1, mu2, usize::MAX)?;
            let mut worst = 0.0;
            let mut witness = None;
            for &cell in &mu1.free {
                let excess = mu1.marginal(cell) - mu2.marginal(cell);
                if excess > REL_TOL && excess > worst {
                    worst = excess;
                    witness = Some(vec![cell]);
                }
            }
            let ones = |mu: &ExactMeasure| mu.expect(|c| c.iter().map(|&s| f64::from(s)).sum());
            let excess = ones(mu1) - ones(mu2);
            if excess > REL_TOL && excess > worst {
                worst = excess;
                witness = Some(mu1.free.clone());
            }
            Ok(DominationReport {
                mode,
                events_checked: mu1.n() + 1,
                dominated: witness.is_none(),
                witness,
                max_violation: worst,
            })
        }
    }
}
