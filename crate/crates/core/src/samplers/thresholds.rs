use serde::{Deserialize, Serialize};

use super::{CouplingParams, SamplerError};

fn check_pc(pc: f64) -> Result<(), SamplerError> {
    if pc > 0.0 && pc < 1.0 {
        Ok(())
    } else {
        Err(SamplerError::Domain(format!("p_c = {pc} is not in (0, 1)")))
    }
}

/// Solves `e^{-h} / (e^h + e^{-h}) = p_c`, i.e. `h = ln((1 - p_c) / p_c) / 2`.
/// Requires `p_c < 1/2`.
pub fn h_ising(pc: f64) -> Result<f64, SamplerError> {
    check_pc(pc)?;
    if pc >= 0.5 {
        return Err(SamplerError::Domain(format!(
            "h_ising needs p_c < 1/2, got {pc}"
        )));
    }
    Ok(0.5 * ((1.0 - pc) / pc).ln())
}

/// Solves `2 / (e^h + e^{-h})^2 = p_c`, i.e. `h = arccosh(1 / sqrt(2 p_c))`.
/// Requires `p_c < 1/2`.
pub fn h_xor(pc: f64) -> Result<f64, SamplerError> {
    check_pc(pc)?;
    if pc >= 0.5 {
        return Err(SamplerError::Domain(format!(
            "h_xor needs p_c < 1/2, got {pc}"
        )));
    }
    Ok((1.0 / (2.0 * pc).sqrt()).acosh())
}

/// Lower bound `1 - ((1 - p_c) / p_c)^{1/d}` on the wired random-cluster
/// threshold at q = 2. Requires `p_c >= 1/2`, where the bound is
/// nonnegative.
pub fn pcwl_bound(pc: f64, d: usize) -> Result<f64, SamplerError> {
    check_pc(pc)?;
    if pc < 0.5 {
        return Err(SamplerError::Domain(format!(
            "wired bound needs p_c >= 1/2, got {pc}"
        )));
    }
    if d == 0 {
        return Err(SamplerError::Domain("degree must be positive".into()));
    }
    Ok(1.0 - ((1.0 - pc) / pc).powf(1.0 / d as f64))
}

/// `ln(1 / (1 - p_w)) / 2`, the coupling below which uniqueness follows
/// from the wired threshold `p_w`.
pub fn j_bound_jj3(p_w: f64) -> Result<f64, SamplerError> {
    if !(0.0..1.0).contains(&p_w) {
        return Err(SamplerError::Domain(format!(
            "p_w = {p_w} is not in [0, 1)"
        )));
    }
    Ok(-0.5 * (-p_w).ln_1p())
}

/// `(e^{-dJ}, e^{dJ}) / (e^{dJ} + e^{-dJ})`: Bernoulli parameters below and
/// above which the Ising measures are dominated.
pub fn ising_window(j: f64, d: usize) -> (f64, f64) {
    let x = d as f64 * j;
    // Written with a logistic form to stay finite for large dJ.
    (
        1.0 / (1.0 + (2.0 * x).exp()),
        1.0 / (1.0 + (-2.0 * x).exp()),
    )
}

/// `(2 / (e^{dJ} + e^{-dJ})^2, (e^{2dJ} + e^{-2dJ}) / (e^{dJ} + e^{-dJ})^2)`,
/// the window for the XOR-Ising model.
pub fn xor_window(j: f64, d: usize) -> (f64, f64) {
    let x = d as f64 * j;
    let c = x.cosh();
    let lo = 1.0 / (2.0 * c * c);
    let hi = (2.0 * x).cosh() / (2.0 * c * c);
    (lo, hi)
}

/// Every threshold quantity for one `(J, d, p_c)`. Quantities whose side
/// condition on `p_c` fails are `None`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ThresholdReport {
    pub p_c_site: f64,
    pub d: usize,
    pub j: f64,
    pub h_ising: Option<f64>,
    pub h_xor: Option<f64>,
    pub j_max_ising: Option<f64>,
    pub j_max_xor: Option<f64>,
    pub pcwl_bound: Option<f64>,
    /// From the wired bound when it is defined.
    pub j_bound_jj3: Option<f64>,
    pub ising_window: (f64, f64),
    pub xor_window: (f64, f64),
}

pub fn thresholds(params: &CouplingParams, pc: f64) -> Result<ThresholdReport, SamplerError> {
    check_pc(pc)?;
    let d = params.d;
    let hi = h_ising(pc).ok();
    let hx = h_xor(pc).ok();
    let pw = pcwl_bound(pc, d).ok();
    Ok(ThresholdReport {
        p_c_site: pc,
        d,
        j: params.j,
        h_ising: hi,
        h_xor: hx,
        j_max_ising: hi.map(|h| h / d as f64),
        j_max_xor: hx.map(|h| h / d as f64),
        pcwl_bound: pw,
        j_bound_jj3: pw.and_then(|p| j_bound_jj3(p).ok()),
        ising_window: ising_window(params.j, d),
        xor_window: xor_window(params.j, d),
    })
}
