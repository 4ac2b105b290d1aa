use serde::Serialize;

use super::{build_sobolev_conjugate, BuildOptions, FractionalParams};
use crate::error::Result;
use crate::young::{generalized_inverse, grows_essentially_slower, GrowthConfig, GrowthEvidence, YoungFunction};

/// Samples of `A_{n/s}⁻¹(t)/B⁻¹(t)` on a log grid.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct InverseRatioTrace {
    pub t: Vec<f64>,
    pub ratio: Vec<f64>,
    pub decreasing: bool,
    pub vanishing: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CompactEvidence {
    /// `None` when the two routes disagree.
    pub verdict: Option<bool>,
    pub growth: GrowthEvidence,
    pub inverse_ratio: InverseRatioTrace,
}

const INVERSE_RANGE: (f64, f64) = (2.0, 300.0);
const INVERSE_POINTS: usize = 119;

/// Whether `B` grows essentially more slowly than `A_{n/s}` near infinity,
/// decided both on the functions and on their inverses.
pub fn compact_target_test(
    a: &YoungFunction,
    b: &YoungFunction,
    fp: &FractionalParams,
    opts: BuildOptions,
) -> Result<CompactEvidence> {
    let ans = build_sobolev_conjugate(a, fp, opts)?;
    let cfg = GrowthConfig::default();
    let growth = grows_essentially_slower(b, &ans, &cfg);

    let mut t = Vec::with_capacity(INVERSE_POINTS);
    let mut ratio = Vec::with_capacity(INVERSE_POINTS);
    for k in 0..INVERSE_POINTS {
        let e = INVERSE_RANGE.0 + (INVERSE_RANGE.1 - INVERSE_RANGE.0) * k as f64 / (INVERSE_POINTS - 1) as f64;
        let y = 10f64.powf(e);
        let num = generalized_inverse(&ans, y)?;
        let den = generalized_inverse(b, y)?;
        t.push(y);
        ratio.push(num / den);
    }
    let half = ratio.len() / 2;
    let decreasing = ratio[half..].windows(2).all(|p| p[1] <= p[0] * (1.0 + 1e-9));
    let vanishing = ratio[ratio.len() - 1] < cfg.eps;
    let by_inverse = decreasing && vanishing;
    let verdict = (by_inverse == growth.verdict).then_some(by_inverse);
    Ok(CompactEvidence { verdict, growth, inverse_ratio: InverseRatioTrace { t, ratio, decreasing, vanishing } })
}
