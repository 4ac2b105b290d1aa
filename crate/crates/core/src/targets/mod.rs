//! Optimal target Young functions for fractional embeddings and the
//! integral conditions they rest on.

mod compact;
mod conditions;
mod hat;
mod sobolev;

use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

pub use compact::{compact_target_test, CompactEvidence, InverseRatioTrace};
pub use conditions::{check_integral_conditions, ConditionReport, Verdict};
pub use hat::{build_hat, HatFunction};
pub use sobolev::{build_h, build_sobolev_conjugate, SobolevConjugate};

use crate::error::{Error, Result};

/// Dimension `n` and smoothness `s ∈ (0, n)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FractionalParams {
    pub n: u32,
    pub s: f64,
}

impl FractionalParams {
    pub fn new(n: u32, s: f64) -> Result<Self> {
        if n == 0 || !(s > 0.0 && s < n as f64) {
            return Err(Error::Parameter(format!("need n >= 1 and 0 < s < n, got n = {n}, s = {s}")));
        }
        Ok(FractionalParams { n, s })
    }

    /// Same, additionally requiring a non-integer `s` as seminorms do.
    pub fn fractional(n: u32, s: f64) -> Result<Self> {
        let fp = Self::new(n, s)?;
        if s.fract() == 0.0 {
            return Err(Error::Parameter(format!("s must not be an integer, got {s}")));
        }
        Ok(fp)
    }

    pub fn nf(&self) -> f64 {
        self.n as f64
    }

    /// `n/s`.
    pub fn ratio(&self) -> f64 {
        self.nf() / self.s
    }

    /// `s/(n−s)`, the exponent of the integrand of `H`.
    pub fn q(&self) -> f64 {
        self.s / (self.nf() - self.s)
    }

    /// Integer part `[s]`.
    pub fn order(&self) -> u32 {
        self.s.floor() as u32
    }
}

/// How builders treat an indeterminate condition check.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct BuildOptions {
    /// Proceed when a condition sits on the critical exponent and the
    /// numerical test cannot decide it.
    pub allow_indeterminate: bool,
}

type ScalarFn = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

/// Strictly increasing scalar map with its inverse.
#[derive(Clone)]
pub struct MonotoneMap {
    label: String,
    forward: ScalarFn,
    inverse: ScalarFn,
    /// `sup` of the range; finite when the map saturates.
    range_sup: f64,
}

impl fmt::Debug for MonotoneMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("MonotoneMap").field("label", &self.label).field("range_sup", &self.range_sup).finish()
    }
}

impl MonotoneMap {
    pub fn new(label: impl Into<String>, forward: ScalarFn, inverse: ScalarFn, range_sup: f64) -> Self {
        MonotoneMap { label: label.into(), forward, inverse, range_sup }
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn eval(&self, t: f64) -> f64 {
        if t <= 0.0 {
            return 0.0;
        }
        (self.forward)(t)
    }

    /// Inverse; `+∞` at or beyond the supremum of the range.
    pub fn inverse(&self, y: f64) -> f64 {
        if y <= 0.0 {
            return 0.0;
        }
        if y >= self.range_sup {
            return f64::INFINITY;
        }
        (self.inverse)(y)
    }

    pub fn range_sup(&self) -> f64 {
        self.range_sup
    }
}

/// Samples `ln t` on which derived functions are checked for convexity.
pub(crate) fn certify_convex(a: &crate::young::YoungFunction, lo: f64, hi: f64) -> Result<()> {
    let n = 200;
    let ts: Vec<f64> = (0..=n).map(|k| (lo + (hi - lo) * k as f64 / n as f64).exp()).collect();
    let mut prev = 0.0;
    for &t in &ts {
        let d = a.density(t);
        if !d.is_finite() {
            break;
        }
        if d < prev * (1.0 - 1e-6) {
            return Err(Error::Precision {
                detail: format!("density of {} decreases near t = {t:e}", a.label()),
                achieved: (prev - d) / prev,
            });
        }
        prev = d;
    }
    Ok(())
}
