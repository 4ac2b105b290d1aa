//! Outcomes of inequality checks.

use serde::{Deserialize, Serialize};

/// Where the error budget of a check comes from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ErrorSource {
    /// Exact sums; only rounding.
    Rounding,
    /// Deterministic quadrature, budget from comparing two rules.
    Quadrature,
    /// Monte Carlo, budget in standard errors.
    MonteCarlo,
    /// Bisection on a scale parameter.
    Bisection,
}

/// Outcome of one inequality check `lhs ≤ constant · rhs` (or its modular
/// analogue), with the budget that was allowed.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub id: String,
    pub reference: String,
    pub lhs: f64,
    pub rhs: f64,
    /// Constant found or used; `None` when the check has none.
    pub constant: Option<f64>,
    pub budget: f64,
    /// Relative slack on `rhs`. Closeness and drift checks built by
    /// [`VerificationReport::bounded`] record here the tolerance `rhs` was
    /// scaled from instead.
    pub tolerance: f64,
    pub error_source: ErrorSource,
    pub pass: bool,
    /// Set when a side diverged and the check holds vacuously.
    #[serde(default)]
    pub vacuous: bool,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
}

impl VerificationReport {
    /// `lhs ≤ rhs·(1 + tolerance) + budget`.
    pub fn compare(
        id: impl Into<String>,
        reference: impl Into<String>,
        lhs: f64,
        rhs: f64,
        tolerance: f64,
        budget: f64,
        error_source: ErrorSource,
    ) -> Self {
        let vacuous = rhs.is_infinite();
        let pass = vacuous || lhs <= rhs * (1.0 + tolerance) + budget;
        VerificationReport {
            id: id.into(),
            reference: reference.into(),
            lhs,
            rhs,
            constant: None,
            budget,
            tolerance,
            error_source,
            pass,
            vacuous,
            notes: Vec::new(),
        }
    }

    /// `value ≤ tolerance·scale`, for deviations and drifts.
    pub fn bounded(
        id: impl Into<String>,
        reference: impl Into<String>,
        value: f64,
        tolerance: f64,
        scale: f64,
        error_source: ErrorSource,
    ) -> Self {
        let mut r = Self::compare(id, reference, value, tolerance * scale, 0.0, 0.0, error_source);
        r.tolerance = tolerance;
        r
    }

    pub fn with_constant(mut self, c: Option<f64>) -> Self {
        self.constant = c;
        self
    }

    pub fn note(mut self, s: impl Into<String>) -> Self {
        self.notes.push(s.into());
        self
    }
}

/// Smallest `C` on the grid `lo·ratio^k ≤ hi` for which `ok(C)` holds,
/// assuming `ok` is monotone in `C`.
pub fn smallest_on_grid(lo: f64, hi: f64, ratio: f64, ok: impl Fn(f64) -> bool) -> Option<f64> {
    let steps = ((hi / lo).ln() / ratio.ln()).ceil() as i64;
    if !ok(lo * ratio.powi(steps as i32)) {
        return None;
    }
    // Monotone predicate: bisection over the grid index.
    let (mut a, mut b) = (-1i64, steps);
    while b - a > 1 {
        let m = (a + b) / 2;
        if ok(lo * ratio.powi(m as i32)) {
            b = m;
        } else {
            a = m;
        }
    }
    Some(lo * ratio.powi(b as i32))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_search_finds_first_passing_point() {
        let c = smallest_on_grid(1e-3, 1e3, 2f64.powf(0.25), |c| c >= 3.0).unwrap();
        assert!(c >= 3.0 && c / 2f64.powf(0.25) < 3.0);
        assert_eq!(smallest_on_grid(1.0, 10.0, 2.0, |c| c > 100.0), None);
        assert_eq!(smallest_on_grid(1.0, 10.0, 2.0, |_| true), Some(1.0));
    }
}
