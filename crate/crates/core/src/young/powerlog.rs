use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Parameters of a power-logarithmic Young function: `t^{p0} (log 1/t)^{α0}`
/// near zero and `t^p (log t)^α` near infinity.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PowerLogParams {
    pub p: f64,
    #[serde(default)]
    pub alpha: f64,
    pub p0: f64,
    #[serde(default)]
    pub alpha0: f64,
    /// Splice point between the two regimes.
    #[serde(default = "one")]
    pub t0: f64,
    /// Offset `ℓ` inside the logarithms, `ℓ + |log(t/t0)|`. Chosen
    /// automatically when absent.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub log_offset: Option<f64>,
}

fn one() -> f64 {
    1.0
}

impl PowerLogParams {
    /// Pure power `t^p`.
    pub fn power(p: f64) -> Self {
        PowerLogParams { p, alpha: 0.0, p0: p, alpha0: 0.0, t0: 1.0, log_offset: None }
    }

    /// `t^p (log t)^α` near infinity, `t^p` near zero.
    pub fn at_infinity(p: f64, alpha: f64) -> Self {
        PowerLogParams { alpha, ..Self::power(p) }
    }

    pub fn with_zero(mut self, p0: f64, alpha0: f64) -> Self {
        self.p0 = p0;
        self.alpha0 = alpha0;
        self
    }
}

/// Spliced power-log Young function.
///
/// With `L0 = ℓ + ln(t0/t)` and `L∞ = ℓ + ln(t/t0)`:
/// `A(t) = t^{p0} L0^{α0}` for `t ≤ t0` and
/// `A(t) = A(t0) + κ (t^p L∞^α − t0^p ℓ^α)` beyond, where `κ` makes the
/// density continuous at `t0`.
#[derive(Debug, Clone, PartialEq)]
pub struct PowerLog {
    params: PowerLogParams,
    offset: f64,
    kappa: f64,
    ln_t0: f64,
    at_splice: f64,
    shift: f64,
    pure: bool,
}

const MAX_OFFSET_DOUBLINGS: u32 = 12;

impl PowerLog {
    pub fn new(params: PowerLogParams) -> Result<Self> {
        let PowerLogParams { p, alpha, p0, alpha0, t0, log_offset } = params;
        for (name, v) in [("p", p), ("alpha", alpha), ("p0", p0), ("alpha0", alpha0), ("t0", t0)] {
            if !v.is_finite() {
                return Err(Error::Parameter(format!("{name} must be finite, got {v}")));
            }
        }
        if t0 <= 0.0 {
            return Err(Error::Parameter(format!("splice point must be positive, got {t0}")));
        }
        if p0 < 1.0 || (p0 == 1.0 && alpha0 > 0.0) {
            return Err(Error::Admissibility(format!(
                "near zero need p0 > 1, or p0 = 1 with alpha0 <= 0 (got p0 = {p0}, alpha0 = {alpha0})"
            )));
        }
        if p < 1.0 || (p == 1.0 && alpha < 0.0) {
            return Err(Error::Admissibility(format!(
                "near infinity need p > 1, or p = 1 with alpha >= 0 (got p = {p}, alpha = {alpha})"
            )));
        }
        let pure = p == p0 && alpha == 0.0 && alpha0 == 0.0;
        let candidates: Vec<f64> = match log_offset {
            Some(l) if l >= 1.0 && l.is_finite() => vec![l],
            Some(l) => return Err(Error::Parameter(format!("log offset must be >= 1, got {l}"))),
            None => (0..=MAX_OFFSET_DOUBLINGS).map(|k| 2f64.powi(k as i32)).collect(),
        };
        for offset in candidates {
            let mut f = PowerLog { params, offset, kappa: 1.0, ln_t0: t0.ln(), at_splice: 0.0, shift: 0.0, pure };
            if f.splice().is_ok() {
                f.params.log_offset = Some(offset);
                return Ok(f);
            }
        }
        Err(Error::Admissibility(format!(
            "no log offset up to 2^{MAX_OFFSET_DOUBLINGS} gives a non-decreasing density for {params:?}"
        )))
    }

    fn splice(&mut self) -> Result<()> {
        let PowerLogParams { p, alpha, p0, alpha0, t0, .. } = self.params;
        let l = self.offset;
        let a0 = t0.powf(p0 - 1.0) * l.powf(alpha0 - 1.0) * (p0 * l - alpha0);
        let ai = t0.powf(p - 1.0) * l.powf(alpha - 1.0) * (p * l + alpha);
        if !(a0 > 0.0 && ai > 0.0) {
            return Err(Error::Admissibility("density not positive at the splice point".into()));
        }
        self.kappa = a0 / ai;
        self.at_splice = t0.powf(p0) * l.powf(alpha0);
        self.shift = self.at_splice - self.kappa * t0.powf(p) * l.powf(alpha);
        // Density must be non-decreasing; check on a wide logarithmic grid.
        let mut prev = 0.0;
        let steps = 2400;
        for k in 0..=steps {
            let w = self.ln_t0 - 60.0 + 120.0 * k as f64 / steps as f64;
            let d = self.density(w.exp());
            if !(d >= 0.0) || d < prev * (1.0 - 1e-12) {
                return Err(Error::Admissibility(format!("density decreases near t = {:e}", w.exp())));
            }
            prev = d;
        }
        Ok(())
    }

    pub fn params(&self) -> PowerLogParams {
        self.params
    }

    /// Exponent when the function is exactly `t^p`.
    pub fn pure_power(&self) -> Option<f64> {
        self.pure.then_some(self.params.p)
    }

    pub fn eval(&self, t: f64) -> f64 {
        if t <= 0.0 {
            return if t == 0.0 { 0.0 } else { f64::NAN };
        }
        if self.pure {
            return t.powf(self.params.p);
        }
        let PowerLogParams { p, alpha, p0, alpha0, t0, .. } = self.params;
        if t <= t0 {
            let l0 = self.offset + (t0 / t).ln();
            t.powf(p0) * l0.powf(alpha0)
        } else {
            let li = self.offset + (t / t0).ln();
            self.shift + self.kappa * t.powf(p) * li.powf(alpha)
        }
    }

    pub fn density(&self, t: f64) -> f64 {
        let PowerLogParams { p, alpha, p0, alpha0, t0, .. } = self.params;
        if t <= 0.0 {
            return if p0 == 1.0 && alpha0 == 0.0 { 1.0 } else { 0.0 };
        }
        if self.pure {
            return p * t.powf(p - 1.0);
        }
        if t <= t0 {
            let l0 = self.offset + (t0 / t).ln();
            t.powf(p0 - 1.0) * l0.powf(alpha0 - 1.0) * (p0 * l0 - alpha0)
        } else {
            let li = self.offset + (t / t0).ln();
            self.kappa * t.powf(p - 1.0) * li.powf(alpha - 1.0) * (p * li + alpha)
        }
    }

    /// `ln A(e^w)`, valid for arbitrarily large `|w|`.
    pub fn ln_eval_ln(&self, w: f64) -> f64 {
        let PowerLogParams { p, alpha, p0, alpha0, .. } = self.params;
        if self.pure {
            return p * w;
        }
        if w <= self.ln_t0 {
            p0 * w + alpha0 * (self.offset + self.ln_t0 - w).ln()
        } else {
            let ln_inf = p * w + alpha * (self.offset + w - self.ln_t0).ln();
            let lead = self.kappa.ln() + ln_inf;
            lead + (self.shift * (-lead).exp()).ln_1p()
        }
    }

    /// Whether the density stays bounded.
    pub fn bounded_density(&self) -> Option<f64> {
        let PowerLogParams { p, alpha, .. } = self.params;
        (p == 1.0 && alpha == 0.0).then_some(self.kappa)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pure_power_matches_monomial() {
        let f = PowerLog::new(PowerLogParams::power(2.0)).unwrap();
        assert_eq!(f.eval(3.0), 9.0);
        assert_eq!(f.density(3.0), 6.0);
    }

    #[test]
    fn splice_is_continuous() {
        let f = PowerLog::new(PowerLogParams::at_infinity(2.0, 1.0)).unwrap();
        let e = 1e-9;
        assert!((f.eval(1.0 + e) - f.eval(1.0 - e)).abs() < 1e-8);
        assert!((f.density(1.0 + e) - f.density(1.0 - e)).abs() < 1e-7);
        assert!((f.ln_eval_ln(50.0) - f.eval(50f64.exp()).ln()).abs() < 1e-12);
    }

    #[test]
    fn inadmissible_parameters_are_rejected() {
        assert!(PowerLog::new(PowerLogParams::power(0.5)).is_err());
        assert!(PowerLog::new(PowerLogParams::at_infinity(1.0, -1.0)).is_err());
        assert!(PowerLog::new(PowerLogParams::power(2.0).with_zero(1.0, 0.5)).is_err());
    }

    #[test]
    fn offset_grows_for_strong_log_near_zero() {
        let f = PowerLog::new(PowerLogParams::power(2.0).with_zero(4.0, 3.5)).unwrap();
        assert!(f.params().log_offset.unwrap() > 1.0);
    }
}
