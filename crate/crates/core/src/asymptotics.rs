//! Convergence tests for integrals at 0 or ∞ from the local growth of the
//! integrand, with a logarithmic second stage at the critical exponent.

use serde::Serialize;

/// Half-width of the band around a critical exponent inside which a
/// numerical test is considered inconclusive.
pub const CRITICAL_BAND: f64 = 0.01;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Convergence {
    Converges,
    Diverges,
    Indeterminate,
}

/// Outcome of a tail probe.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TailProbe {
    pub verdict: Convergence,
    /// Growth rate of `g` per unit of `|w|` (negative means decay).
    pub rate: f64,
    /// Exponent `β` of a residual `|w|^{-β}` factor, measured only when the
    /// rate sits in the critical band.
    pub log_rate: Option<f64>,
    /// Magnitude of the probe points `|w|`.
    pub window: f64,
}

/// Decides convergence of `∫ exp(g(w)) dw` as `w → dir·∞`, where `g` is the
/// logarithm of the integrand in the logarithmic variable. The probe samples
/// `g` at `|w| = W` and `2W`, halving `W` until both values are finite.
pub fn probe_tail(g: impl Fn(f64) -> f64, dir: f64, window: f64) -> TailProbe {
    let mut w = window;
    for _ in 0..60 {
        let g1 = g(dir * w);
        let g2 = g(dir * 2.0 * w);
        if g1.is_finite() && g2.is_finite() {
            let rate = (g2 - g1) / w;
            if rate > CRITICAL_BAND {
                return TailProbe { verdict: Convergence::Diverges, rate, log_rate: None, window: w };
            }
            if rate < -CRITICAL_BAND {
                return TailProbe { verdict: Convergence::Converges, rate, log_rate: None, window: w };
            }
            let beta = -(g2 - g1) / std::f64::consts::LN_2;
            let verdict = if (beta - 1.0).abs() <= CRITICAL_BAND {
                Convergence::Indeterminate
            } else if beta > 1.0 {
                Convergence::Converges
            } else {
                Convergence::Diverges
            };
            return TailProbe { verdict, rate, log_rate: Some(beta), window: w };
        }
        if g1 == f64::NEG_INFINITY && g2 == f64::NEG_INFINITY && w < 1.0 {
            break;
        }
        w *= 0.5;
    }
    TailProbe { verdict: Convergence::Indeterminate, rate: f64::NAN, log_rate: None, window: w }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn power_tails() {
        // ∫^∞ t^{-2} dt: g(w) = -w.
        assert_eq!(probe_tail(|w| -w, 1.0, 1e4).verdict, Convergence::Converges);
        // ∫_0 t^{-1} dt: g(w) = 0.
        assert_eq!(probe_tail(|_| 0.0, -1.0, 1e4).verdict, Convergence::Diverges);
        // ∫^∞ dt/(t log^2 t): g = -2 ln w.
        assert_eq!(probe_tail(|w: f64| -2.0 * w.ln(), 1.0, 1e4).verdict, Convergence::Converges);
        // ∫^∞ dt/(t log t): critical.
        assert_eq!(probe_tail(|w: f64| -w.ln(), 1.0, 1e4).verdict, Convergence::Indeterminate);
    }
}
