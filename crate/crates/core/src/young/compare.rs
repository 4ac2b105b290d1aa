use serde::{Deserialize, Serialize};

use super::YoungFunction;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Regime {
    Global,
    NearZero,
    NearInfinity,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum IndexRegime {
    Global,
    NearInfinity,
}

/// Sample windows standing in for "near zero" and "near infinity".
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RegimeWindows {
    pub near_zero: (f64, f64),
    pub near_infinity: (f64, f64),
    pub global: (f64, f64),
    pub per_decade: usize,
}

impl Default for RegimeWindows {
    fn default() -> Self {
        RegimeWindows { near_zero: (1e-8, 1e-2), near_infinity: (1e2, 1e8), global: (1e-8, 1e8), per_decade: 10 }
    }
}

impl RegimeWindows {
    fn range(&self, regime: Regime) -> (f64, f64) {
        match regime {
            Regime::Global => self.global,
            Regime::NearZero => self.near_zero,
            Regime::NearInfinity => self.near_infinity,
        }
    }

    fn samples(&self, regime: Regime) -> Vec<f64> {
        let (lo, hi) = self.range(regime);
        log_grid(lo, hi, self.per_decade)
    }
}

fn log_grid(lo: f64, hi: f64, per_decade: usize) -> Vec<f64> {
    let (a, b) = (lo.log10(), hi.log10());
    let n = (((b - a) * per_decade as f64).round() as usize).max(1);
    (0..=n).map(|k| 10f64.powf(a + (b - a) * k as f64 / n as f64)).collect()
}

/// Outcome of a domination search `B(t) ≤ A(Ct)`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ComparisonVerdict {
    pub regime: Regime,
    pub dominates: bool,
    pub constant: Option<f64>,
    /// End of the sampled window that bounds the regime (`t ≤ t0` near zero,
    /// `t ≥ t0` near infinity).
    pub threshold: Option<f64>,
    pub samples: usize,
    /// Largest required constant `A⁻¹(B(t))/t` seen on the samples.
    pub required: f64,
}

/// Relative rise of the required constant toward the regime limit beyond
/// which the constant is taken to be unbounded.
const DRIFT: f64 = 0.05;
const C_STEPS: usize = 160;

/// Searches the smallest `C = 2^{k/4}` with `B(t) ≤ A(Ct)` on the regime samples.
pub fn dominates(a: &YoungFunction, b: &YoungFunction, regime: Regime, windows: &RegimeWindows) -> ComparisonVerdict {
    let ts = windows.samples(regime);
    let req: Vec<f64> = ts
        .iter()
        .map(|&t| {
            let y = b.eval(t);
            if y == 0.0 {
                0.0
            } else if !y.is_finite() {
                f64::INFINITY
            } else {
                a.inverse(y).map(|x| x / t).unwrap_or(f64::INFINITY)
            }
        })
        .collect();
    let threshold = match regime {
        Regime::Global => None,
        Regime::NearZero => Some(windows.near_zero.1),
        Regime::NearInfinity => Some(windows.near_infinity.0),
    };
    let cmax = req.iter().cloned().fold(0.0, f64::max);
    let mut verdict =
        ComparisonVerdict { regime, dominates: false, constant: None, threshold, samples: ts.len(), required: cmax };
    if !cmax.is_finite() || drifts(&req, regime) {
        return verdict;
    }
    for k in 0..=C_STEPS {
        let c = 2f64.powf(k as f64 / 4.0);
        if c < cmax * (1.0 - 1e-9) {
            continue;
        }
        if ts.iter().all(|&t| b.eval(t) <= a.eval(c * t) * (1.0 + 1e-8)) {
            verdict.dominates = true;
            verdict.constant = Some(c);
            break;
        }
    }
    verdict
}

/// Whether the required constant keeps rising toward the end of the window
/// where the regime lives.
fn drifts(req: &[f64], regime: Regime) -> bool {
    let n = req.len();
    let q = (n / 4).max(1);
    let max = |s: &[f64]| s.iter().cloned().fold(0.0, f64::max);
    let rises = |edge: &[f64], rest: &[f64]| {
        let e = max(edge);
        let r = max(rest);
        e > 0.0 && e > r * (1.0 + DRIFT)
    };
    match regime {
        Regime::NearZero => rises(&req[..q], &req[q..]),
        Regime::NearInfinity => rises(&req[n - q..], &req[..n - q]),
        Regime::Global => rises(&req[..q], &req[q..]) || rises(&req[n - q..], &req[..n - q]),
    }
}

/// Upper index estimate `lim log(sup_t A(λt)/A(t)) / log λ`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct IndexEstimate {
    pub value: f64,
    pub regime: IndexRegime,
    pub lambdas: Vec<f64>,
    /// RMS deviation of `ln sup A(λt)/A(t)` from the fitted line.
    pub residual: f64,
}

pub fn matuszewska_index(a: &YoungFunction, regime: IndexRegime) -> Result<IndexEstimate> {
    if !a.is_finite() {
        return Err(Error::Unsupported(format!("index of a function taking the value +∞ ({})", a.label())));
    }
    let lambdas: Vec<f64> = (1..=12).map(|k| 10f64.powf(0.5 * k as f64)).collect();
    let ws: Vec<f64> = match regime {
        IndexRegime::Global => log_grid(1e-8, 1e8, 10).iter().map(|t| t.ln()).collect(),
        IndexRegime::NearInfinity => {
            let top = (0.5 * a.log_reach()).min(1e4).max(1e8f64.ln());
            (0..=40).map(|k| 0.5 * top * (1.0 + k as f64 / 40.0)).collect()
        }
    };
    let mut xs = Vec::new();
    let mut ys = Vec::new();
    for &l in &lambdas {
        let ll = l.ln();
        let mut sup = f64::NEG_INFINITY;
        for &w in &ws {
            let base = a.ln_eval_ln(w);
            if base == f64::NEG_INFINITY {
                continue;
            }
            let up = a.ln_eval_ln(w + ll);
            let r = up - base;
            if !r.is_finite() {
                return Err(Error::Unsupported(format!("non-finite ratio A(λt)/A(t) at λ = {l:e}, ln t = {w}")));
            }
            sup = sup.max(r);
        }
        if !sup.is_finite() {
            return Err(Error::Unsupported("function vanishes on the whole sample window".into()));
        }
        if l >= 10.0 {
            xs.push(ll);
            ys.push(sup);
        }
    }
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    let slope = sxy / sxx;
    let residual =
        (xs.iter().zip(&ys).map(|(x, y)| (y - my - slope * (x - mx)).powi(2)).sum::<f64>() / n).sqrt();
    Ok(IndexEstimate { value: slope, regime, lambdas, residual })
}

/// Horizon and decision threshold for the growth comparison.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GrowthConfig {
    pub lambdas: Vec<f64>,
    /// `ln t` at the first sample.
    pub ln_t_min: f64,
    /// `ln t` at the last sample; values far beyond `ln 1e308` are fine since
    /// the ratios are formed in log space.
    pub ln_t_max: f64,
    pub points: usize,
    pub eps: f64,
}

impl Default for GrowthConfig {
    fn default() -> Self {
        GrowthConfig { lambdas: vec![0.1, 1.0, 10.0], ln_t_min: 1e2f64.ln(), ln_t_max: 1e8f64.ln(), points: 81, eps: 1e-3 }
    }
}

impl GrowthConfig {
    pub fn with_t_max(mut self, t_max: f64) -> Self {
        self.ln_t_max = t_max.ln();
        self
    }

    /// Sample points in `ln t`, geometric in `ln t` so that long horizons
    /// are covered evenly in `ln ln t`.
    pub fn ln_grid(&self) -> Vec<f64> {
        let (a, b) = (self.ln_t_min, self.ln_t_max);
        let n = self.points.max(2) - 1;
        if a > 0.0 {
            let r = (b / a).ln();
            (0..=n).map(|k| a * (r * k as f64 / n as f64).exp()).collect()
        } else {
            (0..=n).map(|k| a + (b - a) * k as f64 / n as f64).collect()
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GrowthTrace {
    pub lambda: f64,
    pub ln_t: Vec<f64>,
    pub ratio: Vec<f64>,
    pub decreasing: bool,
    pub vanishing: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GrowthEvidence {
    pub verdict: bool,
    pub eps: f64,
    pub traces: Vec<GrowthTrace>,
}

/// Finite-horizon proxy for `lim B(λt)/A(t) = 0` for every `λ > 0`.
pub fn grows_essentially_slower(b: &YoungFunction, a: &YoungFunction, cfg: &GrowthConfig) -> GrowthEvidence {
    let ws = cfg.ln_grid();
    let traces: Vec<GrowthTrace> = cfg
        .lambdas
        .iter()
        .map(|&l| {
            let ll = l.ln();
            let lr: Vec<f64> = ws.iter().map(|&w| b.ln_eval_ln(w + ll) - a.ln_eval_ln(w)).collect();
            let half = lr.len() / 2;
            let decreasing = lr[half..].windows(2).all(|p| p[1] <= p[0] + 1e-9) && lr.iter().all(|x| !x.is_nan());
            let last = lr[lr.len() - 1];
            let vanishing = last < cfg.eps.ln();
            GrowthTrace {
                lambda: l,
                ln_t: ws.clone(),
                ratio: lr.iter().map(|x| x.exp()).collect(),
                decreasing,
                vanishing,
            }
        })
        .collect();
    let verdict = traces.iter().all(|t| t.decreasing && t.vanishing);
    GrowthEvidence { verdict, eps: cfg.eps, traces }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::young::PowerLogParams;

    fn pw(p: f64) -> YoungFunction {
        YoungFunction::power(p).unwrap()
    }

    #[test]
    fn square_dominates_cube_near_zero_with_unit_constant() {
        let v = dominates(&pw(2.0), &pw(3.0), Regime::NearZero, &RegimeWindows::default());
        assert!(v.dominates);
        assert_eq!(v.constant, Some(1.0));
    }

    #[test]
    fn log_factor_defeats_every_constant() {
        let b = YoungFunction::powerlog(PowerLogParams::at_infinity(2.0, 1.0)).unwrap();
        let v = dominates(&pw(2.0), &b, Regime::NearInfinity, &RegimeWindows::default());
        assert!(!v.dominates);
        assert!(v.constant.is_none());
    }

    #[test]
    fn power_index_is_exact() {
        let e = matuszewska_index(&pw(2.0), IndexRegime::Global).unwrap();
        assert!((e.value - 2.0).abs() < 1e-12 && e.residual <= 1e-6);
    }

    #[test]
    fn growth_comparison_of_powers() {
        let cfg = GrowthConfig::default();
        assert!(grows_essentially_slower(&pw(2.0), &pw(3.0), &cfg).verdict);
        assert!(!grows_essentially_slower(&pw(3.0), &pw(3.0), &cfg).verdict);
    }
}
