use serde::Serialize;

use super::{BuildOptions, FractionalParams};
use crate::asymptotics::{probe_tail, Convergence, TailProbe};
use crate::error::{Error, Result};
use crate::young::{conjugate, YoungFunction};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Holds,
    Fails,
    Indeterminate,
}

impl Verdict {
    pub fn holds(self) -> bool {
        self == Verdict::Holds
    }
}

/// Divergence at infinity and convergence at zero of
/// `∫ (t/A(t))^{s/(n−s)} dt`, with the dual test at zero on `Ã`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConditionReport {
    pub infinity: Verdict,
    pub zero: Verdict,
    /// Convergence of `∫_0 Ã(t) t^{−1−n/(n−s)} dt`.
    pub dual_zero: Verdict,
    /// Whether the direct and dual tests at zero agree (indeterminate
    /// outcomes count as agreement).
    pub consistent: bool,
    pub infinity_probe: TailProbe,
    pub zero_probe: TailProbe,
    pub dual_probe: Option<TailProbe>,
}

impl ConditionReport {
    /// Error unless both conditions hold, or are indeterminate and the
    /// options allow it. `need_infinity` selects whether the condition at
    /// infinity is required.
    pub fn require(&self, need_infinity: bool, opts: BuildOptions) -> Result<()> {
        let ok = |v: Verdict| v == Verdict::Holds || (opts.allow_indeterminate && v == Verdict::Indeterminate);
        if !ok(self.zero) {
            return Err(Error::Admissibility(format!(
                "integral condition at zero is {:?} (rate {:.4}, log rate {:?})",
                self.zero, self.zero_probe.rate, self.zero_probe.log_rate
            )));
        }
        if need_infinity && !ok(self.infinity) {
            return Err(Error::Admissibility(format!(
                "integral condition at infinity is {:?} (rate {:.4}, log rate {:?})",
                self.infinity, self.infinity_probe.rate, self.infinity_probe.log_rate
            )));
        }
        Ok(())
    }
}

const PROBE_WINDOW: f64 = 1e4;
const DUAL_WINDOW: f64 = 100.0;

pub fn check_integral_conditions(a: &YoungFunction, fp: &FractionalParams) -> Result<ConditionReport> {
    if !a.is_finite() {
        return Err(Error::Unsupported(format!("integral conditions for {} which takes the value +∞", a.label())));
    }
    let q = fp.q();
    let g = |w: f64| q * (w - a.ln_eval_ln(w)) + w;
    let window = PROBE_WINDOW.min(0.25 * a.log_reach());
    let infinity_probe = probe_tail(g, 1.0, window);
    let zero_probe = probe_tail(g, -1.0, window);
    let infinity = match infinity_probe.verdict {
        Convergence::Diverges => Verdict::Holds,
        Convergence::Converges => Verdict::Fails,
        Convergence::Indeterminate => Verdict::Indeterminate,
    };
    let mut zero = convergent(zero_probe.verdict);

    let e = fp.nf() / (fp.nf() - fp.s);
    let (dual_zero, dual_probe) = match conjugate(a) {
        Ok(c) => {
            let gd = |w: f64| c.ln_eval_ln(w) - e * w;
            let p = probe_tail(gd, -1.0, DUAL_WINDOW.min(0.25 * c.log_reach()));
            (convergent(p.verdict), Some(p))
        }
        Err(_) => (Verdict::Indeterminate, None),
    };
    let decisive = |v: Verdict| v != Verdict::Indeterminate;
    let consistent = !(decisive(zero) && decisive(dual_zero) && zero != dual_zero);
    if !consistent {
        zero = Verdict::Indeterminate;
    }
    Ok(ConditionReport { infinity, zero, dual_zero, consistent, infinity_probe, zero_probe, dual_probe })
}

fn convergent(c: Convergence) -> Verdict {
    match c {
        Convergence::Converges => Verdict::Holds,
        Convergence::Diverges => Verdict::Fails,
        Convergence::Indeterminate => Verdict::Indeterminate,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::young::PowerLogParams;

    fn fp() -> FractionalParams {
        FractionalParams::new(2, 0.5).unwrap()
    }

    #[test]
    fn subcritical_square() {
        let r = check_integral_conditions(&YoungFunction::power(2.0).unwrap(), &fp()).unwrap();
        assert_eq!((r.infinity, r.zero), (Verdict::Holds, Verdict::Holds));
        assert!(r.consistent);
    }

    #[test]
    fn critical_power_fails_at_zero() {
        let r = check_integral_conditions(&YoungFunction::power(4.0).unwrap(), &fp()).unwrap();
        assert_eq!(r.zero, Verdict::Fails);
        assert_eq!(r.infinity, Verdict::Holds);
    }

    #[test]
    fn supercritical_fails_at_infinity() {
        let r = check_integral_conditions(&YoungFunction::power(6.0).unwrap(), &fp()).unwrap();
        assert_eq!(r.infinity, Verdict::Fails);
    }

    #[test]
    fn log_factor_at_criticality() {
        // p0 = n/s with alpha0 > n/s - 1 converges at zero.
        let a = YoungFunction::powerlog(PowerLogParams::power(2.0).with_zero(4.0, 3.5)).unwrap();
        let r = check_integral_conditions(&a, &fp()).unwrap();
        assert_eq!(r.zero, Verdict::Holds);
        // alpha = n/s - 1 exactly at infinity cannot be decided.
        let b = YoungFunction::powerlog(PowerLogParams::at_infinity(4.0, 3.0).with_zero(2.0, 0.0)).unwrap();
        let r = check_integral_conditions(&b, &fp()).unwrap();
        assert_eq!(r.infinity, Verdict::Indeterminate);
    }
}
