use std::sync::Arc;

use super::YoungFunction;
use crate::asymptotics::{probe_tail, Convergence};
use crate::cheb::{ln_half_line, Direction, LogTable};
use crate::error::{Error, Result};
use crate::quad;

/// Which end of the half-line the moment integrates from.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MomentSide {
    /// `∫_0^T A(τ) τ^{γ-1} dτ`.
    Lower,
    /// `∫_T^∞ A(τ) τ^{γ-1} dτ`.
    Upper,
}

#[derive(Debug, Clone)]
enum Repr {
    Power { exponent: f64 },
    Table(LogTable),
    Direct(YoungFunction),
}

/// Power-weighted primitive of a Young function, tabulated in `ln T`.
#[derive(Debug, Clone)]
pub struct Moment {
    gamma: f64,
    side: MomentSide,
    repr: Repr,
}

const TABLE_REACH: f64 = 40.0;

impl Moment {
    pub fn new(a: &YoungFunction, gamma: f64, side: MomentSide) -> Result<Self> {
        if let Some(p) = a.as_power() {
            let e = p + gamma;
            let ok = match side {
                MomentSide::Lower => e > 0.0,
                MomentSide::Upper => e < 0.0,
            };
            if !ok {
                return Err(Error::Unsupported(format!("moment of t^{p} with weight exponent {gamma} diverges")));
            }
            return Ok(Moment { gamma, side, repr: Repr::Power { exponent: e } });
        }
        let f = a.clone();
        let ln_phi = move |v: f64| f.ln_eval_ln(v) + gamma * v;
        let dir = match side {
            MomentSide::Lower => -1.0,
            MomentSide::Upper => 1.0,
        };
        let window = (0.25 * a.log_reach()).min(200.0);
        let probe = probe_tail(&ln_phi, dir, window);
        if probe.verdict != Convergence::Converges {
            return Err(Error::Unsupported(format!(
                "moment with weight exponent {gamma} does not converge ({:?}, rate {:.3e})",
                probe.verdict, probe.rate
            )));
        }
        let (lo, hi) = (-TABLE_REACH, TABLE_REACH);
        if !(ln_phi(lo).is_finite() && ln_phi(hi).is_finite()) {
            return Ok(Moment { gamma, side, repr: Repr::Direct(a.clone()) });
        }
        let (anchor_at, table_dir) = match side {
            MomentSide::Lower => (lo, Direction::Forward),
            MomentSide::Upper => (hi, Direction::Backward),
        };
        let anchor = ln_half_line(anchor_at, dir, &ln_phi).exp();
        let table = LogTable::build(Arc::new(ln_phi), lo, hi, table_dir, anchor)?;
        Ok(Moment { gamma, side, repr: Repr::Table(table) })
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    pub fn side(&self) -> MomentSide {
        self.side
    }

    /// Value at `T ≥ 0`.
    pub fn eval(&self, t: f64) -> f64 {
        if t <= 0.0 {
            return match self.side {
                MomentSide::Lower => 0.0,
                MomentSide::Upper => f64::INFINITY,
            };
        }
        if t.is_infinite() {
            return match self.side {
                MomentSide::Lower => f64::INFINITY,
                MomentSide::Upper => 0.0,
            };
        }
        match &self.repr {
            Repr::Power { exponent } => t.powf(*exponent) / exponent.abs(),
            Repr::Table(tab) => tab.value(t.ln()),
            Repr::Direct(a) => self.direct(a, t),
        }
    }

    fn direct(&self, a: &YoungFunction, t: f64) -> f64 {
        let g = self.gamma;
        match self.side {
            MomentSide::Lower => {
                let e = quad::adaptive(0.0, t, 0.0, 1e-12, |x| if x > 0.0 { a.eval(x) * x.powf(g - 1.0) } else { 0.0 });
                e.value
            }
            MomentSide::Upper => {
                let e = quad::half_line(t.ln(), 1.0, 1e-12, 4000.0, |v| (a.ln_eval_ln(v) + g * v).exp());
                e.value
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::young::PowerLogParams;

    #[test]
    fn tabulated_moment_matches_closed_form() {
        // t^2 below 1 spliced to (2/3) t^3 + 1/3 above.
        let a = YoungFunction::powerlog(PowerLogParams::power(3.0).with_zero(2.0, 0.0)).unwrap();
        let m = Moment::new(&a, -4.0, MomentSide::Upper).unwrap();
        for t in [1.5f64, 7.0, 1e5] {
            let exact = 2.0 / (3.0 * t) + 1.0 / (12.0 * t.powi(4));
            assert!((m.eval(t) / exact - 1.0).abs() < 1e-9, "{t}: {}", m.eval(t) / exact);
        }
    }

    #[test]
    fn log_weighted_moment() {
        // ∫_0^T A(τ)/τ with A = t^2 (1 + ln t) beyond 1 against direct quadrature
        let a = YoungFunction::powerlog(PowerLogParams::at_infinity(2.0, 1.0)).unwrap();
        let m = Moment::new(&a, 0.0, MomentSide::Lower).unwrap();
        let direct = quad::adaptive(0.0, 3.0, 0.0, 1e-13, |x| if x > 0.0 { a.eval(x) / x } else { 0.0 });
        assert!((m.eval(3.0) / direct.value - 1.0).abs() < 1e-9);
    }

    #[test]
    fn divergent_moment_is_rejected() {
        let a = YoungFunction::powerlog(PowerLogParams::at_infinity(2.0, 1.0)).unwrap();
        assert!(Moment::new(&a, -2.0, MomentSide::Upper).is_err());
    }
}
