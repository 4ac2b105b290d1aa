use std::sync::Arc;

use super::{certify_convex, check_integral_conditions, BuildOptions, FractionalParams, MonotoneMap};
use crate::cheb::{ln_half_line, Direction, LogTable};
use crate::error::{Error, Result};
use crate::young::{generalized_inverse, Derived, YoungFunction};

/// Table span in `ln τ` for the running integral behind `H`.
const SPAN: (f64, f64) = (-80.0, 80.0);
/// Growth rate of the log-integrand below which the outer table is built.
const SLOW_RATE: f64 = 0.05;
/// Top of the outer table in `ln ln t`. Beyond `ln t ≈ 1e10` the log-integrand
/// is a difference of terms too large to keep relative accuracy.
const OUTER_TOP: f64 = 23.0;

/// `F(t) = ∫_0^t (τ/A(τ))^{s/(n−s)} dτ`, tabulated in `ln t`, with the
/// exponent turning it into `H = F^{(n−s)/n}`.
#[derive(Debug, Clone)]
struct Primitive {
    table: LogTable,
    /// Continuation in `u = ln v` past the top of `table`, kept when the
    /// integrand varies slowly there (critical growth).
    outer: Option<LogTable>,
    /// `ln F(∞)` when the integral converges at infinity.
    ln_total: Option<f64>,
    /// `n/(n−s)`, so that `ln F = e · ln H`.
    e: f64,
}

impl Primitive {
    fn build(a: &YoungFunction, fp: &FractionalParams, converges_at_infinity: bool) -> Result<Self> {
        let q = fp.q();
        let f = a.clone();
        let ln_phi = move |v: f64| q * (v - f.ln_eval_ln(v)) + v;
        let anchor = ln_half_line(SPAN.0, -1.0, &ln_phi).exp();
        if !anchor.is_finite() {
            return Err(Error::Admissibility("integral defining H diverges at zero".into()));
        }
        let table = LogTable::build(Arc::new(ln_phi.clone()), SPAN.0, SPAN.1, Direction::Forward, anchor)?;
        let ln_total = converges_at_infinity.then(|| {
            let tail = ln_half_line(SPAN.1, 1.0, &ln_phi);
            crate::cheb::log_add(table.ln_value(SPAN.1), tail)
        });
        let rate = (ln_phi(2.0 * SPAN.1) - ln_phi(SPAN.1)) / SPAN.1;
        let outer = if ln_total.is_none() && rate.abs() < SLOW_RATE {
            let top = table.ln_value(SPAN.1).exp();
            let phi = ln_phi.clone();
            let ln_outer = move |u: f64| phi(u.exp()) + u;
            LogTable::build(Arc::new(ln_outer), SPAN.1.ln(), OUTER_TOP, Direction::Forward, top).ok()
        } else {
            None
        };
        Ok(Primitive { table, outer, ln_total, e: fp.nf() / (fp.nf() - fp.s) })
    }

    fn ln_f(&self, v: f64) -> f64 {
        match &self.outer {
            Some(o) if v > SPAN.1 => o.ln_value(v.ln()),
            _ => self.table.ln_value(v),
        }
    }

    fn ln_h(&self, v: f64) -> f64 {
        self.ln_f(v) / self.e
    }

    /// `ln H⁻¹(e^w)`; `+∞` past saturation.
    fn ln_h_inverse(&self, w: f64) -> f64 {
        let target = self.e * w;
        if let Some(total) = self.ln_total {
            if target >= total {
                return f64::INFINITY;
            }
        }
        if let Some(o) = &self.outer {
            if target > self.table.ln_value(SPAN.1) {
                return o.solve_ln(target).exp();
            }
        }
        self.table.solve_ln(target)
    }

    fn range_sup(&self) -> f64 {
        self.ln_total.map_or(f64::INFINITY, |l| (l / self.e).exp())
    }
}

/// The map `H(t) = F(t)^{(n−s)/n}`. Requires convergence at zero.
pub fn build_h(a: &YoungFunction, fp: &FractionalParams, opts: BuildOptions) -> Result<MonotoneMap> {
    let prim = Arc::new(checked_primitive(a, fp, opts)?);
    Ok(h_map(prim))
}

fn checked_primitive(a: &YoungFunction, fp: &FractionalParams, opts: BuildOptions) -> Result<Primitive> {
    let report = check_integral_conditions(a, fp)?;
    report.require(false, opts)?;
    let converges_at_infinity = report.infinity == super::Verdict::Fails;
    Primitive::build(a, fp, converges_at_infinity)
}

fn h_map(prim: Arc<Primitive>) -> MonotoneMap {
    let fwd = prim.clone();
    let inv = prim.clone();
    MonotoneMap::new(
        "H",
        Arc::new(move |t: f64| fwd.ln_h(t.ln()).exp()),
        Arc::new(move |y: f64| inv.ln_h_inverse(y.ln()).exp()),
        prim.range_sup(),
    )
}

/// `A_{n/s} = A ∘ H⁻¹`.
#[derive(Debug)]
pub struct SobolevConjugate {
    base: YoungFunction,
    prim: Arc<Primitive>,
    h: MonotoneMap,
}

impl SobolevConjugate {
    pub fn h(&self) -> &MonotoneMap {
        &self.h
    }
}

impl Derived for SobolevConjugate {
    fn label(&self) -> String {
        format!("sobolev conjugate of {}", self.base.label())
    }

    fn eval(&self, t: f64) -> f64 {
        self.ln_eval_ln(t.ln()).exp()
    }

    fn density(&self, t: f64) -> f64 {
        let h = t * 1e-5;
        (self.eval(t + h) - self.eval(t - h)) / (2.0 * h)
    }

    fn ln_eval_ln(&self, w: f64) -> f64 {
        let v = self.prim.ln_h_inverse(w);
        if v == f64::INFINITY {
            return f64::INFINITY;
        }
        self.base.ln_eval_ln(v)
    }

    fn inverse(&self, y: f64) -> Option<f64> {
        let x = generalized_inverse(&self.base, y).ok()?;
        Some(self.h.eval(x))
    }

    fn log_reach(&self) -> f64 {
        1e4
    }

    fn is_finite(&self) -> bool {
        self.prim.ln_total.is_none()
    }
}

pub fn build_sobolev_conjugate(a: &YoungFunction, fp: &FractionalParams, opts: BuildOptions) -> Result<YoungFunction> {
    let prim = Arc::new(checked_primitive(a, fp, opts)?);
    let h = h_map(prim.clone());
    let out = YoungFunction::derived(Arc::new(SobolevConjugate { base: a.clone(), prim, h }));
    certify_convex(&out, -20.0, 20.0)?;
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn h_of_square_in_closed_form() {
        let fp = FractionalParams::new(2, 0.5).unwrap();
        let h = build_h(&YoungFunction::power(2.0).unwrap(), &fp, BuildOptions::default()).unwrap();
        let c = 1.5f64.powf(0.75);
        assert!((h.eval(1.0) / c - 1.0).abs() < 1e-8);
        for t in [1e-4, 1e-2, 3.0, 1e4] {
            assert!((h.eval(t) / (c * t.sqrt()) - 1.0).abs() < 1e-8, "{t}");
            assert!((h.inverse(h.eval(t)) / t - 1.0).abs() < 1e-8);
        }
        assert_eq!(h.eval(0.0), 0.0);
    }

    #[test]
    fn sobolev_conjugate_of_square() {
        let fp = FractionalParams::new(2, 0.5).unwrap();
        let a4 = build_sobolev_conjugate(&YoungFunction::power(2.0).unwrap(), &fp, BuildOptions::default()).unwrap();
        for t in [0.1f64, 1.0, 10.0] {
            let exact = 8.0 / 27.0 * t.powi(4);
            assert!((a4.eval(t) / exact - 1.0).abs() < 1e-6, "{t}: {}", a4.eval(t) / exact);
        }
    }

    #[test]
    fn divergence_at_zero_is_rejected() {
        let fp = FractionalParams::new(2, 0.5).unwrap();
        let r = build_h(&YoungFunction::power(4.0).unwrap(), &fp, BuildOptions::default());
        assert!(matches!(r, Err(Error::Admissibility(_))));
    }
}
