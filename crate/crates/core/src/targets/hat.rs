use std::sync::Arc;

use super::{certify_convex, check_integral_conditions, BuildOptions, FractionalParams};
use crate::cheb::{ln_half_line, Direction, LogTable};
use crate::error::{Error, Result};
use crate::young::{Derived, YoungFunction};

/// Span in `σ`-logarithm of the tables behind `Â`.
const SPAN: (f64, f64) = (-80.0, 80.0);
const EXTENSION_STEP: f64 = 8.0;
const MAX_EXTENSIONS: usize = 16;
/// Relative size of the bounded tail of the outer integral that is tolerated.
const TAIL_BUDGET: f64 = 1e-10;
/// Distance in `ln σ` from the table ends to where the power continuation starts.
const EDGE_INSET: f64 = 8.0;

/// `Â` with `â⁻¹(a(σ)) = τ(σ) = J(σ)^{−q}`, where
/// `G(σ) = ∫_0^σ a^{−q}`, `J(σ) = ∫_σ^∞ G^{−n/s} a^{−1−q}` and `q = s/(n−s)`.
/// `Â(τ(σ)) = K(σ) = ∫_0^σ a dτ`, all tabulated in `v = ln σ`.
#[derive(Debug)]
pub struct HatFunction {
    base: YoungFunction,
    j: LogTable,
    k: LogTable,
    q: f64,
    /// Bound on the neglected part of the outer integral, relative to `J`
    /// at the top of the working range.
    tail_bound: f64,
    /// Ends of the tabulated range in `w = ln t`; beyond them `Â` continues
    /// as a local power.
    edges: [Edge; 2],
}

#[derive(Debug, Clone, Copy)]
struct Edge {
    w: f64,
    ln: f64,
    slope: f64,
}

/// Densities below this are continued as a local power in `ln t`, so that
/// far-left quadrature chunks never see an underflowed zero.
const TINY_DENSITY: f64 = 1e-200;

fn ln_density(a: &YoungFunction, v: f64) -> f64 {
    let d = a.density(v.exp());
    if d >= TINY_DENSITY || !(a.density(1.0) >= TINY_DENSITY) {
        return d.ln();
    }
    let (mut lo, mut hi) = (v, 0.0);
    for _ in 0..60 {
        let m = 0.5 * (lo + hi);
        if a.density(m.exp()) >= TINY_DENSITY {
            hi = m;
        } else {
            lo = m;
        }
    }
    let at = a.density(hi.exp()).ln();
    let slope = at - a.density((hi - 1.0).exp()).ln();
    at + slope * (v - hi)
}

impl HatFunction {
    fn build(a: &YoungFunction, fp: &FractionalParams) -> Result<Self> {
        let q = fp.q();
        let ns = fp.ratio();
        if !(a.density(f64::MIN_POSITIVE.sqrt()) > 0.0) {
            return Err(Error::Unsupported(format!("{}: density vanishes near zero", a.label())));
        }
        // G, forward from 0.
        let fa = a.clone();
        let ln_g_phi = move |v: f64| -q * ln_density(&fa, v) + v;
        let g_anchor = ln_half_line(SPAN.0, -1.0, &ln_g_phi).exp();
        if !(g_anchor.is_finite() && g_anchor > 0.0) {
            return Err(Error::Admissibility("inner integral diverges at zero".into()));
        }
        // Extend the top until the tail bound q G^{-1/q}/a is negligible.
        let mut hi = SPAN.1;
        let mut g = LogTable::build(Arc::new(ln_g_phi.clone()), SPAN.0, hi, Direction::Forward, g_anchor)?;
        let ln_bound = |g: &LogTable, v: f64| q.ln() - g.ln_value(v) / q - ln_density(a, v);
        let ln_integrand_j = {
            let a = a.clone();
            move |g: &LogTable, v: f64| -ns * g.ln_value(v) - (1.0 + q) * ln_density(&a, v) + v
        };
        let mut achieved = f64::INFINITY;
        for _ in 0..=MAX_EXTENSIONS {
            // J at the working top without the tail, by quadrature over [SPAN.1, hi].
            let (ln_j_top, _) = crate::quad::ln_integral_exp(SPAN.1, hi, 1e-12, |v| ln_integrand_j(&g, v));
            let lb = ln_bound(&g, hi);
            achieved = if hi > SPAN.1 { (lb - ln_j_top).exp() } else { f64::INFINITY };
            if achieved < TAIL_BUDGET {
                break;
            }
            hi += EXTENSION_STEP;
            g = LogTable::build(Arc::new(ln_g_phi.clone()), SPAN.0, hi, Direction::Forward, g_anchor)?;
        }
        if !(achieved < TAIL_BUDGET) {
            return Err(Error::Precision { detail: "tail of the outer integral not controlled".into(), achieved });
        }
        let tail = 0.5 * ln_bound(&g, hi).exp();
        let gj = g.clone();
        let ln_j_phi = move |v: f64| ln_integrand_j(&gj, v);
        let j = LogTable::build(Arc::new(ln_j_phi.clone()), SPAN.0, hi, Direction::Backward, tail)?;
        // K, forward; near zero its integrand is a local power e^{κv}.
        let (gk, jk, ak) = (g.clone(), j.clone(), a.clone());
        let ln_k_phi =
            move |v: f64| q.ln() - (q + 1.0) * jk.ln_value(v) - ns * gk.ln_value(v) - q * ln_density(&ak, v) + v;
        let kappa = ln_k_phi(SPAN.0 + 1.0) - ln_k_phi(SPAN.0);
        if !(kappa > 0.0) {
            return Err(Error::Admissibility("Â does not vanish at zero".into()));
        }
        let k_anchor = ln_k_phi(SPAN.0).exp() / kappa;
        let k = LogTable::build(Arc::new(ln_k_phi), SPAN.0, hi, Direction::Forward, k_anchor)?;
        let mut hat = HatFunction {
            base: a.clone(),
            j,
            k,
            q,
            tail_bound: achieved,
            edges: [Edge { w: f64::NEG_INFINITY, ln: 0.0, slope: 1.0 }; 2],
        };
        let (v_lo, v_hi) = (hat.j.v_lo(), hat.j.v_hi());
        let edge = |v: f64, inward: f64| {
            let w = -q * hat.j.ln_value(v);
            let ln = hat.k.ln_value(v);
            let w_in = -q * hat.j.ln_value(v + inward);
            let slope = ((ln - hat.k.ln_value(v + inward)) / (w - w_in)).max(1.0);
            Edge { w, ln, slope }
        };
        let lo = edge(v_lo + EDGE_INSET, 4.0);
        let hi = edge(v_hi - EDGE_INSET, -4.0);
        if !(lo.w < hi.w && lo.ln.is_finite() && hi.ln.is_finite()) {
            return Err(Error::Precision { detail: "tables of Â do not cover a range".into(), achieved: f64::NAN });
        }
        hat.edges = [lo, hi];
        Ok(hat)
    }

    /// The edge beyond which `w` lies, if any.
    fn outside(&self, w: f64) -> Option<Edge> {
        let [lo, hi] = self.edges;
        if w < lo.w {
            Some(lo)
        } else if w > hi.w {
            Some(hi)
        } else {
            None
        }
    }

    /// `ln σ` with `τ(σ) = e^w`.
    fn v_of(&self, w: f64) -> f64 {
        self.j.solve_ln(-w / self.q)
    }

    /// Relative size of the truncated tail of the outer integral.
    pub fn tail_bound(&self) -> f64 {
        self.tail_bound
    }

    /// Inverse density `â⁻¹(r)`.
    pub fn inverse_density(&self, r: f64) -> f64 {
        let sigma = self.base.inverse_density(r);
        (-self.q * self.j.ln_value(sigma.ln())).exp()
    }
}

impl Derived for HatFunction {
    fn label(&self) -> String {
        format!("hat of {}", self.base.label())
    }

    fn eval(&self, t: f64) -> f64 {
        self.ln_eval_ln(t.ln()).exp()
    }

    fn density(&self, t: f64) -> f64 {
        if let Some(e) = self.outside(t.ln()) {
            return e.slope * (self.ln_eval_ln(t.ln()) - t.ln()).exp();
        }
        self.base.density(self.v_of(t.ln()).exp())
    }

    fn ln_eval_ln(&self, w: f64) -> f64 {
        if let Some(e) = self.outside(w) {
            return e.ln + e.slope * (w - e.w);
        }
        self.k.ln_value(self.v_of(w))
    }

    fn inverse(&self, y: f64) -> Option<f64> {
        if y <= 0.0 {
            return Some(0.0);
        }
        let [lo, hi] = self.edges;
        let ly = y.ln();
        if ly < lo.ln || ly > hi.ln {
            let e = if ly < lo.ln { lo } else { hi };
            return Some((e.w + (ly - e.ln) / e.slope).exp());
        }
        let v = self.k.solve_ln(y.ln());
        Some((-self.q * self.j.ln_value(v)).exp())
    }

    fn log_reach(&self) -> f64 {
        70.0
    }
}

/// Builds `Â`; both integral conditions are required.
pub fn build_hat(a: &YoungFunction, fp: &FractionalParams, opts: BuildOptions) -> Result<YoungFunction> {
    check_integral_conditions(a, fp)?.require(true, opts)?;
    let out = YoungFunction::derived(Arc::new(HatFunction::build(a, fp)?));
    certify_convex(&out, -20.0, 20.0)?;
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hat_of_square_in_closed_form() {
        let fp = FractionalParams::new(2, 0.5).unwrap();
        let h = build_hat(&YoungFunction::power(2.0).unwrap(), &fp, BuildOptions::default()).unwrap();
        let c = 0.5 * (128.0f64 / 243.0).powf(1.0 / 3.0);
        for t in [0.5f64, 1.0, 2.0] {
            assert!((h.eval(t) / (c * t * t) - 1.0).abs() < 1e-5, "{t}: {}", h.eval(t) / (c * t * t));
        }
        let y = h.eval(1.7);
        assert!((h.inverse(y).unwrap() / 1.7 - 1.0).abs() < 1e-9);
    }
}
