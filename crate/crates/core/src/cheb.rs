//! Piecewise Chebyshev tables of cumulative integrals in a logarithmic
//! variable `v = ln t`.
//!
//! A table stores, on equal panels of `[v_lo, v_hi]`, the integrand and its
//! running integral at Chebyshev–Lobatto nodes. The running integral is
//! kept as a logarithm and interpolated barycentrically, which keeps
//! relative accuracy across many orders of magnitude. Outside the table the
//! integral is continued with adaptive quadrature.

use std::fmt;
use std::sync::{Arc, OnceLock};

use crate::error::{Error, Result};
use crate::quad;

const ORDER: usize = 16;
const NODES: usize = ORDER + 1;
/// Panel width in the log variable.
pub const PANEL_WIDTH: f64 = 0.25;

struct Basis {
    x: [f64; NODES],
    bary: [f64; NODES],
    /// `cum[i][j] = ∫_{-1}^{x_i} ℓ_j`.
    cum: [[f64; NODES]; NODES],
    /// Clenshaw–Curtis weights on the even-indexed nodes (order 8).
    coarse: [f64; NODES],
}

fn basis() -> &'static Basis {
    static B: OnceLock<Basis> = OnceLock::new();
    B.get_or_init(|| {
        let mut x = [0.0; NODES];
        let mut bary = [0.0; NODES];
        for (j, xj) in x.iter_mut().enumerate() {
            *xj = -(std::f64::consts::PI * j as f64 / ORDER as f64).cos();
        }
        x[ORDER / 2] = 0.0;
        for (j, b) in bary.iter_mut().enumerate() {
            let s = if j % 2 == 0 { 1.0 } else { -1.0 };
            *b = if j == 0 || j == ORDER { 0.5 * s } else { s };
        }
        let gl = quad::gauss_legendre(12);
        let mut cum = [[0.0; NODES]; NODES];
        for i in 1..NODES {
            for (p, w) in gl.mapped(-1.0, x[i]) {
                let l = lagrange_all(&x, &bary, p);
                for j in 0..NODES {
                    cum[i][j] += w * l[j];
                }
            }
        }
        // Order-8 Lobatto points are the even-indexed order-16 points.
        let mut xc = [0.0; ORDER / 2 + 1];
        let mut bc = [0.0; ORDER / 2 + 1];
        for k in 0..=ORDER / 2 {
            xc[k] = x[2 * k];
            let s = if k % 2 == 0 { 1.0 } else { -1.0 };
            bc[k] = if k == 0 || k == ORDER / 2 { 0.5 * s } else { s };
        }
        let mut coarse = [0.0; NODES];
        for (p, w) in gl.mapped(-1.0, 1.0) {
            let l = lagrange_all(&xc, &bc, p);
            for k in 0..=ORDER / 2 {
                coarse[2 * k] += w * l[k];
            }
        }
        Basis { x, bary, cum, coarse }
    })
}

fn lagrange_all<const N: usize>(x: &[f64; N], bary: &[f64; N], p: f64) -> [f64; N] {
    let mut out = [0.0; N];
    for j in 0..N {
        if p == x[j] {
            out[j] = 1.0;
            return out;
        }
    }
    let mut denom = 0.0;
    for j in 0..N {
        let t = bary[j] / (p - x[j]);
        out[j] = t;
        denom += t;
    }
    for o in out.iter_mut() {
        *o /= denom;
    }
    out
}

fn interpolate(values: &[f64], p: f64) -> f64 {
    let b = basis();
    let mut num = 0.0;
    let mut den = 0.0;
    for j in 0..NODES {
        let d = p - b.x[j];
        if d == 0.0 {
            return values[j];
        }
        let t = b.bary[j] / d;
        num += t * values[j];
        den += t;
    }
    num / den
}

/// Which end of the table anchors the running integral.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Direction {
    /// `Φ(v) = ∫_{-∞}^{v} φ`.
    Forward,
    /// `Φ(v) = ∫_{v}^{∞} φ`.
    Backward,
}

/// Log of the integrand, `v ↦ ln φ(v)`.
pub type LnIntegrand = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

/// Tabulated running integral of a positive integrand in the log variable.
#[derive(Clone)]
pub struct LogTable {
    v_lo: f64,
    width: f64,
    panels: usize,
    dir: Direction,
    /// ln Φ at nodes, panel-major.
    ln_cum: Vec<f64>,
    ln_phi: LnIntegrand,
    /// Largest relative panel-error estimate relative to the running value.
    rel_error: f64,
}

impl fmt::Debug for LogTable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("LogTable")
            .field("v_lo", &self.v_lo)
            .field("v_hi", &self.v_hi())
            .field("dir", &self.dir)
            .field("rel_error", &self.rel_error)
            .finish()
    }
}

impl LogTable {
    /// Builds the table on `[v_lo, v_hi]`. `anchor` is the value of the
    /// running integral at the anchored end (`v_lo` for forward tables,
    /// `v_hi` for backward ones), usually an estimate of the tail beyond the
    /// table.
    pub fn build(ln_phi: LnIntegrand, v_lo: f64, v_hi: f64, dir: Direction, anchor: f64) -> Result<Self> {
        let panels = (((v_hi - v_lo) / PANEL_WIDTH).ceil() as usize).max(1);
        let width = (v_hi - v_lo) / panels as f64;
        let b = basis();
        let half = 0.5 * width;
        let mut phi = vec![0.0; panels * NODES];
        for k in 0..panels {
            let c = v_lo + (k as f64 + 0.5) * width;
            for j in 0..NODES {
                let lp = ln_phi(c + half * b.x[j]);
                if lp.is_nan() {
                    return Err(Error::Unsupported(format!(
                        "integrand undefined at v = {}",
                        c + half * b.x[j]
                    )));
                }
                phi[k * NODES + j] = lp.exp();
            }
        }
        let mut cum = vec![0.0; panels * NODES];
        let mut rel_error: f64 = 0.0;
        let mut run = anchor;
        let order: Vec<usize> = match dir {
            Direction::Forward => (0..panels).collect(),
            Direction::Backward => (0..panels).rev().collect(),
        };
        for k in order {
            let f = &phi[k * NODES..(k + 1) * NODES];
            let total: f64 = (0..NODES).map(|j| b.cum[ORDER][j] * f[j]).sum::<f64>() * half;
            let coarse: f64 = (0..NODES).map(|j| b.coarse[j] * f[j]).sum::<f64>() * half;
            for i in 0..NODES {
                let partial: f64 = (0..NODES).map(|j| b.cum[i][j] * f[j]).sum::<f64>() * half;
                cum[k * NODES + i] = match dir {
                    Direction::Forward => run + partial,
                    Direction::Backward => run + (total - partial),
                };
            }
            run += total;
            if run > 0.0 {
                rel_error = rel_error.max((total - coarse).abs() / run);
            }
        }
        if cum.iter().any(|c| !(c.is_finite() && *c > 0.0)) {
            return Err(Error::Unsupported(
                "running integral not positive and finite on the table".into(),
            ));
        }
        let ln_cum = cum.iter().map(|c| c.ln()).collect();
        Ok(LogTable { v_lo, width, panels, dir, ln_cum, ln_phi, rel_error })
    }

    pub fn v_lo(&self) -> f64 {
        self.v_lo
    }

    pub fn v_hi(&self) -> f64 {
        self.v_lo + self.width * self.panels as f64
    }

    pub fn direction(&self) -> Direction {
        self.dir
    }

    /// Conservative relative accuracy of the tabulated values.
    pub fn rel_error(&self) -> f64 {
        self.rel_error
    }

    pub fn ln_integrand(&self, v: f64) -> f64 {
        (self.ln_phi)(v)
    }

    fn panel_of(&self, v: f64) -> (usize, f64) {
        let k = (((v - self.v_lo) / self.width).floor() as isize).clamp(0, self.panels as isize - 1) as usize;
        let c = self.v_lo + (k as f64 + 0.5) * self.width;
        (k, (v - c) / (0.5 * self.width))
    }

    fn ln_at_end(&self, hi_end: bool) -> f64 {
        if hi_end {
            self.ln_cum[self.panels * NODES - 1]
        } else {
            self.ln_cum[0]
        }
    }

    /// `ln Φ(v)`, continuing outside the table by quadrature.
    pub fn ln_value(&self, v: f64) -> f64 {
        let lo = self.v_lo;
        let hi = self.v_hi();
        if (lo..=hi).contains(&v) {
            let (k, x) = self.panel_of(v);
            return interpolate(&self.ln_cum[k * NODES..(k + 1) * NODES], x);
        }
        let g = |u: f64| (self.ln_phi)(u);
        match (self.dir, v > hi) {
            (Direction::Forward, true) => {
                let (piece, _) = quad::ln_integral_exp(hi, v, 1e-13, g);
                log_add(self.ln_at_end(true), piece)
            }
            (Direction::Backward, false) => {
                let (piece, _) = quad::ln_integral_exp(v, lo, 1e-13, g);
                log_add(self.ln_at_end(false), piece)
            }
            (Direction::Forward, false) => ln_half_line(v, -1.0, &g),
            (Direction::Backward, true) => ln_half_line(v, 1.0, &g),
        }
    }

    pub fn value(&self, v: f64) -> f64 {
        self.ln_value(v).exp()
    }

    /// Solves `ln Φ(v) = target` for `v`.
    pub fn solve_ln(&self, target: f64) -> f64 {
        let increasing = self.dir == Direction::Forward;
        let at_lo = self.ln_at_end(false);
        let at_hi = self.ln_at_end(true);
        let inside = if increasing {
            (at_lo..=at_hi).contains(&target)
        } else {
            (at_hi..=at_lo).contains(&target)
        };
        let above = |v: f64| {
            let l = self.ln_value(v);
            if increasing {
                l >= target
            } else {
                l <= target
            }
        };
        let (mut a, mut b) = if inside {
            // Panel search on the panel end values.
            let mut lo = 0usize;
            let mut hi = self.panels;
            while hi - lo > 1 {
                let mid = (lo + hi) / 2;
                let end = self.ln_cum[mid * NODES];
                let past = if increasing { end >= target } else { end <= target };
                if past {
                    hi = mid;
                } else {
                    lo = mid;
                }
            }
            (self.v_lo + lo as f64 * self.width, self.v_lo + (lo + 1) as f64 * self.width)
        } else {
            let beyond_hi = if increasing { target > at_hi } else { target < at_hi };
            let mut step = 1.0;
            if beyond_hi {
                let mut a = self.v_hi();
                let mut b = a + step;
                while !above(b) {
                    a = b;
                    step *= 2.0;
                    b = a + step;
                    if step > 1e300 {
                        return f64::INFINITY;
                    }
                }
                (a, b)
            } else {
                let mut b = self.v_lo;
                let mut a = b - step;
                while above(a) {
                    b = a;
                    step *= 2.0;
                    a = b - step;
                    if step > 1e300 {
                        return f64::NEG_INFINITY;
                    }
                }
                (a, b)
            }
        };
        // Illinois steps on the bracket, with bisection when they stall.
        let sign = if increasing { 1.0 } else { -1.0 };
        let f = |v: f64| sign * (self.ln_value(v) - target);
        let (mut fa, mut fb) = (f(a), f(b));
        if !(fa.is_finite() && fb.is_finite()) || fa > 0.0 || fb < 0.0 {
            for _ in 0..200 {
                let m = 0.5 * (a + b);
                if m <= a || m >= b || (b - a) <= 1e-15 * m.abs().max(1.0) {
                    break;
                }
                if above(m) {
                    b = m;
                } else {
                    a = m;
                }
            }
            return 0.5 * (a + b);
        }
        let mut side = 0i8;
        for _ in 0..200 {
            if (b - a) <= 1e-15 * a.abs().max(b.abs()).max(1.0) {
                break;
            }
            let mut m = b - fb * (b - a) / (fb - fa);
            if !(m > a && m < b) {
                m = 0.5 * (a + b);
            }
            let fm = f(m);
            if fm == 0.0 {
                return m;
            }
            if fm > 0.0 {
                b = m;
                fb = fm;
                if side == 1 {
                    fa *= 0.5;
                }
                side = 1;
            } else {
                a = m;
                fa = fm;
                if side == -1 {
                    fb *= 0.5;
                }
                side = -1;
            }
            if fb.abs().min(fa.abs()) <= 1e-15 * target.abs().max(1.0) {
                return if fb.abs() < fa.abs() { b } else { a };
            }
        }
        0.5 * (a + b)
    }
}

/// `ln ∫ exp(g)` over the half-line from `v` in direction `dir`.
pub fn ln_half_line(v: f64, dir: f64, g: &impl Fn(f64) -> f64) -> f64 {
    let shift = g(v);
    if !shift.is_finite() {
        return shift;
    }
    let e = quad::half_line(v, dir, 1e-15, 4000.0, |u| (g(u) - shift).exp());
    shift + e.value.ln()
}

/// `ln(e^a + e^b)`.
pub fn log_add(a: f64, b: f64) -> f64 {
    if a == f64::NEG_INFINITY {
        return b;
    }
    if b == f64::NEG_INFINITY {
        return a;
    }
    let m = a.max(b);
    m + ((a - m).exp() + (b - m).exp()).ln()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn forward_exponential_integral() {
        // φ(v) = e^{2v}: Φ(v) = e^{2v}/2.
        let t = LogTable::build(Arc::new(|v| 2.0 * v), -10.0, 10.0, Direction::Forward, (-20f64).exp() / 2.0)
            .unwrap();
        for v in [-9.3, -1.0, 0.0, 3.7, 9.99, 12.0, -15.0] {
            let exact = 2.0 * v - 2f64.ln();
            assert!((t.ln_value(v) - exact).abs() < 1e-12, "v={v}: {} vs {exact}", t.ln_value(v));
        }
        let v = t.solve_ln(2.0 * 1.234 - 2f64.ln());
        assert!((v - 1.234).abs() < 1e-12);
        let v = t.solve_ln(2.0 * 14.0 - 2f64.ln());
        assert!((v - 14.0).abs() < 1e-10);
    }

    #[test]
    fn backward_decay() {
        // φ(v) = e^{-3v}: Φ(v) = e^{-3v}/3.
        let t = LogTable::build(Arc::new(|v| -3.0 * v), -5.0, 5.0, Direction::Backward, (-15f64).exp() / 3.0)
            .unwrap();
        for v in [-4.9, 0.0, 4.9, 7.0, -8.0] {
            let exact = -3.0 * v - 3f64.ln();
            assert!((t.ln_value(v) - exact).abs() < 1e-11, "v={v}");
        }
        let v = t.solve_ln(-3.0 * 0.3 - 3f64.ln());
        assert!((v - 0.3).abs() < 1e-12);
    }
}
