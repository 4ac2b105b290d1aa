//! Gauss–Legendre rules, adaptive Gauss–Kronrod (7/15) integration and
//! integration over half-lines by growing chunks.

use std::collections::BinaryHeap;
use std::sync::OnceLock;

/// Value of an integral together with an estimate of its absolute error.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Estimate {
    pub value: f64,
    pub error: f64,
    pub converged: bool,
}

impl Estimate {
    pub fn zero() -> Self {
        Estimate { value: 0.0, error: 0.0, converged: true }
    }
}

/// Nodes and weights of an n-point Gauss–Legendre rule on [-1, 1].
#[derive(Debug, Clone)]
pub struct GaussLegendre {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

impl GaussLegendre {
    fn compute(n: usize) -> Self {
        let mut nodes = vec![0.0; n];
        let mut weights = vec![0.0; n];
        for i in 0..n.div_ceil(2) {
            // Tricomi's initial guess, refined by Newton on P_n.
            let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
            let mut dp = 1.0;
            for _ in 0..100 {
                let (p, d) = legendre(n, x);
                dp = d;
                let dx = p / d;
                x -= dx;
                if dx.abs() < 1e-16 {
                    break;
                }
            }
            let (_, d) = legendre(n, x);
            if d != 0.0 {
                dp = d;
            }
            let w = 2.0 / ((1.0 - x * x) * dp * dp);
            nodes[i] = -x;
            nodes[n - 1 - i] = x;
            weights[i] = w;
            weights[n - 1 - i] = w;
        }
        if n % 2 == 1 {
            nodes[n / 2] = 0.0;
        }
        GaussLegendre { nodes, weights }
    }

    /// Integrates `f` over [a, b].
    pub fn integrate(&self, a: f64, b: f64, mut f: impl FnMut(f64) -> f64) -> f64 {
        let c = 0.5 * (a + b);
        let h = 0.5 * (b - a);
        let mut s = 0.0;
        for (x, w) in self.nodes.iter().zip(&self.weights) {
            s += w * f(c + h * x);
        }
        s * h
    }

    /// Maps the rule onto [a, b], returning (point, weight) pairs.
    pub fn mapped(&self, a: f64, b: f64) -> impl Iterator<Item = (f64, f64)> + '_ {
        let c = 0.5 * (a + b);
        let h = 0.5 * (b - a);
        self.nodes.iter().zip(&self.weights).map(move |(x, w)| (c + h * x, w * h))
    }
}

fn legendre(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    for k in 2..=n {
        let k = k as f64;
        let p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
    }
    let d = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}

const MAX_GL: usize = 32;

/// Cached Gauss–Legendre rule with `n` points, 1 ≤ n ≤ 32.
pub fn gauss_legendre(n: usize) -> &'static GaussLegendre {
    static RULES: OnceLock<Vec<GaussLegendre>> = OnceLock::new();
    assert!((1..=MAX_GL).contains(&n), "Gauss–Legendre order {n} not cached");
    let rules = RULES.get_or_init(|| {
        (1..=MAX_GL)
            .map(|k| {
                if k == 1 {
                    GaussLegendre { nodes: vec![0.0], weights: vec![2.0] }
                } else {
                    GaussLegendre::compute(k)
                }
            })
            .collect()
    });
    &rules[n - 1]
}

const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_5,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_48,
    0.000000000000000000000000000000000,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_224,
    0.063_092_092_629_978_56,
    0.104_790_010_322_250_19,
    0.140_653_259_715_525_92,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_42,
    0.204_432_940_075_298_89,
    0.209_482_141_084_727_82,
];
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_64,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

/// One Gauss–Kronrod 7/15 panel: (Kronrod value, |Kronrod − Gauss|).
pub fn gk15(a: f64, b: f64, f: &mut impl FnMut(f64) -> f64) -> (f64, f64) {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let fc = f(c);
    let mut rk = fc * WGK[7];
    let mut rg = fc * WG[3];
    for j in 0..7 {
        let x = h * XGK[j];
        let s = f(c - x) + f(c + x);
        rk += WGK[j] * s;
        if j % 2 == 1 {
            rg += WG[j / 2] * s;
        }
    }
    (rk * h, ((rk - rg) * h).abs())
}

struct Panel {
    a: f64,
    b: f64,
    value: f64,
    error: f64,
}

impl PartialEq for Panel {
    fn eq(&self, o: &Self) -> bool {
        self.error == o.error
    }
}
impl Eq for Panel {}
impl PartialOrd for Panel {
    fn partial_cmp(&self, o: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(o))
    }
}
impl Ord for Panel {
    fn cmp(&self, o: &Self) -> std::cmp::Ordering {
        self.error.total_cmp(&o.error)
    }
}

/// Globally adaptive Gauss–Kronrod integration of `f` over the finite interval [a, b].
pub fn adaptive(
    a: f64,
    b: f64,
    abs_tol: f64,
    rel_tol: f64,
    mut f: impl FnMut(f64) -> f64,
) -> Estimate {
    if a == b {
        return Estimate::zero();
    }
    let (v, e) = gk15(a, b, &mut f);
    let mut heap = BinaryHeap::new();
    heap.push(Panel { a, b, value: v, error: e });
    let mut total = v;
    let mut err = e;
    let mut splits = 0;
    while err > abs_tol.max(rel_tol * total.abs()) && splits < 2000 {
        let Some(p) = heap.pop() else { break };
        if !p.value.is_finite() {
            return Estimate { value: p.value, error: f64::INFINITY, converged: false };
        }
        let m = 0.5 * (p.a + p.b);
        if m <= p.a || m >= p.b {
            heap.push(p);
            break;
        }
        let (v1, e1) = gk15(p.a, m, &mut f);
        let (v2, e2) = gk15(m, p.b, &mut f);
        total += v1 + v2 - p.value;
        err += e1 + e2 - p.error;
        heap.push(Panel { a: p.a, b: m, value: v1, error: e1 });
        heap.push(Panel { a: m, b: p.b, value: v2, error: e2 });
        splits += 1;
    }
    // Re-sum to shed the drift of the running updates.
    let total: f64 = heap.iter().map(|p| p.value).sum();
    let err: f64 = heap.iter().map(|p| p.error).sum();
    Estimate { value: total, error: err, converged: err <= abs_tol.max(rel_tol * total.abs()) }
}

/// Integral over a half-line in the variable `v`: `dir = +1` integrates
/// over [v0, ∞), `dir = -1` over (-∞, v0]. Chunks double in width until a
/// chunk contributes less than `rel_tol` of the running total twice in a
/// row, or `max_extent` is reached, in which case an exponential tail is
/// fitted from the local decay rate.
pub fn half_line(v0: f64, dir: f64, rel_tol: f64, max_extent: f64, f: impl Fn(f64) -> f64) -> Estimate {
    let mut total = 0.0;
    let mut err = 0.0;
    let mut width = 1.0;
    let mut start = v0;
    let mut quiet = 0;
    let mut travelled = 0.0;
    while travelled < max_extent {
        let end = start + dir * width;
        let (lo, hi) = if dir > 0.0 { (start, end) } else { (end, start) };
        let piece = adaptive(lo, hi, 0.0, rel_tol * 0.1, &f);
        if !piece.value.is_finite() {
            return Estimate { value: f64::INFINITY, error: f64::INFINITY, converged: false };
        }
        total += piece.value;
        err += piece.error;
        travelled += width;
        start = end;
        if piece.value.abs() <= rel_tol * total.abs() {
            quiet += 1;
            if quiet >= 2 {
                return Estimate { value: total, error: err + piece.value.abs(), converged: true };
            }
        } else {
            quiet = 0;
        }
        width *= 2.0;
    }
    // Exponential tail from the local logarithmic slope at the stopping point.
    let h = 1e-3 * width.max(1.0);
    let f0 = f(start);
    let f1 = f(start + dir * h);
    if f0 > 0.0 && f1 > 0.0 {
        let rate = -(f1.ln() - f0.ln()) / h;
        if rate > 0.0 {
            let tail = f0 / rate;
            return Estimate {
                value: total + tail,
                error: err + 0.5 * tail,
                converged: tail <= 1e-3 * total.abs(),
            };
        }
    } else if f0 == 0.0 {
        return Estimate { value: total, error: err, converged: true };
    }
    Estimate { value: total, error: f64::INFINITY, converged: false }
}

/// `ln ∫_a^b exp(g(v)) dv`, evaluated with the integrand rescaled by its
/// largest endpoint/midpoint value so that huge or tiny magnitudes stay
/// representable.
pub fn ln_integral_exp(a: f64, b: f64, rel_tol: f64, g: impl Fn(f64) -> f64) -> (f64, f64) {
    if a >= b {
        return (f64::NEG_INFINITY, 0.0);
    }
    let shift = g(a).max(g(b)).max(g(0.5 * (a + b)));
    if !shift.is_finite() {
        return (shift, 0.0);
    }
    // Split long ranges so each panel sees a moderate dynamic range.
    let pieces = (((b - a) / 4.0).ceil() as usize).clamp(1, 4096);
    let w = (b - a) / pieces as f64;
    let mut total = 0.0;
    let mut err = 0.0;
    for k in 0..pieces {
        let lo = a + k as f64 * w;
        let hi = if k + 1 == pieces { b } else { lo + w };
        let e = adaptive(lo, hi, 0.0, rel_tol, |v| (g(v) - shift).exp());
        total += e.value;
        err += e.error;
    }
    (shift + total.ln(), err / total.max(f64::MIN_POSITIVE))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gauss_legendre_is_exact_for_polynomials() {
        for n in [2, 5, 8, 16, 32] {
            let r = gauss_legendre(n);
            let deg = 2 * n - 1;
            let v = r.integrate(0.0, 2.0, |x| x.powi(deg as i32));
            let exact = 2f64.powi(deg as i32 + 1) / (deg as f64 + 1.0);
            assert!((v / exact - 1.0).abs() < 1e-13, "n={n}: {v} vs {exact}");
        }
    }

    #[test]
    fn adaptive_handles_endpoint_singularity() {
        let e = adaptive(0.0, 1.0, 0.0, 1e-12, |x| x.powf(-0.5));
        assert!((e.value - 2.0).abs() < 1e-9, "{e:?}");
    }

    #[test]
    fn half_line_decaying_exponential() {
        let e = half_line(0.0, 1.0, 1e-14, 200.0, |v| (-0.5 * v).exp());
        assert!((e.value - 2.0).abs() < 1e-10, "{e:?}");
        let e = half_line(0.0, -1.0, 1e-14, 200.0, |v| (2.0 * v).exp());
        assert!((e.value - 0.5).abs() < 1e-10, "{e:?}");
    }

    #[test]
    fn ln_integral_of_huge_exponential() {
        let (l, _) = ln_integral_exp(0.0, 1000.0, 1e-12, |v| v);
        // ln(e^1000 - 1) ≈ 1000
        assert!((l - 1000.0).abs() < 1e-9);
    }
}
