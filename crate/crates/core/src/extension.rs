//! Extension of sampled functions beyond model domains: by zero, by even
//! reflection across a coordinate hyperplane, and after multiplication by a
//! Lipschitz cutoff, with the modular bounds each step satisfies.

use std::fmt;
use std::sync::Arc;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::gagliardo::{interpolant_modular, interpolant_norm, McConfig, Modular, Region};
use crate::grid::{Domain, GridFunction, Interp};
use crate::operators1d::find_constant;
use crate::quad;
use crate::report::{ErrorSource, VerificationReport};
use crate::young::YoungFunction;

const ALIGN: f64 = 1e-9;

/// Number of whole cells of width `h` in `len`, if it is one.
fn cells_in(len: f64, h: f64) -> Option<usize> {
    let k = len / h;
    let r = k.round();
    ((k - r).abs() <= ALIGN * k.max(1.0) && r >= 0.0).then_some(r as usize)
}

fn source(u: &GridFunction) -> ErrorSource {
    if u.dim() == 2 {
        ErrorSource::MonteCarlo
    } else {
        ErrorSource::Quadrature
    }
}

fn is_inside(e: &Domain, x: f64, y: f64) -> bool {
    match *e {
        Domain::Interval { a, b } => x >= a && x <= b,
        Domain::HalfLine { len } => x >= 0.0 && x <= len,
        Domain::Box { x0, x1, y0, y1 } => x >= x0 && x <= x1 && y >= y0 && y <= y1,
    }
}

/// Sample points of cell `k` for support checks: the whole cell must lie
/// in `E` for a non-zero value.
fn cell_within(u: &GridFunction, k: usize, e: &Domain) -> bool {
    let (hx, hy) = u.spacing();
    if u.dim() == 1 {
        let c = u.center(k);
        is_inside(e, c - 0.5 * hx, 0.0) && is_inside(e, c + 0.5 * hx, 0.0)
    } else {
        let (nx, _) = u.shape();
        let (cx, cy) = u.center2(k % nx, k / nx);
        is_inside(e, cx - 0.5 * hx, cy - 0.5 * hy) && is_inside(e, cx + 0.5 * hx, cy + 0.5 * hy)
    }
}

/// `dist(E, ∂Ω)` for nested intervals or boxes.
fn gap(e: &Domain, omega: &Domain) -> Result<f64> {
    let d = match (*e, *omega) {
        (Domain::Interval { a: e0, b: e1 }, d) if d.dim() == 1 => {
            let (a, b) = d.bounds().expect("1-D");
            (e0 - a).min(b - e1)
        }
        (Domain::Box { x0, x1, y0, y1 }, Domain::Box { x0: a0, x1: a1, y0: b0, y1: b1 }) => {
            (x0 - a0).min(a1 - x1).min(y0 - b0).min(b1 - y1)
        }
        _ => return Err(Error::Parameter("E and Ω must be intervals or boxes of one dimension".into())),
    };
    if !(d > 0.0) {
        return Err(Error::Parameter(format!("E must lie at positive distance from ∂Ω, got {d}")));
    }
    Ok(d)
}

/// `ℰ₀u`: `u` on `Ω`, zero on the rest of `ambient`. The ambient grid has
/// the same spacing, with `∂Ω` on cell boundaries.
pub fn extend_zero(u: &GridFunction, e: &Domain, ambient: &Domain) -> Result<GridFunction> {
    gap(e, &u.domain())?;
    if let Some(k) = (0..u.len()).find(|&k| u.values()[k] != 0.0 && !cell_within(u, k, e)) {
        return Err(Error::Precondition(format!("u is non-zero in cell {k}, outside E")));
    }
    let (hx, hy) = u.spacing();
    match (u.domain(), *ambient) {
        (Domain::Interval { a, b }, Domain::Interval { a: p, b: q }) if p <= a && q >= b => {
            let (Some(left), Some(total)) = (cells_in(a - p, hx), cells_in(q - p, hx)) else {
                return Err(Error::Parameter("ambient interval is not aligned with the grid".into()));
            };
            let mut v = vec![0.0; total];
            v[left..left + u.len()].copy_from_slice(u.values());
            let out = GridFunction::interval(p, q, v)?;
            Ok(out.with_interp(if u.interp() == Interp::Step { Interp::Step } else { Interp::Linear }))
        }
        (Domain::Box { x0, x1, y0, y1 }, Domain::Box { x0: p0, x1: p1, y0: q0, y1: q1 })
            if p0 <= x0 && p1 >= x1 && q0 <= y0 && q1 >= y1 =>
        {
            let cells = (cells_in(x0 - p0, hx), cells_in(p1 - p0, hx), cells_in(y0 - q0, hy), cells_in(q1 - q0, hy));
            let (Some(ox), Some(nx), Some(oy), Some(ny)) = cells else {
                return Err(Error::Parameter("ambient box is not aligned with the grid".into()));
            };
            let (ux, uy) = u.shape();
            let mut v = vec![0.0; nx * ny];
            for j in 0..uy {
                for i in 0..ux {
                    v[(j + oy) * nx + i + ox] = u.values()[j * ux + i];
                }
            }
            Ok(GridFunction::boxed((p0, p1), (q0, q1), nx, ny, v)?.with_interp(u.interp()))
        }
        _ => Err(Error::Parameter("ambient domain must contain Ω and match its dimension".into())),
    }
}

/// `W = ∫_{ℝⁿ∖Ω} dist(y, E)^{−n−s} dy` with an error budget. Closed form in
/// 1-D; in 2-D tensor quadrature inside a box of `BOX_FACTOR` diameters and
/// a radial bound outside it.
pub fn cross_weight(e: &Domain, omega: &Domain, s: f64) -> Result<(f64, f64)> {
    gap(e, omega)?;
    match (*e, *omega) {
        (Domain::Interval { a: e0, b: e1 }, d) => {
            let (a, b) = d.bounds().expect("1-D");
            Ok((((e0 - a).powf(-s) + (b - e1).powf(-s)) / s, 0.0))
        }
        (Domain::Box { x0, x1, y0, y1 }, Domain::Box { x0: a0, x1: a1, y0: b0, y1: b1 }) => {
            let dist = |px: f64, py: f64| {
                let dx = (x0 - px).max(px - x1).max(0.0);
                let dy = (y0 - py).max(py - y1).max(0.0);
                dx.hypot(dy)
            };
            let (cx, cy) = (0.5 * (x0 + x1), 0.5 * (y0 + y1));
            let rho = 0.5 * (x1 - x0).hypot(y1 - y0);
            let r = BOX_FACTOR * omega.diameter();
            let xs = [cx - r, a0, x0, x1, a1, cx + r];
            let ys = [cy - r, b0, y0, y1, b1, cy + r];
            let (mut total, mut err) = (0.0, 0.0);
            for i in 0..5 {
                for j in 0..5 {
                    let (p0, p1, q0, q1) = (xs[i], xs[i + 1], ys[j], ys[j + 1]);
                    // Skip Ω itself.
                    if p0 >= a0 && p1 <= a1 && q0 >= b0 && q1 <= b1 {
                        continue;
                    }
                    let outer = quad::adaptive(p0, p1, 0.0, 1e-9, |px| {
                        quad::adaptive(q0, q1, 0.0, 1e-10, |py| dist(px, py).powf(-2.0 - s)).value
                    });
                    total += outer.value;
                    err += outer.error;
                }
            }
            // Outside the square of half-width r about E's centre, |y − c| − ρ ≤ dist ≤ |y − c|,
            // and ∫ |y − c|^{−2−s} there is (8/s) r^{−s} ∫_0^{π/4} cos^s φ dφ.
            let angular = quad::adaptive(0.0, std::f64::consts::FRAC_PI_4, 0.0, 1e-12, |phi| phi.cos().powf(s)).value;
            let low = 8.0 / s * r.powf(-s) * angular;
            let high = low * (1.0 - rho / r).powf(-2.0 - s);
            Ok((total + 0.5 * (low + high), err + 0.5 * (high - low)))
        }
        _ => Err(Error::Parameter("E and Ω must be intervals or boxes of one dimension".into())),
    }
}

/// Half-width of the quadrature box of [`cross_weight`], in diameters of `Ω`.
const BOX_FACTOR: f64 = 64.0;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ZeroExtensionReport {
    /// `modular(ℰ₀u, ambient) ≤ modular(u, Ω) + 2 d^s W ∫_E A(|u| d^{−s})`.
    pub check: VerificationReport,
    pub modular_omega: f64,
    pub modular_ambient: f64,
    pub cross_bound: f64,
    pub weight: f64,
    /// `‖ℰ₀u‖_{L^A} − ‖u‖_{L^A}`.
    pub norm_gap: f64,
}

pub fn verify_extend_zero(
    u: &GridFunction,
    e: &Domain,
    ambient: &Domain,
    s: f64,
    a: &YoungFunction,
    mc: &McConfig,
) -> Result<ZeroExtensionReport> {
    let d = gap(e, &u.domain())?;
    let ext = extend_zero(u, e, ambient)?;
    let m_omega = Modular::new(u, s, a, Region::Domain, mc)?.eval(1.0);
    let m_amb = Modular::new(&ext, s, a, Region::Domain, &McConfig { seed: mc.seed.wrapping_add(1), ..*mc })?.eval(1.0);
    let (w, w_err) = cross_weight(e, &u.domain(), s)?;
    // ∫_E A(|u| d^{−s}), the norm of u under A(· d^{−s}) at scale one.
    let scaled = u.map(|v| v * d.powf(-s));
    let mass = interpolant_modular(a, &scaled, 1.0);
    let cross = 2.0 * d.powf(s) * w * mass;
    let budget = m_omega.error + m_amb.error + 2.0 * d.powf(s) * w_err * mass;
    let check = VerificationReport::compare(
        "extend-zero",
        "zero extension",
        m_amb.value,
        m_omega.value + cross,
        0.0,
        budget,
        source(u),
    )
    .with_constant(Some(if cross > 0.0 { (m_amb.value - m_omega.value) / cross } else { 0.0 }));
    let norm_gap = interpolant_norm(a, &ext).value - interpolant_norm(a, u).value;
    Ok(ZeroExtensionReport { check, modular_omega: m_omega.value, modular_ambient: m_amb.value, cross_bound: cross, weight: w, norm_gap })
}

/// `ℰ₁u`: even reflection across `{x_n = 0}`. `Q₊` is `(0, L)` in 1-D or a
/// box with `y0 = 0` in 2-D.
pub fn reflect_extend(u: &GridFunction) -> Result<GridFunction> {
    match u.domain() {
        d @ (Domain::Interval { .. } | Domain::HalfLine { .. }) => {
            let (a, b) = d.bounds().expect("1-D");
            if a != 0.0 {
                return Err(Error::Parameter(format!("the half-interval must start at the mirror point 0, got {a}")));
            }
            let v = u.values();
            let mut out: Vec<f64> = v.iter().rev().copied().collect();
            out.extend_from_slice(v);
            let g = GridFunction::interval(-b, b, out)?.with_interp(u.interp());
            match (u.derivative(), u.interp()) {
                (Some(d), Interp::Hermite) => {
                    let mut dd: Vec<f64> = d.iter().rev().map(|x| -x).collect();
                    dd.extend_from_slice(d);
                    g.with_derivative(dd)
                }
                _ => Ok(g),
            }
        }
        Domain::Box { x0, x1, y0, y1 } => {
            if y0 != 0.0 {
                return Err(Error::Parameter(format!("the half-box must start at the mirror plane y = 0, got {y0}")));
            }
            let (nx, ny) = u.shape();
            let mut v = Vec::with_capacity(2 * nx * ny);
            for j in (0..ny).rev() {
                v.extend_from_slice(&u.values()[j * nx..(j + 1) * nx]);
            }
            v.extend_from_slice(u.values());
            Ok(GridFunction::boxed((x0, x1), (-y1, y1), nx, 2 * ny, v)?.with_interp(u.interp()))
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ReflectionReport {
    /// `modular(ℰ₁u, Q) ≤ 4·modular(u, Q₊)`.
    pub check: VerificationReport,
    /// `‖ℰ₁u‖_{L^A} / ‖u‖_{L^A}`, at most 2.
    pub norm_ratio: f64,
}

pub fn verify_reflection(u: &GridFunction, s: f64, a: &YoungFunction, mc: &McConfig) -> Result<ReflectionReport> {
    let r = reflect_extend(u)?;
    let half = Modular::new(u, s, a, Region::Domain, mc)?.eval(1.0);
    let full = Modular::new(&r, s, a, Region::Domain, &McConfig { seed: mc.seed.wrapping_add(1), ..*mc })?.eval(1.0);
    let budget = if half.value.is_finite() { full.error + 4.0 * half.error } else { 0.0 };
    let mut check =
        VerificationReport::compare("reflection", "even reflection", full.value, 4.0 * half.value, 0.0, budget, source(u));
    check = check.with_constant(Some(if half.value > 0.0 { full.value / half.value } else { 0.0 }));
    let (nu, nr) = (interpolant_norm(a, u).value, interpolant_norm(a, &r).value);
    Ok(ReflectionReport { check, norm_ratio: if nu > 0.0 { nr / nu } else { 0.0 } })
}

type CutoffEval = Arc<dyn Fn(f64, f64) -> f64 + Send + Sync>;

/// `ζ: Ω → [0, 1]` with Lipschitz constant `lipschitz`; 1-D cutoffs ignore
/// the second coordinate.
#[derive(Clone)]
pub struct CutoffFunction {
    eval: CutoffEval,
    pub lipschitz: f64,
    pub label: String,
}

impl fmt::Debug for CutoffFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "CutoffFunction({}, L = {})", self.label, self.lipschitz)
    }
}

impl CutoffFunction {
    pub fn new(f: impl Fn(f64, f64) -> f64 + Send + Sync + 'static, lipschitz: f64, label: impl Into<String>) -> Self {
        CutoffFunction { eval: Arc::new(f), lipschitz, label: label.into() }
    }

    pub fn constant(c: f64) -> Self {
        Self::new(move |_, _| c, 0.0, format!("{c}"))
    }

    /// `clamp(height − slope·|x − c|, 0, 1)`.
    pub fn ramp(center: (f64, f64), height: f64, slope: f64) -> Self {
        Self::new(
            move |x, y| (height - slope * (x - center.0).hypot(y - center.1)).clamp(0.0, 1.0),
            slope.abs(),
            format!("clamp({height} − {slope}|x − c|, 0, 1)"),
        )
    }

    /// `clamp((x − start)/(end − start), 0, 1)` along the first coordinate.
    pub fn step_up(start: f64, end: f64) -> Self {
        Self::new(move |x, _| ((x - start) / (end - start)).clamp(0.0, 1.0), 1.0 / (end - start).abs(), "ramp")
    }

    pub fn eval(&self, x: f64, y: f64) -> f64 {
        (self.eval)(x, y)
    }

    /// Checks `0 ≤ ζ ≤ 1` at the cell centres and the Lipschitz bound over
    /// all pairs of centres.
    pub fn validate(&self, u: &GridFunction) -> Result<()> {
        let pts = centres(u);
        let vals: Vec<f64> = pts.iter().map(|&(x, y)| self.eval(x, y)).collect();
        if let Some(v) = vals.iter().find(|v| !(**v >= 0.0 && **v <= 1.0)) {
            return Err(Error::Precondition(format!("cutoff takes the value {v} outside [0, 1]")));
        }
        let slack = 1.0 + 1e-12;
        for i in 0..pts.len() {
            for j in i + 1..pts.len() {
                let d = (pts[i].0 - pts[j].0).hypot(pts[i].1 - pts[j].1);
                if (vals[i] - vals[j]).abs() > self.lipschitz * d * slack + 1e-15 {
                    return Err(Error::Precondition(format!("cutoff exceeds its Lipschitz constant {}", self.lipschitz)));
                }
            }
        }
        Ok(())
    }
}

fn centres(u: &GridFunction) -> Vec<(f64, f64)> {
    if u.dim() == 1 {
        (0..u.len()).map(|i| (u.center(i), 0.0)).collect()
    } else {
        let (nx, ny) = u.shape();
        (0..ny).flat_map(|j| (0..nx).map(move |i| (i, j))).map(|(i, j)| u.center2(i, j)).collect()
    }
}

fn multiply(u: &GridFunction, z: &CutoffFunction) -> Result<GridFunction> {
    let v: Vec<f64> = centres(u).iter().zip(u.values()).map(|(&(x, y), v)| z.eval(x, y) * v).collect();
    u.with_values(v)
}

/// `‖u‖_{W^{s,A}(Ω)} = ‖u‖_{L^A(Ω)} + |u|_{s,A,Ω}`.
pub fn sobolev_norm(u: &GridFunction, s: f64, a: &YoungFunction, region: Region, mc: &McConfig) -> Result<f64> {
    Ok(interpolant_norm(a, u).value + Modular::new(u, s, a, region, mc)?.seminorm().value)
}

/// `ζu` with the smallest `C` such that `‖ζu‖_{W^{s,A}} ≤ C‖u‖_{W^{s,A}}`.
pub fn cutoff_multiply(
    u: &GridFunction,
    z: &CutoffFunction,
    s: f64,
    a: &YoungFunction,
    mc: &McConfig,
) -> Result<(GridFunction, VerificationReport)> {
    z.validate(u)?;
    let out = multiply(u, z)?;
    let lhs = sobolev_norm(&out, s, a, Region::Domain, mc)?;
    let rhs = sobolev_norm(u, s, a, Region::Domain, mc)?;
    let constant = if lhs == 0.0 { Some(0.0) } else { find_constant(|c| lhs <= c * rhs) };
    let mut check = VerificationReport::compare(
        "cutoff",
        "Lipschitz cutoff",
        lhs,
        constant.map_or(f64::INFINITY, |c| c * rhs),
        0.0,
        0.0,
        ErrorSource::Bisection,
    )
    .with_constant(constant)
    .note(format!("Lipschitz constant {}", z.lipschitz));
    check.pass = constant.is_some();
    check.vacuous = false;
    Ok((out, check))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PipelineReport {
    /// `max |ℰu − u|` over the cells of `Ω`.
    pub restriction_error: f64,
    /// `‖ℰu‖_{W^{s,A}(ℝ)} / ‖u‖_{W^{s,A}(Ω)}`.
    pub norm_constant: f64,
    /// `|ℰu|_{s,A,ℝ} / |u|_{s,A,Ω}`.
    pub seminorm_constant: f64,
}

/// `ℰu` on `(−1, 2)` for `u` on `(0, 1)`: cutoffs `ζ₀ = 1 − ζ₁` split `u`
/// into pieces near each end, which are reflected across that end and
/// extended by zero.
pub fn extend_interval(u: &GridFunction) -> Result<GridFunction> {
    let Domain::Interval { a, b } = u.domain() else {
        return Err(Error::Parameter("the pipeline extends grids on (0, 1)".into()));
    };
    if a != 0.0 || b != 1.0 {
        return Err(Error::Parameter(format!("the pipeline extends grids on (0, 1), got ({a}, {b})")));
    }
    let n = u.len();
    let z1 = CutoffFunction::step_up(1.0 / 3.0, 2.0 / 3.0);
    let piece1 = multiply(u, &z1)?;
    let piece0 = u.with_values(u.values().iter().zip(piece1.values()).map(|(v, p)| v - p).collect())?;
    let mut out = vec![0.0; 3 * n];
    // Across 0: cell i of Ω maps to cell n + i and its mirror n − 1 − i.
    for i in 0..n {
        out[n + i] += piece0.values()[i] + piece1.values()[i];
        out[n - 1 - i] += piece0.values()[i];
        out[3 * n - 1 - i] += piece1.values()[i];
    }
    let interp = if u.interp() == Interp::Step { Interp::Step } else { Interp::Linear };
    Ok(GridFunction::interval(-1.0, 2.0, out)?.with_interp(interp))
}

pub fn verify_pipeline(u: &GridFunction, s: f64, a: &YoungFunction) -> Result<PipelineReport> {
    let e = extend_interval(u)?;
    let n = u.len();
    let restriction_error =
        (0..n).map(|i| (e.values()[n + i] - u.values()[i]).abs()).fold(0.0, f64::max);
    let mc = McConfig::default();
    let ext = sobolev_norm(&e, s, a, Region::Whole, &mc)?;
    let own = sobolev_norm(u, s, a, Region::Domain, &mc)?;
    let semi_e = Modular::new(&e, s, a, Region::Whole, &mc)?.seminorm().value;
    let semi_u = Modular::new(u, s, a, Region::Domain, &mc)?.seminorm().value;
    let ratio = |x: f64, y: f64| if x == 0.0 { 0.0 } else { x / y };
    Ok(PipelineReport { restriction_error, norm_constant: ratio(ext, own), seminorm_constant: ratio(semi_e, semi_u) })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reflection_of_identity_is_modulus() {
        let u = GridFunction::sample(Domain::Interval { a: 0.0, b: 1.0 }, 8, |x| x).unwrap();
        let r = reflect_extend(&u).unwrap();
        for i in 0..16 {
            assert!((r.values()[i] - r.center(i).abs()).abs() < 1e-15);
        }
    }

    #[test]
    fn one_dimensional_cross_weight() {
        let (w, _) = cross_weight(&Domain::Interval { a: 0.25, b: 0.5 }, &Domain::Interval { a: 0.0, b: 1.0 }, 0.5).unwrap();
        assert!((w - 2.0 * (0.25f64.powf(-0.5) + 0.5f64.powf(-0.5))).abs() < 1e-12);
    }

    #[test]
    fn zero_extension_checks_support() {
        let u = GridFunction::interval(0.0, 1.0, vec![0.0, 1.0, 1.0, 0.0]).unwrap();
        let e = Domain::Interval { a: 0.25, b: 0.75 };
        let amb = Domain::Interval { a: -1.0, b: 2.0 };
        let x = extend_zero(&u, &e, &amb).unwrap();
        assert_eq!(x.len(), 12);
        assert_eq!(&x.values()[4..8], u.values());
        let bad = GridFunction::interval(0.0, 1.0, vec![1.0, 1.0, 1.0, 0.0]).unwrap();
        assert!(matches!(extend_zero(&bad, &e, &amb), Err(Error::Precondition(_))));
    }
}
