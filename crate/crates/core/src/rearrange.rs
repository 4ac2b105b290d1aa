//! Decreasing rearrangement `u*`, maximal average `u**`, symmetric
//! rearrangement and dilation, with the Hardy–Littlewood inequalities.

use std::f64::consts::PI;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::grid::{Domain, GridFunction};
use crate::report::{ErrorSource, VerificationReport};
use crate::young::YoungFunction;

/// Non-increasing step profile on `(0, L)`: value `values[k]` on
/// `[breaks[k], breaks[k+1])`. With `average` set the profile stands for
/// the running mean `u**` of those steps, evaluated exactly.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RearrangedProfile {
    breaks: Vec<f64>,
    values: Vec<f64>,
    average: bool,
}

impl RearrangedProfile {
    /// Profile with the given cell widths and non-increasing values.
    pub fn from_steps(widths: &[f64], values: &[f64]) -> Result<Self> {
        if widths.len() != values.len() || widths.is_empty() {
            return Err(Error::Parameter("widths and values must be non-empty and of equal length".into()));
        }
        if widths.iter().any(|w| !(*w > 0.0 && w.is_finite())) {
            return Err(Error::Parameter("cell widths must be positive".into()));
        }
        if values.windows(2).any(|p| p[1] > p[0]) || values.iter().any(|v| !(v.is_finite() && *v >= 0.0)) {
            return Err(Error::Parameter("profile values must be finite, non-negative and non-increasing".into()));
        }
        let mut breaks = Vec::with_capacity(widths.len() + 1);
        breaks.push(0.0);
        let mut r = 0.0;
        for w in widths {
            r += w;
            breaks.push(r);
        }
        Ok(RearrangedProfile { breaks, values: values.to_vec(), average: false })
    }

    pub fn measure(&self) -> f64 {
        *self.breaks.last().unwrap()
    }

    pub fn breaks(&self) -> &[f64] {
        &self.breaks
    }

    /// Step values of `u*`.
    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn is_average(&self) -> bool {
        self.average
    }

    pub fn cells(&self) -> impl Iterator<Item = (f64, f64, f64)> + '_ {
        self.values.iter().enumerate().map(|(k, &v)| (self.breaks[k], self.breaks[k + 1], v))
    }

    fn cell_of(&self, r: f64) -> usize {
        // Right-continuous: r = breaks[k] belongs to cell k.
        self.breaks.partition_point(|&b| b <= r).saturating_sub(1).min(self.values.len() - 1)
    }

    /// `∫_0^r u*`.
    pub fn primitive(&self, r: f64) -> f64 {
        if r <= 0.0 {
            return 0.0;
        }
        let r = r.min(self.measure());
        let k = self.cell_of(r);
        let before: f64 = self.cells().take(k).map(|(a, b, v)| v * (b - a)).sum();
        before + self.values[k] * (r - self.breaks[k])
    }

    /// `u*(r)`, or `u**(r)` for an averaged profile.
    pub fn eval(&self, r: f64) -> f64 {
        if self.average {
            if r <= 0.0 {
                return self.values[0];
            }
            return self.primitive(r) / r;
        }
        if r < 0.0 || r >= self.measure() {
            return 0.0;
        }
        self.values[self.cell_of(r)]
    }

    /// Same steps read as `u*`.
    pub fn star(&self) -> Self {
        RearrangedProfile { average: false, ..self.clone() }
    }
}

/// `u*`: cell values by decreasing modulus, each weighted by the cell measure.
pub fn decreasing_rearrangement(u: &GridFunction) -> RearrangedProfile {
    let mut v: Vec<f64> = u.values().iter().map(|x| x.abs()).collect();
    v.sort_by(|a, b| b.total_cmp(a));
    let h = u.cell_measure();
    let breaks = (0..=v.len()).map(|k| k as f64 * h).collect();
    RearrangedProfile { breaks, values: v, average: false }
}

/// `u**(r) = r⁻¹∫_0^r u*`, exact on step profiles.
pub fn maximal_average(p: &RearrangedProfile) -> RearrangedProfile {
    RearrangedProfile { average: true, ..p.clone() }
}

/// Radial step function of two variables on equal-measure annuli about the
/// origin: value `values[k]` for `radii[k-1] ≤ |x| < radii[k]`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RadialFunction {
    pub radii: Vec<f64>,
    pub values: Vec<f64>,
    pub annulus_measure: f64,
}

impl RadialFunction {
    pub fn eval(&self, x: f64, y: f64) -> f64 {
        let rho = x.hypot(y);
        let k = self.radii.partition_point(|&r| r <= rho);
        self.values.get(k).copied().unwrap_or(0.0)
    }

    pub fn profile(&self) -> RearrangedProfile {
        let widths = vec![self.annulus_measure; self.values.len()];
        RearrangedProfile::from_steps(&widths, &self.values).expect("radial values are sorted")
    }

    /// Cell averages over a box grid from `sub × sub` points per cell.
    pub fn resample(&self, x: (f64, f64), y: (f64, f64), nx: usize, ny: usize, sub: usize) -> Result<GridFunction> {
        let (hx, hy) = ((x.1 - x.0) / nx as f64, (y.1 - y.0) / ny as f64);
        let sub = sub.max(1);
        GridFunction::sample_box(x, y, nx, ny, |cx, cy| {
            let mut s = 0.0;
            for a in 0..sub {
                for b in 0..sub {
                    let px = cx + hx * ((a as f64 + 0.5) / sub as f64 - 0.5);
                    let py = cy + hy * ((b as f64 + 0.5) / sub as f64 - 0.5);
                    s += self.eval(px, py);
                }
            }
            s / (sub * sub) as f64
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub enum Symmetrized {
    /// Even, non-increasing in `|x − c|` on the source interval, at half the
    /// source spacing.
    Line(GridFunction),
    Radial(RadialFunction),
}

/// `u★(x) = u*(ω_n|x|^n)`. In one dimension the result lives on the source
/// interval, centred at its midpoint; in two dimensions on annuli of the
/// source cell measure.
pub fn symmetric_rearrangement(u: &GridFunction, n: usize) -> Result<Symmetrized> {
    if n != u.dim() {
        return Err(Error::Parameter(format!("dimension {n} does not match a {}-D grid", u.dim())));
    }
    let star = decreasing_rearrangement(u);
    match n {
        1 => {
            let (lo, hi) = u.domain().bounds().expect("1-D domain");
            let v = star.values();
            let mut out: Vec<f64> = v.iter().rev().copied().collect();
            out.extend_from_slice(v);
            Ok(Symmetrized::Line(GridFunction::interval(lo, hi, out)?))
        }
        2 => {
            let m = u.cell_measure();
            let radii = (1..=star.values().len()).map(|k| (k as f64 * m / PI).sqrt()).collect();
            Ok(Symmetrized::Radial(RadialFunction { radii, values: star.values().to_vec(), annulus_measure: m }))
        }
        _ => Err(Error::Unsupported(format!("symmetric rearrangement in dimension {n}"))),
    }
}

/// `(E_λ f)(t) = f(t/λ)` on `(0, L)`, zero where `t/λ ≥ L`. The result is
/// exact on a grid of spacing `λh/m`, with the smallest `m ≤ 64` that tiles
/// `(0, L)`.
pub fn dilate(f: &GridFunction, lambda: f64) -> Result<GridFunction> {
    if !(lambda > 0.0 && lambda.is_finite()) {
        return Err(Error::Parameter(format!("dilation factor must be positive, got {lambda}")));
    }
    let Domain::HalfLine { len } = f.domain() else {
        return Err(Error::Parameter("dilation acts on grids over (0, L)".into()));
    };
    let n = f.len();
    let h = len / n as f64;
    for m in 1..=64usize {
        let cells = n as f64 * m as f64 / lambda;
        if (cells - cells.round()).abs() < 1e-9 * cells.max(1.0) && cells.round() >= 1.0 {
            let cells = cells.round() as usize;
            let g = len / cells as f64;
            let values = (0..cells)
                .map(|j| {
                    let src = (j as f64 + 0.5) * g / lambda;
                    let k = (src / h) as usize;
                    if k < n {
                        f.values()[k]
                    } else {
                        0.0
                    }
                })
                .collect();
            return GridFunction::half_line(len, values);
        }
    }
    Err(Error::Parameter(format!("dilation by {lambda} does not tile a grid of {n} cells")))
}

fn check_same_grid(u: &GridFunction, v: &GridFunction) -> Result<()> {
    if u.len() != v.len() || (u.cell_measure() - v.cell_measure()).abs() > 1e-12 * u.cell_measure() {
        return Err(Error::Parameter("functions must share the grid".into()));
    }
    Ok(())
}

fn sorted_abs(u: &GridFunction) -> Vec<f64> {
    decreasing_rearrangement(u).values().to_vec()
}

/// `∫|uv| ≤ ∫u*v*`, both sides exact sums.
pub fn hardy_littlewood(u: &GridFunction, v: &GridFunction) -> Result<VerificationReport> {
    check_same_grid(u, v)?;
    let h = u.cell_measure();
    let lhs: f64 = u.values().iter().zip(v.values()).map(|(a, b)| (a * b).abs()).sum::<f64>() * h;
    let rhs: f64 = sorted_abs(u).iter().zip(sorted_abs(v)).map(|(a, b)| a * b).sum::<f64>() * h;
    let budget = 1e-12 * rhs.abs();
    Ok(VerificationReport::compare("hardy-littlewood", "rearrangement inequality", lhs, rhs, 0.0, budget, ErrorSource::Rounding))
}

/// `∫A(|uv|) ≤ ∫A(u*v*)`.
pub fn modular_hardy_littlewood(a: &YoungFunction, u: &GridFunction, v: &GridFunction) -> Result<VerificationReport> {
    check_same_grid(u, v)?;
    let h = u.cell_measure();
    let lhs: f64 = u.values().iter().zip(v.values()).map(|(x, y)| a.eval((x * y).abs())).sum::<f64>() * h;
    let rhs: f64 = sorted_abs(u).iter().zip(sorted_abs(v)).map(|(x, y)| a.eval(x * y)).sum::<f64>() * h;
    let budget = 1e-12 * rhs.abs();
    Ok(VerificationReport::compare("modular-hardy-littlewood", "modular rearrangement inequality", lhs, rhs, 0.0, budget, ErrorSource::Rounding))
}

/// Sorted values of two weighted samples agree as measures.
pub fn equimeasurable(a: &[f64], wa: f64, b: &[f64], wb: f64, tol: f64) -> bool {
    let dist = |v: &[f64], w: f64| {
        let mut s: Vec<f64> = v.iter().map(|x| x.abs()).collect();
        s.sort_by(|x, y| y.total_cmp(x));
        (s, w)
    };
    let (sa, wa) = dist(a, wa);
    let (sb, wb) = dist(b, wb);
    // Compare distribution functions at every level that occurs.
    let mu = |s: &[f64], w: f64, t: f64| s.partition_point(|&x| x > t) as f64 * w;
    sa.iter().chain(sb.iter()).all(|&t| (mu(&sa, wa, t) - mu(&sb, wb, t)).abs() <= tol * (sa.len() as f64 * wa))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn running_means_of_steps() {
        let p = RearrangedProfile::from_steps(&[1.0; 3], &[3.0, 2.0, 1.0]).unwrap();
        let a = maximal_average(&p);
        for (r, e) in [(1.0, 3.0), (2.0, 2.5), (3.0, 2.0), (0.5, 3.0)] {
            assert!((a.eval(r) - e).abs() < 1e-15);
        }
        assert_eq!(p.eval(1.0), 2.0);
    }

    #[test]
    fn symmetric_line_keeps_distribution() {
        let u = GridFunction::interval(0.0, 3.0, vec![1.0, -3.0, 2.0]).unwrap();
        let Symmetrized::Line(s) = symmetric_rearrangement(&u, 1).unwrap() else { panic!() };
        assert_eq!(s.values(), &[1.0, 2.0, 3.0, 3.0, 2.0, 1.0]);
        assert!(equimeasurable(u.values(), 1.0, s.values(), 0.5, 1e-12));
    }

    #[test]
    fn dilation_halves() {
        let f = GridFunction::half_line(4.0, vec![4.0, 3.0, 2.0, 1.0]).unwrap();
        let g = dilate(&f, 0.5).unwrap();
        assert_eq!(g.values(), &[4.0, 3.0, 2.0, 1.0, 0.0, 0.0, 0.0, 0.0]);
        let g = dilate(&f, 2.0).unwrap();
        assert_eq!(g.values(), &[4.0, 3.0]);
    }
}
