//! Functions sampled at the cell centres of uniform grids.

use std::io::Write;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum Domain {
    Interval { a: f64, b: f64 },
    /// `(0, len)`; stands in for `(0, ∞)` when `len` is large.
    HalfLine { len: f64 },
    Box { x0: f64, x1: f64, y0: f64, y1: f64 },
}

impl Domain {
    pub fn dim(&self) -> usize {
        match self {
            Domain::Box { .. } => 2,
            _ => 1,
        }
    }

    /// `(lo, hi)` of a one-dimensional domain.
    pub fn bounds(&self) -> Option<(f64, f64)> {
        match *self {
            Domain::Interval { a, b } => Some((a, b)),
            Domain::HalfLine { len } => Some((0.0, len)),
            Domain::Box { .. } => None,
        }
    }

    pub fn measure(&self) -> f64 {
        match *self {
            Domain::Interval { a, b } => b - a,
            Domain::HalfLine { len } => len,
            Domain::Box { x0, x1, y0, y1 } => (x1 - x0) * (y1 - y0),
        }
    }

    pub fn diameter(&self) -> f64 {
        match *self {
            Domain::Box { x0, x1, y0, y1 } => (x1 - x0).hypot(y1 - y0),
            _ => self.measure(),
        }
    }
}

/// How values between cell centres are read off the samples.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Interp {
    /// Constant on each cell.
    #[default]
    Step,
    /// Linear (bilinear in 2-D) between centres.
    Linear,
    /// Cubic Hermite between centres, from derivative samples (1-D).
    Hermite,
}

/// Samples at cell centres; row-major `values[j * nx + i]` in 2-D.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GridFunction {
    domain: Domain,
    nx: usize,
    ny: usize,
    values: Vec<f64>,
    derivative: Option<Vec<f64>>,
    interp: Interp,
}

fn check_values(values: &[f64]) -> Result<()> {
    if values.is_empty() {
        return Err(Error::Parameter("grid needs at least one cell".into()));
    }
    if let Some(v) = values.iter().find(|v| !v.is_finite()) {
        return Err(Error::Parameter(format!("grid values must be finite, found {v}")));
    }
    Ok(())
}

impl GridFunction {
    pub fn new(domain: Domain, nx: usize, ny: usize, values: Vec<f64>) -> Result<Self> {
        check_values(&values)?;
        let expected = if domain.dim() == 1 { nx } else { nx * ny };
        if values.len() != expected || (domain.dim() == 1 && ny != 1) {
            return Err(Error::Parameter(format!(
                "{} values do not fill a {nx}×{ny} grid",
                values.len()
            )));
        }
        let ok = match domain {
            Domain::Interval { a, b } => a < b,
            Domain::HalfLine { len } => len > 0.0 && len.is_finite(),
            Domain::Box { x0, x1, y0, y1 } => x0 < x1 && y0 < y1,
        };
        if !ok {
            return Err(Error::Parameter(format!("degenerate domain {domain:?}")));
        }
        Ok(GridFunction { domain, nx, ny, values, derivative: None, interp: Interp::Step })
    }

    pub fn interval(a: f64, b: f64, values: Vec<f64>) -> Result<Self> {
        let n = values.len();
        Self::new(Domain::Interval { a, b }, n, 1, values)
    }

    pub fn half_line(len: f64, values: Vec<f64>) -> Result<Self> {
        let n = values.len();
        Self::new(Domain::HalfLine { len }, n, 1, values)
    }

    pub fn boxed(x: (f64, f64), y: (f64, f64), nx: usize, ny: usize, values: Vec<f64>) -> Result<Self> {
        Self::new(Domain::Box { x0: x.0, x1: x.1, y0: y.0, y1: y.1 }, nx, ny, values)
    }

    /// Samples `f` at the centres of `n` cells of a one-dimensional domain.
    pub fn sample(domain: Domain, n: usize, f: impl Fn(f64) -> f64) -> Result<Self> {
        let (lo, hi) = domain.bounds().ok_or_else(|| Error::Parameter("sample needs a 1-D domain".into()))?;
        let h = (hi - lo) / n as f64;
        let values = (0..n).map(|i| f(lo + (i as f64 + 0.5) * h)).collect();
        Self::new(domain, n, 1, values)
    }

    /// Samples `f` at the centres of an `nx × ny` box grid.
    pub fn sample_box(x: (f64, f64), y: (f64, f64), nx: usize, ny: usize, f: impl Fn(f64, f64) -> f64) -> Result<Self> {
        let (hx, hy) = ((x.1 - x.0) / nx as f64, (y.1 - y.0) / ny as f64);
        let mut values = Vec::with_capacity(nx * ny);
        for j in 0..ny {
            for i in 0..nx {
                values.push(f(x.0 + (i as f64 + 0.5) * hx, y.0 + (j as f64 + 0.5) * hy));
            }
        }
        Self::boxed(x, y, nx, ny, values)
    }

    pub fn with_interp(mut self, interp: Interp) -> Self {
        self.interp = interp;
        self
    }

    /// Attaches derivative samples at the centres (1-D) and switches to
    /// Hermite reading.
    pub fn with_derivative(mut self, d: Vec<f64>) -> Result<Self> {
        if self.dim() != 1 || d.len() != self.values.len() {
            return Err(Error::Parameter("derivative samples must match a 1-D grid".into()));
        }
        check_values(&d)?;
        self.derivative = Some(d);
        self.interp = Interp::Hermite;
        Ok(self)
    }

    pub fn domain(&self) -> Domain {
        self.domain
    }

    pub fn dim(&self) -> usize {
        self.domain.dim()
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.nx, self.ny)
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn derivative(&self) -> Option<&[f64]> {
        self.derivative.as_deref()
    }

    pub fn interp(&self) -> Interp {
        self.interp
    }

    pub fn cell_measure(&self) -> f64 {
        self.domain.measure() / self.values.len() as f64
    }

    /// Cell widths `(hx, hy)`; `hy = 1` in 1-D.
    pub fn spacing(&self) -> (f64, f64) {
        match self.domain {
            Domain::Box { x0, x1, y0, y1 } => ((x1 - x0) / self.nx as f64, (y1 - y0) / self.ny as f64),
            _ => (self.domain.measure() / self.nx as f64, 1.0),
        }
    }

    /// Centre of cell `i` of a 1-D grid.
    pub fn center(&self, i: usize) -> f64 {
        let (lo, _) = self.domain.bounds().unwrap_or((0.0, 0.0));
        lo + (i as f64 + 0.5) * self.spacing().0
    }

    /// Centre of cell `(i, j)` of a box grid.
    pub fn center2(&self, i: usize, j: usize) -> (f64, f64) {
        match self.domain {
            Domain::Box { x0, y0, .. } => {
                let (hx, hy) = self.spacing();
                (x0 + (i as f64 + 0.5) * hx, y0 + (j as f64 + 0.5) * hy)
            }
            _ => (self.center(i), 0.0),
        }
    }

    pub fn map(&self, f: impl Fn(f64) -> f64) -> Self {
        let mut out = self.clone();
        out.values.iter_mut().for_each(|v| *v = f(*v));
        out.derivative = None;
        if out.interp == Interp::Hermite {
            out.interp = Interp::Linear;
        }
        out
    }

    /// Same grid with new values.
    pub fn with_values(&self, values: Vec<f64>) -> Result<Self> {
        let mut out = Self::new(self.domain, self.nx, self.ny, values)?;
        out.interp = if self.interp == Interp::Hermite { Interp::Linear } else { self.interp };
        Ok(out)
    }

    pub fn mean(&self) -> f64 {
        self.values.iter().sum::<f64>() / self.values.len() as f64
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    /// Value at `x` of a 1-D grid under the grid's interpolation; zero
    /// outside the domain.
    pub fn eval(&self, x: f64) -> f64 {
        let Some((lo, hi)) = self.domain.bounds() else { return f64::NAN };
        if !(x >= lo && x < hi) {
            return 0.0;
        }
        let h = self.spacing().0;
        let n = self.nx;
        let cell = (((x - lo) / h) as usize).min(n - 1);
        match self.interp {
            Interp::Step => self.values[cell],
            Interp::Linear | Interp::Hermite => {
                let t = (x - lo) / h - 0.5;
                if t <= 0.0 || t >= (n - 1) as f64 {
                    // Outer half cells.
                    let k = if t <= 0.0 { 0 } else { n - 1 };
                    let dx = x - self.center(k);
                    return match &self.derivative {
                        Some(d) => self.values[k] + d[k] * dx,
                        None => self.values[k],
                    };
                }
                let k = (t.floor() as usize).min(n - 2);
                let u = t - k as f64;
                let (v0, v1) = (self.values[k], self.values[k + 1]);
                match (&self.derivative, self.interp) {
                    (Some(d), Interp::Hermite) => {
                        let (m0, m1) = (d[k] * h, d[k + 1] * h);
                        let u2 = u * u;
                        let u3 = u2 * u;
                        (2.0 * u3 - 3.0 * u2 + 1.0) * v0
                            + (u3 - 2.0 * u2 + u) * m0
                            + (-2.0 * u3 + 3.0 * u2) * v1
                            + (u3 - u2) * m1
                    }
                    _ => v0 + u * (v1 - v0),
                }
            }
        }
    }

    /// Derivative at `x` of the 1-D interpolant (zero for step reading).
    pub fn slope(&self, x: f64) -> f64 {
        let Some((lo, hi)) = self.domain.bounds() else { return f64::NAN };
        if !(x >= lo && x < hi) || self.interp == Interp::Step {
            return 0.0;
        }
        let h = self.spacing().0;
        let n = self.nx;
        let t = (x - lo) / h - 0.5;
        if t <= 0.0 || t >= (n - 1) as f64 {
            let k = if t <= 0.0 { 0 } else { n - 1 };
            return self.derivative.as_ref().map_or(0.0, |d| d[k]);
        }
        let k = (t.floor() as usize).min(n - 2);
        let u = t - k as f64;
        let (v0, v1) = (self.values[k], self.values[k + 1]);
        match (&self.derivative, self.interp) {
            (Some(d), Interp::Hermite) => {
                let (m0, m1) = (d[k] * h, d[k + 1] * h);
                let u2 = u * u;
                ((6.0 * u2 - 6.0 * u) * v0 + (3.0 * u2 - 4.0 * u + 1.0) * m0 + (-6.0 * u2 + 6.0 * u) * v1
                    + (3.0 * u2 - 2.0 * u) * m1)
                    / h
            }
            _ => (v1 - v0) / h,
        }
    }

    /// Value at `(x, y)` of a box grid; zero outside.
    pub fn eval2(&self, x: f64, y: f64) -> f64 {
        let Domain::Box { x0, x1, y0, y1 } = self.domain else { return f64::NAN };
        if !(x >= x0 && x < x1 && y >= y0 && y < y1) {
            return 0.0;
        }
        let (hx, hy) = self.spacing();
        let at = |i: usize, j: usize| self.values[j * self.nx + i];
        match self.interp {
            Interp::Step => {
                let i = (((x - x0) / hx) as usize).min(self.nx - 1);
                let j = (((y - y0) / hy) as usize).min(self.ny - 1);
                at(i, j)
            }
            _ => {
                let (i, u) = bilinear_index((x - x0) / hx - 0.5, self.nx);
                let (j, v) = bilinear_index((y - y0) / hy - 0.5, self.ny);
                let (i1, j1) = ((i + 1).min(self.nx - 1), (j + 1).min(self.ny - 1));
                (1.0 - u) * (1.0 - v) * at(i, j) + u * (1.0 - v) * at(i1, j) + (1.0 - u) * v * at(i, j1) + u * v * at(i1, j1)
            }
        }
    }

    /// Gradient of the bilinear interpolant at `(x, y)`.
    pub fn gradient2(&self, x: f64, y: f64) -> (f64, f64) {
        let Domain::Box { x0, x1, y0, y1 } = self.domain else { return (f64::NAN, f64::NAN) };
        if !(x >= x0 && x < x1 && y >= y0 && y < y1) || self.interp == Interp::Step {
            return (0.0, 0.0);
        }
        let (hx, hy) = self.spacing();
        let at = |i: usize, j: usize| self.values[j * self.nx + i];
        let (i, u) = bilinear_index((x - x0) / hx - 0.5, self.nx);
        let (j, v) = bilinear_index((y - y0) / hy - 0.5, self.ny);
        let (i1, j1) = ((i + 1).min(self.nx - 1), (j + 1).min(self.ny - 1));
        let dx = if i1 == i { 0.0 } else { ((1.0 - v) * (at(i1, j) - at(i, j)) + v * (at(i1, j1) - at(i, j1))) / hx };
        let dy = if j1 == j { 0.0 } else { ((1.0 - u) * (at(i, j1) - at(i, j)) + u * (at(i1, j1) - at(i1, j))) / hy };
        (dx, dy)
    }

    /// CSV rows `index, coordinate(s), value`.
    pub fn write_csv(&self, mut w: impl Write) -> Result<()> {
        if self.dim() == 1 {
            writeln!(w, "index,x,value")?;
            for (i, v) in self.values.iter().enumerate() {
                writeln!(w, "{i},{},{v}", self.center(i))?;
            }
        } else {
            writeln!(w, "index,x,y,value")?;
            for j in 0..self.ny {
                for i in 0..self.nx {
                    let (x, y) = self.center2(i, j);
                    writeln!(w, "{},{x},{y},{}", j * self.nx + i, self.values[j * self.nx + i])?;
                }
            }
        }
        Ok(())
    }

    /// JSON header describing the grid without its samples.
    pub fn header_json(&self) -> serde_json::Value {
        serde_json::json!({
            "domain": self.domain,
            "shape": [self.nx, self.ny],
            "cell_measure": self.cell_measure(),
            "interp": self.interp,
        })
    }
}

fn bilinear_index(t: f64, n: usize) -> (usize, f64) {
    if n == 1 || t <= 0.0 {
        return (0, 0.0);
    }
    if t >= (n - 1) as f64 {
        return (n - 1, 0.0);
    }
    let k = t.floor() as usize;
    (k, t - k as f64)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hermite_reproduces_cubics() {
        let f = |x: f64| x * x * x - x;
        let g = GridFunction::sample(Domain::Interval { a: 0.0, b: 1.0 }, 10, f)
            .unwrap()
            .with_derivative((0..10).map(|i| 3.0 * (0.05 + 0.1 * i as f64).powi(2) - 1.0).collect())
            .unwrap();
        for x in [0.11, 0.37, 0.5, 0.93] {
            assert!((g.eval(x) - f(x)).abs() < 1e-12);
            assert!((g.slope(x) - (3.0 * x * x - 1.0)).abs() < 1e-10);
        }
    }

    #[test]
    fn bilinear_is_exact_on_affine() {
        let g = GridFunction::sample_box((0.0, 1.0), (0.0, 2.0), 5, 7, |x, y| 2.0 * x - y + 1.0)
            .unwrap()
            .with_interp(Interp::Linear);
        assert!((g.eval2(0.33, 1.21) - (0.66 - 1.21 + 1.0)).abs() < 1e-12);
        let (dx, dy) = g.gradient2(0.5, 0.9);
        assert!((dx - 2.0).abs() < 1e-12 && (dy + 1.0).abs() < 1e-12);
        assert_eq!(g.eval2(1.5, 0.5), 0.0);
    }
}
