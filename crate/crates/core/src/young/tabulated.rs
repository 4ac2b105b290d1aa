use crate::error::{Error, Result};

/// Young function with a piecewise-linear density through knots `(t, a)`.
///
/// Repeated abscissae encode a jump, evaluated left-continuously. Beyond
/// the last knot the density stays constant when `finite`, and is `+∞`
/// otherwise (so `A = +∞` past the last knot).
#[derive(Debug, Clone, PartialEq)]
pub struct Tabulated {
    t: Vec<f64>,
    a: Vec<f64>,
    cum: Vec<f64>,
    finite: bool,
}

impl Tabulated {
    pub fn new(knots: &[[f64; 2]], finite: bool) -> Result<Self> {
        let Some(first) = knots.first() else {
            return Err(Error::Parameter("tabulated density needs at least one knot".into()));
        };
        if first[0] != 0.0 {
            return Err(Error::Parameter(format!("first knot must sit at t = 0, got {}", first[0])));
        }
        for w in knots.windows(2) {
            if w[1][0] < w[0][0] {
                return Err(Error::Parameter("knot abscissae must be non-decreasing".into()));
            }
            if w[1][1] < w[0][1] {
                return Err(Error::Parameter(format!("density decreases at t = {}", w[1][0])));
            }
        }
        if knots.iter().any(|k| !(k[0].is_finite() && k[1].is_finite() && k[1] >= 0.0)) {
            return Err(Error::Parameter("knots must be finite with non-negative density".into()));
        }
        let last = knots[knots.len() - 1];
        if finite && last[1] == 0.0 {
            return Err(Error::Parameter("density vanishes identically".into()));
        }
        let t: Vec<f64> = knots.iter().map(|k| k[0]).collect();
        let a: Vec<f64> = knots.iter().map(|k| k[1]).collect();
        let mut cum = vec![0.0; t.len()];
        for k in 1..t.len() {
            cum[k] = cum[k - 1] + 0.5 * (a[k] + a[k - 1]) * (t[k] - t[k - 1]);
        }
        Ok(Tabulated { t, a, cum, finite })
    }

    pub fn knots(&self) -> Vec<[f64; 2]> {
        self.t.iter().zip(&self.a).map(|(t, a)| [*t, *a]).collect()
    }

    pub fn is_finite(&self) -> bool {
        self.finite
    }

    pub fn sup_density(&self) -> f64 {
        if self.finite {
            self.a[self.a.len() - 1]
        } else {
            f64::INFINITY
        }
    }

    /// Index `k` of the first knot with `t_k >= t`.
    fn locate(&self, t: f64) -> usize {
        self.t.partition_point(|&x| x < t)
    }

    pub fn density(&self, t: f64) -> f64 {
        if t <= 0.0 {
            return self.a[0];
        }
        let k = self.locate(t);
        if k == self.t.len() {
            return if self.finite { self.a[k - 1] } else { f64::INFINITY };
        }
        let (t0, t1) = (self.t[k - 1], self.t[k]);
        self.a[k - 1] + (self.a[k] - self.a[k - 1]) * (t - t0) / (t1 - t0)
    }

    pub fn eval(&self, t: f64) -> f64 {
        if t <= 0.0 {
            return if t == 0.0 { 0.0 } else { f64::NAN };
        }
        let k = self.locate(t);
        let n = self.t.len();
        if k == n {
            return if self.finite {
                self.cum[n - 1] + self.a[n - 1] * (t - self.t[n - 1])
            } else {
                f64::INFINITY
            };
        }
        let t0 = self.t[k - 1];
        let at = self.density(t);
        self.cum[k - 1] + 0.5 * (self.a[k - 1] + at) * (t - t0)
    }

    /// Left-continuous inverse of the density, `inf{t : a(t) >= y}`.
    pub fn inverse_density(&self, y: f64) -> f64 {
        if y <= self.a[0] {
            return 0.0;
        }
        let k = self.a.partition_point(|&a| a < y);
        if k == self.a.len() {
            return if self.finite { f64::INFINITY } else { self.t[k - 1] };
        }
        let (t0, t1) = (self.t[k - 1], self.t[k]);
        if t1 == t0 {
            return t1;
        }
        t0 + (y - self.a[k - 1]) / (self.a[k] - self.a[k - 1]) * (t1 - t0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn shifted_identity() {
        let f = Tabulated::new(&[[0.0, 0.0], [1.0, 0.0], [1.0, 1.0]], true).unwrap();
        assert_eq!(f.eval(2.5), 1.5);
        assert_eq!(f.eval(0.7), 0.0);
        assert_eq!(f.density(1.0), 0.0);
        assert_eq!(f.density(1.0 + 1e-12), 1.0);
        assert_eq!(f.inverse_density(0.5), 1.0);
        assert_eq!(f.inverse_density(0.0), 0.0);
        assert_eq!(f.inverse_density(2.0), f64::INFINITY);
    }

    #[test]
    fn linear_density_integrates_exactly() {
        let f = Tabulated::new(&[[0.0, 0.0], [2.0, 2.0]], true).unwrap();
        assert!((f.eval(1.5) - 1.125).abs() < 1e-15);
        assert!((f.eval(3.0) - (2.0 + 2.0)).abs() < 1e-15);
    }

    #[test]
    fn infinite_beyond_last_knot() {
        let f = Tabulated::new(&[[0.0, 0.0], [1.0, 1.0]], false).unwrap();
        assert_eq!(f.eval(1.5), f64::INFINITY);
        assert_eq!(f.inverse_density(5.0), 1.0);
    }
}
