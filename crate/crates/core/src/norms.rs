//! Luxemburg, Orlicz–Lorentz and Lorentz–Zygmund norms of sampled functions.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::grid::{Domain, GridFunction};
use crate::quad::{self, gauss_legendre};
use crate::rearrange::{decreasing_rearrangement, maximal_average, RearrangedProfile};
use crate::roots;
use crate::young::{Moment, MomentSide, YoungFunction};

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct NormResult {
    /// `+∞` when no scale brings the modular down to one.
    pub value: f64,
    /// Modular at `value`; at most one up to the bisection tolerance.
    pub modular: f64,
    pub iterations: usize,
    /// Difference between two quadrature rules for the modular at `value`.
    pub quad_error: f64,
}

impl NormResult {
    pub fn zero() -> Self {
        NormResult { value: 0.0, modular: 0.0, iterations: 0, quad_error: 0.0 }
    }

    pub fn infinite() -> Self {
        NormResult { value: f64::INFINITY, modular: f64::INFINITY, iterations: 0, quad_error: 0.0 }
    }
}

/// Relative width at which the bisection on the scale stops.
pub const SCALE_TOLERANCE: f64 = 1e-12;

/// A cell of a profile on `(0, L)`: constant, or read through
/// [`Profile::value`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Piece {
    pub r0: f64,
    pub r1: f64,
    pub flat: Option<f64>,
}

/// A non-negative function on `(0, L)` given cell by cell.
pub trait Profile: Sync {
    fn measure(&self) -> f64;
    /// Cells covering `(0, L)` in order.
    fn pieces(&self) -> Vec<Piece>;
    /// Value inside a non-constant cell.
    fn value(&self, r: f64) -> f64;
}

impl Profile for RearrangedProfile {
    fn measure(&self) -> f64 {
        RearrangedProfile::measure(self)
    }

    fn pieces(&self) -> Vec<Piece> {
        self.cells()
            .enumerate()
            .map(|(k, (r0, r1, v))| Piece { r0, r1, flat: (!self.is_average() || k == 0).then_some(v) })
            .collect()
    }

    fn value(&self, r: f64) -> f64 {
        self.eval(r)
    }
}

/// Cells of `|u|` in storage order; only meaningful for unweighted norms.
impl Profile for GridFunction {
    fn measure(&self) -> f64 {
        self.domain().measure()
    }

    fn pieces(&self) -> Vec<Piece> {
        let h = self.cell_measure();
        self.values()
            .iter()
            .enumerate()
            .map(|(k, v)| Piece { r0: k as f64 * h, r1: (k + 1) as f64 * h, flat: Some(v.abs()) })
            .collect()
    }

    fn value(&self, _r: f64) -> f64 {
        unreachable!("grid cells are constant")
    }
}

/// Input of the rearrangement-driven norms.
#[derive(Clone, Copy)]
pub enum NormInput<'a> {
    Grid(&'a GridFunction),
    Steps(&'a RearrangedProfile),
    /// An already non-increasing profile.
    Decreasing(&'a dyn Profile),
}

impl<'a> From<&'a GridFunction> for NormInput<'a> {
    fn from(g: &'a GridFunction) -> Self {
        NormInput::Grid(g)
    }
}

impl<'a> From<&'a RearrangedProfile> for NormInput<'a> {
    fn from(p: &'a RearrangedProfile) -> Self {
        NormInput::Steps(p)
    }
}

enum Held<'a> {
    Owned(RearrangedProfile),
    Borrowed(&'a dyn Profile),
}

impl NormInput<'_> {
    fn star(&self) -> Held<'_> {
        match *self {
            NormInput::Grid(g) => Held::Owned(decreasing_rearrangement(g)),
            NormInput::Steps(p) => Held::Owned(p.star()),
            NormInput::Decreasing(p) => Held::Borrowed(p),
        }
    }

    fn steps(&self) -> Result<RearrangedProfile> {
        match *self {
            NormInput::Grid(g) => Ok(decreasing_rearrangement(g)),
            NormInput::Steps(p) => Ok(p.star()),
            NormInput::Decreasing(_) => Err(Error::Unsupported("maximal average of a non-step profile".into())),
        }
    }
}

impl Held<'_> {
    fn get(&self) -> &dyn Profile {
        match self {
            Held::Owned(p) => p,
            Held::Borrowed(p) => *p,
        }
    }
}

/// Depth of the geometric refinement of a non-constant first cell.
const INNER_LEVELS: i32 = 60;
/// Cells with `r1/r0` below this are integrated by Gauss rules even when
/// constant, to avoid cancellation in differences of moments.
const MOMENT_RATIO: f64 = 2.0;

/// `∫_0^L A(r^β g(r)/λ) r^μ dr` for a profile `g`.
pub struct WeightedModular<'a> {
    a: &'a YoungFunction,
    beta: f64,
    mu: f64,
    moment: Option<Moment>,
    /// Constant cells `(r0, r1, v)` handled exactly.
    exact: Vec<(f64, f64, f64)>,
    /// `(argument, weight)` pairs for the 8- and 6-point rules.
    nodes8: Vec<(f64, f64)>,
    nodes6: Vec<(f64, f64)>,
}

impl<'a> WeightedModular<'a> {
    pub fn new(a: &'a YoungFunction, beta: f64, p: &dyn Profile) -> Result<Self> {
        Self::with_measure(a, beta, 0.0, p)
    }

    pub fn with_measure(a: &'a YoungFunction, beta: f64, mu: f64, p: &dyn Profile) -> Result<Self> {
        let moment = if beta == 0.0 { None } else { Some(Self::moment_for(a, beta, mu)?) };
        Ok(Self::assemble(a, beta, mu, moment, p))
    }

    /// The moment of `a` that constant cells need; reusable across profiles.
    pub fn moment_for(a: &YoungFunction, beta: f64, mu: f64) -> Result<Moment> {
        let side = if beta < 0.0 { MomentSide::Upper } else { MomentSide::Lower };
        Moment::new(a, (mu + 1.0) / beta, side)
    }

    /// As [`Self::with_measure`] with a moment from [`Self::moment_for`].
    pub fn with_moment(a: &'a YoungFunction, beta: f64, mu: f64, moment: &Moment, p: &dyn Profile) -> Result<Self> {
        let side = if beta < 0.0 { MomentSide::Upper } else { MomentSide::Lower };
        if beta == 0.0 || moment.side() != side || (moment.gamma() - (mu + 1.0) / beta).abs() > 1e-12 {
            return Err(Error::Parameter("moment does not match the weight".into()));
        }
        Ok(Self::assemble(a, beta, mu, Some(moment.clone()), p))
    }

    fn assemble(a: &'a YoungFunction, beta: f64, mu: f64, moment: Option<Moment>, p: &dyn Profile) -> Self {
        let mut m =
            WeightedModular { a, beta, mu, moment, exact: Vec::new(), nodes8: Vec::new(), nodes6: Vec::new() };
        for piece in p.pieces() {
            match piece.flat {
                Some(v) if v == 0.0 => {}
                Some(v) if beta == 0.0 || piece.r0 == 0.0 || piece.r1 >= MOMENT_RATIO * piece.r0 => {
                    m.exact.push((piece.r0, piece.r1, v))
                }
                Some(v) => m.push_log_cell(piece.r0, piece.r1, &|_| v),
                None if piece.r0 > 0.0 => m.push_log_cell(piece.r0, piece.r1, &|r| p.value(r)),
                None => {
                    let mut hi = piece.r1;
                    for _ in 0..INNER_LEVELS {
                        m.push_log_cell(0.5 * hi, hi, &|r| p.value(r));
                        hi *= 0.5;
                    }
                    let v = p.value(hi);
                    if v > 0.0 {
                        m.exact.push((0.0, hi, v));
                    }
                }
            }
        }
        m
    }

    fn push_log_cell(&mut self, r0: f64, r1: f64, g: &dyn Fn(f64) -> f64) {
        let (l0, l1) = (r0.ln(), r1.ln());
        for (rule, out) in [(8, &mut self.nodes8), (6, &mut self.nodes6)] {
            for (x, w) in gauss_legendre(rule).mapped(l0, l1) {
                let r = x.exp();
                let arg = r.powf(self.beta) * g(r);
                if arg > 0.0 {
                    out.push((arg, w * r.powf(self.mu + 1.0)));
                }
            }
        }
    }

    /// `∫_{r0}^{r1} A(c r^β) r^μ dr`.
    fn exact_cell(&self, r0: f64, r1: f64, c: f64) -> f64 {
        match &self.moment {
            None => {
                let e = self.mu + 1.0;
                self.a.eval(c) * (r1.powf(e) - r0.powf(e)) / e
            }
            Some(m) => {
                let g = (self.mu + 1.0) / self.beta;
                let t0 = if r0 == 0.0 { if self.beta < 0.0 { f64::INFINITY } else { 0.0 } } else { c * r0.powf(self.beta) };
                let t1 = c * r1.powf(self.beta);
                let diff = (m.eval(t1) - m.eval(t0)).abs();
                diff * c.powf(-g) / self.beta.abs()
            }
        }
    }

    pub fn eval(&self, lambda: f64) -> f64 {
        self.eval_with(lambda, &self.nodes8)
    }

    fn eval_with(&self, lambda: f64, nodes: &[(f64, f64)]) -> f64 {
        let exact: f64 = self.exact.iter().map(|&(r0, r1, v)| self.exact_cell(r0, r1, v / lambda)).sum();
        let gauss: f64 = nodes.iter().map(|&(arg, w)| self.a.eval(arg / lambda) * w).sum();
        exact + gauss
    }

    pub fn rule_gap(&self, lambda: f64) -> f64 {
        (self.eval_with(lambda, &self.nodes8) - self.eval_with(lambda, &self.nodes6)).abs()
    }

    fn is_zero(&self) -> bool {
        self.exact.is_empty() && self.nodes8.is_empty()
    }

    /// Weighted mean of the arguments, the starting guess for the scale.
    fn first_moment(&self) -> f64 {
        let mut num = 0.0;
        let mut den = 0.0;
        for &(r0, r1, v) in &self.exact {
            let mid = if r0 == 0.0 { 0.5 * r1 } else { (r0 * r1).sqrt() };
            num += v * mid.powf(self.beta) * (r1 - r0);
            den += r1 - r0;
        }
        for &(arg, w) in &self.nodes8 {
            num += arg * w;
            den += w;
        }
        if num > 0.0 && num.is_finite() {
            num / den
        } else {
            1.0
        }
    }

    /// Smallest `λ` with modular at most one.
    pub fn luxemburg(&self) -> NormResult {
        if self.is_zero() {
            return NormResult::zero();
        }
        match roots::decreasing_crossing(|l| self.eval(l), 1.0, self.first_moment(), SCALE_TOLERANCE) {
            Some((value, iterations)) => NormResult {
                value,
                modular: self.eval(value),
                iterations,
                quad_error: self.rule_gap(value),
            },
            None => NormResult::infinite(),
        }
    }
}

/// `inf{λ > 0 : ∫A(|f|/λ) ≤ 1}`.
pub fn luxemburg_norm(a: &YoungFunction, f: &dyn Profile) -> Result<NormResult> {
    Ok(WeightedModular::new(a, 0.0, f)?.luxemburg())
}

/// `‖r^{-1/q} u*(r)‖_{L^A(0,|Ω|)}` for `q > 1`; requires
/// `∫^∞ A(t) t^{-1-q} dt < ∞`.
pub fn orlicz_lorentz_norm(a: &YoungFunction, q: f64, f: NormInput) -> Result<NormResult> {
    if !(q > 1.0) {
        return Err(Error::Parameter(format!("L(A, q) needs q > 1, got {q}")));
    }
    let star = f.star();
    match WeightedModular::new(a, -1.0 / q, star.get()) {
        Ok(m) => Ok(m.luxemburg()),
        Err(Error::Unsupported(msg)) => Err(Error::NotNormable(format!("∫^∞ A(t)/t^(1+{q}) dt: {msg}"))),
        Err(e) => Err(e),
    }
}

/// `‖r^{-1/q} u**(r)‖_{L^A(0,|Ω|)}` for `q < −1`. On half-line grids, which
/// stand for infinite measure, `∫_0 A(t) t^{-1-(-q)'} dt < ∞` is required.
/// Any Young function is accepted; in the duality with `L(Â, n/s)` it is
/// called with the conjugate of `Â`.
pub fn orlicz_lorentz_dual_norm(a: &YoungFunction, q: f64, f: NormInput) -> Result<NormResult> {
    if !(q < -1.0) {
        return Err(Error::Parameter(format!("L[A, q] needs q < −1, got {q}")));
    }
    if let NormInput::Grid(g) = f {
        if matches!(g.domain(), Domain::HalfLine { .. }) {
            let conj = q / (q + 1.0);
            if let Err(e) = Moment::new(a, -conj, MomentSide::Lower) {
                return Err(Error::NotNormable(format!("∫_0 A(t)/t^(1+{conj}) dt: {e}")));
            }
        }
    }
    let avg = maximal_average(&f.steps()?);
    Ok(WeightedModular::new(a, -1.0 / q, &avg)?.luxemburg())
}

/// Parameters of `‖r^{1/σ−1/p} ℓ(r)^γ ℓℓ(r)^δ u*(r)‖_{L^p}`, with
/// `ℓ(r) = log(1 + L/r)` and `ℓℓ(r) = log(1 + ℓ(r))`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, serde::Deserialize)]
pub struct LorentzZygmund {
    pub sigma: f64,
    pub p: f64,
    pub gamma: f64,
    pub delta: f64,
}

impl LorentzZygmund {
    /// Accepts the regimes in which the functional is known to be equivalent
    /// to a rearrangement-invariant norm; anything else is rejected as
    /// unvalidated.
    pub fn validate(&self) -> Result<()> {
        let LorentzZygmund { sigma, p, gamma, .. } = *self;
        let in_range = |x: f64| x >= 1.0 && !x.is_nan();
        let ok = in_range(sigma)
            && in_range(p)
            && ((sigma == 1.0 && p == 1.0 && gamma >= 0.0)
                || (sigma > 1.0 && sigma.is_finite())
                || (sigma.is_infinite() && p.is_finite() && gamma + 1.0 / p < 0.0)
                || (sigma.is_infinite() && p.is_infinite() && gamma <= 0.0));
        if ok {
            Ok(())
        } else {
            Err(Error::Unsupported(format!("Lorentz–Zygmund parameters {self:?} lie outside the validated regimes")))
        }
    }

    fn weight(&self, r: f64, total: f64) -> f64 {
        let l = (total / r).ln_1p();
        let mut w = r.powf(1.0 / self.sigma - 1.0 / self.p);
        if self.gamma != 0.0 {
            w *= l.powf(self.gamma);
        }
        if self.delta != 0.0 {
            w *= l.ln_1p().powf(self.delta);
        }
        w
    }
}

/// Generalized Lorentz–Zygmund norm on `(0, total)`; `total` defaults to
/// the measure of the input.
pub fn lorentz_zygmund_norm(params: LorentzZygmund, f: NormInput, total: Option<f64>) -> Result<NormResult> {
    params.validate()?;
    let star = f.star();
    let prof = star.get();
    let total = total.unwrap_or_else(|| prof.measure());
    if !(total >= prof.measure()) {
        return Err(Error::Parameter(format!("total measure {total} is below the support {}", prof.measure())));
    }
    let p = params.p;
    let value_at = |piece: &Piece, r: f64| piece.flat.unwrap_or_else(|| prof.value(r));
    if p.is_infinite() {
        let mut sup: f64 = 0.0;
        for piece in prof.pieces() {
            let lo = if piece.r0 == 0.0 { piece.r1 * 1e-300f64.max(f64::MIN_POSITIVE) } else { piece.r0 };
            let (l0, l1) = (lo.ln(), piece.r1.ln());
            for k in 0..=32 {
                let r = (l0 + (l1 - l0) * k as f64 / 32.0).exp();
                sup = sup.max(params.weight(r, total) * value_at(&piece, r));
            }
        }
        return Ok(NormResult { value: sup, modular: sup, iterations: 0, quad_error: 0.0 });
    }
    let mut sum = 0.0;
    let mut err = 0.0;
    for piece in prof.pieces() {
        let integrand = |x: f64| {
            let r = x.exp();
            (params.weight(r, total) * value_at(&piece, r)).powf(p) * r
        };
        let est = if piece.r0 == 0.0 {
            quad::half_line(piece.r1.ln(), -1.0, 1e-13, 2000.0, integrand)
        } else {
            quad::adaptive(piece.r0.ln(), piece.r1.ln(), 0.0, 1e-13, integrand)
        };
        if !est.converged && !est.value.is_finite() {
            return Ok(NormResult::infinite());
        }
        if !est.converged && piece.r0 == 0.0 {
            return Ok(NormResult::infinite());
        }
        sum += est.value;
        err += est.error;
    }
    let value = sum.powf(1.0 / p);
    Ok(NormResult { value, modular: sum, iterations: 0, quad_error: value * err / (p * sum.max(f64::MIN_POSITIVE)) })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn chi(len: f64, support: f64, n: usize) -> GridFunction {
        GridFunction::sample(Domain::HalfLine { len }, n, |x| if x < support { 1.0 } else { 0.0 }).unwrap()
    }

    #[test]
    fn luxemburg_of_indicator() {
        let a = YoungFunction::power(2.0).unwrap();
        let r = luxemburg_norm(&a, &chi(2.0, 2.0, 4)).unwrap();
        assert!((r.value - 2f64.sqrt()).abs() < 1e-11);
        assert!(r.modular <= 1.0 + 1e-10);
    }

    #[test]
    fn orlicz_lorentz_of_indicator() {
        let a = YoungFunction::power(2.0).unwrap();
        let f = chi(1.0, 1.0, 1);
        let r = orlicz_lorentz_norm(&a, 4.0, (&f).into()).unwrap();
        assert!((r.value - 2f64.sqrt()).abs() < 1e-10, "{}", r.value);
        let r = orlicz_lorentz_dual_norm(&a, -4.0, (&f).into()).unwrap();
        assert!((r.value - (2.0f64 / 3.0).sqrt()).abs() < 1e-10, "{}", r.value);
    }

    #[test]
    fn lorentz_zygmund_basics() {
        let f = chi(1.0, 1.0, 3);
        let lz = |sigma, p, gamma| LorentzZygmund { sigma, p, gamma, delta: 0.0 };
        let r = lorentz_zygmund_norm(lz(2.0, 2.0, 0.0), (&f).into(), None).unwrap();
        assert!((r.value - 1.0).abs() < 1e-10);
        let r = lorentz_zygmund_norm(lz(2.0, 1.0, 0.0), (&f).into(), None).unwrap();
        assert!((r.value - 2.0).abs() < 1e-10);
        assert!(lz(0.5, 1.0, 0.0).validate().is_err());
        assert!(lz(f64::INFINITY, 2.0, 0.0).validate().is_err());
    }
}
