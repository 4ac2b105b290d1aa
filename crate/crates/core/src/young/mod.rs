//! Young functions: evaluation, conjugation, generalized inverses and growth
//! comparison.

mod compare;
mod moments;
mod powerlog;
mod spec;
mod tabulated;

use std::fmt;
use std::sync::Arc;

pub use compare::{
    dominates, grows_essentially_slower, matuszewska_index, ComparisonVerdict, GrowthConfig, GrowthEvidence,
    IndexEstimate, IndexRegime, Regime, RegimeWindows,
};
pub use moments::{Moment, MomentSide};
pub use powerlog::{PowerLog, PowerLogParams};
pub use spec::YoungSpec;
pub use tabulated::Tabulated;

use crate::error::{Error, Result};
use crate::roots::{self, Tolerance};

/// A Young function built elsewhere (for instance an optimal target), given
/// through its values and density.
pub trait Derived: Send + Sync + fmt::Debug {
    fn label(&self) -> String;
    fn eval(&self, t: f64) -> f64;
    fn density(&self, t: f64) -> f64;
    /// `ln A(e^w)`.
    fn ln_eval_ln(&self, w: f64) -> f64 {
        self.eval(w.exp()).ln()
    }
    /// Generalized inverse when a faster route than bisection exists.
    fn inverse(&self, _y: f64) -> Option<f64> {
        None
    }
    /// Half-width of the window of `ln t` over which `ln_eval_ln` is reliable.
    fn log_reach(&self) -> f64 {
        600.0
    }
    fn is_finite(&self) -> bool {
        true
    }
}

#[derive(Clone)]
enum Kind {
    PowerLog(PowerLog),
    Tabulated(Arc<Tabulated>),
    Conjugate(Arc<YoungFunction>),
    Derived(Arc<dyn Derived>),
}

/// Convex `A(t) = ∫_0^t a` with a non-decreasing left-continuous density `a`.
#[derive(Clone)]
pub struct YoungFunction {
    kind: Kind,
}

impl fmt::Debug for YoungFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "YoungFunction({})", self.label())
    }
}

impl YoungFunction {
    pub fn power(p: f64) -> Result<Self> {
        Self::powerlog(PowerLogParams::power(p))
    }

    pub fn powerlog(params: PowerLogParams) -> Result<Self> {
        Ok(YoungFunction { kind: Kind::PowerLog(PowerLog::new(params)?) })
    }

    pub fn tabulated(knots: &[[f64; 2]], finite: bool) -> Result<Self> {
        Ok(YoungFunction { kind: Kind::Tabulated(Arc::new(Tabulated::new(knots, finite)?)) })
    }

    pub fn derived(f: Arc<dyn Derived>) -> Self {
        YoungFunction { kind: Kind::Derived(f) }
    }

    pub fn label(&self) -> String {
        match &self.kind {
            Kind::PowerLog(f) => {
                let p = f.params();
                if let Some(e) = f.pure_power() {
                    format!("t^{e}")
                } else {
                    format!("powerlog(p={}, alpha={}, p0={}, alpha0={})", p.p, p.alpha, p.p0, p.alpha0)
                }
            }
            Kind::Tabulated(t) => format!("tabulated({} knots)", t.knots().len()),
            Kind::Conjugate(b) => format!("conjugate of {}", b.label()),
            Kind::Derived(d) => d.label(),
        }
    }

    /// `A(t)`; `+∞` past a blow-up of the density, NaN for negative `t`.
    pub fn eval(&self, t: f64) -> f64 {
        match &self.kind {
            Kind::PowerLog(f) => f.eval(t),
            Kind::Tabulated(f) => f.eval(t),
            Kind::Conjugate(base) => {
                if t < 0.0 {
                    return f64::NAN;
                }
                if t == 0.0 {
                    return 0.0;
                }
                let sigma = base.inverse_density(t);
                if sigma.is_infinite() {
                    return f64::INFINITY;
                }
                (t * sigma - base.eval(sigma)).max(0.0)
            }
            Kind::Derived(d) => {
                if t < 0.0 {
                    f64::NAN
                } else if t == 0.0 {
                    0.0
                } else {
                    d.eval(t)
                }
            }
        }
    }

    /// Left-continuous density `a(t)`.
    pub fn density(&self, t: f64) -> f64 {
        match &self.kind {
            Kind::PowerLog(f) => f.density(t),
            Kind::Tabulated(f) => f.density(t),
            Kind::Conjugate(base) => base.inverse_density(t),
            Kind::Derived(d) => d.density(t),
        }
    }

    /// `ln A(e^w)`.
    pub fn ln_eval_ln(&self, w: f64) -> f64 {
        match &self.kind {
            Kind::PowerLog(f) => f.ln_eval_ln(w),
            Kind::Derived(d) => d.ln_eval_ln(w),
            _ => self.eval(w.exp()).ln(),
        }
    }

    /// Range of `|ln t|` over which `ln_eval_ln` stays meaningful.
    pub fn log_reach(&self) -> f64 {
        match &self.kind {
            Kind::PowerLog(_) => 1e12,
            Kind::Tabulated(_) | Kind::Conjugate(_) => 600.0,
            Kind::Derived(d) => d.log_reach(),
        }
    }

    /// `inf{t ≥ 0 : a(t) ≥ y}`, `+∞` when the density never reaches `y`.
    pub fn inverse_density(&self, y: f64) -> f64 {
        match &self.kind {
            Kind::Tabulated(f) => f.inverse_density(y),
            Kind::Conjugate(base) => base.density(y),
            Kind::PowerLog(f) if f.pure_power().is_some() => {
                let p = f.params().p;
                if p == 1.0 {
                    if y <= 1.0 {
                        0.0
                    } else {
                        f64::INFINITY
                    }
                } else {
                    (y / p).powf(1.0 / (p - 1.0))
                }
            }
            _ => roots::inf_superlevel(|t| self.density(t), y, Tolerance::TIGHT).unwrap_or(f64::INFINITY),
        }
    }

    /// Whether `A` is finite on all of `[0, ∞)`.
    pub fn is_finite(&self) -> bool {
        match &self.kind {
            Kind::Tabulated(f) => f.is_finite(),
            Kind::Conjugate(base) => base.sup_density().is_infinite(),
            Kind::Derived(d) => d.is_finite(),
            Kind::PowerLog(_) => true,
        }
    }

    /// `sup a`.
    pub fn sup_density(&self) -> f64 {
        match &self.kind {
            Kind::Tabulated(f) => f.sup_density(),
            Kind::PowerLog(f) => f.bounded_density().unwrap_or(f64::INFINITY),
            // the conjugate density tops out where the base density blows up
            Kind::Conjugate(base) => base.inverse_density(f64::INFINITY),
            Kind::Derived(_) => f64::INFINITY,
        }
    }

    /// Exponent `p` when `A(t) = t^p` exactly.
    pub fn as_power(&self) -> Option<f64> {
        match &self.kind {
            Kind::PowerLog(f) => f.pure_power(),
            _ => None,
        }
    }

    pub fn as_powerlog(&self) -> Option<PowerLogParams> {
        match &self.kind {
            Kind::PowerLog(f) => Some(f.params()),
            _ => None,
        }
    }

    /// Generalized inverse `sup{t : A(t) ≤ y}`.
    pub fn inverse(&self, y: f64) -> Result<f64> {
        generalized_inverse(self, y)
    }
}

/// `A(t)` with a domain check on `t`.
pub fn eval_young(a: &YoungFunction, t: f64) -> Result<f64> {
    if !(t >= 0.0) {
        return Err(Error::Domain(format!("Young functions are defined on [0, ∞), got t = {t}")));
    }
    Ok(a.eval(t))
}

/// Young conjugate `Ã(t) = sup_τ (τt − A(τ))`, with density the left-continuous
/// inverse of `a`. Requires a finite-valued `A`.
pub fn conjugate(a: &YoungFunction) -> Result<YoungFunction> {
    if !a.is_finite() {
        return Err(Error::Unsupported(format!(
            "conjugation of a function taking the value +∞ ({})",
            a.label()
        )));
    }
    if let Kind::Conjugate(base) = &a.kind {
        if base.is_finite() {
            return Ok((**base).clone());
        }
    }
    if let Some(p) = a.as_power() {
        if p > 1.0 {
            // (t^p)~ = (p-1) p^{-p'} t^{p'}, kept exact through a derived form.
            return Ok(YoungFunction::derived(Arc::new(ConjugatePower::new(p))));
        }
    }
    Ok(YoungFunction { kind: Kind::Conjugate(Arc::new(a.clone())) })
}

/// `sup{t ≥ 0 : A(t) ≤ y}` by bracketed bisection.
pub fn generalized_inverse(a: &YoungFunction, y: f64) -> Result<f64> {
    if !(y >= 0.0) {
        return Err(Error::Domain(format!("inverse needs y >= 0, got {y}")));
    }
    if let Some(p) = a.as_power() {
        return Ok(y.powf(1.0 / p));
    }
    if let Kind::Derived(d) = &a.kind {
        if let Some(v) = d.inverse(y) {
            return Ok(v);
        }
    }
    roots::sup_sublevel(|t| a.eval(t), y, Tolerance::INVERSION)
}

/// Conjugate of `t^p`: `c t^{p'}` with `p' = p/(p-1)`, `c = (p-1) p^{-p'}`.
#[derive(Debug)]
struct ConjugatePower {
    p: f64,
    q: f64,
    c: f64,
}

impl ConjugatePower {
    fn new(p: f64) -> Self {
        let q = p / (p - 1.0);
        ConjugatePower { p, q, c: (p - 1.0) * p.powf(-q) }
    }
}

impl Derived for ConjugatePower {
    fn label(&self) -> String {
        format!("conjugate of t^{}", self.p)
    }
    fn eval(&self, t: f64) -> f64 {
        self.c * t.powf(self.q)
    }
    fn density(&self, t: f64) -> f64 {
        self.c * self.q * t.powf(self.q - 1.0)
    }
    fn ln_eval_ln(&self, w: f64) -> f64 {
        self.c.ln() + self.q * w
    }
    fn inverse(&self, y: f64) -> Option<f64> {
        Some((y / self.c).powf(1.0 / self.q))
    }
    fn log_reach(&self) -> f64 {
        1e12
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn shifted_identity() -> YoungFunction {
        YoungFunction::tabulated(&[[0.0, 0.0], [1.0, 0.0], [1.0, 1.0]], true).unwrap()
    }

    #[test]
    fn negative_argument_is_a_domain_error() {
        let a = YoungFunction::power(2.0).unwrap();
        assert!(matches!(eval_young(&a, -1.0), Err(Error::Domain(_))));
    }

    #[test]
    fn conjugate_of_shifted_identity_is_capped_identity() {
        let c = conjugate(&shifted_identity()).unwrap();
        assert!((c.eval(0.7) - 0.7).abs() < 1e-15);
        assert_eq!(c.eval(1.5), f64::INFINITY);
        assert!(!c.is_finite());
        assert!(conjugate(&c).is_err());
    }

    #[test]
    fn generalized_inverse_on_flat_segment() {
        let r = generalized_inverse(&shifted_identity(), 0.0).unwrap();
        assert!((r - 1.0).abs() < 1e-10);
    }

    #[test]
    fn self_conjugate_half_square() {
        let a = YoungFunction::tabulated(&[[0.0, 0.0], [100.0, 100.0]], true).unwrap();
        let c = conjugate(&a).unwrap();
        for t in [0.3, 1.0, 2.5] {
            assert!((c.eval(t) - 0.5 * t * t).abs() < 1e-14);
        }
    }
}
