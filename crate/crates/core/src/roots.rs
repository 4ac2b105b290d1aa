//! Bracketed bisection for monotone scalar maps.

use crate::error::{Error, Result};

/// Stopping rule for monotone inversion: the bracket width must fall below
/// the looser of the absolute and the relative bound.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerance {
    pub abs: f64,
    pub rel: f64,
}

impl Tolerance {
    pub const INVERSION: Tolerance = Tolerance { abs: 1e-12, rel: 1e-10 };
    pub const TIGHT: Tolerance = Tolerance { abs: 0.0, rel: 4e-16 };

    fn done(&self, lo: f64, hi: f64) -> bool {
        hi - lo <= self.abs.max(self.rel * hi.abs())
    }
}

/// Upper limit for bracket expansion.
pub const BRACKET_GUARD: f64 = 1e300;

fn midpoint(lo: f64, hi: f64) -> f64 {
    if lo > 0.0 && hi > 4.0 * lo {
        (lo * hi).sqrt()
    } else {
        lo + 0.5 * (hi - lo)
    }
}

/// `sup{t ≥ 0 : f(t) ≤ y}` for a non-decreasing `f` with `f(0) ≤ y`.
///
/// The upper bracket starts at 1 and doubles; reaching the guard returns a
/// range error.
pub fn sup_sublevel(f: impl Fn(f64) -> f64, y: f64, tol: Tolerance) -> Result<f64> {
    let mut lo = 0.0;
    let mut hi = 1.0;
    while f(hi) <= y {
        lo = hi;
        hi *= 2.0;
        if hi > BRACKET_GUARD {
            return Err(Error::Range {
                value: y,
                detail: format!("function stays at or below the level up to t = {lo:e}"),
            });
        }
    }
    if lo == 0.0 {
        while hi > 1e-300 && f(0.5 * hi) > y {
            hi *= 0.5;
        }
        if hi > 1e-300 {
            lo = 0.5 * hi;
        }
    }
    for _ in 0..2000 {
        if tol.done(lo, hi) {
            break;
        }
        let m = midpoint(lo, hi);
        if m <= lo || m >= hi {
            break;
        }
        if f(m) <= y {
            lo = m;
        } else {
            hi = m;
        }
    }
    Ok(lo)
}

/// `inf{t ≥ 0 : f(t) ≥ y}` for a non-decreasing `f`; `None` when `f` stays
/// below `y` up to the guard.
pub fn inf_superlevel(f: impl Fn(f64) -> f64, y: f64, tol: Tolerance) -> Option<f64> {
    if f(0.0) >= y {
        return Some(0.0);
    }
    let mut lo = 0.0;
    let mut hi = 1.0;
    while f(hi) < y {
        lo = hi;
        hi *= 2.0;
        if hi > BRACKET_GUARD {
            return None;
        }
    }
    if lo == 0.0 {
        // Shrink towards zero geometrically before bisecting.
        while hi > 1e-300 && f(0.5 * hi) >= y {
            hi *= 0.5;
        }
        lo = 0.5 * hi;
        if f(lo) >= y {
            return Some(lo);
        }
    }
    for _ in 0..2000 {
        if tol.done(lo, hi) {
            break;
        }
        let m = midpoint(lo, hi);
        if m <= lo || m >= hi {
            break;
        }
        if f(m) >= y {
            hi = m;
        } else {
            lo = m;
        }
    }
    Some(hi)
}

/// Root of a non-increasing function `g` of `λ > 0` crossing `level`,
/// searched in `ln λ` from the bracket `[start/10, 10·start]` expanded
/// geometrically. Returns the smallest bracketed `λ` with `g(λ) ≤ level`
/// and the number of bisection steps.
pub fn decreasing_crossing(
    g: impl Fn(f64) -> f64,
    level: f64,
    start: f64,
    rel_width: f64,
) -> Option<(f64, usize)> {
    let mut lo = start / 10.0;
    let mut hi = start * 10.0;
    let mut steps = 0;
    while g(hi) > level {
        lo = hi;
        hi *= 10.0;
        steps += 1;
        if hi > BRACKET_GUARD {
            return None;
        }
    }
    while g(lo) <= level {
        hi = lo;
        lo /= 10.0;
        steps += 1;
        if lo < 1e-300 {
            return Some((hi, steps));
        }
    }
    while hi - lo > rel_width * hi {
        let m = (lo * hi).sqrt();
        if m <= lo || m >= hi {
            break;
        }
        if g(m) > level {
            lo = m;
        } else {
            hi = m;
        }
        steps += 1;
    }
    Some((hi, steps))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fourth_root() {
        let r = sup_sublevel(|t| t.powi(4), 16.0, Tolerance::INVERSION).unwrap();
        assert!((r - 2.0).abs() < 2e-10);
    }

    #[test]
    fn flat_segment_takes_right_end() {
        let r = sup_sublevel(|t: f64| (t - 1.0).max(0.0), 0.0, Tolerance::INVERSION).unwrap();
        assert!((r - 1.0).abs() < 1e-10);
    }

    #[test]
    fn superlevel_takes_left_end_of_flat() {
        // density 0 up to 1, then 1: inf{a >= 0.5} = 1
        let r = inf_superlevel(|t| if t > 1.0 { 1.0 } else { 0.0 }, 0.5, Tolerance::TIGHT).unwrap();
        assert!((r - 1.0).abs() < 1e-14);
    }

    #[test]
    fn bounded_function_reports_range() {
        assert!(sup_sublevel(|t: f64| t.min(5.0), 10.0, Tolerance::INVERSION).is_err());
        assert!(inf_superlevel(|t: f64| t.min(5.0), 10.0, Tolerance::INVERSION).is_none());
    }

    #[test]
    fn crossing_of_power() {
        let (l, _) = decreasing_crossing(|l| 2.0 / (l * l), 1.0, 1.0, 1e-12).unwrap();
        assert!((l - 2f64.sqrt()).abs() < 1e-11);
    }
}
