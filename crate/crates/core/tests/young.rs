use orlicz_core::young::{
    conjugate, dominates, generalized_inverse, matuszewska_index, IndexRegime, PowerLogParams, Regime, RegimeWindows,
    YoungSpec,
};
use orlicz_core::YoungFunction;
use proptest::prelude::*;

/// `sup_τ (τt − A(τ))` by a coarse log scan followed by golden section.
fn legendre_scan(a: &YoungFunction, t: f64) -> f64 {
    let g = |lt: f64| {
        let tau = lt.exp();
        tau * t - a.eval(tau)
    };
    let (mut best, mut arg) = (0.0, -30.0);
    for k in 0..=1200 {
        let lt = -30.0 + k as f64 * 0.05;
        let v = g(lt);
        if v > best {
            best = v;
            arg = lt;
        }
    }
    let (mut lo, mut hi) = (arg - 0.05, arg + 0.05);
    let phi = 0.5 * (5f64.sqrt() - 1.0);
    for _ in 0..100 {
        let m1 = hi - phi * (hi - lo);
        let m2 = lo + phi * (hi - lo);
        if g(m1) < g(m2) {
            lo = m1;
        } else {
            hi = m2;
        }
    }
    best.max(g(0.5 * (lo + hi)))
}

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs().max(1e-300)
}

#[test]
fn power_conjugate_matches_legendre_transform() {
    for p in [1.5, 2.0, 3.0, 4.5] {
        let a = YoungFunction::power(p).unwrap();
        let c = conjugate(&a).unwrap();
        for t in [0.1, 0.5, 1.0, 3.0, 20.0] {
            assert!(rel(c.eval(t), legendre_scan(&a, t)) < 1e-8, "p = {p}, t = {t}");
        }
    }
}

#[test]
fn tabulated_conjugate_matches_legendre_transform() {
    let a: YoungFunction = "tabulated:0:0;1:1;2:3;4:4".parse().unwrap();
    let c = conjugate(&a).unwrap();
    for t in [0.3, 1.0, 2.5, 3.9] {
        assert!(rel(c.eval(t), legendre_scan(&a, t)) < 1e-8, "t = {t}");
    }
}

#[test]
fn tabulated_integrates_piecewise_linear_density() {
    // density 0 → 2 on [0, 1], then flat 2: A(t) = t² on [0, 1], 1 + 2(t − 1) after
    let a: YoungFunction = "tabulated:0:0;1:2".parse().unwrap();
    assert!((a.eval(0.5) - 0.25).abs() < 1e-15);
    assert!((a.eval(3.0) - 5.0).abs() < 1e-15);
    let blow: YoungFunction = "tabulated:0:0;1:2;inf".parse().unwrap();
    assert!(blow.eval(1.5).is_infinite());
    assert!(conjugate(&blow).is_err());
}

#[test]
fn powerlog_reduces_to_power() {
    let a = YoungFunction::powerlog(PowerLogParams::power(2.5)).unwrap();
    for t in [1e-3, 0.7, 1.0, 40.0] {
        assert!(rel(a.eval(t), t.powf(2.5)) < 1e-14);
    }
}

#[test]
fn spec_round_trip_preserves_values() {
    let a: YoungFunction = "powerlog:p=2,alpha=1,p0=3".parse().unwrap();
    let json = YoungSpec::of(&a).to_json();
    let b: YoungFunction = json.parse().unwrap();
    for t in [1e-2, 0.5, 2.0, 1e3] {
        assert!(rel(a.eval(t), b.eval(t)) < 1e-14);
    }
}

#[test]
fn index_of_power_is_its_exponent() {
    for p in [1.5, 2.0, 4.0] {
        let est = matuszewska_index(&YoungFunction::power(p).unwrap(), IndexRegime::Global).unwrap();
        assert!((est.value - p).abs() < 1e-6, "p = {p}: {}", est.value);
    }
}

#[test]
fn larger_power_dominates_near_infinity_only() {
    let (a, b) = (YoungFunction::power(3.0).unwrap(), YoungFunction::power(2.0).unwrap());
    let w = RegimeWindows::default();
    assert!(dominates(&a, &b, Regime::NearInfinity, &w).dominates);
    assert!(!dominates(&a, &b, Regime::NearZero, &w).dominates);
    assert!(dominates(&b, &a, Regime::NearZero, &w).dominates);
}

fn powerlog() -> impl Strategy<Value = YoungFunction> {
    (1.2f64..4.0, -1.0f64..2.0, 1.2f64..4.0).prop_map(|(p, alpha, p0)| {
        YoungFunction::powerlog(PowerLogParams::at_infinity(p, alpha).with_zero(p0, 0.0)).unwrap()
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn young_inequality(a in powerlog(), s in 1e-3f64..1e3, t in 1e-3f64..1e3) {
        let c = conjugate(&a).unwrap();
        prop_assert!(s * t <= (a.eval(s) + c.eval(t)) * (1.0 + 1e-10));
    }

    #[test]
    fn equality_at_the_density(a in powerlog(), s in 1e-2f64..1e2) {
        let c = conjugate(&a).unwrap();
        let t = a.density(s);
        prop_assert!(rel(a.eval(s) + c.eval(t), s * t) < 1e-6);
    }

    #[test]
    fn convex_and_increasing(a in powerlog(), x in 1e-3f64..1e3, y in 1e-3f64..1e3) {
        let mid = a.eval(0.5 * (x + y));
        prop_assert!(mid <= 0.5 * (a.eval(x) + a.eval(y)) * (1.0 + 1e-12));
        let (lo, hi) = if x < y { (x, y) } else { (y, x) };
        prop_assert!(a.eval(lo) <= a.eval(hi));
        // A(t)/t is non-decreasing for a convex A with A(0) = 0
        prop_assert!(a.eval(lo) / lo <= a.eval(hi) / hi * (1.0 + 1e-12));
    }

    #[test]
    fn inverse_inverts(a in powerlog(), y in 1e-4f64..1e4) {
        let t = generalized_inverse(&a, y).unwrap();
        prop_assert!(rel(a.eval(t), y) < 1e-9);
    }
}
