use orlicz_core::extension::{
    cross_weight, cutoff_multiply, extend_zero, reflect_extend, verify_extend_zero, verify_pipeline, verify_reflection,
    CutoffFunction,
};
use orlicz_core::gagliardo::McConfig;
use orlicz_core::grid::{Domain, GridFunction, Interp};
use orlicz_core::YoungFunction;
use proptest::prelude::*;

/// `∫_{ℝ²∖(−1,1)²} dist(y, (−e,e)²)^{−2−s} dy` over one of eight symmetric
/// wedges `y₀ = r > 1, y₁ = rθ`, with `r = z^{−1/s}` to flatten the tail.
fn square_weight_oracle(e: f64, s: f64) -> f64 {
    let simpson = |lo: f64, hi: f64, n: usize, f: &dyn Fn(f64) -> f64| {
        let h = (hi - lo) / n as f64;
        let mut acc = f(lo) + f(hi);
        for k in 1..n {
            acc += f(lo + k as f64 * h) * if k % 2 == 1 { 4.0 } else { 2.0 };
        }
        acc * h / 3.0
    };
    let wedge = |r: f64| {
        let flat = e / r * (r - e).powf(-2.0 - s);
        let slope = simpson(e / r, 1.0, 400, &|t| (r - e).hypot(r * t - e).powf(-2.0 - s));
        r * (flat + slope)
    };
    let m = 4000;
    let total: f64 = (0..m)
        .map(|k| {
            let z = (k as f64 + 0.5) / m as f64;
            wedge(z.powf(-1.0 / s)) * z.powf(-1.0 / s - 1.0) / s
        })
        .sum::<f64>()
        / m as f64;
    8.0 * total
}

#[test]
fn one_dimensional_cross_weight_is_two_tails() {
    // ∫_{y<0} (e0 − y)^{−1−s} + ∫_{y>1} (y − e1)^{−1−s}
    let (w, err) = cross_weight(&Domain::Interval { a: 0.1, b: 0.6 }, &Domain::Interval { a: 0.0, b: 1.0 }, 0.3).unwrap();
    assert_eq!(err, 0.0);
    assert!((w - (0.1f64.powf(-0.3) + 0.4f64.powf(-0.3)) / 0.3).abs() < 1e-12);
}

#[test]
fn square_cross_weight_matches_wedge_integration() {
    let omega = Domain::Box { x0: -1.0, x1: 1.0, y0: -1.0, y1: 1.0 };
    for (e, s) in [(0.5, 0.5), (0.25, 0.3), (0.75, 0.8)] {
        let inner = Domain::Box { x0: -e, x1: e, y0: -e, y1: e };
        let (w, err) = cross_weight(&inner, &omega, s).unwrap();
        let expect = square_weight_oracle(e, s);
        assert!((w - expect).abs() < 1e-5 * expect + err, "e = {e}, s = {s}: {w} vs {expect}");
    }
}

#[test]
fn reflection_norm_ratio_for_the_square() {
    // ‖ℰ₁u‖ = 2^{1/2}‖u‖ when A = t²
    let u = GridFunction::sample(Domain::Interval { a: 0.0, b: 1.0 }, 32, |x| (1.0 - x) * (1.0 - x)).unwrap();
    let rep = verify_reflection(&u, 0.4, &YoungFunction::power(2.0).unwrap(), &McConfig::default()).unwrap();
    assert!((rep.norm_ratio - 2f64.sqrt()).abs() < 1e-9, "{}", rep.norm_ratio);
    assert!(rep.check.pass);
}

#[test]
fn reflection_mirrors_rows_in_two_dimensions() {
    let u = GridFunction::boxed((0.0, 2.0), (0.0, 1.0), 2, 2, vec![1.0, 2.0, 3.0, 4.0]).unwrap();
    let r = reflect_extend(&u).unwrap();
    assert_eq!(r.shape(), (2, 4));
    assert_eq!(r.values(), &[3.0, 4.0, 1.0, 2.0, 1.0, 2.0, 3.0, 4.0]);
    let off = GridFunction::interval(0.5, 1.0, vec![1.0]).unwrap();
    assert!(reflect_extend(&off).is_err());
}

#[test]
fn zero_extension_in_a_box() {
    let mut v = vec![0.0; 16];
    v[5] = 1.0;
    v[10] = 2.0;
    let u = GridFunction::boxed((0.0, 1.0), (0.0, 1.0), 4, 4, v).unwrap();
    let e = Domain::Box { x0: 0.25, x1: 0.75, y0: 0.25, y1: 0.75 };
    let amb = Domain::Box { x0: -0.5, x1: 1.5, y0: 0.0, y1: 1.25 };
    let x = extend_zero(&u, &e, &amb).unwrap();
    assert_eq!(x.shape(), (8, 5));
    // cell (i, j) of u lands on (i + 2, j)
    assert_eq!(x.values()[8 + 3], 1.0);
    assert_eq!(x.values()[2 * 8 + 4], 2.0);
    assert_eq!(x.values().iter().sum::<f64>(), 3.0);
}

#[test]
fn zero_extension_bound_holds_for_a_bump() {
    let u = GridFunction::sample(Domain::Interval { a: 0.0, b: 1.0 }, 40, |x| {
        let y = (x - 0.5) / 0.2;
        if y.abs() < 1.0 { (1.0 - y * y).powi(2) } else { 0.0 }
    })
    .unwrap()
    .with_interp(Interp::Linear);
    let e = Domain::Interval { a: 0.25, b: 0.75 };
    let amb = Domain::Interval { a: -1.0, b: 2.0 };
    let rep = verify_extend_zero(&u, &e, &amb, 0.5, &YoungFunction::power(2.0).unwrap(), &McConfig::default()).unwrap();
    assert!(rep.check.pass, "{:?}", rep.check);
    assert!(rep.norm_gap.abs() < 1e-12);
}

#[test]
fn pipeline_restricts_to_the_input() {
    let u = GridFunction::sample(Domain::Interval { a: 0.0, b: 1.0 }, 30, |x| 1.0 + x * x).unwrap().with_interp(Interp::Linear);
    let rep = verify_pipeline(&u, 0.4, &YoungFunction::power(2.0).unwrap()).unwrap();
    assert!(rep.restriction_error <= 1e-12);
    assert!(rep.norm_constant.is_finite() && rep.norm_constant > 1.0);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn constant_cutoff_scales_the_norm(v in prop::collection::vec(-2.0f64..2.0, 4..12), c in 0.05f64..1.0) {
        let u = GridFunction::interval(0.0, 1.0, v).unwrap();
        let a = YoungFunction::power(2.0).unwrap();
        let (out, rep) = cutoff_multiply(&u, &CutoffFunction::constant(c), 0.3, &a, &McConfig::default()).unwrap();
        for (x, y) in out.values().iter().zip(u.values()) {
            prop_assert!((x - c * y).abs() <= 1e-15);
        }
        if u.max_abs() > 0.0 {
            let k = rep.constant.unwrap();
            prop_assert!(k >= c * (1.0 - 1e-6) && k <= c * (1.0 + 1e-6), "{} vs {}", k, c);
        }
    }
}
