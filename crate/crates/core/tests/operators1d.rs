use orlicz_core::grid::GridFunction;
use orlicz_core::operators1d::{
    hardy_ts, lemma_constant, unit_ball, verify_hardy_down, verify_hardy_up, TestFunction,
};
use orlicz_core::targets::FractionalParams;
use orlicz_core::YoungFunction;
use proptest::prelude::*;

/// `∫_r^L ρ^{e−1} f` for a step `f` on `(0, L)`, summed cell by cell.
fn tail_oracle(values: &[f64], len: f64, e: f64, r: f64) -> f64 {
    let h = len / values.len() as f64;
    values
        .iter()
        .enumerate()
        .map(|(k, v)| {
            let (a, b) = (k as f64 * h, (k + 1) as f64 * h);
            if b <= r {
                0.0
            } else {
                v * (b.powf(e) - a.max(r).powf(e)) / e
            }
        })
        .sum()
}

#[test]
fn ts_of_an_indicator() {
    // T_s χ_(0,1)(r) = (n/s)(1 − r^{s/n})
    let fp = FractionalParams::new(2, 0.5).unwrap();
    let f = GridFunction::half_line(1.0, vec![1.0; 16]).unwrap();
    let t = hardy_ts(&f, &fp).unwrap();
    for i in 0..16 {
        let r = f.center(i);
        assert!((t.values()[i] - 4.0 * (1.0 - r.powf(0.25))).abs() < 1e-13, "r = {r}");
    }
}

#[test]
fn ball_volumes() {
    let pi = std::f64::consts::PI;
    for (n, v) in [(1, 2.0), (2, pi), (3, 4.0 * pi / 3.0), (4, pi * pi / 2.0)] {
        assert!((unit_ball(n) - v).abs() < 1e-14);
    }
}

#[test]
fn first_order_test_function_on_an_indicator() {
    // m = 1: u(t) = ∫_t^L r^{e−2}(r − t) dr
    let fp = FractionalParams::new(2, 1.5).unwrap();
    let e: f64 = 0.75;
    let f = GridFunction::half_line(2.0, vec![1.0; 4]).unwrap();
    let u = TestFunction::new(&f, &fp, 1).unwrap();
    let prim = |r: f64, t: f64| r.powf(e) / e - t * r.powf(e - 1.0) / (e - 1.0);
    for t in [0.01, 0.3, 1.0, 1.9] {
        let expect = prim(2.0, t) - prim(t, t);
        assert!((u.of_measure(t) - expect).abs() < 1e-12 * expect.max(1.0), "t = {t}");
    }
    assert_eq!(u.of_measure(2.5), 0.0);
}

#[test]
fn test_function_rejects_increasing_steps() {
    let fp = FractionalParams::new(1, 0.5).unwrap();
    let f = GridFunction::half_line(1.0, vec![1.0, 2.0]).unwrap();
    assert!(TestFunction::new(&f, &fp, 0).is_err());
}

#[test]
fn lemma_constant_of_the_identity() {
    // n = i = 1, β = 0: the quotient is identically 1
    let est = lemma_constant(1, 1, 0.0, 2000, 7).unwrap();
    assert!((est.k - 1.0).abs() < 1e-12, "{}", est.k);
    assert!(lemma_constant(2, 3, 0.0, 10, 7).is_err());
}

#[test]
fn hardy_up_constant_is_finite_below_the_critical_power() {
    let fp = FractionalParams::new(1, 0.4).unwrap();
    let f = GridFunction::half_line(1.0, vec![3.0, 1.0, 0.5, 0.0]).unwrap();
    let rep = verify_hardy_up(&YoungFunction::power(2.0).unwrap(), &fp, &f).unwrap();
    assert!(rep.pass);
    assert!(rep.constant.is_some_and(|c| c.is_finite()));
}

fn non_negative_steps() -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(0.0f64..4.0, 1..24)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn ts_matches_cellwise_integration(v in non_negative_steps(), len in 0.2f64..5.0, s in 0.1f64..0.9) {
        let fp = FractionalParams::new(1, s).unwrap();
        let f = GridFunction::half_line(len, v.clone()).unwrap();
        let t = hardy_ts(&f, &fp).unwrap();
        for i in 0..v.len() {
            let expect = tail_oracle(&v, len, s, f.center(i));
            prop_assert!((t.values()[i] - expect).abs() <= 1e-11 * (1.0 + expect));
        }
    }

    #[test]
    fn ts_is_monotone(v in non_negative_steps(), bump in prop::collection::vec(0.0f64..1.0, 24)) {
        let fp = FractionalParams::new(2, 0.7).unwrap();
        let f = GridFunction::half_line(1.0, v.clone()).unwrap();
        let g = f.with_values(v.iter().zip(&bump).map(|(a, b)| a + b).collect()).unwrap();
        let (tf, tg) = (hardy_ts(&f, &fp).unwrap(), hardy_ts(&g, &fp).unwrap());
        for (x, y) in tf.values().iter().zip(tg.values()) {
            prop_assert!(x <= y);
        }
    }

    #[test]
    fn hardy_down_holds(v in non_negative_steps(), p in 1.1f64..4.0, s in 0.1f64..0.9) {
        let f = GridFunction::half_line(1.0, v).unwrap();
        let rep = verify_hardy_down(&YoungFunction::power(p).unwrap(), s, &f).unwrap();
        prop_assert!(rep.pass, "lhs {} rhs {}", rep.lhs, rep.rhs);
    }
}
