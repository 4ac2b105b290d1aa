use orlicz_core::grid::{Domain, GridFunction};
use orlicz_core::norms::{
    lorentz_zygmund_norm, luxemburg_norm, orlicz_lorentz_dual_norm, orlicz_lorentz_norm, LorentzZygmund,
};
use orlicz_core::young::PowerLogParams;
use orlicz_core::YoungFunction;
use proptest::prelude::*;

fn p_norm(values: &[f64], h: f64, p: f64) -> f64 {
    (values.iter().map(|v| v.abs().powf(p)).sum::<f64>() * h).powf(1.0 / p)
}

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs()
}

fn steps() -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(-5.0f64..5.0, 1..24)
}

#[test]
fn indicator_norm_is_inverse_of_inverse() {
    // ‖χ_E‖ = 1 / A⁻¹(1/|E|)
    let a = YoungFunction::powerlog(PowerLogParams::at_infinity(2.0, 1.0)).unwrap();
    for len in [0.1, 1.0, 7.0] {
        let u = GridFunction::interval(0.0, len, vec![1.0]).unwrap();
        let expect = 1.0 / a.inverse(1.0 / len).unwrap();
        assert!(rel(luxemburg_norm(&a, &u).unwrap().value, expect) < 1e-10, "len = {len}");
    }
}

#[test]
fn lorentz_zygmund_with_equal_indices_is_lp() {
    let u = GridFunction::interval(0.0, 3.0, vec![3.0, -1.0, 2.0]).unwrap();
    let lz = LorentzZygmund { sigma: 2.0, p: 2.0, gamma: 0.0, delta: 0.0 };
    let v = lorentz_zygmund_norm(lz, (&u).into(), None).unwrap().value;
    assert!(rel(v, 14f64.sqrt()) < 1e-10);
}

#[test]
fn lorentz_zygmund_rejects_unvalidated_parameters() {
    let u = GridFunction::interval(0.0, 1.0, vec![1.0]).unwrap();
    let lz = LorentzZygmund { sigma: 0.5, p: 2.0, gamma: 0.0, delta: 0.0 };
    assert!(lorentz_zygmund_norm(lz, (&u).into(), None).is_err());
}

#[test]
fn orlicz_lorentz_forms_are_monotone() {
    let a = YoungFunction::power(2.0).unwrap();
    let small = GridFunction::interval(0.0, 4.0, vec![3.0, 0.5, 2.0, 1.0]).unwrap();
    let large = small.with_values(vec![4.0, 0.5, 2.0, 1.5]).unwrap();
    let plain = |u: &GridFunction| orlicz_lorentz_norm(&a, 4.0, u.into()).unwrap().value;
    let dual = |u: &GridFunction| orlicz_lorentz_dual_norm(&a, -4.0, u.into()).unwrap().value;
    assert!(plain(&small) < plain(&large));
    assert!(dual(&small) < dual(&large));
    assert!(orlicz_lorentz_dual_norm(&a, 4.0, (&small).into()).is_err());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn luxemburg_of_power_is_p_norm(v in steps(), p in 1.1f64..4.0, len in 0.1f64..10.0) {
        let u = GridFunction::interval(0.0, len, v.clone()).unwrap();
        let got = luxemburg_norm(&YoungFunction::power(p).unwrap(), &u).unwrap().value;
        let expect = p_norm(&v, len / v.len() as f64, p);
        if expect > 0.0 {
            prop_assert!(rel(got, expect) < 1e-9);
        } else {
            prop_assert_eq!(got, 0.0);
        }
    }

    #[test]
    fn luxemburg_is_homogeneous_and_subadditive(v in steps(), w in steps(), c in -4.0f64..4.0) {
        let a = YoungFunction::powerlog(PowerLogParams::at_infinity(2.5, 1.0)).unwrap();
        let k = v.len().min(w.len());
        let u1 = GridFunction::interval(0.0, 1.0, v[..k].to_vec()).unwrap();
        let u2 = u1.with_values(w[..k].to_vec()).unwrap();
        let n1 = luxemburg_norm(&a, &u1).unwrap().value;
        let n2 = luxemburg_norm(&a, &u2).unwrap().value;
        let scaled = luxemburg_norm(&a, &u1.map(|x| c * x)).unwrap().value;
        prop_assert!((scaled - c.abs() * n1).abs() <= 1e-9 * (1.0 + c.abs() * n1));
        let sum = u1.with_values(v[..k].iter().zip(&w[..k]).map(|(x, y)| x + y).collect()).unwrap();
        prop_assert!(luxemburg_norm(&a, &sum).unwrap().value <= (n1 + n2) * (1.0 + 1e-9) + 1e-12);
    }

    #[test]
    fn norms_are_rearrangement_invariant(mut v in steps(), q in 2.5f64..6.0) {
        let a = YoungFunction::power(2.0).unwrap();
        let d = Domain::Interval { a: 0.0, b: 2.0 };
        let u = GridFunction::new(d, v.len(), 1, v.clone()).unwrap();
        v.reverse();
        let r = GridFunction::new(d, v.len(), 1, v).unwrap();
        let (l1, l2) = (luxemburg_norm(&a, &u).unwrap().value, luxemburg_norm(&a, &r).unwrap().value);
        prop_assert!((l1 - l2).abs() <= 1e-12 * (1.0 + l1));
        let (o1, o2) = (
            orlicz_lorentz_norm(&a, q, (&u).into()).unwrap().value,
            orlicz_lorentz_norm(&a, q, (&r).into()).unwrap().value,
        );
        prop_assert!((o1 - o2).abs() <= 1e-12 * (1.0 + o1));
    }
}
