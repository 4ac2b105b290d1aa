use orlicz_core::grid::GridFunction;
use orlicz_core::rearrange::{
    decreasing_rearrangement, dilate, hardy_littlewood, maximal_average, modular_hardy_littlewood,
    symmetric_rearrangement, Symmetrized,
};
use orlicz_core::YoungFunction;
use proptest::prelude::*;

fn sorted_abs(v: &[f64]) -> Vec<f64> {
    let mut s: Vec<f64> = v.iter().map(|x| x.abs()).collect();
    s.sort_by(|a, b| b.total_cmp(a));
    s
}

fn steps() -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(-3.0f64..3.0, 1..32)
}

#[test]
fn symmetric_rearrangement_of_a_step() {
    let u = GridFunction::interval(0.0, 3.0, vec![1.0, 3.0, 2.0]).unwrap();
    let Symmetrized::Line(g) = symmetric_rearrangement(&u, 1).unwrap() else { panic!("1-D") };
    assert_eq!(g.values(), &[1.0, 2.0, 3.0, 3.0, 2.0, 1.0]);
}

#[test]
fn dilation_scales_the_support() {
    // support in (0, 1) of (0, 2): u(t/2) keeps all of it and doubles the mass
    let u = GridFunction::half_line(2.0, vec![1.0, 2.0, 0.0, 0.0]).unwrap();
    let mass = |g: &GridFunction| g.values().iter().sum::<f64>() * g.cell_measure();
    assert!((mass(&dilate(&u, 2.0).unwrap()) - 2.0 * mass(&u)).abs() < 1e-12);
    assert!((mass(&dilate(&u, 0.5).unwrap()) - 0.5 * mass(&u)).abs() < 1e-12);
    // u(t/3) is 1 on (0, 1.5) and 2 on (1.5, 2) after truncation
    assert!((mass(&dilate(&u, 3.0).unwrap()) - 2.5).abs() < 1e-12);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn star_sorts_absolute_values(v in steps()) {
        let u = GridFunction::interval(0.0, v.len() as f64, v.clone()).unwrap();
        let p = decreasing_rearrangement(&u);
        // merged cells repeat values; expand back to unit cells
        let mut expanded = Vec::new();
        for (r0, r1, val) in p.cells() {
            for _ in 0..(r1 - r0).round() as usize {
                expanded.push(val);
            }
        }
        prop_assert_eq!(expanded, sorted_abs(&v));
    }

    #[test]
    fn doublestar_is_the_running_mean(v in steps()) {
        let u = GridFunction::interval(0.0, v.len() as f64, v.clone()).unwrap();
        let star = decreasing_rearrangement(&u);
        let avg = maximal_average(&star);
        let s = sorted_abs(&v);
        let mut acc = 0.0;
        for (k, x) in s.iter().enumerate() {
            acc += x;
            let r = k as f64 + 1.0;
            prop_assert!((avg.primitive(r) - acc).abs() <= 1e-10 * (1.0 + acc));
            prop_assert!(avg.eval(r - 0.5) + 1e-12 >= star.eval(r - 0.5));
        }
    }

    #[test]
    fn symmetric_is_equimeasurable(v in steps()) {
        let u = GridFunction::interval(0.0, 1.0, v.clone()).unwrap();
        let Symmetrized::Line(g) = symmetric_rearrangement(&u, 1).unwrap() else { panic!("1-D") };
        let mut doubled: Vec<f64> = v.iter().flat_map(|x| [x.abs(), x.abs()]).collect();
        doubled.sort_by(|a, b| b.total_cmp(a));
        prop_assert_eq!(sorted_abs(g.values()), doubled);
    }

    #[test]
    fn hardy_littlewood_holds(v in steps(), w in steps()) {
        let k = v.len().min(w.len());
        let u = GridFunction::interval(0.0, 1.0, v[..k].to_vec()).unwrap();
        let g = u.with_values(w[..k].to_vec()).unwrap();
        prop_assert!(hardy_littlewood(&u, &g).unwrap().pass);
        let a = YoungFunction::power(1.5).unwrap();
        prop_assert!(modular_hardy_littlewood(&a, &u, &g).unwrap().pass);
    }
}
