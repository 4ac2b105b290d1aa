use orlicz_core::targets::{
    build_h, build_hat, build_sobolev_conjugate, check_integral_conditions, compact_target_test, BuildOptions,
    FractionalParams, Verdict,
};
use orlicz_core::young::{dominates, matuszewska_index, IndexRegime, Regime, RegimeWindows};
use orlicz_core::YoungFunction;

/// Closed forms for `A = t^p`, `p < n/s`, integrated by hand.
struct PowerOracle {
    p: f64,
    n: f64,
    s: f64,
}

impl PowerOracle {
    fn q(&self) -> f64 {
        self.s / (self.n - self.s)
    }

    /// `H(t) = (∫_0^t (τ/τ^p)^q dτ)^{(n−s)/n}`.
    fn h(&self, t: f64) -> f64 {
        let k = 1.0 + self.q() * (1.0 - self.p);
        (t.powf(k) / k).powf((self.n - self.s) / self.n)
    }

    /// `A(H⁻¹(t))`, found by inverting the power `H(t) = c t^m`.
    fn sobolev(&self, t: f64) -> f64 {
        let m = (1.0 + self.q() * (1.0 - self.p)) * (self.n - self.s) / self.n;
        let c = self.h(1.0);
        (t / c).powf(1.0 / m).powf(self.p)
    }

    /// `Â(t)` from the nested integral for `â⁻¹` with `a(τ) = pτ^{p−1}`.
    fn hat(&self, t: f64) -> f64 {
        let (p, n, s, q) = (self.p, self.n, self.s, self.q());
        let kappa = 1.0 - q * (p - 1.0);
        let k_in = p.powf(-q) / kappa;
        let e = -kappa * n / s - (p - 1.0) * n / (n - s);
        assert!(e < -1.0);
        let coeff = k_in.powf(-n / s) * p.powf(-n / (n - s)) / (-e - 1.0);
        // â⁻¹(r) = (coeff · X^{e+1})^{s/(s−n)}, X = (r/p)^{1/(p−1)}: a power C r^γ
        let gamma = (e + 1.0) / (p - 1.0) * s / (s - n);
        let c = (coeff * p.powf(-(e + 1.0) / (p - 1.0))).powf(s / (s - n));
        let expo = 1.0 / gamma;
        c.powf(-expo) * t.powf(expo + 1.0) / (expo + 1.0)
    }
}

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs()
}

const CASES: [(f64, u32, f64); 4] = [(2.0, 2, 0.5), (1.5, 1, 0.4), (3.0, 2, 0.5), (2.0, 3, 1.2)];

#[test]
fn power_targets_match_closed_forms() {
    for (p, n, s) in CASES {
        let o = PowerOracle { p, n: n as f64, s };
        let a = YoungFunction::power(p).unwrap();
        let fp = FractionalParams::new(n, s).unwrap();
        let opts = BuildOptions::default();
        let h = build_h(&a, &fp, opts).unwrap();
        let ans = build_sobolev_conjugate(&a, &fp, opts).unwrap();
        let hat = build_hat(&a, &fp, opts).unwrap_or_else(|e| panic!("{p} {n} {s}: {e}"));
        for t in [1e-2, 0.5, 1.0, 3.0, 1e2] {
            assert!(rel(h.eval(t), o.h(t)) < 1e-6, "H: p = {p}, n = {n}, s = {s}, t = {t}");
            assert!(rel(ans.eval(t), o.sobolev(t)) < 1e-6, "A_n/s: p = {p}, n = {n}, s = {s}, t = {t}");
            assert!(rel(hat.eval(t), o.hat(t)) < 1e-5, "hat: p = {p}, n = {n}, s = {s}, t = {t}");
        }
    }
}

#[test]
fn quadratic_case_anchors() {
    let o = PowerOracle { p: 2.0, n: 2.0, s: 0.5 };
    assert!(rel(o.sobolev(1.0), 8.0 / 27.0) < 1e-14);
    assert!(rel(o.hat(1.0), 0.5 * (128.0f64 / 243.0).cbrt()) < 1e-14);
}

#[test]
fn integral_conditions_for_powers() {
    let fp = FractionalParams::new(2, 0.5).unwrap();
    let sub = check_integral_conditions(&YoungFunction::power(2.0).unwrap(), &fp).unwrap();
    assert_eq!((sub.zero, sub.infinity), (Verdict::Holds, Verdict::Holds));
    // t^5 grows past n/s = 4: the integral converges at infinity
    let sup = check_integral_conditions(&YoungFunction::power(5.0).unwrap(), &fp).unwrap();
    assert_eq!(sup.infinity, Verdict::Fails);
    // near zero, t^{1.1} makes (t/A)^q = t^{−q/10}: still integrable, while t^5 fails
    let low = FractionalParams::new(1, 0.5).unwrap();
    let conv = check_integral_conditions(&YoungFunction::power(1.1).unwrap(), &low).unwrap();
    assert_eq!(conv.zero, Verdict::Holds);
    let div = check_integral_conditions(&YoungFunction::power(5.0).unwrap(), &low).unwrap();
    assert_eq!(div.zero, Verdict::Fails);
}

#[test]
fn hat_is_equivalent_to_a_subcritical_power() {
    let a = YoungFunction::power(2.0).unwrap();
    let fp = FractionalParams::new(2, 0.5).unwrap();
    let hat = build_hat(&a, &fp, BuildOptions::default()).unwrap();
    let w = RegimeWindows::default();
    assert!(dominates(&hat, &a, Regime::Global, &w).dominates);
    assert!(dominates(&a, &hat, Regime::Global, &w).dominates);
    let idx = matuszewska_index(&hat, IndexRegime::Global).unwrap();
    assert!(idx.value <= fp.ratio() + 0.05);
}

#[test]
fn compactness_of_smaller_powers() {
    let a = YoungFunction::power(2.0).unwrap();
    let fp = FractionalParams::new(2, 0.5).unwrap();
    let opts = BuildOptions::default();
    // A_{n/s} ~ t^4: t^3 is compact, t^4 is not
    let below = compact_target_test(&a, &YoungFunction::power(3.0).unwrap(), &fp, opts).unwrap();
    assert_eq!(below.verdict, Some(true));
    let equal = compact_target_test(&a, &YoungFunction::power(4.0).unwrap(), &fp, opts).unwrap();
    assert_eq!(equal.verdict, Some(false));
}
