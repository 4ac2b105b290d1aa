//! Acceptance criteria, one line each. Runs as a plain binary so the lines
//! reach the terminal under `cargo test`; exits non-zero if any fails.

use std::collections::BTreeMap;
use std::process::ExitCode;
use std::time::Instant;

use orlicz_core::grid::GridFunction;
use orlicz_core::norms::luxemburg_norm;
use orlicz_core::rearrange::hardy_littlewood;
use orlicz_core::suite::{run_suite, SuiteConfig, SuiteResult};
use orlicz_core::targets::{build_hat, build_sobolev_conjugate, BuildOptions, FractionalParams};
use orlicz_core::YoungFunction;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

struct Outcome {
    pass: bool,
    detail: String,
}

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs()
}

/// Counts rows per check id.
fn counts(r: &SuiteResult) -> BTreeMap<&str, usize> {
    let mut m = BTreeMap::new();
    for t in &r.trials {
        *m.entry(t.report.id.as_str()).or_insert(0) += 1;
    }
    m
}

/// The suite passes and has at least `min` rows for each listed id.
fn suite_with_counts(cfg: &SuiteConfig, name: &str, min: &[(&str, usize)]) -> Outcome {
    let r = match run_suite(name, cfg) {
        Ok(r) => r,
        Err(e) => return Outcome { pass: false, detail: format!("{name}: error {e}") },
    };
    let c = counts(&r);
    let short: Vec<String> =
        min.iter().filter(|(id, k)| c.get(id).copied().unwrap_or(0) < *k).map(|(id, k)| format!("{id} < {k}")).collect();
    let failed: Vec<String> =
        r.trials.iter().filter(|t| !t.report.pass).take(3).map(|t| format!("{} [{}]", t.report.id, t.params)).collect();
    let mut detail = format!("{name} {}/{} in {:.1}s", r.passed(), r.trials.len(), r.seconds);
    if !short.is_empty() {
        detail += &format!("; too few rows: {}", short.join(", "));
    }
    if !failed.is_empty() {
        detail += &format!("; first failures: {}", failed.join(", "));
    }
    Outcome { pass: r.pass() && short.is_empty(), detail }
}

fn both(a: Outcome, b: Outcome) -> Outcome {
    Outcome { pass: a.pass && b.pass, detail: format!("{}; {}", a.detail, b.detail) }
}

/// Closed forms for A = t², n = 2, s = 1/2, evaluated directly.
fn pipeline_exactness() -> Outcome {
    let start = Instant::now();
    let a = YoungFunction::power(2.0).unwrap();
    let fp = FractionalParams::new(2, 0.5).unwrap();
    let ans = build_sobolev_conjugate(&a, &fp, BuildOptions::default()).unwrap();
    let hat = build_hat(&a, &fp, BuildOptions::default()).unwrap();
    let c_hat = 0.5 * (128.0f64 / 243.0).cbrt();
    let mut worst: f64 = 0.0;
    for k in -3..=3 {
        let t = 10f64.powi(k);
        worst = worst.max(rel(ans.eval(t), 8.0 / 27.0 * t.powi(4))).max(rel(hat.eval(t), c_hat * t * t));
    }
    let secs = start.elapsed().as_secs_f64();
    Outcome { pass: worst <= 1e-5 && secs < 5.0, detail: format!("worst relative error {worst:.2e} in {secs:.2}s") }
}

/// Luxemburg norms of random steps against the p-norm summed here.
fn luxemburg_oracle(seed: u64) -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut worst: f64 = 0.0;
    let mut cases = 0;
    for p in [1.5, 2.0, 3.0] {
        let a = YoungFunction::power(p).unwrap();
        for _ in 0..50 {
            let cells = rng.random_range(1..40);
            let len = 10f64.powf(rng.random_range(-1.0..1.0));
            let v: Vec<f64> = (0..cells).map(|_| rng.random_range(-10.0..10.0)).collect();
            let expect = (v.iter().map(|x| x.abs().powf(p)).sum::<f64>() * len / cells as f64).powf(1.0 / p);
            let u = GridFunction::interval(0.0, len, v).unwrap();
            worst = worst.max(rel(luxemburg_norm(&a, &u).unwrap().value, expect));
            cases += 1;
        }
    }
    Outcome { pass: worst <= 1e-8, detail: format!("{cases} draws, worst relative error {worst:.2e}") }
}

/// `∫|fg| ≤ ∫f*g*` summed here by sorting, on random equal-cell pairs.
fn hardy_littlewood_oracle(seed: u64) -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut bad = 0;
    for _ in 0..500 {
        let cells = rng.random_range(1..30);
        let f: Vec<f64> = (0..cells).map(|_| rng.random_range(-5.0..5.0)).collect();
        let g: Vec<f64> = (0..cells).map(|_| rng.random_range(-5.0..5.0)).collect();
        let h = 1.0 / cells as f64;
        let direct: f64 = f.iter().zip(&g).map(|(x, y)| (x * y).abs()).sum::<f64>() * h;
        let mut fs: Vec<f64> = f.iter().map(|x| x.abs()).collect();
        let mut gs: Vec<f64> = g.iter().map(|x| x.abs()).collect();
        fs.sort_by(|a, b| b.total_cmp(a));
        gs.sort_by(|a, b| b.total_cmp(a));
        let sorted: f64 = fs.iter().zip(&gs).map(|(x, y)| x * y).sum::<f64>() * h;
        let u = GridFunction::interval(0.0, 1.0, f).unwrap();
        let r = hardy_littlewood(&u, &u.with_values(g).unwrap()).unwrap();
        let agrees = rel(r.lhs, direct) < 1e-12 && rel(r.rhs, sorted) < 1e-12;
        if !(r.pass && agrees && direct <= sorted * (1.0 + 1e-12)) {
            bad += 1;
        }
    }
    Outcome { pass: bad == 0, detail: format!("direct sums: {bad}/500 disagreements") }
}

type Criterion<'a> = (&'static str, Box<dyn Fn() -> Outcome + 'a>);

fn main() -> ExitCode {
    let cfg = SuiteConfig::default();
    let criteria: Vec<Criterion> = vec![
        ("power-law pipeline exactness", Box::new(|| both(pipeline_exactness(), suite_with_counts(&cfg, "exactness", &[("sobolev-conjugate", 7), ("hat", 7)])))),
        ("growth of the optimal target", Box::new(|| suite_with_counts(&cfg, "asymptotics", &[("slope", 3), ("double-log-slope", 1)]))),
        ("Hardy inequality with constant 1/s", Box::new(|| suite_with_counts(&cfg, "hardy-down", &[("hardy-down", 100)]))),
        ("found Hardy and target-norm constants", Box::new(|| suite_with_counts(&cfg, "hardy-up", &[("hardy-up", 100), ("hardy-up-drift", 100), ("thm-a", 100), ("thm-a-drift", 100), ("thm-b", 100), ("thm-b-drift", 100)]))),
        ("fractional Pólya–Szegő", Box::new(|| suite_with_counts(&cfg, "polya", &[("polya-szego", 200)]))),
        ("Hardy–Littlewood and its modular form", Box::new(|| both(hardy_littlewood_oracle(cfg.seed), suite_with_counts(&cfg, "hardy-littlewood", &[("hardy-littlewood", 500), ("modular-hardy-littlewood", 500)])))),
        ("Luxemburg norm of powers", Box::new(|| both(luxemburg_oracle(cfg.seed), suite_with_counts(&cfg, "luxemburg", &[("luxemburg", 150)])))),
        ("conjugate involution and Young", Box::new(|| suite_with_counts(&cfg, "conjugate", &[("involution", 1), ("young", 1000)]))),
        ("even reflection bound", Box::new(|| suite_with_counts(&cfg, "reflection", &[("reflection", 100)]))),
        ("compact target truth table", Box::new(|| suite_with_counts(&cfg, "compactness", &[("compact", 9)]))),
        ("limit as s → 1", Box::new(|| suite_with_counts(&cfg, "bbm", &[("bbm", 5)]))),
        ("Poincaré and fractional Hardy constants", Box::new(|| suite_with_counts(&cfg, "poincare", &[("poincare", 1), ("poincare-drift", 1), ("fractional-hardy", 1), ("fractional-hardy-drift", 1)]))),
        ("algebraic estimate constant", Box::new(|| suite_with_counts(&cfg, "lemma", &[("lemma", 6)]))),
    ];
    let mut failures = 0;
    for (k, (title, check)) in criteria.iter().enumerate() {
        let o = check();
        if !o.pass {
            failures += 1;
        }
        println!("{} {:>2} {title}: {}", if o.pass { "PASS" } else { "FAIL" }, k + 1, o.detail);
    }
    println!("{}/{} criteria passed", criteria.len() - failures, criteria.len());
    if failures == 0 { ExitCode::SUCCESS } else { ExitCode::FAILURE }
}
