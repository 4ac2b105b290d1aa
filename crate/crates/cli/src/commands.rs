//! Handlers of the non-suite subcommands. Each returns the computed values
//! as JSON plus the checks it ran.

use orlicz_core::extension::{
    cutoff_multiply, extend_zero, reflect_extend, verify_extend_zero, verify_pipeline, verify_reflection,
};
use orlicz_core::gagliardo::{
    bbm_limit_check, verify_fractional_hardy, verify_poincare, verify_polya_szego_with, verify_sobolev_embedding,
    McConfig, Modular,
};
use orlicz_core::grid::{Domain, GridFunction};
use orlicz_core::norms::{lorentz_zygmund_norm, luxemburg_norm, orlicz_lorentz_dual_norm, orlicz_lorentz_norm, LorentzZygmund};
use orlicz_core::operators1d::{
    hardy_ts, make_test_function, verify_hardy_down, verify_hardy_up, verify_thm_a, verify_thm_b, HardyKind, HardyReport,
    Targets,
};
use orlicz_core::rearrange::{decreasing_rearrangement, maximal_average, symmetric_rearrangement, Symmetrized};
use orlicz_core::report::{ErrorSource, VerificationReport};
use orlicz_core::targets::{
    build_h, build_hat, build_sobolev_conjugate, check_integral_conditions, compact_target_test, BuildOptions,
    FractionalParams,
};
use orlicz_core::young::{conjugate, dominates, grows_essentially_slower, matuszewska_index, GrowthConfig, RegimeWindows, YoungSpec};
use orlicz_core::{Result, YoungFunction};
use serde::Serialize;
use serde_json::{json, Value};

use crate::args::*;
use crate::input::{parse_cutoff, parse_domain, parse_function};

pub struct Outcome {
    pub result: Value,
    pub checks: Vec<VerificationReport>,
    /// Grid to write with `--csv`.
    pub grid: Option<GridFunction>,
}

impl Outcome {
    fn value(result: Value) -> Self {
        Outcome { result, checks: Vec::new(), grid: None }
    }

    fn check(result: impl Serialize, check: VerificationReport) -> Self {
        Outcome { result: to_value(result), checks: vec![check], grid: None }
    }

    fn with_grid(mut self, g: GridFunction) -> Self {
        self.grid = Some(g);
        self
    }
}

fn to_value(v: impl Serialize) -> Value {
    serde_json::to_value(v).expect("result serializes")
}

fn young(spec: &str) -> Result<YoungFunction> {
    spec.parse()
}

fn function(f: &FunctionArgs) -> Result<GridFunction> {
    let domain = f.domain.as_deref().map(parse_domain).transpose()?;
    parse_function(&f.f, domain, f.cells)
}

fn opts(allow: bool) -> BuildOptions {
    BuildOptions { allow_indeterminate: allow }
}

fn sampled(t: &[f64], f: impl Fn(f64) -> f64) -> Value {
    json!({ "t": t, "value": t.iter().map(|&x| f(x)).collect::<Vec<_>>() })
}

fn grid_value(g: &GridFunction) -> Value {
    json!({ "grid": g.header_json(), "values": g.values() })
}

fn mc(seed: u64) -> McConfig {
    McConfig { seed, ..McConfig::default() }
}

pub fn young_cmd(op: &YoungOp) -> Result<Outcome> {
    match op {
        YoungOp::Eval { a, at } => {
            let a = young(&a.a)?;
            Ok(Outcome::value(sampled(at, |t| a.eval(t))))
        }
        YoungOp::Conjugate { a, at, export } => {
            let c = conjugate(&young(&a.a)?)?;
            let mut v = sampled(at, |t| c.eval(t));
            if *export {
                v["spec"] = to_value(YoungSpec::of(&c));
            }
            Ok(Outcome::value(v))
        }
        YoungOp::Index { a, regime } => Ok(Outcome::value(to_value(matuszewska_index(&young(&a.a)?, (*regime).into())?))),
        YoungOp::Compare { a, b, regime } => {
            let (a, b) = (young(&a.a)?, young(b)?);
            let verdict = dominates(&a, &b, (*regime).into(), &RegimeWindows::default());
            let slower = grows_essentially_slower(&b, &a, &GrowthConfig::default()).verdict;
            Ok(Outcome::value(json!({ "dominates": verdict, "b_grows_essentially_slower": slower })))
        }
    }
}

pub fn target_cmd(op: &TargetOp) -> Result<Outcome> {
    match op {
        TargetOp::Check { a, dim } => {
            let fp = FractionalParams::new(dim.n, dim.s)?;
            Ok(Outcome::value(to_value(check_integral_conditions(&young(&a.a)?, &fp)?)))
        }
        TargetOp::H { a, dim, at, allow_indeterminate } => {
            let fp = FractionalParams::new(dim.n, dim.s)?;
            let h = build_h(&young(&a.a)?, &fp, opts(*allow_indeterminate))?;
            let mut v = sampled(at, |t| h.eval(t));
            v["range_sup"] = to_value(h.range_sup());
            Ok(Outcome::value(v))
        }
        TargetOp::SobolevConjugate { a, dim, at, allow_indeterminate, export } => {
            let fp = FractionalParams::new(dim.n, dim.s)?;
            let t = build_sobolev_conjugate(&young(&a.a)?, &fp, opts(*allow_indeterminate))?;
            Ok(Outcome::value(exported(&t, at, *export)))
        }
        TargetOp::Hat { a, dim, at, allow_indeterminate, export } => {
            let fp = FractionalParams::new(dim.n, dim.s)?;
            let t = build_hat(&young(&a.a)?, &fp, opts(*allow_indeterminate))?;
            Ok(Outcome::value(exported(&t, at, *export)))
        }
        TargetOp::Compact { a, b, dim, allow_indeterminate } => {
            let fp = FractionalParams::new(dim.n, dim.s)?;
            let e = compact_target_test(&young(&a.a)?, &young(b)?, &fp, opts(*allow_indeterminate))?;
            Ok(Outcome::value(json!({
                "verdict": e.verdict,
                "by_growth": e.growth.verdict,
                "inverse_ratio_decreasing": e.inverse_ratio.decreasing,
                "inverse_ratio_vanishing": e.inverse_ratio.vanishing,
            })))
        }
    }
}

fn exported(t: &YoungFunction, at: &[f64], export: bool) -> Value {
    let mut v = sampled(at, |x| t.eval(x));
    if export {
        v["spec"] = to_value(YoungSpec::of(t));
    }
    v
}

pub fn norm_cmd(op: &NormOp) -> Result<Outcome> {
    match op {
        NormOp::Luxemburg { a, f } => Ok(Outcome::value(to_value(luxemburg_norm(&young(&a.a)?, &function(f)?)?))),
        NormOp::OrliczLorentz { a, q, dual, f } => {
            let (a, u) = (young(&a.a)?, function(f)?);
            let r = if *dual { orlicz_lorentz_dual_norm(&a, *q, (&u).into())? } else { orlicz_lorentz_norm(&a, *q, (&u).into())? };
            Ok(Outcome::value(to_value(r)))
        }
        NormOp::LorentzZygmund { sigma, p, gamma, delta, total, f } => {
            let params = LorentzZygmund { sigma: *sigma, p: *p, gamma: *gamma, delta: *delta };
            let u = function(f)?;
            Ok(Outcome::value(to_value(lorentz_zygmund_norm(params, (&u).into(), *total)?)))
        }
    }
}

pub fn rearrange_cmd(op: &RearrangeOp) -> Result<Outcome> {
    match op {
        RearrangeOp::Star { f } => Ok(Outcome::value(to_value(decreasing_rearrangement(&function(f)?)))),
        RearrangeOp::Doublestar { f } => {
            Ok(Outcome::value(to_value(maximal_average(&decreasing_rearrangement(&function(f)?)))))
        }
        RearrangeOp::Symmetric { f } => {
            let u = function(f)?;
            match symmetric_rearrangement(&u, u.dim())? {
                Symmetrized::Line(g) => Ok(Outcome::value(grid_value(&g)).with_grid(g)),
                Symmetrized::Radial(r) => Ok(Outcome::value(to_value(r))),
            }
        }
    }
}

fn hardy_check(r: HardyReport) -> VerificationReport {
    let (id, reference, source) = match r.kind {
        HardyKind::L1Modular => ("hardy-down", "modular Hardy inequality with constant 1/s", ErrorSource::Quadrature),
        HardyKind::L2Modular => ("hardy-up", "modular Hardy inequality for the tail operator", ErrorSource::Bisection),
        HardyKind::ThmANorm => ("thm-a", "Orlicz target norm bound", ErrorSource::Bisection),
        HardyKind::ThmBNorm => ("thm-b", "Orlicz–Lorentz target norm bound", ErrorSource::Bisection),
    };
    let mut v = VerificationReport::compare(id, reference, r.lhs, r.rhs, r.tolerance, r.budget, source).with_constant(r.constant);
    v.pass = r.pass;
    if let Some(c) = r.cross_ratio {
        v = v.note(format!("target norm ratio {c}"));
    }
    v
}

pub fn hardy_cmd(op: &HardyOp) -> Result<Outcome> {
    match op {
        HardyOp::Ts { dim, f } => {
            let g = hardy_ts(&function(f)?, &FractionalParams::new(dim.n, dim.s)?)?;
            Ok(Outcome::value(grid_value(&g)).with_grid(g))
        }
        HardyOp::Down { a, s, f } => {
            let r = verify_hardy_down(&young(&a.a)?, *s, &function(f)?)?;
            Ok(Outcome::check(&r, hardy_check(r.clone())))
        }
        HardyOp::Up { a, dim, f } => {
            let r = verify_hardy_up(&young(&a.a)?, &FractionalParams::new(dim.n, dim.s)?, &function(f)?)?;
            Ok(Outcome::check(&r, hardy_check(r.clone())))
        }
        HardyOp::ThmA { a, dim, f } | HardyOp::ThmB { a, dim, f } => {
            let t = Targets::build(&young(&a.a)?, &FractionalParams::new(dim.n, dim.s)?)?;
            let u = function(f)?;
            let r = if matches!(op, HardyOp::ThmA { .. }) { verify_thm_a(&t, &u)? } else { verify_thm_b(&t, &u)? };
            Ok(Outcome::check(&r, hardy_check(r.clone())))
        }
        HardyOp::Testfn { dim, m, grid_cells, f } => {
            let g = make_test_function(&function(f)?, &FractionalParams::new(dim.n, dim.s)?, *m, *grid_cells)?;
            Ok(Outcome::value(grid_value(&g)).with_grid(g))
        }
    }
}

pub fn frac_cmd(op: &FracOp, seed: u64) -> Result<Outcome> {
    let mc = mc(seed);
    match op {
        FracOp::Modular { a, s, region, lambda, f } => {
            let (a, u) = (young(&a.a)?, function(f)?);
            Ok(Outcome::value(to_value(Modular::new(&u, *s, &a, (*region).into(), &mc)?.eval(*lambda))))
        }
        FracOp::Seminorm { a, s, region, f } => {
            let (a, u) = (young(&a.a)?, function(f)?);
            Ok(Outcome::value(to_value(Modular::new(&u, *s, &a, (*region).into(), &mc)?.seminorm())))
        }
        FracOp::Polya { a, s, f } => {
            let r = verify_polya_szego_with(&function(f)?, *s, &young(&a.a)?, &mc)?;
            Ok(Outcome::check(Value::Null, r))
        }
        FracOp::HardyRn { a, s, f } => {
            let u = function(f)?;
            let t = Targets::build(&young(&a.a)?, &FractionalParams::fractional(u.dim() as u32, *s)?)?;
            Ok(Outcome::check(Value::Null, verify_fractional_hardy(&u, &t, &mc)?))
        }
        FracOp::Poincare { a, s, f } => {
            let r = verify_poincare(&function(f)?, *s, &young(&a.a)?, &mc)?;
            Ok(Outcome::check(json!({ "norm_ratio": r.norm_ratio }), r.modular))
        }
        FracOp::Embed { a, s, f } => {
            let u = function(f)?;
            let t = Targets::build(&young(&a.a)?, &FractionalParams::fractional(u.dim() as u32, *s)?)?;
            let r = verify_sobolev_embedding(&u, &t, &mc)?;
            Ok(Outcome::check(&r, r.check.clone()))
        }
        FracOp::Bbm { a, s_list, f } => {
            let r = bbm_limit_check(&function(f)?, &young(&a.a)?, s_list)?;
            let last = r.gaps.last().copied().unwrap_or(0.0);
            let first = r.gaps.first().copied().unwrap_or(0.0);
            let mut v = VerificationReport::compare("bbm", "gap decreasing in s", last, first, 0.0, 0.0, ErrorSource::Quadrature);
            v.pass = r.pass;
            Ok(Outcome::check(&r, v))
        }
    }
}

pub fn extend_cmd(op: &ExtendOp, seed: u64) -> Result<Outcome> {
    let mc = mc(seed);
    match op {
        ExtendOp::Zero { a, s, e, ambient, f } => {
            let u = function(f)?;
            let (e, amb): (Domain, Domain) = (parse_domain(e)?, parse_domain(ambient)?);
            let r = verify_extend_zero(&u, &e, &amb, *s, &young(&a.a)?, &mc)?;
            let g = extend_zero(&u, &e, &amb)?;
            Ok(Outcome::check(&r, r.check.clone()).with_grid(g))
        }
        ExtendOp::Reflect { a, s, f } => {
            let u = function(f)?;
            let r = verify_reflection(&u, *s, &young(&a.a)?, &mc)?;
            Ok(Outcome::check(json!({ "norm_ratio": r.norm_ratio }), r.check).with_grid(reflect_extend(&u)?))
        }
        ExtendOp::Cutoff { a, s, zeta, f } => {
            let z = parse_cutoff(zeta)?;
            let (g, r) = cutoff_multiply(&function(f)?, &z, *s, &young(&a.a)?, &mc)?;
            Ok(Outcome::check(json!({ "cutoff": z.label, "lipschitz": z.lipschitz }), r).with_grid(g))
        }
        ExtendOp::Pipeline { a, s, f } => {
            let u = function(f)?;
            let r = verify_pipeline(&u, *s, &young(&a.a)?)?;
            let mut v = VerificationReport::compare(
                "pipeline",
                "extension of (0, 1) to the line",
                r.norm_constant,
                orlicz_core::operators1d::C_CAP,
                0.0,
                0.0,
                ErrorSource::Quadrature,
            )
            .with_constant(Some(r.norm_constant));
            v.pass &= r.restriction_error <= 1e-12;
            Ok(Outcome::check(&r, v).with_grid(orlicz_core::extension::extend_interval(&u)?))
        }
    }
}
