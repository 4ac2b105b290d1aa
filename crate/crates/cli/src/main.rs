mod args;
mod commands;
mod export;
mod input;

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{ArgMatches, CommandFactory, FromArgMatches};
use orlicz_core::suite::{run_named, suite_names, SuiteConfig, SuiteResult, Trial};
use orlicz_core::{Error, Result};
use serde_json::Value;

use args::{Cli, Group};
use commands::Outcome;
use export::{export_report, Document};

const THREADS_VAR: &str = "ORLICZ_KIT_THREADS";

fn load_config(cli: &Cli) -> Result<SuiteConfig> {
    let mut cfg = match &cli.config {
        Some(path) => {
            let text = fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
            serde_json::from_str(&text).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))?
        }
        None => SuiteConfig::default(),
    };
    if let Some(seed) = cli.seed {
        cfg.seed = seed;
    }
    if let Some(out) = &cli.out {
        cfg.output = out.display().to_string();
    }
    Ok(cfg)
}

fn init_threads() -> Result<()> {
    let Ok(v) = std::env::var(THREADS_VAR) else { return Ok(()) };
    let n: usize = v.trim().parse().map_err(|_| Error::Parse(format!("{THREADS_VAR} must be a thread count, got '{v}'")))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| Error::Parameter(format!("thread pool: {e}")))
}

/// Subcommand path such as `frac polya` or `suite all`.
fn command_name(m: &ArgMatches) -> String {
    let Some((group, sub)) = m.subcommand() else { return String::new() };
    match sub.subcommand_name() {
        Some(op) => format!("{group} {op}"),
        None => match sub.get_one::<String>("name") {
            Some(n) => format!("{group} {n}"),
            None => group.to_string(),
        },
    }
}

fn as_suite(name: &str, seed: u64, checks: Vec<orlicz_core::report::VerificationReport>) -> SuiteResult {
    SuiteResult {
        name: name.to_string(),
        title: name.to_string(),
        trials: checks.into_iter().enumerate().map(|(k, report)| Trial { trial: k, seed, params: String::new(), report }).collect(),
        plot: None,
        seconds: 0.0,
    }
}

fn write_grid(out: &Outcome, path: &Path) -> Result<()> {
    let Some(g) = &out.grid else {
        return Err(Error::Parameter("this command produces no grid for --csv".into()));
    };
    let file = fs::File::create(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
    g.write_csv(std::io::BufWriter::new(file))
}

/// Prints a line to stdout; a closed pipe (as under `| head`) is not an error.
fn emit(line: &str) {
    let _ = writeln!(std::io::stdout().lock(), "{line}");
}

/// Runs the command; `Ok(true)` when every check passed.
fn run(cli: &Cli, name: &str) -> Result<bool> {
    init_threads()?;
    let cfg = load_config(cli)?;
    let outcome = match &cli.group {
        Group::Suite(s) => {
            if s.list {
                for n in suite_names() {
                    emit(n);
                }
                return Ok(true);
            }
            let mut cfg = cfg;
            if s.trials.is_some() {
                cfg.trials = s.trials;
            }
            let which = s.name.as_deref().expect("required unless --list");
            let results = run_named(which, &cfg)?;
            for r in &results {
                let mark = if r.pass() { "PASS" } else { "FAIL" };
                emit(&format!("{mark} {:<18} {:>5}/{:<5} {:>8.2}s  {}", r.name, r.passed(), r.trials.len(), r.seconds, r.title));
            }
            let doc = Document::new(name, Some(&cfg), &Value::Null, &results);
            let dir = PathBuf::from(&cfg.output);
            export_report(&doc, &results, &dir)?;
            emit(&format!("{}/{} checks passed; report in {}", doc.passed, doc.checks, dir.display()));
            return Ok(doc.pass);
        }
        Group::Young(op) => commands::young_cmd(op)?,
        Group::Target(op) => commands::target_cmd(op)?,
        Group::Norm(op) => commands::norm_cmd(op)?,
        Group::Rearrange(op) => commands::rearrange_cmd(op)?,
        Group::Hardy(op) => commands::hardy_cmd(op)?,
        Group::Frac(op) => commands::frac_cmd(op, cfg.seed)?,
        Group::Extend(op) => commands::extend_cmd(op, cfg.seed)?,
    };
    if let Some(path) = &cli.csv {
        write_grid(&outcome, path)?;
    }
    let results = if outcome.checks.is_empty() { Vec::new() } else { vec![as_suite(name, cfg.seed, outcome.checks.clone())] };
    let doc = Document::new(name, None, &outcome.result, &results);
    emit(&doc.to_json());
    if let Some(dir) = &cli.out {
        export_report(&doc, &results, dir)?;
    }
    Ok(doc.pass)
}

fn main() -> ExitCode {
    let matches = Cli::command().get_matches();
    let cli = match Cli::from_arg_matches(&matches) {
        Ok(c) => c,
        Err(e) => e.exit(),
    };
    match run(&cli, &command_name(&matches)) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
