//! `report.json`, `trials.csv` and `plots.csv`.

use std::collections::BTreeSet;
use std::fs;
use std::path::Path;
use std::time::{SystemTime, UNIX_EPOCH};

use orlicz_core::report::{ErrorSource, VerificationReport};
use orlicz_core::suite::{SuiteConfig, SuiteResult, Trial};
use orlicz_core::{Error, Result};
use serde::Serialize;
use serde_json::Value;

pub const SCHEMA: u32 = 1;

#[derive(Debug, Serialize)]
pub struct Row<'a> {
    pub trial: usize,
    pub seed: u64,
    pub params: &'a str,
    pub id: &'a str,
    pub reference: &'a str,
    pub lhs: f64,
    pub rhs: f64,
    pub constant: Option<f64>,
    pub budget: f64,
    pub tolerance: f64,
    pub error_source: ErrorSource,
    pub pass: bool,
    pub vacuous: bool,
    #[serde(skip_serializing_if = "<[String]>::is_empty")]
    pub notes: &'a [String],
}

impl<'a> From<&'a Trial> for Row<'a> {
    fn from(t: &'a Trial) -> Self {
        let r: &VerificationReport = &t.report;
        Row {
            trial: t.trial,
            seed: t.seed,
            params: &t.params,
            id: &r.id,
            reference: &r.reference,
            lhs: r.lhs,
            rhs: r.rhs,
            constant: r.constant,
            budget: r.budget,
            tolerance: r.tolerance,
            error_source: r.error_source,
            pass: r.pass,
            vacuous: r.vacuous,
            notes: &r.notes,
        }
    }
}

#[derive(Debug, Serialize)]
pub struct SuiteEntry<'a> {
    pub name: &'a str,
    pub title: &'a str,
    pub checks: usize,
    pub passed: usize,
    pub pass: bool,
    pub rows: Vec<Row<'a>>,
}

/// Top-level JSON document written by every command.
#[derive(Debug, Serialize)]
pub struct Document<'a> {
    pub schema: u32,
    /// Unix seconds; the only field that differs between identical runs.
    pub generated_at: u64,
    pub command: &'a str,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub config: Option<&'a SuiteConfig>,
    #[serde(skip_serializing_if = "Value::is_null")]
    pub result: &'a Value,
    pub suites: Vec<SuiteEntry<'a>>,
    pub checks: usize,
    pub passed: usize,
    pub pass: bool,
}

impl<'a> Document<'a> {
    pub fn new(command: &'a str, config: Option<&'a SuiteConfig>, result: &'a Value, results: &'a [SuiteResult]) -> Self {
        let suites: Vec<SuiteEntry> = results
            .iter()
            .map(|r| SuiteEntry {
                name: &r.name,
                title: &r.title,
                checks: r.trials.len(),
                passed: r.passed(),
                pass: r.pass(),
                rows: r.trials.iter().map(Row::from).collect(),
            })
            .collect();
        let checks = suites.iter().map(|s| s.checks).sum();
        let passed = suites.iter().map(|s| s.passed).sum();
        let generated_at = SystemTime::now().duration_since(UNIX_EPOCH).map_or(0, |d| d.as_secs());
        Document { schema: SCHEMA, generated_at, command, config, result, suites, checks, passed, pass: passed == checks }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

fn io(path: &Path, e: impl std::fmt::Display) -> Error {
    Error::Io(format!("{}: {e}", path.display()))
}

fn fmt_opt(v: Option<f64>) -> String {
    v.map(|c| c.to_string()).unwrap_or_default()
}

/// Writes `report.json`, `trials.csv` and `plots.csv` into `dir`, creating it.
pub fn export_report(doc: &Document, results: &[SuiteResult], dir: &Path) -> Result<()> {
    fs::create_dir_all(dir).map_err(|e| io(dir, e))?;
    let report = dir.join("report.json");
    fs::write(&report, doc.to_json() + "\n").map_err(|e| io(&report, e))?;

    let trials = dir.join("trials.csv");
    let mut w = csv::Writer::from_path(&trials).map_err(|e| io(&trials, e))?;
    let header = ["suite", "trial", "seed", "params", "id", "lhs", "rhs", "constant", "budget", "tolerance", "pass"];
    w.write_record(header).map_err(|e| io(&trials, e))?;
    for r in results {
        for t in &r.trials {
            let v = &t.report;
            w.write_record([
                r.name.clone(),
                t.trial.to_string(),
                t.seed.to_string(),
                t.params.clone(),
                v.id.clone(),
                v.lhs.to_string(),
                v.rhs.to_string(),
                fmt_opt(v.constant),
                v.budget.to_string(),
                v.tolerance.to_string(),
                v.pass.to_string(),
            ])
            .map_err(|e| io(&trials, e))?;
        }
    }
    w.flush().map_err(|e| io(&trials, e))?;

    // One wide table: suite, x, then every series name seen in any plot.
    let plots = dir.join("plots.csv");
    let names: BTreeSet<&str> =
        results.iter().filter_map(|r| r.plot.as_ref()).flat_map(|p| p.series.keys().map(String::as_str)).collect();
    let mut w = csv::Writer::from_path(&plots).map_err(|e| io(&plots, e))?;
    let mut header = vec!["suite", "x"];
    header.extend(names.iter().copied());
    w.write_record(&header).map_err(|e| io(&plots, e))?;
    for r in results {
        let Some(p) = &r.plot else { continue };
        for (k, x) in p.x.iter().enumerate() {
            let mut row = vec![r.name.clone(), x.to_string()];
            row.extend(names.iter().map(|n| fmt_opt(p.series.get(*n).and_then(|s| s.get(k)).copied())));
            w.write_record(&row).map_err(|e| io(&plots, e))?;
        }
    }
    w.flush().map_err(|e| io(&plots, e))?;
    Ok(())
}
