//! Experiment runner for `nullscri-core`.
//!
//! Configs are JSON files naming one registered experiment. A run writes a CSV
//! report with columns `case, target, value, uncertainty, pass, blocking,
//! provenance` and a JSON manifest carrying the SHA-256 of the config. Output
//! is deterministic: no timestamps, and every sampled parameter comes from a
//! seeded generator.

pub mod commands;
pub mod config;
pub mod experiments;
pub mod registry;
pub mod report;

use config::ExperimentConfig;
use experiments::{run_experiment, RunError};
use report::{sha256_hex, write_report, Manifest, Report};
use std::path::{Path, PathBuf};

/// Exit status of `run`.
pub const EXIT_PASS: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_CONFIG: i32 = 2;
pub const EXIT_NUMERICAL: i32 = 3;

/// A config resolved from a path or a registry key.
#[derive(Clone, Debug)]
pub struct Source {
    /// File name used in the manifest.
    pub label: String,
    pub text: String,
}

/// A path to an existing file wins over a registry key of the same name.
pub fn resolve(arg: &str) -> Result<Source, RunError> {
    let path = Path::new(arg);
    if path.is_file() {
        let text = std::fs::read_to_string(path).map_err(|e| RunError::Config(format!("cannot read {arg}: {e}")))?;
        let label = path.file_name().map(|s| s.to_string_lossy().into_owned()).unwrap_or_else(|| arg.to_string());
        return Ok(Source { label, text });
    }
    match registry::find(arg) {
        Some(e) => Ok(Source { label: e.file.to_string(), text: e.text.to_string() }),
        None => Err(RunError::Config(format!("{arg} is neither a file nor a registered config"))),
    }
}

/// A finished run.
#[derive(Clone, Debug)]
pub struct Outcome {
    pub report: Report,
    pub manifest: Manifest,
    /// Written files, when an output directory was given.
    pub files: Option<(PathBuf, PathBuf)>,
}

impl Outcome {
    pub fn exit_code(&self) -> i32 {
        if self.report.pass() {
            EXIT_PASS
        } else {
            EXIT_FAIL
        }
    }
}

/// Parses, runs and optionally writes one config.
pub fn run_source(src: &Source, out: Option<&Path>, tol_scale: f64) -> Result<Outcome, RunError> {
    let cfg = ExperimentConfig::parse(&src.text).map_err(|e| RunError::Config(format!("{}: {e}", src.label)))?;
    let report = run_experiment(&cfg, tol_scale)?;
    let csv = cfg.output.csv.clone().unwrap_or_else(|| format!("{}.csv", cfg.name));
    let manifest_name = cfg.output.manifest.clone().unwrap_or_else(|| format!("{}.manifest.json", cfg.name));
    let manifest = Manifest {
        name: cfg.name.clone(),
        case: report.case.clone(),
        config_sha256: sha256_hex(&src.text),
        refinements: cfg.refinements,
        tol_scale,
        rows: report.rows.len(),
        blocking_failures: report.blocking_failures(),
        pass: report.pass(),
        csv,
        version: env!("CARGO_PKG_VERSION"),
    };
    let files = match out {
        Some(dir) => Some(write_report(dir, &report, &manifest, &manifest_name).map_err(|e| RunError::Config(format!("cannot write to {}: {e}", dir.display())))?),
        None => None,
    };
    Ok(Outcome { report, manifest, files })
}

/// Exit code for a run result.
pub fn exit_code(r: &Result<Outcome, RunError>) -> i32 {
    match r {
        Ok(o) => o.exit_code(),
        Err(e) => e.exit_code(),
    }
}
