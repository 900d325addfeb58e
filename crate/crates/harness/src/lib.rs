//! Acceptance-suite runner for the stable Doob–McKean toolkit: named checks
//! grouped into suites, JSON run reports, CSV dumps, and the statistics used
//! to compare samples with laws.

// `!(x > 0.0)` is used on purpose: it also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod checks;
pub mod config;
pub mod report;

use std::fs::File;
use std::io::{self, BufWriter};
use std::path::Path;

use rayon::prelude::*;

pub use config::{ExperimentConfig, SampleSizes, Selector, Suite, DEFAULT_SEED};
pub use doob_mckean::stats::{
    ks_critical_one_sample, ks_critical_two_sample, ks_one_sample, ks_two_sample, sorted, TabulatedCdf, KS_C_1PCT,
};
pub use report::{Meta, RunReport, TestReport, RUNTIME_KEY};

/// Environment variable that overrides the master seed on the command line.
pub const SEED_ENV: &str = "DOOB_MCKEAN_SEED";

#[derive(Debug, thiserror::Error)]
pub enum HarnessError {
    #[error(transparent)]
    Numerics(#[from] doob_mckean::Error),
    #[error("i/o error: {0}")]
    Io(#[from] io::Error),
    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
    #[error("csv error: {0}")]
    Csv(#[from] csv::Error),
}

/// Runs every selected check and returns the reports ordered by name.
///
/// Check failures, including numerical and I/O errors, are reported per
/// check; only an invalid configuration aborts the run.
pub fn run_suite(cfg: &ExperimentConfig) -> Result<Vec<TestReport>, HarnessError> {
    cfg.validate()?;
    let selected: Vec<_> = checks::registry().iter().filter(|c| cfg.selector.includes(c)).collect();
    if let Some(dir) = &cfg.dump_dir {
        // A missing directory surfaces as per-check dump errors.
        let _ = std::fs::create_dir_all(dir);
    }
    let mut reports: Vec<TestReport> = selected.par_iter().map(|c| c.run(cfg)).collect();
    reports.sort_by(|a, b| a.name.cmp(&b.name));
    Ok(reports)
}

/// Runs the suite, writes the JSON report when a path is configured, and
/// returns the full run record.
pub fn run_and_record(cfg: &ExperimentConfig) -> Result<RunReport, HarnessError> {
    let reports = run_suite(cfg)?;
    let run = RunReport {
        run_id: run_id(cfg),
        config: cfg.clone(),
        reports,
    };
    if let Some(path) = &cfg.report_path {
        std::fs::write(path, run.to_json()?)?;
    }
    Ok(run)
}

/// Deterministic identifier derived from the selector and master seed.
pub fn run_id(cfg: &ExperimentConfig) -> String {
    format!("{}-{:016x}-{}", cfg.selector, cfg.seed.seed, cfg.seed.stream_id)
}

/// Writes equal-length columns as CSV with a header row; shorter columns
/// leave trailing cells empty.
pub fn write_columns(path: &Path, columns: &[(&str, &[f64])]) -> Result<(), HarnessError> {
    let mut w = csv::Writer::from_writer(BufWriter::new(File::create(path)?));
    w.write_record(columns.iter().map(|c| c.0))?;
    let rows = columns.iter().map(|c| c.1.len()).max().unwrap_or(0);
    for i in 0..rows {
        w.write_record(
            columns
                .iter()
                .map(|c| c.1.get(i).map_or_else(String::new, |v| v.to_string())),
        )?;
    }
    w.flush()?;
    Ok(())
}
