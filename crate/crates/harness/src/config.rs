use std::collections::BTreeMap;
use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use doob_mckean::samplers::RngSeed;
use doob_mckean::Error;
use serde::{Deserialize, Serialize};

use crate::checks;

pub const DEFAULT_SEED: u64 = 42;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize, clap::ValueEnum)]
pub enum Suite {
    #[serde(rename = "pv-benchmarks")]
    #[value(name = "pv-benchmarks")]
    PvBenchmarks,
    #[serde(rename = "generators")]
    #[value(name = "generators")]
    Generators,
    #[serde(rename = "levy")]
    #[value(name = "levy")]
    Levy,
    #[serde(rename = "theorem1-mc")]
    #[value(name = "theorem1-mc")]
    Theorem1Mc,
    #[serde(rename = "kernels")]
    #[value(name = "kernels")]
    Kernels,
    #[serde(rename = "all")]
    #[value(name = "all")]
    All,
}

impl Suite {
    pub const NAMED: [Suite; 5] = [
        Suite::PvBenchmarks,
        Suite::Generators,
        Suite::Levy,
        Suite::Theorem1Mc,
        Suite::Kernels,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::PvBenchmarks => "pv-benchmarks",
            Suite::Generators => "generators",
            Suite::Levy => "levy",
            Suite::Theorem1Mc => "theorem1-mc",
            Suite::Kernels => "kernels",
            Suite::All => "all",
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Which checks to run: a whole suite, `all`, or a single check by name.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub enum Selector {
    Suite(Suite),
    Check(String),
}

impl Selector {
    pub fn includes(&self, check: &checks::Check) -> bool {
        match self {
            Selector::Suite(Suite::All) => true,
            Selector::Suite(s) => check.suite == *s,
            Selector::Check(name) => check.name == name,
        }
    }
}

impl FromStr for Selector {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        if let Some(&suite) = Suite::NAMED.iter().chain([Suite::All].iter()).find(|x| x.name() == s) {
            return Ok(Selector::Suite(suite));
        }
        if checks::find(s).is_some() {
            return Ok(Selector::Check(s.to_string()));
        }
        Err(Error::Config(format!("unknown check selector {s:?}")))
    }
}

impl TryFrom<String> for Selector {
    type Error = Error;

    fn try_from(s: String) -> Result<Self, Error> {
        s.parse()
    }
}

impl From<Selector> for String {
    fn from(s: Selector) -> String {
        s.to_string()
    }
}

impl fmt::Display for Selector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Selector::Suite(s) => f.write_str(s.name()),
            Selector::Check(c) => f.write_str(c),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SampleSizes {
    /// Draws per Monte Carlo law comparison.
    pub monte_carlo: usize,
    pub lamperti_paths: usize,
    pub eta_paths: usize,
}

impl Default for SampleSizes {
    fn default() -> Self {
        Self {
            monte_carlo: 100_000,
            lamperti_paths: 10_000,
            eta_paths: 200,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentConfig {
    pub selector: Selector,
    pub seed: RngSeed,
    pub samples: SampleSizes,
    /// Replacement reference values, keyed by check name.
    pub tolerances: BTreeMap<String, f64>,
    /// Worker threads for Monte Carlo sampling; results do not depend on it.
    pub shards: usize,
    pub report_path: Option<PathBuf>,
    /// Directory for CSV dumps of Monte Carlo samples.
    pub dump_dir: Option<PathBuf>,
}

impl ExperimentConfig {
    pub fn new(selector: &str, seed: u64) -> Result<Self, Error> {
        Ok(Self {
            selector: selector.parse()?,
            seed: RngSeed::new(seed, 0),
            samples: SampleSizes::default(),
            tolerances: BTreeMap::new(),
            shards: 8,
            report_path: None,
            dump_dir: None,
        })
    }

    pub fn with_tolerance(mut self, check: &str, reference: f64) -> Result<Self, Error> {
        if checks::find(check).is_none() {
            return Err(Error::Config(format!("tolerance override for unknown check {check:?}")));
        }
        if !reference.is_finite() {
            return Err(Error::Config(format!("tolerance for {check} must be finite")));
        }
        self.tolerances.insert(check.to_string(), reference);
        Ok(self)
    }

    pub fn validate(&self) -> Result<(), Error> {
        if self.shards == 0 {
            return Err(Error::Config("shard count must be positive".into()));
        }
        let s = self.samples;
        if s.monte_carlo == 0 || s.lamperti_paths == 0 || s.eta_paths == 0 {
            return Err(Error::Config("sample sizes must be positive".into()));
        }
        if let Some(k) = self.tolerances.keys().find(|k| checks::find(k).is_none()) {
            return Err(Error::Config(format!("tolerance override for unknown check {k:?}")));
        }
        Ok(())
    }
}
