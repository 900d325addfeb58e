use std::collections::BTreeMap;
use std::io::Write;

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::config::ExperimentConfig;
use crate::HarnessError;

pub type Meta = BTreeMap<String, Value>;

/// Meta key holding wall-clock seconds; the only non-deterministic field.
pub const RUNTIME_KEY: &str = "runtime";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TestReport {
    pub name: String,
    /// `NaN` when the check errored; stored as `null` in JSON.
    #[serde(with = "nan_as_null")]
    pub statistic: f64,
    /// Critical value or tolerance; the check passes when `statistic <= reference`.
    pub reference: f64,
    pub passed: bool,
    pub meta: Meta,
}

impl TestReport {
    pub fn new(name: impl Into<String>, statistic: f64, reference: f64, meta: Meta) -> Self {
        Self {
            name: name.into(),
            statistic,
            reference,
            passed: statistic <= reference,
            meta,
        }
    }

    /// A check that could not produce its statistic.
    pub fn errored(name: impl Into<String>, reference: f64, err: &HarnessError, mut meta: Meta) -> Self {
        meta.insert("error".into(), Value::from(err.to_string()));
        Self {
            name: name.into(),
            statistic: f64::NAN,
            reference,
            passed: false,
            meta,
        }
    }

    pub fn runtime(&self) -> Option<f64> {
        self.meta.get(RUNTIME_KEY).and_then(Value::as_f64)
    }
}

mod nan_as_null {
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &f64, s: S) -> Result<S::Ok, S::Error> {
        if v.is_finite() {
            s.serialize_f64(*v)
        } else {
            s.serialize_none()
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<f64, D::Error> {
        Ok(Option::<f64>::deserialize(d)?.unwrap_or(f64::NAN))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunReport {
    pub run_id: String,
    pub config: ExperimentConfig,
    pub reports: Vec<TestReport>,
}

impl RunReport {
    pub fn all_passed(&self) -> bool {
        self.reports.iter().all(|r| r.passed)
    }

    pub fn to_json(&self) -> Result<String, HarnessError> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn write_table<W: Write>(&self, mut w: W) -> Result<(), HarnessError> {
        let width = self.reports.iter().map(|r| r.name.len()).max().unwrap_or(4).max(4);
        writeln!(
            w,
            "{:<width$}  {:>12}  {:>12}  {:>9}  result",
            "name", "statistic", "reference", "runtime"
        )?;
        for r in &self.reports {
            let runtime = r.runtime().map_or_else(|| "-".to_string(), |s| format!("{s:.3}s"));
            writeln!(
                w,
                "{:<width$}  {:>12.4e}  {:>12.4e}  {:>9}  {}",
                r.name,
                r.statistic,
                r.reference,
                runtime,
                if r.passed { "PASS" } else { "FAIL" }
            )?;
            if let Some(e) = r.meta.get("error") {
                writeln!(w, "    error: {}", e.as_str().unwrap_or_default())?;
            }
        }
        let failed = self.reports.iter().filter(|r| !r.passed).count();
        writeln!(w, "{} checks, {} failed", self.reports.len(), failed)?;
        Ok(())
    }

    pub fn write_csv<W: Write>(&self, w: W) -> Result<(), HarnessError> {
        let mut out = csv::Writer::from_writer(w);
        out.write_record(["name", "statistic", "reference", "passed", "meta"])?;
        for r in &self.reports {
            out.write_record([
                r.name.clone(),
                r.statistic.to_string(),
                r.reference.to_string(),
                r.passed.to_string(),
                serde_json::to_string(&r.meta)?,
            ])?;
        }
        out.flush()?;
        Ok(())
    }
}
