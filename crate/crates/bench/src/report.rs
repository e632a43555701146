//! Trial records and run reports.
//!
//! A report carries its per-trial records together with summary statistics
//! of one metric. Loading a report recomputes those statistics and rejects
//! the file if they disagree.

use std::io::Write;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::config::SuiteConfig;
use crate::BenchError;

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct TrialRecord {
    pub trial: u64,
    pub seed: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub setting: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub hypothesis: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub error: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub balanced_error: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub false_positives: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub negatives: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub recovered: Option<bool>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub agreement: Option<f64>,
    /// Relabeled holdouts that disagree with the true concept.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mislabeled: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub deviation: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub exceeded: Option<bool>,
    /// Learner error recorded instead of aborting the suite.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub failure: Option<String>,
}

/// The per-record value summarized by a report.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Metric {
    Error,
    BalancedError,
    Deviation,
}

impl Metric {
    pub fn of(self, r: &TrialRecord) -> Option<f64> {
        match self {
            Metric::Error => r.error,
            Metric::BalancedError => r.balanced_error,
            Metric::Deviation => r.deviation,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Aggregates {
    pub count: usize,
    pub mean: f64,
    /// Population standard deviation.
    pub std: f64,
    pub min: f64,
    pub q05: f64,
    pub q25: f64,
    pub median: f64,
    pub q75: f64,
    pub q95: f64,
    pub max: f64,
}

impl Aggregates {
    /// `None` for an empty slice. Quantiles interpolate linearly between
    /// order statistics.
    pub fn from_values(values: &[f64]) -> Option<Self> {
        if values.is_empty() {
            return None;
        }
        let mut sorted = values.to_vec();
        sorted.sort_by(f64::total_cmp);
        let n = sorted.len() as f64;
        let mean = sorted.iter().sum::<f64>() / n;
        let var = sorted.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / n;
        let q = |p: f64| {
            let h = (n - 1.0) * p;
            let lo = h.floor() as usize;
            let hi = h.ceil() as usize;
            sorted[lo] + (h - lo as f64) * (sorted[hi] - sorted[lo])
        };
        Some(Aggregates {
            count: sorted.len(),
            mean,
            std: var.sqrt(),
            min: sorted[0],
            q05: q(0.05),
            q25: q(0.25),
            median: q(0.5),
            q75: q(0.75),
            q95: q(0.95),
            max: sorted[sorted.len() - 1],
        })
    }
}

/// One acceptance predicate of a suite.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub value: f64,
    pub threshold: f64,
    pub pass: bool,
}

impl Check {
    pub fn at_most(name: impl Into<String>, value: f64, threshold: f64) -> Self {
        Check { name: name.into(), value, threshold, pass: value <= threshold }
    }

    pub fn at_least(name: impl Into<String>, value: f64, threshold: f64) -> Self {
        Check { name: name.into(), value, threshold, pass: value >= threshold }
    }

    pub fn below(name: impl Into<String>, value: f64, threshold: f64) -> Self {
        Check { name: name.into(), value, threshold, pass: value < threshold }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TrialReport {
    pub experiment: String,
    pub suite: String,
    /// SHA-256 of the canonical config text.
    pub fingerprint: String,
    pub config: String,
    pub metric: Metric,
    pub records: Vec<TrialRecord>,
    pub aggregates: Option<Aggregates>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub bound: Option<f64>,
    pub checks: Vec<Check>,
    pub pass: bool,
}

pub fn fingerprint(config_text: &str) -> String {
    format!("{:x}", Sha256::digest(config_text.as_bytes()))
}

impl TrialReport {
    pub fn new(cfg: &SuiteConfig, metric: Metric, records: Vec<TrialRecord>, bound: Option<f64>, checks: Vec<Check>) -> Self {
        let config = cfg.to_toml();
        let values: Vec<f64> = records.iter().filter_map(|r| metric.of(r)).collect();
        TrialReport {
            experiment: cfg.experiment().to_string(),
            suite: cfg.suite().name().to_string(),
            fingerprint: fingerprint(&config),
            config,
            metric,
            aggregates: Aggregates::from_values(&values),
            records,
            bound,
            pass: checks.iter().all(|c| c.pass),
            checks,
        }
    }

    pub fn values(&self) -> Vec<f64> {
        self.records.iter().filter_map(|r| self.metric.of(r)).collect()
    }

    pub fn check(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports serialize")
    }

    /// Parses a report and verifies its fingerprint, aggregates and verdict.
    pub fn from_json(text: &str) -> Result<Self, BenchError> {
        let report: TrialReport = serde_json::from_str(text)?;
        if fingerprint(&report.config) != report.fingerprint {
            return Err(BenchError::Report("fingerprint does not match the embedded config".into()));
        }
        if Aggregates::from_values(&report.values()) != report.aggregates {
            return Err(BenchError::Report("aggregates disagree with the per-trial records".into()));
        }
        if report.checks.iter().all(|c| c.pass) != report.pass {
            return Err(BenchError::Report("verdict disagrees with the checks".into()));
        }
        Ok(report)
    }

    pub fn write_records_csv<W: Write>(&self, out: W) -> Result<(), BenchError> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record([
            "trial",
            "seed",
            "setting",
            "hypothesis",
            "error",
            "balanced_error",
            "false_positives",
            "negatives",
            "recovered",
            "agreement",
            "mislabeled",
            "deviation",
            "exceeded",
            "failure",
        ])?;
        let opt = |v: Option<String>| v.unwrap_or_default();
        for r in &self.records {
            w.write_record([
                r.trial.to_string(),
                r.seed.to_string(),
                opt(r.setting.clone()),
                opt(r.hypothesis.clone()),
                opt(r.error.map(|v| v.to_string())),
                opt(r.balanced_error.map(|v| v.to_string())),
                opt(r.false_positives.map(|v| v.to_string())),
                opt(r.negatives.map(|v| v.to_string())),
                opt(r.recovered.map(|v| v.to_string())),
                opt(r.agreement.map(|v| v.to_string())),
                opt(r.mislabeled.map(|v| v.to_string())),
                opt(r.deviation.map(|v| v.to_string())),
                opt(r.exceeded.map(|v| v.to_string())),
                opt(r.failure.clone()),
            ])?;
        }
        w.flush()?;
        Ok(())
    }

    /// Writes `report.json` and `records.csv` into `dir`.
    pub fn write_to_dir(&self, dir: &std::path::Path) -> Result<(), BenchError> {
        std::fs::create_dir_all(dir)?;
        std::fs::write(dir.join("report.json"), self.to_json())?;
        self.write_records_csv(std::fs::File::create(dir.join("records.csv"))?)
    }
}
