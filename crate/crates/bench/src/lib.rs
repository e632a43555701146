//! Experiment runner for the `mdlearn` learners: seeded Monte Carlo suites,
//! cross-domain validation of feature selectors and bag-of-words corpus
//! handling.

pub mod config;
pub mod corpus;
pub mod mimic;
pub mod report;
pub mod scatter;
pub mod suites;
pub mod xval;

pub use config::{Suite, SuiteConfig};
pub use report::{TrialRecord, TrialReport};
pub use suites::run_suite;

#[derive(Debug, thiserror::Error)]
pub enum BenchError {
    #[error("config: {0}")]
    Config(String),
    #[error(transparent)]
    Core(#[from] mdlearn::Error),
    #[error("report: {0}")]
    Report(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Csv(#[from] csv::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl BenchError {
    /// Process exit code: 2 for usage problems, 1 otherwise.
    pub fn exit_code(&self) -> i32 {
        match self {
            BenchError::Config(_) | BenchError::Core(mdlearn::Error::InvalidInput(_)) => 2,
            _ => 1,
        }
    }
}
