//! Suite configuration files.
//!
//! A config is a flat TOML file whose `suite` key picks the experiment; the
//! remaining keys are that suite's parameters. Unknown keys are rejected so
//! that a typo cannot silently fall back to a default.

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::BenchError;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Suite {
    Dtree,
    Massart,
    Fud,
    Lemma1,
    Fsus,
}

impl Suite {
    pub fn name(self) -> &'static str {
        match self {
            Suite::Dtree => "dtree",
            Suite::Massart => "massart",
            Suite::Fud => "fud",
            Suite::Lemma1 => "lemma1",
            Suite::Fsus => "fsus",
        }
    }

    /// The checked-in default config.
    pub fn default_config(self) -> &'static str {
        match self {
            Suite::Dtree => include_str!("../configs/dtree.toml"),
            Suite::Massart => include_str!("../configs/massart.toml"),
            Suite::Fud => include_str!("../configs/fud.toml"),
            Suite::Lemma1 => include_str!("../configs/lemma1.toml"),
            Suite::Fsus => include_str!("../configs/fsus.toml"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DtreeConfig {
    pub experiment: String,
    pub seed: u64,
    pub trials: u64,
    pub n: usize,
    pub s: usize,
    pub d: usize,
    pub m: usize,
    /// Dirichlet concentration of the leaf probabilities.
    pub skew: f64,
    pub test_size: usize,
    pub max_false_positives: u64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CnKind {
    /// ERM over all conjunctions of at most `width` literals.
    Erm,
    /// The noise-grid conjunction learner.
    Conjunction,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MassartConfig {
    pub experiment: String,
    pub seed: u64,
    pub trials: u64,
    pub n: usize,
    /// Signed 1-indexed literals, e.g. `"-1 +3"`.
    pub target: String,
    /// `Pr[x[k] = 1]` for every coordinate.
    pub marginal: f64,
    pub domains: usize,
    pub eta_bound: f64,
    /// Domain noise rates are uniform on `[0, eta_max]`; 0 means noiseless.
    pub eta_max: f64,
    pub d: usize,
    pub m: usize,
    pub eps: f64,
    pub delta: f64,
    pub learner: CnKind,
    #[serde(default = "default_width")]
    pub width: usize,
    pub max_error: f64,
    pub min_success_rate: f64,
    /// Also train on the true-labeled holdouts and require identical predictors.
    #[serde(default)]
    pub check_zero_noise: bool,
}

fn default_width() -> usize {
    2
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FudConfig {
    pub experiment: String,
    pub seed: u64,
    pub trials: u64,
    pub n: usize,
    pub robust: usize,
    pub beta: f64,
    pub domains: usize,
    pub label_rate: f64,
    pub null_fraction: f64,
    pub d: usize,
    pub m: usize,
    pub eps: f64,
    pub test_size: usize,
    pub max_error: f64,
    pub min_recovery: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Lemma1Config {
    pub experiment: String,
    pub seed: u64,
    /// Trials per case regime.
    pub trials: u64,
    pub eps: f64,
    pub v: f64,
    pub delta: f64,
    /// Sample size; defaults to the lemma's bound.
    #[serde(default)]
    pub m: Option<u64>,
    /// Largest allowed failure fraction per regime; defaults to `delta`.
    #[serde(default)]
    pub max_failure_rate: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MimicConfig {
    pub vocab: usize,
    pub robust: usize,
    pub idiosyncratic: usize,
    pub train_domains: usize,
    pub train_docs_min: usize,
    pub train_docs_max: usize,
    pub train_positive: f64,
    pub test_docs: usize,
    pub test_positive: f64,
    pub density: f64,
    /// Robust correlation magnitudes are uniform on this range.
    pub robust_corr: [f64; 2],
    /// Idiosyncratic magnitudes, where present, are uniform on this range.
    pub idio_corr: [f64; 2],
    /// Chance that an idiosyncratic feature is correlated in a given training domain.
    pub idio_rate: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FsusConfig {
    pub experiment: String,
    pub seed: u64,
    /// Number of corpus seeds.
    pub trials: u64,
    pub alpha: f64,
    pub feature_counts: Vec<usize>,
    pub knn_k: usize,
    /// Training-subset size for cross-domain validation.
    pub k: usize,
    pub mimic: MimicConfig,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "suite", rename_all = "lowercase")]
pub enum SuiteConfig {
    Dtree(DtreeConfig),
    Massart(MassartConfig),
    Fud(FudConfig),
    Lemma1(Lemma1Config),
    Fsus(FsusConfig),
}

impl SuiteConfig {
    pub fn parse(text: &str) -> Result<Self, BenchError> {
        let mut table: toml::Table = toml::from_str(text).map_err(|e| BenchError::Config(e.to_string()))?;
        let suite = table
            .remove("suite")
            .ok_or_else(|| BenchError::Config("missing `suite` key".into()))?;
        let suite: Suite = suite
            .try_into()
            .map_err(|e: toml::de::Error| BenchError::Config(format!("bad `suite`: {e}")))?;
        let bad = |e: toml::de::Error| BenchError::Config(format!("{} config: {e}", suite.name()));
        let cfg = match suite {
            Suite::Dtree => SuiteConfig::Dtree(table.try_into().map_err(bad)?),
            Suite::Massart => SuiteConfig::Massart(table.try_into().map_err(bad)?),
            Suite::Fud => SuiteConfig::Fud(table.try_into().map_err(bad)?),
            Suite::Lemma1 => SuiteConfig::Lemma1(table.try_into().map_err(bad)?),
            Suite::Fsus => SuiteConfig::Fsus(table.try_into().map_err(bad)?),
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self, BenchError> {
        let text = std::fs::read_to_string(path).map_err(|e| BenchError::Config(format!("{}: {e}", path.display())))?;
        Self::parse(&text)
    }

    pub fn default_for(suite: Suite) -> Self {
        Self::parse(suite.default_config()).expect("checked-in configs are valid")
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("configs serialize")
    }

    pub fn suite(&self) -> Suite {
        match self {
            SuiteConfig::Dtree(_) => Suite::Dtree,
            SuiteConfig::Massart(_) => Suite::Massart,
            SuiteConfig::Fud(_) => Suite::Fud,
            SuiteConfig::Lemma1(_) => Suite::Lemma1,
            SuiteConfig::Fsus(_) => Suite::Fsus,
        }
    }

    pub fn experiment(&self) -> &str {
        match self {
            SuiteConfig::Dtree(c) => &c.experiment,
            SuiteConfig::Massart(c) => &c.experiment,
            SuiteConfig::Fud(c) => &c.experiment,
            SuiteConfig::Lemma1(c) => &c.experiment,
            SuiteConfig::Fsus(c) => &c.experiment,
        }
    }

    pub fn seed(&self) -> u64 {
        match self {
            SuiteConfig::Dtree(c) => c.seed,
            SuiteConfig::Massart(c) => c.seed,
            SuiteConfig::Fud(c) => c.seed,
            SuiteConfig::Lemma1(c) => c.seed,
            SuiteConfig::Fsus(c) => c.seed,
        }
    }

    pub fn trials(&self) -> u64 {
        match self {
            SuiteConfig::Dtree(c) => c.trials,
            SuiteConfig::Massart(c) => c.trials,
            SuiteConfig::Fud(c) => c.trials,
            SuiteConfig::Lemma1(c) => c.trials,
            SuiteConfig::Fsus(c) => c.trials,
        }
    }

    /// Command-line overrides of the universal keys.
    pub fn override_with(&mut self, seed: Option<u64>, trials: Option<u64>) {
        let (s, t) = match self {
            SuiteConfig::Dtree(c) => (&mut c.seed, &mut c.trials),
            SuiteConfig::Massart(c) => (&mut c.seed, &mut c.trials),
            SuiteConfig::Fud(c) => (&mut c.seed, &mut c.trials),
            SuiteConfig::Lemma1(c) => (&mut c.seed, &mut c.trials),
            SuiteConfig::Fsus(c) => (&mut c.seed, &mut c.trials),
        };
        if let Some(v) = seed {
            *s = v;
        }
        if let Some(v) = trials {
            *t = v;
        }
    }

    pub fn validate(&self) -> Result<(), BenchError> {
        let fail = |msg: String| Err(BenchError::Config(msg));
        if self.trials() == 0 {
            return fail("trials must be positive".into());
        }
        match self {
            SuiteConfig::Dtree(c) => {
                if c.n == 0 || c.s == 0 || c.d == 0 || c.m == 0 || c.test_size == 0 {
                    return fail("dtree: n, s, d, m and test_size must be positive".into());
                }
            }
            SuiteConfig::Massart(c) => {
                if c.m < 2 || c.d == 0 || c.n == 0 || c.domains == 0 {
                    return fail("massart: need n ≥ 1, d ≥ 1, m ≥ 2 and at least one domain".into());
                }
                if c.n > 20 {
                    return fail("massart: errors are computed exactly, so n must be at most 20".into());
                }
                if !(0.0..=c.eta_bound).contains(&c.eta_max) {
                    return fail(format!("massart: eta_max {} must lie in [0, eta_bound]", c.eta_max));
                }
                if !(0.0..=1.0).contains(&c.marginal) {
                    return fail("massart: marginal must lie in [0, 1]".into());
                }
            }
            SuiteConfig::Fud(c) => {
                if c.d == 0 || c.m == 0 || c.test_size == 0 {
                    return fail("fud: d, m and test_size must be positive".into());
                }
            }
            SuiteConfig::Lemma1(c) => {
                mdlearn::featsel::lemma1_sample_bound(c.eps, c.v, c.delta).map_err(|e| BenchError::Config(e.to_string()))?;
                if c.v != 0.5 {
                    // the regimes below fix E[S] = b + d at v; only v = 1/2 keeps every regime reachable
                    return fail("lemma1: only v = 0.5 is supported".into());
                }
            }
            SuiteConfig::Fsus(c) => {
                if c.feature_counts.is_empty() || c.feature_counts.contains(&0) {
                    return fail("fsus: feature_counts must be non-empty and positive".into());
                }
                if c.knn_k.is_multiple_of(2) {
                    return fail("fsus: knn_k must be odd".into());
                }
                if c.k == 0 || c.k > c.mimic.train_domains {
                    return fail("fsus: need 1 ≤ k ≤ train_domains".into());
                }
                let m = &c.mimic;
                if m.robust + m.idiosyncratic > m.vocab {
                    return fail("fsus: robust + idiosyncratic features exceed the vocabulary".into());
                }
                if m.train_docs_min == 0 || m.train_docs_min > m.train_docs_max || m.test_docs == 0 {
                    return fail("fsus: bad document counts".into());
                }
            }
        }
        Ok(())
    }
}
