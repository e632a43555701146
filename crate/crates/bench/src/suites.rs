//! The five experiment suites.
//!
//! Trial `t` of a suite seeded with `s` uses the child seed
//! `derive_seed(s, t)` for everything it draws, so trials are independent
//! of each other and of the order in which the thread pool runs them.

use rand::Rng;
use rand_distr::{Binomial, Distribution};
use rayon::prelude::*;

use mdlearn::dtree::{dt_error_bound, learn_dt_multidataset};
use mdlearn::eval::{class_errors, error_rate};
use mdlearn::featsel::{correlation_from_table, fud, lemma1_sample_bound, HypothesisClass};
use mdlearn::massart::{conjunctions_up_to, denoise_reduce, CnLearner, ConjunctionCn, FiniteErm};
use mdlearn::synth::rng::stream;
use mdlearn::synth::{derive_seed, random_dtspec, Family, FsProfile, FsSpec, Generator, GeneratorSpec, LabelMode, MdmSpec};
use mdlearn::{BitVec, Conjunction, Error, Hypothesis};

use crate::config::{CnKind, DtreeConfig, FsusConfig, FudConfig, Lemma1Config, MassartConfig, SuiteConfig};
use crate::report::{Check, Metric, TrialRecord, TrialReport};
use crate::xval::{cross_domain_validation, ClassifierKind, Selector};
use crate::{mimic, BenchError};

// Stream ids inside a trial; 0 and 1 belong to the generator's own streams.
const SETUP_STREAM: u64 = 2;
const LEARNER_STREAM: u64 = 3;

pub fn run_suite(cfg: &SuiteConfig) -> Result<TrialReport, BenchError> {
    cfg.validate()?;
    match cfg {
        SuiteConfig::Dtree(c) => dtree(cfg, c),
        SuiteConfig::Massart(c) => massart(cfg, c),
        SuiteConfig::Fud(c) => fud_suite(cfg, c),
        SuiteConfig::Lemma1(c) => lemma1(cfg, c),
        SuiteConfig::Fsus(c) => fsus(cfg, c),
    }
}

/// Learner errors that belong in a trial record rather than aborting the run.
fn recordable(e: &Error) -> bool {
    matches!(e, Error::AssumptionViolation(_) | Error::Fail(_))
}

fn parallel_trials<F>(trials: u64, f: F) -> Result<Vec<TrialRecord>, BenchError>
where
    F: Fn(u64) -> Result<TrialRecord, BenchError> + Sync + Send,
{
    (0..trials).into_par_iter().map(f).collect()
}

fn dtree(cfg: &SuiteConfig, c: &DtreeConfig) -> Result<TrialReport, BenchError> {
    let records = parallel_trials(c.trials, |trial| {
        let seed = derive_seed(c.seed, trial);
        let gen = Generator::new(random_dtspec(seed, c.n, c.s, c.skew)?)?;
        let t = gen.sample_training(c.d, c.m, 0)?;
        let mut rec = TrialRecord { trial, seed, ..Default::default() };
        match learn_dt_multidataset(&t) {
            Ok(h) => {
                let test = gen.sample_test(c.test_size, 0, LabelMode::True)?;
                let counts = class_errors(&h, &test)?;
                rec.hypothesis = Some(h.summary());
                rec.error = Some(counts.overall().rate());
                rec.false_positives = Some(counts.false_positives());
                rec.negatives = Some(counts.negatives.total);
            }
            Err(e) if recordable(&e) => rec.failure = Some(e.to_string()),
            Err(e) => return Err(e.into()),
        }
        Ok(rec)
    })?;

    let bound = dt_error_bound(c.s as u64, c.n as u64, c.d as u64, c.m as u64);
    let errors: Vec<f64> = records.iter().filter_map(|r| r.error).collect();
    let mean = errors.iter().sum::<f64>() / errors.len().max(1) as f64;
    let fps: u64 = records.iter().filter_map(|r| r.false_positives).sum();
    let failed = records.iter().filter(|r| r.failure.is_some()).count();
    let checks = vec![
        Check::at_most("mean_error", mean, bound),
        Check::at_most("false_positives", fps as f64, c.max_false_positives as f64),
        Check::at_most("failed_trials", failed as f64, 0.0),
    ];
    Ok(TrialReport::new(cfg, Metric::Error, records, Some(bound), checks))
}

fn cn_learner(c: &MassartConfig) -> Result<Box<dyn CnLearner>, BenchError> {
    Ok(match c.learner {
        CnKind::Erm => Box::new(FiniteErm::new(conjunctions_up_to(c.n, c.width))?),
        CnKind::Conjunction => Box::new(ConjunctionCn),
    })
}

/// Exact disagreement mass of `h` and `g` under independent coordinates
/// with `Pr[x[k] = 1] = p`.
fn disagreement(h: &Hypothesis, g: &Hypothesis, n: usize, p: f64) -> Result<f64, BenchError> {
    let mut mass = 0.0;
    for v in 0..1u64 << n {
        let x = BitVec::from_u64(v, n);
        if h.predict(&x)? != g.predict(&x)? {
            let ones = x.count_ones() as i32;
            mass += p.powi(ones) * (1.0 - p).powi(n as i32 - ones);
        }
    }
    Ok(mass)
}

fn massart(cfg: &SuiteConfig, c: &MassartConfig) -> Result<TrialReport, BenchError> {
    let target = Conjunction::parse_signed(c.n, &c.target)?;
    let truth = Hypothesis::Conj(target.clone());
    let cn = cn_learner(c)?;
    let records = parallel_trials(c.trials, |trial| {
        let seed = derive_seed(c.seed, trial);
        let mut setup = stream(seed, SETUP_STREAM);
        let spec = MdmSpec {
            target: target.clone(),
            noise_rates: (0..c.domains).map(|_| setup.random::<f64>() * c.eta_max).collect(),
            eta_bound: c.eta_bound,
            weights: vec![1.0 / c.domains as f64; c.domains],
            marginals: vec![c.marginal; c.n],
        };
        let gen = Generator::new(GeneratorSpec { seed, family: Family::Mdm(spec) })?;
        let t = gen.sample_training(c.d, c.m, 0)?;
        let red = denoise_reduce(&t, cn.as_ref(), c.eta_bound, c.eps, c.delta, &mut stream(seed, LEARNER_STREAM))?;
        let mislabeled = red.relabeled.iter().filter(|e| e.y() != target.is_satisfied(e.x())).count();
        let mut rec = TrialRecord {
            trial,
            seed,
            hypothesis: Some(red.hypothesis.summary()),
            error: Some(disagreement(&red.hypothesis, &truth, c.n, c.marginal)?),
            mislabeled: Some(mislabeled as u64),
            ..Default::default()
        };
        if c.check_zero_noise {
            let clean: Vec<_> = red.relabeled.iter().map(|e| e.relabeled(target.is_satisfied(e.x()))).collect();
            let direct = cn.learn(&clean, 0.0, c.eps, c.delta / 2.0)?;
            let inputs = 1u64 << c.n;
            let mut agree = 0u64;
            for v in 0..inputs {
                let x = BitVec::from_u64(v, c.n);
                agree += u64::from(direct.predict(&x)? == red.hypothesis.predict(&x)?);
            }
            rec.agreement = Some(agree as f64 / inputs as f64);
        }
        Ok(rec)
    })?;

    let successes = records.iter().filter(|r| r.error.is_some_and(|e| e <= c.max_error)).count();
    let mut checks = vec![Check::at_least("success_rate", successes as f64 / records.len() as f64, c.min_success_rate)];
    if c.check_zero_noise {
        let min_agree = records.iter().filter_map(|r| r.agreement).fold(1.0, f64::min);
        checks.push(Check::at_least("min_agreement", min_agree, 1.0));
    }
    Ok(TrialReport::new(cfg, Metric::Error, records, Some(c.max_error), checks))
}

fn fud_suite(cfg: &SuiteConfig, c: &FudConfig) -> Result<TrialReport, BenchError> {
    let mut profile = FsProfile::new(c.n, c.robust, c.beta, c.domains);
    profile.label_rate = c.label_rate;
    profile.null_fraction = c.null_fraction;
    let records = parallel_trials(c.trials, |trial| {
        let seed = derive_seed(c.seed, trial);
        let spec = FsSpec::idiosyncratic(&profile, &mut stream(seed, SETUP_STREAM))?;
        let robust = spec.robust_features();
        let gen = Generator::new(GeneratorSpec { seed, family: Family::Fs(spec) })?;
        let t = gen.sample_training(c.d, c.m, 0)?;
        let mut rec = TrialRecord { trial, seed, ..Default::default() };
        match fud(&t, &HypothesisClass::Conjunctions, c.beta, c.eps) {
            Ok(out) => {
                let test = gen.sample_test(c.test_size, 0, LabelMode::True)?;
                rec.recovered = Some(out.selected.as_ref() == Some(&robust));
                rec.error = Some(error_rate(&out.hypothesis, &test)?);
                rec.hypothesis = Some(out.hypothesis.summary());
            }
            Err(e) if recordable(&e) => {
                rec.recovered = Some(false);
                rec.failure = Some(e.to_string());
            }
            Err(e) => return Err(e.into()),
        }
        Ok(rec)
    })?;

    let recovered: Vec<&TrialRecord> = records.iter().filter(|r| r.recovered == Some(true)).collect();
    let worst = recovered.iter().filter_map(|r| r.error).fold(0.0, f64::max);
    let checks = vec![
        Check::at_least("recovery_rate", recovered.len() as f64 / records.len() as f64, c.min_recovery),
        Check::at_most("max_error_when_recovered", worst, c.max_error),
    ];
    Ok(TrialReport::new(cfg, Metric::Error, records, Some(c.max_error), checks))
}

/// Where a lemma trial draws `Pr[x = 1]`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Regime {
    /// `τ/2 ≤ Pr[x=1] ≤ τ`.
    Rare,
    /// `τ < Pr[x=1] ≤ 1/2`.
    Middle,
    /// `Pr[x=1] ≥ 1/2`, the polarity-flipped case.
    Common,
}

pub const REGIMES: [Regime; 3] = [Regime::Rare, Regime::Middle, Regime::Common];

impl Regime {
    pub fn name(self) -> &'static str {
        match self {
            Regime::Rare => "rare",
            Regime::Middle => "middle",
            Regime::Common => "common",
        }
    }

    /// Range of `Pr[x = 1]` for the threshold `tau`.
    pub fn range(self, tau: f64) -> (f64, f64) {
        match self {
            Regime::Rare => (tau / 2.0, tau),
            Regime::Middle => (tau, 0.5),
            Regime::Common => (0.5, 1.0 - tau / 2.0),
        }
    }
}

/// A random joint distribution of `(x, y)` with `Pr[y=1] = v` and
/// `Pr[x=1]` in the regime's range, as cells `[a, b, c, d]` of
/// `(x,y) = (0,0), (0,1), (1,0), (1,1)`.
pub fn lemma1_cells<R: Rng>(regime: Regime, tau: f64, v: f64, rng: &mut R) -> [f64; 4] {
    let (lo, hi) = regime.range(tau);
    let s = lo + rng.random::<f64>() * (hi - lo);
    let (dlo, dhi) = ((s - (1.0 - v)).max(0.0), s.min(v));
    let d = dlo + rng.random::<f64>() * (dhi - dlo);
    let (b, c) = (v - d, s - d);
    [(1.0 - b - c - d).max(0.0), b, c, d]
}

/// Multinomial cell counts of `m` draws, via a chain of binomials.
pub fn multinomial<R: Rng>(m: u64, cells: &[f64; 4], rng: &mut R) -> [u64; 4] {
    let mut out = [0; 4];
    let mut left = m;
    let mut mass = 1.0;
    for i in 0..3 {
        let p = if mass > 0.0 { (cells[i] / mass).clamp(0.0, 1.0) } else { 0.0 };
        out[i] = Binomial::new(left, p).expect("p in [0,1]").sample(rng);
        left -= out[i];
        mass -= cells[i];
    }
    out[3] = left;
    out
}

fn lemma1(cfg: &SuiteConfig, c: &Lemma1Config) -> Result<TrialReport, BenchError> {
    let m = match c.m {
        Some(m) => m,
        None => lemma1_sample_bound(c.eps, c.v, c.delta)?,
    };
    let tau = c.eps * c.eps * c.v / 64.0;
    let per = c.trials;
    let records = parallel_trials(per * REGIMES.len() as u64, |trial| {
        let regime = REGIMES[(trial / per) as usize];
        let seed = derive_seed(c.seed, trial);
        let mut rng = stream(seed, SETUP_STREAM);
        let cells = lemma1_cells(regime, tau, c.v, &mut rng);
        let rho = correlation_from_table(cells[0], cells[1], cells[2], cells[3])
            .ok_or_else(|| BenchError::Report(format!("degenerate lemma cells {cells:?}")))?;
        let n = multinomial(m, &cells, &mut rng);
        let est = correlation_from_table(n[0] as f64, n[1] as f64, n[2] as f64, n[3] as f64);
        let mut rec = TrialRecord { trial, seed, setting: Some(regime.name().into()), ..Default::default() };
        match est {
            Some(r) => {
                let dev = (r - rho).abs();
                rec.deviation = Some(dev);
                rec.exceeded = Some(dev > c.eps);
            }
            None => {
                rec.exceeded = Some(true);
                rec.failure = Some("estimate undefined".into());
            }
        }
        Ok(rec)
    })?;

    let limit = c.max_failure_rate.unwrap_or(c.delta);
    let checks = REGIMES
        .iter()
        .map(|reg| {
            let rs: Vec<&TrialRecord> = records.iter().filter(|r| r.setting.as_deref() == Some(reg.name())).collect();
            let failed = rs.iter().filter(|r| r.exceeded == Some(true)).count();
            Check::at_most(format!("failure_rate_{}", reg.name()), failed as f64 / rs.len() as f64, limit)
        })
        .collect();
    Ok(TrialReport::new(cfg, Metric::Deviation, records, Some(c.eps), checks))
}

pub fn fsus_classifiers(c: &FsusConfig) -> [ClassifierKind; 2] {
    [ClassifierKind::Knn(c.knn_k), ClassifierKind::Centroid]
}

pub fn fsus_setting(classifier: ClassifierKind, selector: Selector, count: usize) -> String {
    format!("{}/{}/{count}", classifier.label(), selector.label())
}

fn fsus(cfg: &SuiteConfig, c: &FsusConfig) -> Result<TrialReport, BenchError> {
    let selectors = [Selector::Baseline, Selector::Fsus(c.alpha)];
    let classifiers = fsus_classifiers(c);
    let per_trial: Vec<Vec<TrialRecord>> = (0..c.trials)
        .into_par_iter()
        .map(|trial| {
            let seed = derive_seed(c.seed, trial);
            let (corpus, _) = mimic::generate(&c.mimic, seed);
            let data = corpus.domain_data();
            let test = data
                .iter()
                .position(|d| d.name == mimic::TEST_DOMAIN)
                .expect("the mimic corpus has a test domain");
            let mut recs = Vec::new();
            for &cl in &classifiers {
                for &sel in &selectors {
                    let table = cross_domain_validation(&data, c.k, &[test], sel, &c.feature_counts, cl)?;
                    for row in table.rows {
                        recs.push(TrialRecord {
                            trial,
                            seed,
                            setting: Some(fsus_setting(cl, sel, row.count)),
                            balanced_error: row.mean_balanced_error,
                            ..Default::default()
                        });
                    }
                }
            }
            Ok(recs)
        })
        .collect::<Result<_, BenchError>>()?;
    let records: Vec<TrialRecord> = per_trial.into_iter().flatten().collect();

    let mean_of = |setting: &str| {
        let v: Vec<f64> =
            records.iter().filter(|r| r.setting.as_deref() == Some(setting)).filter_map(|r| r.balanced_error).collect();
        if v.is_empty() {
            f64::NAN
        } else {
            v.iter().sum::<f64>() / v.len() as f64
        }
    };
    let mut checks = Vec::new();
    for &cl in &classifiers {
        for &count in &c.feature_counts {
            let fs = mean_of(&fsus_setting(cl, selectors[1], count));
            let base = mean_of(&fsus_setting(cl, selectors[0], count));
            checks.push(Check::below(format!("{}/{count}", cl.label()), fs, base));
        }
    }
    Ok(TrialReport::new(cfg, Metric::BalancedError, records, None, checks))
}
