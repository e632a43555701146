//! Acceptance gate: one PASS/FAIL line per criterion, non-zero exit on any failure.

use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use rand::Rng;
use rayon::prelude::*;

use mdlearn::dtree::{dt_error_bound, LargestConsistent};
use mdlearn::eval::{error_rate, first_example_baseline};
use mdlearn::featsel::{binary_correlation, lemma1_sample_bound};
use mdlearn::synth::rng::stream;
use mdlearn::synth::{random_dtspec, DtSpec, Family, Generator, GeneratorSpec, LabelMode};
use mdlearn::tree::{DecisionTree, Node};
use mdlearn_bench::{run_suite, SuiteConfig, TrialReport};

struct Gate {
    failed: usize,
}

impl Gate {
    fn report(&mut self, id: u32, name: &str, pass: bool, detail: String) {
        if !pass {
            self.failed += 1;
        }
        println!("{} [{id:>2}] {name}: {detail}", if pass { "PASS" } else { "FAIL" });
    }
}

fn config(file: &str) -> SuiteConfig {
    let path = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("configs").join(file);
    SuiteConfig::load(&path).unwrap_or_else(|e| panic!("{}: {e}", path.display()))
}

fn run(file: &str) -> (SuiteConfig, TrialReport) {
    let cfg = config(file);
    let t = Instant::now();
    let report = run_suite(&cfg).unwrap_or_else(|e| panic!("{file}: {e}"));
    eprintln!("  {file}: {} records in {:.1}s", report.records.len(), t.elapsed().as_secs_f64());
    (cfg, report)
}

fn check_value(report: &TrialReport, name: &str) -> f64 {
    report.check(name).unwrap_or_else(|| panic!("{} has no check {name}", report.experiment)).value
}

/// Covariance over the product of standard deviations, straight from the pairs.
fn moment_correlation(pairs: &[(bool, bool)]) -> Option<f64> {
    let n = pairs.len() as f64;
    let f = |b: bool| if b { 1.0 } else { 0.0 };
    let mx = pairs.iter().map(|p| f(p.0)).sum::<f64>() / n;
    let my = pairs.iter().map(|p| f(p.1)).sum::<f64>() / n;
    let cov = pairs.iter().map(|p| (f(p.0) - mx) * (f(p.1) - my)).sum::<f64>() / n;
    let vx = pairs.iter().map(|p| (f(p.0) - mx).powi(2)).sum::<f64>() / n;
    let vy = pairs.iter().map(|p| (f(p.1) - my).powi(2)).sum::<f64>() / n;
    (vx > 0.0 && vy > 0.0).then(|| cov / (vx * vy).sqrt())
}

/// Random 8-leaf tree over 20 features relabeled so that exactly one leaf is positive.
fn single_positive_leaf_spec(seed: u64) -> GeneratorSpec {
    let GeneratorSpec { family: Family::Dt(dt), .. } = random_dtspec(seed, 20, 8, 1.0).unwrap() else {
        unreachable!()
    };
    let chosen = stream(seed, 7).random_range(0..dt.tree.num_leaves());
    let target = dt.tree.leaf(chosen).1.clone();
    let nodes = dt
        .tree
        .nodes()
        .iter()
        .map(|node| match node {
            Node::Leaf { path, .. } => Node::Leaf { label: *path == target, path: path.clone() },
            split => split.clone(),
        })
        .collect();
    let tree = DecisionTree::from_nodes(20, nodes).unwrap();
    GeneratorSpec { seed, family: Family::Dt(DtSpec { tree, leaf_probs: dt.leaf_probs }) }
}

fn main() -> ExitCode {
    let start = Instant::now();
    let mut gate = Gate { failed: 0 };
    let mut reruns: Vec<SuiteConfig> = Vec::new();

    // 1 and 2
    let mut fps = 0u64;
    let mut negatives = 0u64;
    let mut detail = Vec::new();
    let mut all_within = true;
    let t1 = Instant::now();
    for (file, d, m) in [("dtree.toml", 400, 400), ("dtree_d160.toml", 160, 400), ("dtree_d800.toml", 800, 800)] {
        let (cfg, r) = run(file);
        let bound = dt_error_bound(8, 20, d, m);
        let mean = check_value(&r, "mean_error");
        all_within &= r.bound == Some(bound) && mean <= bound && check_value(&r, "failed_trials") == 0.0;
        detail.push(format!("d={d},m={m}: mean {mean:.5} ≤ {bound:.3}"));
        fps += r.records.iter().filter_map(|x| x.false_positives).sum::<u64>();
        negatives += r.records.iter().filter_map(|x| x.negatives).sum::<u64>();
        reruns.push(cfg);
    }
    let secs = t1.elapsed().as_secs_f64();
    gate.report(1, "tree learner within its error bound", all_within, format!("{} ({secs:.0}s)", detail.join("; ")));
    gate.report(
        2,
        "no false positives",
        fps == 0 && negatives >= 5_000_000,
        format!("{fps} false positives on {negatives} negative evaluations"),
    );

    // 3
    let t3 = Instant::now();
    let (cfg, r) = run("massart.toml");
    let ok = r.records.iter().filter(|x| x.error.is_some_and(|e| e <= 0.05)).count();
    gate.report(
        3,
        "noise-removal reduction under per-domain noise",
        ok >= 90 && r.records.len() == 100,
        format!("{ok}/{} trials with error ≤ 0.05 ({:.0}s)", r.records.len(), t3.elapsed().as_secs_f64()),
    );
    reruns.push(cfg);

    // 4
    let (cfg, r) = run("massart_zero.toml");
    let full = r.records.iter().filter(|x| x.agreement == Some(1.0)).count();
    gate.report(
        4,
        "zero-noise reduction equals direct learning",
        full == 20 && r.records.len() == 20,
        format!("{full}/20 seeds agree on all 1024 inputs"),
    );
    reruns.push(cfg);

    // 5
    let (cfg, r) = run("fud.toml");
    let recovered: Vec<_> = r.records.iter().filter(|x| x.recovered == Some(true)).collect();
    let good = recovered.iter().all(|x| x.error.is_some_and(|e| e <= 0.05));
    gate.report(
        5,
        "robust feature set recovered",
        recovered.len() >= 95 && good && r.records.len() == 100,
        format!(
            "{}/{} recovered, max error when recovered {:.4}",
            recovered.len(),
            r.records.len(),
            check_value(&r, "max_error_when_recovered")
        ),
    );
    reruns.push(cfg);

    // 6
    let t6 = Instant::now();
    let m = lemma1_sample_bound(0.5, 0.5, 0.1).unwrap();
    let oracle_m = (2048.0 * 0.5f64.powi(-4) * 0.5f64.powi(-2) * 80f64.ln()).ceil() as u64;
    let (cfg, r) = run("lemma1.toml");
    let rates: Vec<f64> =
        ["rare", "middle", "common"].iter().map(|reg| check_value(&r, &format!("failure_rate_{reg}"))).collect();
    gate.report(
        6,
        "correlation concentration at the sample bound",
        m == oracle_m && r.records.len() == 600 && rates.iter().all(|&f| f <= 0.1),
        format!("m={m}, failure fractions {rates:?} ({:.1}s)", t6.elapsed().as_secs_f64()),
    );
    reruns.push(cfg);

    // 7
    let results: Vec<(f64, bool)> = (0..10_000u64)
        .into_par_iter()
        .map(|i| {
            let mut rng = stream(77, i);
            let cells: Vec<usize> = (0..4).map(|_| rng.random_range(0..60)).collect();
            let mut pairs = Vec::new();
            for (j, &c) in cells.iter().enumerate() {
                pairs.extend(std::iter::repeat_n((j >= 2, j % 2 == 1), c));
            }
            if pairs.is_empty() {
                return (0.0, true);
            }
            let rho = binary_correlation(&pairs).unwrap();
            let diff = match (rho, moment_correlation(&pairs)) {
                (Some(a), Some(b)) => (a - b).abs(),
                (None, None) => 0.0,
                _ => f64::INFINITY,
            };
            let flipped: Vec<(bool, bool)> = pairs.iter().map(|&(x, y)| (!x, y)).collect();
            let negates = binary_correlation(&flipped).unwrap() == rho.map(|r| -r);
            (diff, negates)
        })
        .collect();
    let worst = results.iter().map(|r| r.0).fold(0.0, f64::max);
    let negation = results.iter().all(|r| r.1);
    gate.report(
        7,
        "correlation matches the moment formula",
        worst <= 1e-12 && negation,
        format!("max deviation {worst:.2e} on 10000 tables, negation exact: {negation}"),
    );

    // 8
    let (cfg, r) = run("fsus.toml");
    let lines: Vec<String> = r.checks.iter().map(|c| format!("{} {:.3}<{:.3}", c.name, c.value, c.threshold)).collect();
    gate.report(8, "stability-regularized selection beats pooled selection", r.pass, lines.join(", "));
    reruns.push(cfg);

    // 9
    let errs: Vec<f64> = (0..20u64)
        .into_par_iter()
        .map(|seed| {
            let gen = Generator::new(single_positive_leaf_spec(9000 + seed)).unwrap();
            let h = first_example_baseline(&gen.sample_training(1000, 5, 0).unwrap(), &LargestConsistent).unwrap();
            error_rate(&h, &gen.sample_test(10_000, 0, LabelMode::True).unwrap()).unwrap()
        })
        .collect();
    let worst = errs.iter().copied().fold(0.0, f64::max);
    gate.report(9, "first-example baseline on tree data", worst <= 0.05, format!("max error {worst:.4} over 20 seeds"));

    // 10
    let mut same = true;
    let mut names = Vec::new();
    for mut cfg in reruns {
        let trials = cfg.trials().min(5);
        cfg.override_with(None, Some(trials));
        let a = run_suite(&cfg).unwrap();
        let b = run_suite(&cfg).unwrap();
        let identical = a.records == b.records && a.to_json() == b.to_json();
        let parsed = TrialReport::from_json(&a.to_json()).map(|p| p == a).unwrap_or(false);
        same &= identical && parsed;
        names.push(format!("{}:{}", a.experiment, if identical && parsed { "same" } else { "DIFF" }));
    }
    gate.report(10, "reruns reproduce their reports", same, names.join(", "));

    println!("{} failed, {:.0}s total", gate.failed, start.elapsed().as_secs_f64());
    if gate.failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
