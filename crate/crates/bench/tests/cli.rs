use std::path::Path;
use std::process::{Command, Output};

use mdlearn_bench::corpus::BagOfWordsCorpus;
use mdlearn_bench::{Suite, SuiteConfig, TrialReport};

fn mdbench(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_mdbench")).args(args).output().expect("binary runs")
}

fn path(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn run_writes_a_verifiable_report() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("lemma");
    let o = mdbench(&["run", "lemma1", "--trials", "4", "--seed", "11", "--out", path(&out)]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let summary: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(summary["pass"], true);

    let report = TrialReport::from_json(&std::fs::read_to_string(out.join("report.json")).unwrap()).unwrap();
    assert_eq!(report.records.len(), 12);
    assert!(report.config.contains("seed = 11"));
    assert_eq!(summary["fingerprint"], report.fingerprint);
    let csv = std::fs::read_to_string(out.join("records.csv")).unwrap();
    assert_eq!(csv.lines().count(), 13);

    // same flags, same bytes
    let again = dir.path().join("again");
    mdbench(&["run", "lemma1", "--trials", "4", "--seed", "11", "--out", path(&again)]);
    assert_eq!(std::fs::read(out.join("report.json")).unwrap(), std::fs::read(again.join("report.json")).unwrap());
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let base = Suite::Lemma1.default_config();

    let failing = dir.path().join("fail.toml");
    std::fs::write(&failing, format!("{base}max_failure_rate = -1.0\n")).unwrap();
    let o = mdbench(&["run", "lemma1", "--config", path(&failing), "--trials", "2"]);
    assert_eq!(o.status.code(), Some(1));

    let typo = dir.path().join("typo.toml");
    std::fs::write(&typo, format!("{base}tirals = 3\n")).unwrap();
    assert_eq!(mdbench(&["run", "lemma1", "--config", path(&typo)]).status.code(), Some(2));
    assert_eq!(mdbench(&["run", "dtree", "--config", path(&failing)]).status.code(), Some(2));
    assert_eq!(mdbench(&["run", "nosuch"]).status.code(), Some(2));
    assert_eq!(mdbench(&[]).status.code(), Some(2));
}

#[test]
fn corpus_tools() {
    let dir = tempfile::tempdir().unwrap();
    let corpus = dir.path().join("corpus.txt");
    let o = mdbench(&["gen", "corpus", "--seed", "5", "--out", path(&corpus)]);
    assert!(o.status.success());
    let parsed = BagOfWordsCorpus::load(&corpus).unwrap();
    assert_eq!(parsed.domains(), ["d1", "d2", "d3", "d4", "test"]);

    let filtered = dir.path().join("filtered.txt");
    let o = mdbench(&["ingest", "--corpus", path(&corpus), "--min-occurrences", "50", "--out", path(&filtered)]);
    assert!(o.status.success());
    let stats = String::from_utf8(o.stdout).unwrap();
    assert!(stats.starts_with("domain,pages,positive_fraction,density"));
    assert_eq!(stats.lines().count(), 7);
    let kept = BagOfWordsCorpus::load(&filtered).unwrap();
    assert!(kept.document_frequencies().iter().all(|&df| df >= 50));

    let o = mdbench(&["xval", "--corpus", path(&corpus), "--k", "4", "--test-domain", "test", "--counts", "10,20"]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let table = String::from_utf8(o.stdout).unwrap();
    assert_eq!(table.lines().next(), Some("count,mean_balanced_error,pairs,skipped"));
    assert!(table.lines().nth(1).unwrap().starts_with("10,"));
    assert!(table.lines().nth(1).unwrap().ends_with(",1,0"));

    let scatter = dir.path().join("scatter.csv");
    let o = mdbench(&["scatter", "--corpus", path(&corpus), "--count", "20", "--test-domain", "test", "--out", path(&scatter)]);
    assert!(o.status.success());
    let rows = std::fs::read_to_string(&scatter).unwrap();
    assert_eq!(rows.lines().filter(|l| l.ends_with(",true")).count(), 20);

    let o = mdbench(&["xval", "--corpus", path(&corpus), "--k", "4", "--test-domain", "nowhere"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn generator_files() {
    let dir = tempfile::tempdir().unwrap();
    let spec = dir.path().join("tree.toml");
    assert!(mdbench(&["gen", "dt-spec", "--seed", "3", "--n", "10", "--s", "4", "--out", path(&spec)]).status.success());
    assert!(mdlearn::synth::config::from_toml(&std::fs::read_to_string(&spec).unwrap()).is_ok());
    let o = mdbench(&["gen", "sample", "--spec", path(&spec), "--d", "3", "--m", "2"]);
    assert!(o.status.success());
    let text = String::from_utf8(o.stdout).unwrap();
    assert_eq!(text.lines().count(), 7);
    assert_eq!(text.lines().nth(1).unwrap().split(',').nth(2).unwrap().len(), 10);
}

#[test]
fn checked_in_configs_load() {
    let dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("configs");
    let mut n = 0;
    for entry in std::fs::read_dir(dir).unwrap() {
        SuiteConfig::load(&entry.unwrap().path()).unwrap();
        n += 1;
    }
    assert_eq!(n, 8);
}
