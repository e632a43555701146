use std::fs::File;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use mdlearn::featsel::{group_correlation_table, group_pooled_correlations};
use mdlearn::synth::{config as spec_config, random_dtspec, Generator};
use mdlearn_bench::config::{MimicConfig, Suite, SuiteConfig};
use mdlearn_bench::corpus::{write_stats_csv, BagOfWordsCorpus, DEFAULT_MIN_OCCURRENCES};
use mdlearn_bench::scatter::{emit_scatter, write_scatter_csv};
use mdlearn_bench::xval::{cross_domain_validation, ClassifierKind, Selector};
use mdlearn_bench::{mimic, run_suite, BenchError};

#[derive(Parser)]
#[command(name = "mdbench", version, about = "Run multi-domain learning experiments")]
struct Cli {
    /// Base seed (overrides the config's `seed`)
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Trial count (overrides the config's `trials`)
    #[arg(long, global = true)]
    trials: Option<u64>,
    /// Output file or directory
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Write synthetic corpora, generator specs or training samples
    Gen {
        #[command(subcommand)]
        what: GenCommand,
    },
    /// Run an acceptance suite and print its report
    Run {
        suite: Suite,
        /// Config file; the checked-in default when omitted
        #[arg(long)]
        config: Option<PathBuf>,
    },
    /// Cross-domain validation of a feature selector on a corpus
    Xval {
        #[arg(long)]
        corpus: PathBuf,
        /// Training-subset size
        #[arg(long)]
        k: usize,
        #[arg(long, value_enum, default_value = "fsus")]
        selector: SelectorArg,
        #[arg(long, default_value_t = 2.0)]
        alpha: f64,
        #[arg(long, value_delimiter = ',', default_values_t = [10usize, 20, 50])]
        counts: Vec<usize>,
        #[arg(long, value_enum, default_value = "knn")]
        classifier: ClassifierArg,
        #[arg(long, default_value_t = 5)]
        knn_k: usize,
        /// Domains that are held out but never trained on (repeatable)
        #[arg(long = "test-domain")]
        test_domains: Vec<String>,
        #[arg(long, default_value_t = DEFAULT_MIN_OCCURRENCES)]
        min_occurrences: usize,
    },
    /// Per-feature pooled correlation vs. cross-domain stdev, as CSV
    Scatter {
        #[arg(long)]
        corpus: PathBuf,
        #[arg(long, default_value_t = 2.0)]
        alpha: f64,
        #[arg(long, default_value_t = 50)]
        count: usize,
        /// Domains left out of the statistics (repeatable)
        #[arg(long = "test-domain")]
        test_domains: Vec<String>,
        #[arg(long, default_value_t = DEFAULT_MIN_OCCURRENCES)]
        min_occurrences: usize,
    },
    /// Filter a corpus and print per-domain statistics
    Ingest {
        #[arg(long)]
        corpus: PathBuf,
        #[arg(long, default_value_t = DEFAULT_MIN_OCCURRENCES)]
        min_occurrences: usize,
    },
}

#[derive(Subcommand)]
enum GenCommand {
    /// Synthetic corpus with four training domains and a shifted test domain
    Corpus {
        /// Corpus parameters as a TOML table; the fsus suite's by default
        #[arg(long)]
        config: Option<PathBuf>,
    },
    /// Random decision-tree generator spec
    DtSpec {
        #[arg(long, default_value_t = 20)]
        n: usize,
        #[arg(long, default_value_t = 8)]
        s: usize,
        #[arg(long, default_value_t = 1.0)]
        skew: f64,
    },
    /// Training sample of a generator spec, one `dataset,label,bits` row per example
    Sample {
        #[arg(long)]
        spec: PathBuf,
        #[arg(long)]
        d: usize,
        #[arg(long)]
        m: usize,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum SelectorArg {
    Baseline,
    Fsus,
}

#[derive(Clone, Copy, ValueEnum)]
enum ClassifierArg {
    Knn,
    Centroid,
}

fn output(out: &Option<PathBuf>) -> Result<Box<dyn Write>, BenchError> {
    Ok(match out {
        Some(p) => Box::new(File::create(p)?),
        None => Box::new(std::io::stdout().lock()),
    })
}

fn load_corpus(path: &Path, min: usize) -> Result<BagOfWordsCorpus, BenchError> {
    Ok(BagOfWordsCorpus::load(path)?.filter_min_occurrences(min))
}

fn domain_indices(corpus: &BagOfWordsCorpus, names: &[String]) -> Result<Vec<usize>, BenchError> {
    let all = corpus.domains();
    names
        .iter()
        .map(|n| all.iter().position(|d| d == n).ok_or_else(|| BenchError::Config(format!("unknown domain `{n}`"))))
        .collect()
}

fn run(cli: Cli) -> Result<bool, BenchError> {
    match cli.command {
        Command::Run { suite, config } => {
            let mut cfg = match config {
                Some(p) => SuiteConfig::load(&p)?,
                None => SuiteConfig::default_for(suite),
            };
            if cfg.suite() != suite {
                return Err(BenchError::Config(format!("config is for the {} suite", cfg.suite().name())));
            }
            cfg.override_with(cli.seed, cli.trials);
            let report = run_suite(&cfg)?;
            if let Some(dir) = &cli.out {
                report.write_to_dir(dir)?;
            }
            let summary = serde_json::json!({
                "experiment": report.experiment,
                "suite": report.suite,
                "fingerprint": report.fingerprint,
                "aggregates": report.aggregates,
                "bound": report.bound,
                "checks": report.checks,
                "pass": report.pass,
            });
            println!("{}", serde_json::to_string_pretty(&summary)?);
            Ok(report.pass)
        }
        Command::Gen { what } => {
            let seed = cli.seed.unwrap_or(0);
            let text = match what {
                GenCommand::Corpus { config } => {
                    let mimic_cfg: MimicConfig = match config {
                        Some(p) => toml::from_str(&std::fs::read_to_string(p)?)
                            .map_err(|e| BenchError::Config(e.to_string()))?,
                        None => match SuiteConfig::default_for(Suite::Fsus) {
                            SuiteConfig::Fsus(c) => c.mimic,
                            _ => unreachable!(),
                        },
                    };
                    mimic::generate(&mimic_cfg, seed).0.to_text()
                }
                GenCommand::DtSpec { n, s, skew } => spec_config::to_toml(&random_dtspec(seed, n, s, skew)?)?,
                GenCommand::Sample { spec, d, m } => {
                    let gen = Generator::new(spec_config::from_toml(&std::fs::read_to_string(spec)?)?)?;
                    let t = gen.sample_training(d, m, cli.trials.unwrap_or(0))?;
                    let mut w = csv::Writer::from_writer(Vec::new());
                    w.write_record(["dataset", "label", "x"])?;
                    for (i, ds) in t.datasets().iter().enumerate() {
                        for e in ds.examples() {
                            let bits: String = e.x().iter().map(|b| if b { '1' } else { '0' }).collect();
                            w.write_record([i.to_string(), u8::from(e.y()).to_string(), bits])?;
                        }
                    }
                    String::from_utf8(w.into_inner().map_err(|e| BenchError::Io(e.into_error()))?).expect("ascii")
                }
            };
            output(&cli.out)?.write_all(text.as_bytes())?;
            Ok(true)
        }
        Command::Xval { corpus, k, selector, alpha, counts, classifier, knn_k, test_domains, min_occurrences } => {
            let corpus = load_corpus(&corpus, min_occurrences)?;
            let excluded = domain_indices(&corpus, &test_domains)?;
            let selector = match selector {
                SelectorArg::Baseline => Selector::Baseline,
                SelectorArg::Fsus => Selector::Fsus(alpha),
            };
            let classifier = match classifier {
                ClassifierArg::Knn => ClassifierKind::Knn(knn_k),
                ClassifierArg::Centroid => ClassifierKind::Centroid,
            };
            let table = cross_domain_validation(&corpus.domain_data(), k, &excluded, selector, &counts, classifier)?;
            for s in &table.skips {
                eprintln!("skipped subset {:?}: {}", s.subset, s.reason);
            }
            let mut w = csv::Writer::from_writer(output(&cli.out)?);
            for row in &table.rows {
                w.serialize(row)?;
            }
            w.flush()?;
            Ok(true)
        }
        Command::Scatter { corpus, alpha, count, test_domains, min_occurrences } => {
            let corpus = load_corpus(&corpus, min_occurrences)?;
            let excluded = domain_indices(&corpus, &test_domains)?;
            let n = corpus.vocab.len();
            let data = corpus.domain_data();
            let groups: Vec<&[mdlearn::Example]> = data
                .iter()
                .enumerate()
                .filter(|(z, _)| !excluded.contains(z))
                .map(|(_, d)| d.examples.as_slice())
                .collect();
            let table = group_correlation_table(&groups, n);
            let pooled = group_pooled_correlations(groups.iter().flat_map(|g| g.iter()), n);
            let rows = emit_scatter(&table, &pooled, alpha, count.min(n))?;
            write_scatter_csv(&rows, output(&cli.out)?)?;
            Ok(true)
        }
        Command::Ingest { corpus, min_occurrences } => {
            let raw = BagOfWordsCorpus::load(&corpus)?;
            let filtered = raw.filter_min_occurrences(min_occurrences);
            eprintln!("vocabulary: {} tokens, {} after filtering", raw.vocab.len(), filtered.vocab.len());
            write_stats_csv(&filtered.stats(), std::io::stdout().lock())?;
            if let Some(p) = &cli.out {
                std::fs::write(p, filtered.to_text())?;
            }
            Ok(true)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
