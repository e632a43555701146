use proptest::prelude::*;

use mdlearn::featsel::CorrelationTable;
use mdlearn_bench::corpus::{BagOfWordsCorpus, Document};
use mdlearn_bench::report::{Aggregates, Metric};
use mdlearn_bench::scatter::emit_scatter;
use mdlearn_bench::{run_suite, Suite, SuiteConfig};

fn corpus_strategy() -> impl Strategy<Value = BagOfWordsCorpus> {
    (1usize..12).prop_flat_map(|n| {
        let doc = ("[a-c]", any::<bool>(), prop::collection::btree_set(0..n, 0..=n))
            .prop_map(|(domain, label, set)| Document { domain, label, tokens: set.into_iter().collect() });
        (prop::collection::vec(doc, 0..20), prop::collection::vec("[a-z0-9 ]{0,12}", 0..3)).prop_map(
            move |(documents, meta)| BagOfWordsCorpus {
                vocab: (0..n).map(|k| format!("t{k}")).collect(),
                documents,
                meta: meta.into_iter().map(|m| m.trim().to_string()).collect(),
            },
        )
    })
}

proptest! {
    #[test]
    fn corpus_text_roundtrip(c in corpus_strategy()) {
        prop_assert_eq!(BagOfWordsCorpus::parse(&c.to_text()).unwrap(), c);
    }

    #[test]
    fn filtered_corpus_keeps_frequent_tokens(c in corpus_strategy(), min in 0usize..5) {
        let f = c.filter_min_occurrences(min);
        let df = c.document_frequencies();
        let kept: Vec<&String> = c.vocab.iter().zip(&df).filter(|(_, &d)| d >= min).map(|(t, _)| t).collect();
        prop_assert_eq!(f.vocab.iter().collect::<Vec<_>>(), kept);
        prop_assert!(f.document_frequencies().iter().all(|&d| d >= min));
    }

    #[test]
    fn scatter_boundary(
        cells in prop::collection::vec(prop::collection::vec(prop::option::of(-1.0f64..1.0), 6), 1..5),
        pooled in prop::collection::vec(prop::option::of(-1.0f64..1.0), 6),
        alpha in 0.0f64..4.0,
        count in 1usize..=6,
    ) {
        let table = CorrelationTable::from_rows(cells).unwrap();
        let rows = emit_scatter(&table, &pooled, alpha, count).unwrap();
        prop_assert_eq!(rows.iter().filter(|r| r.selected).count(), count);
        let worst_in = rows.iter().filter(|r| r.selected).map(|r| r.score).fold(f64::INFINITY, f64::min);
        let best_out = rows.iter().filter(|r| !r.selected).map(|r| r.score).fold(f64::NEG_INFINITY, f64::max);
        prop_assert!(worst_in >= best_out);
    }

    #[test]
    fn aggregates_are_ordered(values in prop::collection::vec(-10.0f64..10.0, 1..50)) {
        let a = Aggregates::from_values(&values).unwrap();
        let chain = [a.min, a.q05, a.q25, a.median, a.q75, a.q95, a.max];
        prop_assert!(chain.windows(2).all(|w| w[0] <= w[1]));
        prop_assert!(a.min <= a.mean + 1e-12 && a.mean <= a.max + 1e-12);
        prop_assert!(a.std >= 0.0);
    }
}

/// Recomputes the summary with a two-pass mean/variance and nearest-rank
/// checks, independent of the report code.
#[test]
fn suite_aggregates_match_recomputation() {
    for suite in [Suite::Lemma1, Suite::Dtree] {
        let mut cfg = SuiteConfig::default_for(suite);
        cfg.override_with(Some(3), Some(7));
        let report = run_suite(&cfg).unwrap();
        let values: Vec<f64> = report
            .records
            .iter()
            .filter_map(|r| match report.metric {
                Metric::Error => r.error,
                Metric::Deviation => r.deviation,
                Metric::BalancedError => r.balanced_error,
            })
            .collect();
        let agg = report.aggregates.clone().unwrap();
        let n = values.len() as f64;
        let mean = values.iter().sum::<f64>() / n;
        let std = (values.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / n).sqrt();
        let mut sorted = values.clone();
        sorted.sort_by(|a, b| a.partial_cmp(b).unwrap());
        assert_eq!(agg.count, values.len());
        assert!((agg.mean - mean).abs() <= 1e-15 * mean.abs().max(1.0));
        assert!((agg.std - std).abs() <= 1e-12);
        assert_eq!(agg.min, sorted[0]);
        assert_eq!(agg.max, *sorted.last().unwrap());
        let mid = sorted.len() / 2;
        let median = if sorted.len() % 2 == 1 { sorted[mid] } else { (sorted[mid - 1] + sorted[mid]) / 2.0 };
        assert!((agg.median - median).abs() <= 1e-15);
    }
}
