//! Correlation-based feature selection across domains.

mod classifiers;
mod correlation;
mod fsus;
mod fud;

pub use classifiers::{centroid_train, knn_train, InstanceModel};
pub use correlation::{
    binary_correlation, correlation_from_table, correlation_table, group_correlation_table,
    group_pooled_correlations, lemma1_raw, lemma1_sample_bound, pooled_correlations, CorrelationTable, PairCounts,
};
pub use fsus::{correlation_stdevs, fsus_scores, rank_features, select_top};
pub use fud::{fit_on_features, fud, robust_features, FudOutput, HypothesisClass};
