//! Accuracy, F-measure, per-image and corpus evaluation, and correlation
//! against human judgments.

mod accuracy;
mod correlation;
mod record;

pub use accuracy::{accuracy, f_score, leave_one_out_accuracy};
pub use correlation::{
    fractional_ranks, paired_scores, pearson, per_image_rank_correlation, spearman,
    RankCorrelation, ScoreTable,
};
pub use record::{
    evaluate_corpus, evaluate_image, summarize, AccuracyScale, CorpusReport, CorpusSummary,
    EvaluationConfig, EvaluationRecord, ImageEntry, MetricSet, TruncationMean, TruncationRow,
};
