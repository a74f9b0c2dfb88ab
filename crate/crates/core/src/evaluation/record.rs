use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::diversity::{lsa_diversity, self_cider_diversity, top_k_indices};
use crate::error::{Error, Result};
use crate::similarity::{mbleu_mix_diversity, mean_cider_vectors, BleuSmoothing, IdfTable};
use crate::text::{tokenize, TokenizedCaption};

use super::accuracy::{f_score, leave_one_out_accuracy};

/// One image: the method's caption set and the human references.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ImageEntry {
    #[serde(rename = "id")]
    pub image_id: String,
    pub candidates: Vec<String>,
    pub references: Vec<String>,
}

impl ImageEntry {
    pub fn candidate_tokens(&self) -> Vec<TokenizedCaption> {
        self.candidates.iter().map(|c| tokenize(c)).collect()
    }

    pub fn reference_tokens(&self) -> Vec<TokenizedCaption> {
        self.references.iter().map(|c| tokenize(c)).collect()
    }
}

/// Which diversity metrics to compute.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct MetricSet {
    pub lsa: bool,
    pub self_cider: bool,
    pub mbleu: bool,
}

impl MetricSet {
    pub const ALL: MetricSet = MetricSet {
        lsa: true,
        self_cider: true,
        mbleu: true,
    };

    pub fn any(&self) -> bool {
        self.lsa || self.self_cider || self.mbleu
    }
}

impl Default for MetricSet {
    fn default() -> Self {
        MetricSet::ALL
    }
}

/// Reporting scale for CIDEr accuracy.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum AccuracyScale {
    /// Cosine CIDEr in `[0, 1]`.
    #[default]
    Unit,
    /// Multiplied by 10, the conventional CIDEr range.
    X10,
}

impl AccuracyScale {
    pub fn apply(self, value: f64) -> f64 {
        match self {
            AccuracyScale::Unit => value,
            AccuracyScale::X10 => value * 10.0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EvaluationConfig {
    pub metrics: MetricSet,
    pub beta2: f64,
    pub acc_scale: AccuracyScale,
    /// Subset sizes for the number-of-captions study.
    pub top_k: Vec<usize>,
    pub bleu_smoothing: BleuSmoothing,
}

impl Default for EvaluationConfig {
    fn default() -> Self {
        EvaluationConfig {
            metrics: MetricSet::ALL,
            beta2: 5.0,
            acc_scale: AccuracyScale::Unit,
            top_k: vec![2, 5, 8, 10],
            bleu_smoothing: BleuSmoothing::None,
        }
    }
}

impl EvaluationConfig {
    pub fn validate(&self) -> Result<()> {
        if !self.metrics.any() {
            return Err(Error::InvalidArgument("no metric selected".into()));
        }
        if !(self.beta2 >= 0.0 && self.beta2.is_finite()) {
            return Err(Error::InvalidArgument(format!(
                "beta2 {} must be >= 0",
                self.beta2
            )));
        }
        if let Some(k) = self.top_k.iter().find(|&&k| k < 2) {
            return Err(Error::InvalidArgument(format!(
                "top-k value {k} must be >= 2"
            )));
        }
        Ok(())
    }
}

/// Diversity of the `k` most accurate captions of one image.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TruncationRow {
    pub k: usize,
    pub div_lsa: Option<f64>,
    pub div_self_cider: Option<f64>,
}

/// Scores of one image. Field order is the serialized key order.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EvaluationRecord {
    pub image_id: String,
    pub acc: f64,
    /// Leave-one-out accuracy of the references; absent with fewer than 2.
    pub human_acc: Option<f64>,
    pub div_lsa: Option<f64>,
    pub div_self_cider: Option<f64>,
    pub div_mbleu_mix: Option<f64>,
    /// F-measure of Self-CIDEr diversity and accuracy.
    pub f_score: Option<f64>,
    pub caption_acc: Vec<f64>,
    pub truncation: Vec<TruncationRow>,
}

pub fn evaluate_image(
    entry: &ImageEntry,
    idf: &IdfTable,
    config: &EvaluationConfig,
) -> Result<EvaluationRecord> {
    evaluate_inner(entry, idf, config).map_err(|e| e.for_image(&entry.image_id))
}

fn evaluate_inner(
    entry: &ImageEntry,
    idf: &IdfTable,
    config: &EvaluationConfig,
) -> Result<EvaluationRecord> {
    config.validate()?;
    if entry.image_id.is_empty() {
        return Err(Error::InvalidArgument("empty image id".into()));
    }
    let candidates = entry.candidate_tokens();
    let references = entry.reference_tokens();
    if candidates.is_empty() {
        return Err(Error::MissingData("no candidate captions"));
    }
    if references.is_empty() {
        return Err(Error::MissingData("no reference captions"));
    }

    let caption_acc = mean_cider_vectors(&candidates, &references, idf)?;
    let acc = caption_acc.iter().sum::<f64>() / caption_acc.len() as f64;
    let human_acc = if references.len() >= 2 {
        Some(leave_one_out_accuracy(&references, idf)?)
    } else {
        None
    };

    let metrics = config.metrics;
    let div_lsa = metrics
        .lsa
        .then(|| lsa_diversity(&candidates).map(|s| s.div))
        .transpose()?;
    let div_self_cider = metrics
        .self_cider
        .then(|| self_cider_diversity(&candidates, idf).map(|s| s.div))
        .transpose()?;
    let div_mbleu_mix = metrics
        .mbleu
        .then(|| mbleu_mix_diversity(&candidates, config.bleu_smoothing))
        .transpose()?;

    let scaled_acc = config.acc_scale.apply(acc);
    let f = div_self_cider
        .map(|div| f_score(div, scaled_acc, config.beta2))
        .transpose()?;

    let mut truncation = Vec::new();
    for &k in &config.top_k {
        if k > candidates.len() {
            continue;
        }
        let subset: Vec<TokenizedCaption> = top_k_indices(&caption_acc, k)
            .into_iter()
            .map(|i| candidates[i].clone())
            .collect();
        truncation.push(TruncationRow {
            k,
            div_lsa: metrics
                .lsa
                .then(|| lsa_diversity(&subset).map(|s| s.div))
                .transpose()?,
            div_self_cider: metrics
                .self_cider
                .then(|| self_cider_diversity(&subset, idf).map(|s| s.div))
                .transpose()?,
        });
    }

    Ok(EvaluationRecord {
        image_id: entry.image_id.clone(),
        acc: scaled_acc,
        human_acc: human_acc.map(|v| config.acc_scale.apply(v)),
        div_lsa,
        div_self_cider,
        div_mbleu_mix,
        f_score: f,
        caption_acc: caption_acc
            .into_iter()
            .map(|v| config.acc_scale.apply(v))
            .collect(),
        truncation,
    })
}

/// Unweighted means over images of each truncation size.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TruncationMean {
    pub k: usize,
    pub images: usize,
    pub div_lsa: Option<f64>,
    pub div_self_cider: Option<f64>,
}

/// Unweighted per-image means, accumulated in ascending image id order.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CorpusSummary {
    pub images: usize,
    pub acc: Option<f64>,
    pub human_acc: Option<f64>,
    pub div_lsa: Option<f64>,
    pub div_self_cider: Option<f64>,
    pub div_mbleu_mix: Option<f64>,
    pub f_score: Option<f64>,
    pub truncation: Vec<TruncationMean>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CorpusReport {
    pub records: Vec<EvaluationRecord>,
    pub summary: CorpusSummary,
}

fn mean_of<I: Iterator<Item = Option<f64>>>(values: I) -> Option<f64> {
    let (sum, n) = values
        .flatten()
        .fold((0.0, 0usize), |(s, n), v| (s + v, n + 1));
    (n > 0).then(|| sum / n as f64)
}

/// Evaluate every image (in parallel on the current rayon pool) and
/// aggregate. Records come back sorted by image id.
pub fn evaluate_corpus(
    entries: &[ImageEntry],
    idf: &IdfTable,
    config: &EvaluationConfig,
) -> Result<CorpusReport> {
    config.validate()?;
    let mut results: Vec<(&str, Result<EvaluationRecord>)> = entries
        .par_iter()
        .map(|e| (e.image_id.as_str(), evaluate_image(e, idf, config)))
        .collect();
    results.sort_by(|a, b| a.0.cmp(b.0));
    if let Some(pair) = results.windows(2).find(|w| w[0].0 == w[1].0) {
        return Err(Error::InvalidArgument(format!(
            "duplicate image id {}",
            pair[0].0
        )));
    }
    let records = results
        .into_iter()
        .map(|(_, r)| r)
        .collect::<Result<Vec<_>>>()?;
    let summary = summarize(&records, config);
    Ok(CorpusReport { records, summary })
}

/// Corpus means of already-sorted records.
pub fn summarize(records: &[EvaluationRecord], config: &EvaluationConfig) -> CorpusSummary {
    let truncation = config
        .top_k
        .iter()
        .map(|&k| {
            let rows: Vec<&TruncationRow> = records
                .iter()
                .filter_map(|r| r.truncation.iter().find(|t| t.k == k))
                .collect();
            TruncationMean {
                k,
                images: rows.len(),
                div_lsa: mean_of(rows.iter().map(|t| t.div_lsa)),
                div_self_cider: mean_of(rows.iter().map(|t| t.div_self_cider)),
            }
        })
        .collect();
    CorpusSummary {
        images: records.len(),
        acc: mean_of(records.iter().map(|r| Some(r.acc))),
        human_acc: mean_of(records.iter().map(|r| r.human_acc)),
        div_lsa: mean_of(records.iter().map(|r| r.div_lsa)),
        div_self_cider: mean_of(records.iter().map(|r| r.div_self_cider)),
        div_mbleu_mix: mean_of(records.iter().map(|r| r.div_mbleu_mix)),
        f_score: mean_of(records.iter().map(|r| r.f_score)),
        truncation,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::similarity::build_idf;

    fn entry(id: &str, cands: &[&str], refs: &[&str]) -> ImageEntry {
        ImageEntry {
            image_id: id.into(),
            candidates: cands.iter().map(|s| s.to_string()).collect(),
            references: refs.iter().map(|s| s.to_string()).collect(),
        }
    }

    fn corpus() -> Vec<ImageEntry> {
        vec![
            entry(
                "b",
                &[
                    "a man rides a horse",
                    "a man on a horse",
                    "a horse on the beach",
                ],
                &[
                    "a man rides a horse on the beach",
                    "a person riding a horse",
                ],
            ),
            entry(
                "a",
                &["two cats sleep on a sofa", "two cats sleep on a sofa"],
                &[
                    "two cats sleeping on a couch",
                    "cats napping together on a sofa",
                ],
            ),
        ]
    }

    fn idf(entries: &[ImageEntry]) -> IdfTable {
        let docs: Vec<_> = entries.iter().map(ImageEntry::reference_tokens).collect();
        build_idf(&docs).unwrap()
    }

    #[test]
    fn corpus_is_sorted_and_means_match_records() {
        let entries = corpus();
        let idf = idf(&entries);
        let report = evaluate_corpus(&entries, &idf, &EvaluationConfig::default()).unwrap();
        let ids: Vec<_> = report.records.iter().map(|r| r.image_id.as_str()).collect();
        assert_eq!(ids, vec!["a", "b"]);
        let a = &report.records[0];
        assert_eq!(a.div_lsa, Some(0.0));
        assert_eq!(a.div_self_cider, Some(0.0));
        assert_eq!(a.f_score, Some(0.0));
        assert_eq!(a.truncation.len(), 1);
        let mean_acc = (report.records[0].acc + report.records[1].acc) / 2.0;
        assert_eq!(report.summary.acc, Some(mean_acc));
        assert_eq!(report.summary.images, 2);
        assert_eq!(report.summary.truncation[0].images, 2);
        assert_eq!(report.summary.truncation[1].images, 0);
        assert_eq!(report.summary.truncation[1].div_lsa, None);
    }

    #[test]
    fn record_fields_are_consistent() {
        let entries = corpus();
        let idf = idf(&entries);
        let config = EvaluationConfig {
            beta2: 2.0,
            ..Default::default()
        };
        let r = evaluate_image(&entries[0], &idf, &config).unwrap();
        assert_eq!(r.caption_acc.len(), 3);
        let f = f_score(r.div_self_cider.unwrap(), r.acc, 2.0).unwrap();
        assert_eq!(r.f_score, Some(f));
        assert!(r.human_acc.is_some());

        let x10 = EvaluationConfig {
            acc_scale: AccuracyScale::X10,
            ..config.clone()
        };
        let r10 = evaluate_image(&entries[0], &idf, &x10).unwrap();
        assert!((r10.acc - 10.0 * r.acc).abs() < 1e-12);
        assert_eq!(r10.div_lsa, r.div_lsa);
    }

    #[test]
    fn metric_selection() {
        let entries = corpus();
        let idf = idf(&entries);
        let config = EvaluationConfig {
            metrics: MetricSet {
                lsa: true,
                self_cider: false,
                mbleu: false,
            },
            ..Default::default()
        };
        let r = evaluate_image(&entries[0], &idf, &config).unwrap();
        assert!(r.div_lsa.is_some());
        assert_eq!(r.div_self_cider, None);
        assert_eq!(r.div_mbleu_mix, None);
        assert_eq!(r.f_score, None);

        let none = EvaluationConfig {
            metrics: MetricSet {
                lsa: false,
                self_cider: false,
                mbleu: false,
            },
            ..Default::default()
        };
        assert!(evaluate_image(&entries[0], &idf, &none).is_err());
    }

    #[test]
    fn errors_carry_image_id() {
        let entries = vec![entry("x", &["a cat"], &["a cat"])];
        let idf = idf(&entries);
        let err = evaluate_image(&entries[0], &idf, &EvaluationConfig::default()).unwrap_err();
        assert!(matches!(err, Error::Image { ref image_id, .. } if image_id == "x"));

        let dup = vec![corpus()[0].clone(), corpus()[0].clone()];
        assert!(evaluate_corpus(&dup, &idf, &EvaluationConfig::default()).is_err());
    }

    #[test]
    fn top_k_breaks_ties_by_index() {
        assert_eq!(top_k_indices(&[0.5, 0.9, 0.5, 0.1], 2), vec![0, 1]);
        assert_eq!(top_k_indices(&[0.5, 0.5, 0.5], 2), vec![0, 1]);
        assert_eq!(top_k_indices(&[0.1, 0.2, 0.3], 3), vec![0, 1, 2]);
    }
}
