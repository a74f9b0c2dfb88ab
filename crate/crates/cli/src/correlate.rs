use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use capdiv_core::evaluation::{
    paired_scores, pearson, per_image_rank_correlation, spearman, EvaluationRecord,
    RankCorrelation, ScoreTable,
};
use serde::Serialize;

use crate::dataset::read_utf8;
use crate::error::{CliError, Result};

/// Human scores keyed by image id, then method id.
pub type Judgments = ScoreTable;

/// Metric name → score table.
pub type MetricTables = BTreeMap<&'static str, ScoreTable>;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MetricCorrelation {
    pub metric: String,
    /// (image, method) pairs scored by both humans and the metric.
    pub pairs: usize,
    /// Judgments with no matching metric score.
    pub unmatched_judgments: usize,
    pub pearson: Option<f64>,
    pub spearman: Option<f64>,
    pub per_image_spearman: RankCorrelation,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CorrelationSummary {
    pub methods: Vec<String>,
    pub metrics: Vec<MetricCorrelation>,
}

pub fn parse_judgments(text: &str) -> Result<Judgments> {
    let table: Judgments = serde_json::from_str(text)
        .map_err(|e| CliError::invalid(format!("malformed judgments: {e}")))?;
    let mut issues = Vec::new();
    for (image, methods) in &table {
        for (method, &score) in methods {
            if !(0.0..=1.0).contains(&score) {
                issues.push(format!(
                    "image {image}, method {method}: score {score} outside [0, 1]"
                ));
            }
        }
    }
    if issues.is_empty() {
        Ok(table)
    } else {
        Err(CliError::Validation(issues))
    }
}

pub fn load_judgments(path: &Path) -> Result<Judgments> {
    parse_judgments(&read_utf8(path)?)
}

pub fn parse_report(text: &str) -> Result<Vec<EvaluationRecord>> {
    text.lines()
        .enumerate()
        .filter(|(_, l)| !l.trim().is_empty())
        .map(|(i, l)| {
            serde_json::from_str(l)
                .map_err(|e| CliError::invalid(format!("report line {}: {e}", i + 1)))
        })
        .collect()
}

/// Arrange per-method reports as one score table per diversity metric.
pub fn score_tables<'a, I>(reports: I) -> MetricTables
where
    I: IntoIterator<Item = (&'a str, &'a [EvaluationRecord])>,
{
    let mut tables = MetricTables::new();
    for (method, records) in reports {
        for r in records {
            let scores = [
                ("div_lsa", r.div_lsa),
                ("div_self_cider", r.div_self_cider),
                ("div_mbleu_mix", r.div_mbleu_mix),
            ];
            for (metric, score) in scores {
                if let Some(v) = score {
                    tables
                        .entry(metric)
                        .or_default()
                        .entry(r.image_id.clone())
                        .or_default()
                        .insert(method.to_string(), v);
                }
            }
        }
    }
    tables
}

pub fn correlate_tables(judgments: &Judgments, tables: &MetricTables) -> CorrelationSummary {
    let total: usize = judgments.values().map(|m| m.len()).sum();
    let mut methods: Vec<String> = tables
        .values()
        .flat_map(|t| t.values().flat_map(|m| m.keys().cloned()))
        .collect();
    methods.sort();
    methods.dedup();
    let metrics = tables
        .iter()
        .map(|(name, table)| {
            let (human, metric) = paired_scores(judgments, table);
            MetricCorrelation {
                metric: name.to_string(),
                pairs: human.len(),
                unmatched_judgments: total - human.len(),
                pearson: pearson(&human, &metric).ok(),
                spearman: spearman(&human, &metric).ok(),
                per_image_spearman: per_image_rank_correlation(judgments, table),
            }
        })
        .collect();
    CorrelationSummary { methods, metrics }
}

/// `METHOD=PATH` pairs naming one report file per captioning method.
pub fn parse_report_arg(arg: &str) -> std::result::Result<(String, PathBuf), String> {
    match arg.split_once('=') {
        Some((method, path)) if !method.is_empty() && !path.is_empty() => {
            Ok((method.to_string(), PathBuf::from(path)))
        }
        _ => Err(format!("expected METHOD=PATH, got {arg:?}")),
    }
}

pub fn correlate(judgments: &Path, reports: &[(String, PathBuf)]) -> Result<CorrelationSummary> {
    let judgments = load_judgments(judgments)?;
    let mut seen = std::collections::BTreeSet::new();
    let mut loaded = Vec::new();
    for (method, path) in reports {
        if !seen.insert(method.as_str()) {
            return Err(CliError::invalid(format!("method {method} given twice")));
        }
        let records = parse_report(&read_utf8(path)?).map_err(|e| match e {
            CliError::Validation(v) => CliError::Validation(
                v.into_iter()
                    .map(|m| format!("{}: {m}", path.display()))
                    .collect(),
            ),
            other => other,
        })?;
        loaded.push((method.as_str(), records));
    }
    let tables = score_tables(loaded.iter().map(|(m, r)| (*m, r.as_slice())));
    Ok(correlate_tables(&judgments, &tables))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn record(id: &str, lsa: f64, cider: f64) -> EvaluationRecord {
        EvaluationRecord {
            image_id: id.into(),
            acc: 0.5,
            human_acc: None,
            div_lsa: Some(lsa),
            div_self_cider: Some(cider),
            div_mbleu_mix: None,
            f_score: None,
            caption_acc: vec![],
            truncation: vec![],
        }
    }

    #[test]
    fn judgment_scores_must_be_in_unit_interval() {
        parse_judgments(r#"{"1": {"a": 0.0, "b": 1.0}}"#).unwrap();
        let Err(CliError::Validation(v)) =
            parse_judgments(r#"{"1": {"a": 1.5}, "2": {"b": -0.1}}"#)
        else {
            panic!("expected failure");
        };
        assert_eq!(v.len(), 2);
        assert!(parse_judgments("[1, 2]").is_err());
    }

    #[test]
    fn report_arguments() {
        assert_eq!(
            parse_report_arg("m1=out/report.jsonl").unwrap(),
            ("m1".to_string(), PathBuf::from("out/report.jsonl"))
        );
        assert!(parse_report_arg("report.jsonl").is_err());
        assert!(parse_report_arg("=x").is_err());
    }

    #[test]
    fn correlates_methods_against_judgments() {
        let a = vec![record("1", 0.1, 0.2), record("2", 0.5, 0.3)];
        let b = vec![record("1", 0.6, 0.1), record("2", 0.9, 0.6)];
        let j =
            parse_judgments(r#"{"1": {"a": 0.2, "b": 0.6}, "2": {"a": 0.5, "b": 0.9, "c": 0.1}}"#)
                .unwrap();
        let tables = score_tables([("a", a.as_slice()), ("b", b.as_slice())]);
        let s = correlate_tables(&j, &tables);
        assert_eq!(s.methods, vec!["a", "b"]);
        assert_eq!(s.metrics.len(), 2);
        let lsa = &s.metrics[0];
        assert_eq!(lsa.metric, "div_lsa");
        assert_eq!(lsa.pairs, 4);
        assert_eq!(lsa.unmatched_judgments, 1);
        // human (0.2, 0.6, 0.5, 0.9) vs lsa (0.1, 0.6, 0.5, 0.9): same ordering.
        assert!((lsa.spearman.unwrap() - 1.0).abs() < 1e-12);
        assert_eq!(lsa.per_image_spearman.images_used, 2);
        assert_eq!(lsa.per_image_spearman.mean, Some(1.0));
    }

    #[test]
    fn report_lines_round_trip() {
        let records = vec![record("1", 0.1, 0.2), record("2", 0.5, 0.3)];
        let text: String = records
            .iter()
            .map(|r| serde_json::to_string(r).unwrap() + "\n")
            .collect();
        assert_eq!(parse_report(&text).unwrap(), records);
        assert!(parse_report("{}\n").is_err());
    }
}
