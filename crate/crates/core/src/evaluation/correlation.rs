use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Pearson product-moment correlation.
pub fn pearson(x: &[f64], y: &[f64]) -> Result<f64> {
    if x.len() != y.len() {
        return Err(Error::InvalidArgument(format!(
            "length mismatch: {} vs {}",
            x.len(),
            y.len()
        )));
    }
    if x.len() < 2 {
        return Err(Error::UndefinedCorrelation("fewer than 2 points"));
    }
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let (mut sxy, mut sxx, mut syy) = (0.0, 0.0, 0.0);
    for (a, b) in x.iter().zip(y) {
        let (dx, dy) = (a - mx, b - my);
        sxy += dx * dy;
        sxx += dx * dx;
        syy += dy * dy;
    }
    if sxx == 0.0 || syy == 0.0 {
        return Err(Error::UndefinedCorrelation("zero variance"));
    }
    Ok((sxy / (sxx * syy).sqrt()).clamp(-1.0, 1.0))
}

/// 1-based ranks; tied values share the mean of their positions.
pub fn fractional_ranks(values: &[f64]) -> Vec<f64> {
    let mut order: Vec<usize> = (0..values.len()).collect();
    order.sort_by(|&a, &b| values[a].total_cmp(&values[b]));
    let mut ranks = vec![0.0; values.len()];
    let mut start = 0;
    while start < order.len() {
        let mut end = start + 1;
        while end < order.len() && values[order[end]] == values[order[start]] {
            end += 1;
        }
        let rank = (start + end + 1) as f64 / 2.0;
        for &i in &order[start..end] {
            ranks[i] = rank;
        }
        start = end;
    }
    ranks
}

/// Spearman rank correlation (Pearson on fractional ranks).
pub fn spearman(x: &[f64], y: &[f64]) -> Result<f64> {
    if x.len() != y.len() {
        return Err(Error::InvalidArgument(format!(
            "length mismatch: {} vs {}",
            x.len(),
            y.len()
        )));
    }
    pearson(&fractional_ranks(x), &fractional_ranks(y))
}

/// Scores keyed by image id, then method id.
pub type ScoreTable = BTreeMap<String, BTreeMap<String, f64>>;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RankCorrelation {
    /// Mean per-image Spearman; `None` when every image was skipped.
    pub mean: Option<f64>,
    pub images_used: usize,
    /// Images with fewer than two shared methods or a constant score vector.
    pub images_skipped: usize,
}

/// Average over images of the Spearman correlation between human and metric
/// scores across the methods evaluated on that image.
pub fn per_image_rank_correlation(human: &ScoreTable, metric: &ScoreTable) -> RankCorrelation {
    let mut sum = 0.0;
    let (mut used, mut skipped) = (0, 0);
    for (image, human_scores) in human {
        let Some(metric_scores) = metric.get(image) else {
            skipped += 1;
            continue;
        };
        let (h, m): (Vec<f64>, Vec<f64>) = human_scores
            .iter()
            .filter_map(|(method, &h)| metric_scores.get(method).map(|&m| (h, m)))
            .unzip();
        match spearman(&h, &m) {
            Ok(rho) => {
                sum += rho;
                used += 1;
            }
            Err(_) => skipped += 1,
        }
    }
    RankCorrelation {
        mean: (used > 0).then(|| sum / used as f64),
        images_used: used,
        images_skipped: skipped,
    }
}

/// Paired (human, metric) scores for every (image, method) present in both.
pub fn paired_scores(human: &ScoreTable, metric: &ScoreTable) -> (Vec<f64>, Vec<f64>) {
    human
        .iter()
        .filter_map(|(image, hs)| metric.get(image).map(|ms| (hs, ms)))
        .flat_map(|(hs, ms)| {
            hs.iter()
                .filter_map(move |(method, &h)| ms.get(method).map(|&m| (h, m)))
        })
        .unzip()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn pearson_examples() {
        let x = [1.0, 2.0, 3.0, 4.0];
        let y: Vec<f64> = x.iter().map(|v| 2.0 * v + 1.0).collect();
        assert!((pearson(&x, &y).unwrap() - 1.0).abs() < 1e-15);
        let neg: Vec<f64> = x.iter().map(|v| -v).collect();
        assert!((pearson(&x, &neg).unwrap() + 1.0).abs() < 1e-15);
        assert!((pearson(&[1.0, 2.0, 3.0], &[1.0, 3.0, 2.0]).unwrap() - 0.5).abs() < 1e-15);
    }

    #[test]
    fn pearson_errors() {
        assert!(matches!(
            pearson(&[1.0, 1.0], &[1.0, 2.0]),
            Err(Error::UndefinedCorrelation(_))
        ));
        assert!(pearson(&[1.0], &[1.0]).is_err());
        assert!(pearson(&[1.0, 2.0], &[1.0]).is_err());
    }

    #[test]
    fn ranks_average_ties() {
        assert_eq!(fractional_ranks(&[1.0, 1.0, 2.0]), vec![1.5, 1.5, 3.0]);
        assert_eq!(
            fractional_ranks(&[3.0, 1.0, 2.0, 1.0]),
            vec![4.0, 1.5, 3.0, 1.5]
        );
    }

    #[test]
    fn spearman_examples() {
        let x = [0.1, 0.5, 0.7, 2.0];
        let y: Vec<f64> = x.iter().map(|v: &f64| v.exp()).collect();
        assert_eq!(spearman(&x, &y).unwrap(), 1.0);
        let rev: Vec<f64> = x.iter().rev().copied().collect();
        assert_eq!(spearman(&x, &rev).unwrap(), -1.0);
        // x-ranks [1.5, 1.5, 3], y-ranks [1, 2, 3]: cov 1.5 / sqrt(1.5 * 2).
        let rho = spearman(&[1.0, 1.0, 2.0], &[1.0, 2.0, 3.0]).unwrap();
        assert!((rho - 3f64.sqrt() / 2.0).abs() < 1e-15);
    }

    fn table(rows: &[(&str, &[(&str, f64)])]) -> ScoreTable {
        rows.iter()
            .map(|(img, methods)| {
                (
                    img.to_string(),
                    methods.iter().map(|(m, s)| (m.to_string(), *s)).collect(),
                )
            })
            .collect()
    }

    #[test]
    fn per_image_skips_degenerate_images() {
        let human = table(&[
            ("i1", &[("a", 0.1), ("b", 0.5), ("c", 0.9)]),
            ("i2", &[("a", 0.5), ("b", 0.5), ("c", 0.5)]),
            ("i3", &[("a", 0.2)]),
            ("i4", &[("a", 0.2), ("b", 0.3)]),
        ]);
        let metric = table(&[
            ("i1", &[("a", 0.3), ("b", 0.2), ("c", 0.8)]),
            ("i2", &[("a", 0.1), ("b", 0.2), ("c", 0.3)]),
            ("i3", &[("a", 0.4)]),
        ]);
        let r = per_image_rank_correlation(&human, &metric);
        assert_eq!(r.images_used, 1);
        assert_eq!(r.images_skipped, 3);
        assert!((r.mean.unwrap() - 0.5).abs() < 1e-15);

        let (h, m) = paired_scores(&human, &metric);
        assert_eq!(h.len(), 7);
        assert_eq!(m.len(), 7);
    }

    proptest! {
        #[test]
        fn pearson_affine_invariant(
            x in prop::collection::vec(-10.0f64..10.0, 3..12),
            noise in prop::collection::vec(-1.0f64..1.0, 12),
            a in 0.1f64..10.0,
            b in -5.0f64..5.0,
        ) {
            let y: Vec<f64> = x.iter().zip(&noise).map(|(v, e)| v * v + e).collect();
            if let Ok(r) = pearson(&x, &y) {
                let x2: Vec<f64> = x.iter().map(|v| a * v + b).collect();
                prop_assert!((pearson(&x2, &y).unwrap() - r).abs() < 1e-9);
                prop_assert!((-1.0..=1.0).contains(&r));
            }
        }

        #[test]
        fn spearman_monotone_invariant(
            x in prop::collection::vec(-10.0f64..10.0, 3..12),
            y in prop::collection::vec(-10.0f64..10.0, 12),
        ) {
            let y = &y[..x.len()];
            if let Ok(r) = spearman(&x, y) {
                let x2: Vec<f64> = x.iter().map(|v| (v / 4.0).exp() * 3.0 + 1.0).collect();
                prop_assert!((spearman(&x2, y).unwrap() - r).abs() < 1e-12);
            }
        }
    }
}
