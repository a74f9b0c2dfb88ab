use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::text::{check_order, ngrams, TokenizedCaption, MAX_ORDER};

/// How zero n-gram matches are treated in the geometric mean.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BleuSmoothing {
    /// A zero precision makes the score 0.
    #[default]
    None,
    /// A zero match count is replaced by [`BleuSmoothing::EPSILON`].
    Epsilon,
}

impl BleuSmoothing {
    pub const EPSILON: f64 = 0.1;
}

/// Cumulative BLEU-`max_n` without smoothing.
pub fn bleu(candidate: &TokenizedCaption, refs: &[TokenizedCaption], max_n: usize) -> Result<f64> {
    bleu_with(candidate, refs, max_n, BleuSmoothing::None)
}

/// Cumulative BLEU: geometric mean of clipped n-gram precisions for orders
/// 1..=`max_n` times the closest-reference brevity penalty.
pub fn bleu_with(
    candidate: &TokenizedCaption,
    refs: &[TokenizedCaption],
    max_n: usize,
    smoothing: BleuSmoothing,
) -> Result<f64> {
    let refs: Vec<&TokenizedCaption> = refs.iter().collect();
    bleu_refs(candidate, &refs, max_n, smoothing)
}

fn bleu_refs(
    candidate: &TokenizedCaption,
    refs: &[&TokenizedCaption],
    max_n: usize,
    smoothing: BleuSmoothing,
) -> Result<f64> {
    check_order(max_n)?;
    if refs.is_empty() {
        return Err(Error::MissingReferences);
    }
    if candidate.is_empty() {
        return Ok(0.0);
    }

    let mut log_sum = 0.0;
    for n in 1..=max_n {
        let cand = ngrams(candidate, n)?;
        let ref_profiles = refs
            .iter()
            .map(|r| ngrams(r, n))
            .collect::<Result<Vec<_>>>()?;
        let clipped: usize = cand
            .counts()
            .iter()
            .map(|(gram, &count)| {
                let max_ref = ref_profiles.iter().map(|p| p.get(gram)).max().unwrap_or(0);
                count.min(max_ref)
            })
            .sum();
        let total = cand.total().max(1) as f64;
        let precision = match (clipped, smoothing) {
            (0, BleuSmoothing::None) => return Ok(0.0),
            (0, BleuSmoothing::Epsilon) => BleuSmoothing::EPSILON / total,
            (c, _) => c as f64 / total,
        };
        log_sum += precision.ln();
    }

    let c_len = candidate.len();
    let r_len = refs
        .iter()
        .map(|r| r.len())
        .min_by_key(|&r| (r.abs_diff(c_len), r))
        .expect("refs is non-empty");
    let brevity = if c_len >= r_len {
        1.0
    } else {
        (1.0 - r_len as f64 / c_len as f64).exp()
    };

    Ok((brevity * (log_sum / max_n as f64).exp()).clamp(0.0, 1.0))
}

/// Mean BLEU-`n` of each caption against the rest of the set.
pub fn mbleu_n(captions: &[TokenizedCaption], n: usize, smoothing: BleuSmoothing) -> Result<f64> {
    check_order(n)?;
    let m = captions.len();
    if m < 2 {
        return Err(Error::InsufficientCaptions { needed: 2, got: m });
    }
    let mut sum = 0.0;
    for (i, caption) in captions.iter().enumerate() {
        let rest: Vec<&TokenizedCaption> = captions
            .iter()
            .enumerate()
            .filter(|&(j, _)| j != i)
            .map(|(_, c)| c)
            .collect();
        sum += bleu_refs(caption, &rest, n, smoothing)?;
    }
    Ok(sum / m as f64)
}

/// `1 - mean(mBLEU-1..4)`; higher means more diverse.
pub fn mbleu_mix_diversity(captions: &[TokenizedCaption], smoothing: BleuSmoothing) -> Result<f64> {
    let mut sum = 0.0;
    for n in 1..=MAX_ORDER {
        sum += mbleu_n(captions, n, smoothing)?;
    }
    Ok((1.0 - sum / MAX_ORDER as f64).clamp(0.0, 1.0))
}
