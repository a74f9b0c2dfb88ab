//! Kernel construction, spectra and the spectral diversity scores.

mod eigen;
mod kernel;
mod spectrum;

pub use eigen::{symmetric_eigen, symmetric_eigenvalues, SymmetricEigen};
pub use kernel::{bow_kernel, cider_kernel, KernelMatrix};
pub use spectrum::{
    clamp_eigenvalues, spectrum_to_div, KernelKind, SpectralSummary, PSD_TOLERANCE, ZERO_TOLERANCE,
};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::similarity::{mean_cider_vectors, IdfTable};
use crate::text::TokenizedCaption;

/// LSA diversity: spectrum of the bag-of-words Gram matrix.
pub fn lsa_diversity(captions: &[TokenizedCaption]) -> Result<SpectralSummary> {
    let k = bow_kernel(captions)?;
    spectrum_to_div(&symmetric_eigenvalues(&k)?, KernelKind::Bow)
}

/// Self-CIDEr diversity: spectrum of the pairwise CIDEr kernel.
pub fn self_cider_diversity(
    captions: &[TokenizedCaption],
    idf: &IdfTable,
) -> Result<SpectralSummary> {
    let k = cider_kernel(captions, idf)?;
    spectrum_to_div(&symmetric_eigenvalues(&k)?, KernelKind::SelfCider)
}

/// Both diversity scores of the `k` most accurate captions.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TruncatedDiversity {
    pub k: usize,
    /// Selected caption indices, ascending.
    pub selected: Vec<usize>,
    pub lsa: SpectralSummary,
    pub self_cider: SpectralSummary,
}

/// Rank captions by CIDEr against `refs` (descending, ties by index), keep the
/// top `k` and score the subset. The subset keeps its original caption order,
/// so `k = m` reproduces the full-set scores exactly.
pub fn truncated_diversity(
    captions: &[TokenizedCaption],
    refs: &[TokenizedCaption],
    idf: &IdfTable,
    k: usize,
) -> Result<TruncatedDiversity> {
    let m = captions.len();
    if k < 2 || k > m {
        return Err(Error::InvalidK { k, m });
    }
    let scores = mean_cider_vectors(captions, refs, idf)?;
    truncated_from_scores(captions, &scores, idf, k)
}

fn truncated_from_scores(
    captions: &[TokenizedCaption],
    scores: &[f64],
    idf: &IdfTable,
    k: usize,
) -> Result<TruncatedDiversity> {
    let m = captions.len();
    if k < 2 || k > m {
        return Err(Error::InvalidK { k, m });
    }
    let selected = top_k_indices(scores, k);
    let subset: Vec<TokenizedCaption> = selected.iter().map(|&i| captions[i].clone()).collect();
    Ok(TruncatedDiversity {
        k,
        selected,
        lsa: lsa_diversity(&subset)?,
        self_cider: self_cider_diversity(&subset, idf)?,
    })
}

/// Indices of the `k` highest scores (ties to the lower index), ascending.
pub fn top_k_indices(scores: &[f64], k: usize) -> Vec<usize> {
    let mut ranked: Vec<usize> = (0..scores.len()).collect();
    ranked.sort_by(|&a, &b| scores[b].total_cmp(&scores[a]).then(a.cmp(&b)));
    ranked.truncate(k);
    ranked.sort_unstable();
    ranked
}
