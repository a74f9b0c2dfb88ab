use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

use super::kernel::require_pair;

/// Eigenvalues below `-PSD_TOLERANCE * max(1, λ₁)` mean the kernel is not PSD.
pub const PSD_TOLERANCE: f64 = 1e-8;

/// Eigenvalues with magnitude at most `ZERO_TOLERANCE * max(1, λ₁)` are
/// treated as exact zeros. The square root amplifies rounding noise of a
/// zero eigenvalue (~1e-16) into ~1e-8 in a singular value, so noise has to be
/// snapped before `σ = √λ`.
pub const ZERO_TOLERANCE: f64 = 1e-10;

/// Which similarity produced the spectrum.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum KernelKind {
    /// Linear kernel of word counts (LSA on the word-caption matrix).
    Bow,
    /// Pairwise CIDEr kernel.
    SelfCider,
}

/// Spectrum of a caption kernel and the diversity score derived from it.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpectralSummary {
    pub kernel: KernelKind,
    /// Clamped eigenvalues, descending.
    pub eigenvalues: Vec<f64>,
    /// `√λᵢ`, descending.
    pub singular_values: Vec<f64>,
    /// `σ₁ / Σσᵢ`, in `[1/m, 1]`.
    pub ratio: f64,
    /// `-log_m(ratio)`, in `[0, 1]`.
    pub div: f64,
}

/// Sort descending, reject clearly negative eigenvalues and snap round-off
/// to zero.
pub fn clamp_eigenvalues(eigenvalues: &[f64]) -> Result<Vec<f64>> {
    let mut values = eigenvalues.to_vec();
    values.sort_by(|a, b| b.total_cmp(a));
    let scale = values.first().copied().unwrap_or(0.0).max(1.0);
    for v in values.iter_mut() {
        if *v < -PSD_TOLERANCE * scale {
            return Err(Error::NotPositiveSemidefinite { eigenvalue: *v });
        }
        if v.abs() <= ZERO_TOLERANCE * scale {
            *v = 0.0;
        }
    }
    Ok(values)
}

/// Map a kernel spectrum to `div = -log_m(σ₁ / Σσᵢ)` with `σᵢ = √λᵢ`.
pub fn spectrum_to_div(eigenvalues: &[f64], kernel: KernelKind) -> Result<SpectralSummary> {
    let m = eigenvalues.len();
    require_pair(m)?;
    let eigenvalues = clamp_eigenvalues(eigenvalues)?;
    let singular_values: Vec<f64> = eigenvalues.iter().map(|v| v.sqrt()).collect();
    let total: f64 = singular_values.iter().sum();
    if total <= 0.0 {
        return Err(Error::DegenerateSpectrum);
    }
    let ratio = singular_values[0] / total;
    let div = -ratio.ln() / (m as f64).ln();
    // Also normalizes -0.0 to 0.0.
    let div = if div <= 0.0 { 0.0 } else { div.min(1.0) };
    Ok(SpectralSummary {
        kernel,
        eigenvalues,
        singular_values,
        ratio,
        div,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identical_captions_give_zero() {
        let s = spectrum_to_div(&[3.0, 0.0, 0.0], KernelKind::Bow).unwrap();
        assert_eq!(s.ratio, 1.0);
        assert_eq!(s.div, 0.0);
        assert!(s.div.is_sign_positive());
    }

    #[test]
    fn flat_spectrum_gives_one() {
        for m in [2usize, 3, 7, 10] {
            let s = spectrum_to_div(&vec![1.0; m], KernelKind::SelfCider).unwrap();
            assert!((s.ratio - 1.0 / m as f64).abs() < 1e-15);
            assert!((s.div - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn golden_two_by_two() {
        let l1 = (3.0 + 5f64.sqrt()) / 2.0;
        let l2 = (3.0 - 5f64.sqrt()) / 2.0;
        let s = spectrum_to_div(&[l1, l2], KernelKind::Bow).unwrap();
        assert!((s.singular_values[0] - 1.6180).abs() < 1e-4);
        assert!((s.singular_values[1] - 0.6180).abs() < 1e-4);
        assert!((s.ratio - 0.7236).abs() < 1e-4);
        // -log2((1+√5)/(2√5)), evaluated independently.
        assert!((s.div - 0.466_722_133_813_064).abs() < 1e-6);
    }

    #[test]
    fn errors() {
        assert_eq!(
            spectrum_to_div(&[0.0, 0.0], KernelKind::Bow),
            Err(Error::DegenerateSpectrum)
        );
        assert_eq!(
            spectrum_to_div(&[1.0], KernelKind::Bow),
            Err(Error::InsufficientCaptions { needed: 2, got: 1 })
        );
        assert!(matches!(
            spectrum_to_div(&[1.0, -0.1], KernelKind::Bow),
            Err(Error::NotPositiveSemidefinite { .. })
        ));
    }

    #[test]
    fn round_off_is_snapped() {
        let s = spectrum_to_div(&[5.0, 3e-16, -2e-15, 1e-14], KernelKind::Bow).unwrap();
        assert_eq!(s.eigenvalues, vec![5.0, 0.0, 0.0, 0.0]);
        assert_eq!(s.div, 0.0);
        // Values above the snap threshold are kept.
        let s = spectrum_to_div(&[1.0, 1e-6], KernelKind::Bow).unwrap();
        assert_eq!(s.eigenvalues[1], 1e-6);
    }
}
