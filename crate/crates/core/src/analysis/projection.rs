use serde::{Deserialize, Serialize};

use crate::diversity::{
    bow_kernel, cider_kernel, clamp_eigenvalues, symmetric_eigen, KernelKind, KernelMatrix,
};
use crate::error::Result;
use crate::similarity::IdfTable;
use crate::text::{stop_words, TokenizedCaption};

/// Number of latent components shown on a radar chart.
pub const RADAR_COMPONENTS: usize = 5;

/// Captions projected onto the eigenvectors of their kernel.
///
/// `components[i]` is the unit eigenvector of the i-th largest eigenvalue;
/// its j-th entry is the loading of caption j on latent component i. All `m`
/// components are kept so the kernel can be reconstructed; the radar export
/// uses the first five.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SemanticProjection {
    pub kernel: KernelKind,
    pub eigenvalues: Vec<f64>,
    pub singular_values: Vec<f64>,
    pub components: Vec<Vec<f64>>,
}

impl SemanticProjection {
    pub fn len(&self) -> usize {
        self.components.len()
    }

    pub fn is_empty(&self) -> bool {
        self.components.is_empty()
    }

    /// Loadings of caption `j` on the leading components, zero-padded.
    pub fn loadings(&self, j: usize) -> [f64; RADAR_COMPONENTS] {
        let mut out = [0.0; RADAR_COMPONENTS];
        for (slot, component) in out.iter_mut().zip(&self.components) {
            *slot = component[j];
        }
        out
    }

    /// Singular values of the leading components, zero-padded.
    pub fn leading_singular_values(&self) -> [f64; RADAR_COMPONENTS] {
        let mut out = [0.0; RADAR_COMPONENTS];
        for (slot, s) in out.iter_mut().zip(&self.singular_values) {
            *slot = *s;
        }
        out
    }

    /// `Σ λᵢ vᵢ vᵢᵀ` over every component.
    pub fn reconstruct(&self) -> KernelMatrix {
        let m = self.components.len();
        KernelMatrix::symmetric_from_fn(m, |i, j| {
            self.eigenvalues
                .iter()
                .zip(&self.components)
                .map(|(l, v)| l * v[i] * v[j])
                .sum()
        })
    }
}

/// Decompose the chosen kernel. `use_stop_words` removes the bundled stop
/// words before building the bag-of-words kernel; it does not affect the
/// CIDEr kernel.
pub fn semantic_projection(
    captions: &[TokenizedCaption],
    kernel: KernelKind,
    idf: &IdfTable,
    use_stop_words: bool,
) -> Result<SemanticProjection> {
    let matrix = match kernel {
        KernelKind::Bow if use_stop_words => {
            let filtered: Vec<TokenizedCaption> =
                captions.iter().map(|c| c.without(stop_words())).collect();
            bow_kernel(&filtered)?
        }
        KernelKind::Bow => bow_kernel(captions)?,
        KernelKind::SelfCider => cider_kernel(captions, idf)?,
    };
    let eigen = symmetric_eigen(&matrix)?;
    let eigenvalues = clamp_eigenvalues(&eigen.values)?;
    let singular_values = eigenvalues.iter().map(|v| v.sqrt()).collect();
    Ok(SemanticProjection {
        kernel,
        eigenvalues,
        singular_values,
        components: eigen.vectors,
    })
}
