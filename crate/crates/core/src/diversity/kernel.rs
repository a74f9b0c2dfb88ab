use std::collections::BTreeMap;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::similarity::{cider, tfidf_vector, IdfTable};
use crate::text::TokenizedCaption;

/// Dense square matrix of pairwise caption similarities, stored row-major.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct KernelMatrix {
    size: usize,
    entries: Vec<f64>,
}

impl KernelMatrix {
    pub fn new(size: usize, entries: Vec<f64>) -> Result<Self> {
        if entries.len() != size * size {
            return Err(Error::NotSquare {
                size,
                len: entries.len(),
            });
        }
        if entries.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidArgument(
                "kernel entries must be finite".into(),
            ));
        }
        Ok(KernelMatrix { size, entries })
    }

    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let size = rows.len();
        if let Some(row) = rows.iter().find(|r| r.len() != size) {
            return Err(Error::NotSquare {
                size,
                len: size * (size - 1) + row.len(),
            });
        }
        Self::new(size, rows.concat())
    }

    /// Fill the upper triangle with `f(i, j)` (i <= j) and mirror it, so the
    /// result is symmetric bit for bit.
    pub fn symmetric_from_fn<F>(size: usize, mut f: F) -> Self
    where
        F: FnMut(usize, usize) -> f64,
    {
        let mut entries = vec![0.0; size * size];
        for i in 0..size {
            for j in i..size {
                let v = f(i, j);
                entries[i * size + j] = v;
                entries[j * size + i] = v;
            }
        }
        KernelMatrix { size, entries }
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.entries[i * self.size + j]
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.entries[i * self.size..(i + 1) * self.size]
    }

    pub fn rows(&self) -> impl Iterator<Item = &[f64]> {
        self.entries.chunks(self.size.max(1))
    }

    pub fn entries(&self) -> &[f64] {
        &self.entries
    }

    pub fn trace(&self) -> f64 {
        (0..self.size).map(|i| self.get(i, i)).sum()
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.entries.iter().map(|v| v * v).sum::<f64>().sqrt()
    }

    pub fn is_symmetric(&self) -> bool {
        self.check_symmetric(0.0).is_ok()
    }

    pub(crate) fn check_symmetric(&self, tolerance: f64) -> Result<()> {
        for i in 0..self.size {
            for j in i + 1..self.size {
                let diff = (self.get(i, j) - self.get(j, i)).abs();
                if diff > tolerance {
                    return Err(Error::NotSymmetric {
                        row: i,
                        col: j,
                        diff,
                    });
                }
            }
        }
        Ok(())
    }

    /// Rows and columns reordered so that entry `(i, j)` becomes
    /// `(perm[i], perm[j])` of the original.
    pub fn permuted(&self, perm: &[usize]) -> KernelMatrix {
        let n = self.size;
        let mut entries = Vec::with_capacity(n * n);
        for &pi in perm {
            for &pj in perm {
                entries.push(self.get(pi, pj));
            }
        }
        KernelMatrix { size: n, entries }
    }
}

pub(crate) fn require_pair(m: usize) -> Result<()> {
    if m < 2 {
        Err(Error::InsufficientCaptions { needed: 2, got: m })
    } else {
        Ok(())
    }
}

/// Linear (dot-product) kernel of word-frequency vectors, `K = MᵀM` for the
/// word-by-caption count matrix `M`.
pub fn bow_kernel(captions: &[TokenizedCaption]) -> Result<KernelMatrix> {
    require_pair(captions.len())?;
    if let Some(index) = captions.iter().position(TokenizedCaption::is_empty) {
        return Err(Error::DegenerateCaption { index });
    }
    let counts: Vec<BTreeMap<&str, u64>> = captions
        .iter()
        .map(|c| {
            let mut map = BTreeMap::new();
            for t in c.tokens() {
                *map.entry(t.as_str()).or_insert(0) += 1;
            }
            map
        })
        .collect();
    Ok(KernelMatrix::symmetric_from_fn(captions.len(), |i, j| {
        counts[i]
            .iter()
            .map(|(w, &a)| a * counts[j].get(w).copied().unwrap_or(0))
            .sum::<u64>() as f64
    }))
}

/// Pairwise CIDEr kernel over cached TF-IDF vectors.
pub fn cider_kernel(captions: &[TokenizedCaption], idf: &IdfTable) -> Result<KernelMatrix> {
    require_pair(captions.len())?;
    let vectors: Vec<_> = captions.iter().map(|c| tfidf_vector(c, idf)).collect();
    Ok(KernelMatrix::symmetric_from_fn(captions.len(), |i, j| {
        cider(&vectors[i], &vectors[j])
    }))
}
