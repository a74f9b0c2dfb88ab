use crate::error::{Error, Result};
use crate::text::{all_orders, check_order, NGram, TokenizedCaption, MAX_ORDER};

use super::IdfTable;

/// IDF-weighted n-gram counts of one caption, orders 1..=4.
///
/// Entries of each order are kept sorted by n-gram so dot products sum in a
/// fixed order. This makes `cider(x, x)` exactly 1 whenever every order is
/// non-empty and `cider(x, y) == cider(y, x)` bit for bit.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightedNGramVector {
    orders: [Vec<(NGram, f64)>; MAX_ORDER],
    squared_norms: [f64; MAX_ORDER],
}

impl WeightedNGramVector {
    /// Weight each n-gram count by `weight(gram)`.
    pub fn from_weights<F>(caption: &TokenizedCaption, mut weight: F) -> Self
    where
        F: FnMut(&NGram) -> f64,
    {
        let orders = all_orders(caption).map(|profile| {
            profile
                .counts()
                .iter()
                .map(|(gram, &count)| (gram.clone(), weight(gram) * count as f64))
                .collect::<Vec<_>>()
        });
        let squared_norms =
            std::array::from_fn(|i| orders[i].iter().map(|(_, v)| v * v).sum::<f64>());
        WeightedNGramVector {
            orders,
            squared_norms,
        }
    }

    pub fn entries(&self, n: usize) -> Result<&[(NGram, f64)]> {
        check_order(n)?;
        Ok(&self.orders[n - 1])
    }

    pub fn norm(&self, n: usize) -> Result<f64> {
        check_order(n)?;
        Ok(self.squared_norms[n - 1].sqrt())
    }

    fn cosine(&self, other: &Self, i: usize) -> f64 {
        let (sx, sy) = (self.squared_norms[i], other.squared_norms[i]);
        if sx == 0.0 || sy == 0.0 {
            return 0.0;
        }
        let dot = sorted_dot(&self.orders[i], &other.orders[i]);
        (dot / (sx * sy).sqrt()).clamp(0.0, 1.0)
    }
}

fn sorted_dot(a: &[(NGram, f64)], b: &[(NGram, f64)]) -> f64 {
    let (mut i, mut j) = (0, 0);
    let mut dot = 0.0;
    while i < a.len() && j < b.len() {
        match a[i].0.cmp(&b[j].0) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => {
                dot += a[i].1 * b[j].1;
                i += 1;
                j += 1;
            }
        }
    }
    dot
}

pub fn tfidf_vector(caption: &TokenizedCaption, idf: &IdfTable) -> WeightedNGramVector {
    WeightedNGramVector::from_weights(caption, |gram| idf.weight(gram))
}

/// Cosine similarity of the order-`n` entries; 0 when either side has zero norm.
pub fn cider_n(x: &WeightedNGramVector, y: &WeightedNGramVector, n: usize) -> Result<f64> {
    check_order(n)?;
    Ok(x.cosine(y, n - 1))
}

/// Mean of the four order-wise cosines.
pub fn cider(x: &WeightedNGramVector, y: &WeightedNGramVector) -> f64 {
    (0..MAX_ORDER).map(|i| x.cosine(y, i)).sum::<f64>() / MAX_ORDER as f64
}

/// Mean CIDEr of `caption` against each reference.
pub fn cider_vs_set(
    caption: &TokenizedCaption,
    refs: &[TokenizedCaption],
    idf: &IdfTable,
) -> Result<f64> {
    if refs.is_empty() {
        return Err(Error::MissingReferences);
    }
    let x = tfidf_vector(caption, idf);
    let ref_vectors: Vec<_> = refs.iter().map(|r| tfidf_vector(r, idf)).collect();
    Ok(mean_cider(&x, &ref_vectors))
}

pub(crate) fn mean_cider(x: &WeightedNGramVector, refs: &[WeightedNGramVector]) -> f64 {
    refs.iter().map(|r| cider(x, r)).sum::<f64>() / refs.len() as f64
}

/// `cider_vs_set` for every caption, sharing the reference vectors.
pub(crate) fn mean_cider_vectors(
    captions: &[TokenizedCaption],
    refs: &[TokenizedCaption],
    idf: &IdfTable,
) -> Result<Vec<f64>> {
    if refs.is_empty() {
        return Err(Error::MissingReferences);
    }
    let ref_vectors: Vec<_> = refs.iter().map(|r| tfidf_vector(r, idf)).collect();
    Ok(captions
        .iter()
        .map(|c| mean_cider(&tfidf_vector(c, idf), &ref_vectors))
        .collect())
}
