//! Independent reference computations for tests.
//!
//! Nothing here shares code with `capdiv-core`: closed-form eigenvalues,
//! dense brute-force CIDEr and BLEU over explicitly enumerated n-gram
//! dictionaries, and SVD / symmetric eigen-decomposition from nalgebra.

use std::collections::{BTreeMap, BTreeSet};

pub use nalgebra::DMatrix;
use nalgebra::{SymmetricEigen, SVD};

/// Eigenvalues of `[[a, b], [b, d]]`, descending.
pub fn eigenvalues_2x2(a: f64, b: f64, d: f64) -> [f64; 2] {
    let mean = (a + d) / 2.0;
    let radius = (((a - d) / 2.0).powi(2) + b * b).sqrt();
    [mean + radius, mean - radius]
}

/// Eigenvalues of a symmetric 3×3 matrix by the trigonometric solution of
/// the characteristic cubic, descending.
pub fn eigenvalues_3x3(a: &[[f64; 3]; 3]) -> [f64; 3] {
    let p1 = a[0][1].powi(2) + a[0][2].powi(2) + a[1][2].powi(2);
    let q = (a[0][0] + a[1][1] + a[2][2]) / 3.0;
    if p1 == 0.0 {
        let mut d = [a[0][0], a[1][1], a[2][2]];
        d.sort_by(|x, y| y.total_cmp(x));
        return d;
    }
    let p2 = (a[0][0] - q).powi(2) + (a[1][1] - q).powi(2) + (a[2][2] - q).powi(2) + 2.0 * p1;
    let p = (p2 / 6.0).sqrt();
    let mut b = [[0.0; 3]; 3];
    for i in 0..3 {
        for j in 0..3 {
            b[i][j] = (a[i][j] - if i == j { q } else { 0.0 }) / p;
        }
    }
    let det_b = b[0][0] * (b[1][1] * b[2][2] - b[1][2] * b[2][1])
        - b[0][1] * (b[1][0] * b[2][2] - b[1][2] * b[2][0])
        + b[0][2] * (b[1][0] * b[2][1] - b[1][1] * b[2][0]);
    let r = (det_b / 2.0).clamp(-1.0, 1.0);
    let phi = r.acos() / 3.0;
    let e1 = q + 2.0 * p * phi.cos();
    let e3 = q + 2.0 * p * (phi + 2.0 * std::f64::consts::PI / 3.0).cos();
    let e2 = 3.0 * q - e1 - e3;
    let mut out = [e1, e2, e3];
    out.sort_by(|x, y| y.total_cmp(x));
    out
}

/// Lowercase ASCII alphanumeric runs.
pub fn words(raw: &str) -> Vec<String> {
    let mut out = Vec::new();
    let mut current = String::new();
    for ch in raw.chars().flat_map(char::to_lowercase) {
        if ch.is_ascii_alphanumeric() {
            current.push(ch);
        } else if !current.is_empty() {
            out.push(std::mem::take(&mut current));
        }
    }
    if !current.is_empty() {
        out.push(current);
    }
    out
}

fn grams(tokens: &[String], n: usize) -> Vec<Vec<String>> {
    if tokens.len() < n {
        return Vec::new();
    }
    (0..=tokens.len() - n)
        .map(|i| tokens[i..i + n].to_vec())
        .collect()
}

/// Brute-force CIDEr with IDF from a corpus of documents (reference sets).
pub struct BruteCider {
    n_docs: usize,
    documents: Vec<Vec<Vec<String>>>,
}

impl BruteCider {
    pub fn new(documents: &[Vec<&str>]) -> Self {
        BruteCider {
            n_docs: documents.len(),
            documents: documents
                .iter()
                .map(|d| d.iter().map(|c| words(c)).collect())
                .collect(),
        }
    }

    pub fn idf(&self, gram: &[String]) -> f64 {
        let n = gram.len();
        let df = self
            .documents
            .iter()
            .filter(|doc| {
                doc.iter()
                    .any(|cap| grams(cap, n).iter().any(|g| g == gram))
            })
            .count()
            .max(1);
        (self.n_docs as f64 / df as f64).ln()
    }

    /// Dense TF-IDF cosine for order `n` over the union dictionary of both captions.
    pub fn cider_n(&self, a: &str, b: &str, n: usize) -> f64 {
        let (ta, tb) = (words(a), words(b));
        let ga = grams(&ta, n);
        let gb = grams(&tb, n);
        let dictionary: BTreeSet<Vec<String>> = ga.iter().chain(&gb).cloned().collect();
        let va: Vec<f64> = dictionary
            .iter()
            .map(|g| ga.iter().filter(|x| *x == g).count() as f64 * self.idf(g))
            .collect();
        let vb: Vec<f64> = dictionary
            .iter()
            .map(|g| gb.iter().filter(|x| *x == g).count() as f64 * self.idf(g))
            .collect();
        let dot: f64 = va.iter().zip(&vb).map(|(x, y)| x * y).sum();
        let na: f64 = va.iter().map(|x| x * x).sum::<f64>().sqrt();
        let nb: f64 = vb.iter().map(|x| x * x).sum::<f64>().sqrt();
        if na == 0.0 || nb == 0.0 {
            0.0
        } else {
            dot / (na * nb)
        }
    }

    pub fn cider(&self, a: &str, b: &str) -> f64 {
        (1..=4).map(|n| self.cider_n(a, b, n)).sum::<f64>() / 4.0
    }

    pub fn kernel(&self, captions: &[&str]) -> Vec<Vec<f64>> {
        captions
            .iter()
            .map(|a| captions.iter().map(|b| self.cider(a, b)).collect())
            .collect()
    }
}

/// Unsmoothed cumulative BLEU-`max_n`, closest-reference brevity penalty.
pub fn bleu(candidate: &str, refs: &[&str], max_n: usize) -> f64 {
    let c = words(candidate);
    if c.is_empty() {
        return 0.0;
    }
    let rs: Vec<Vec<String>> = refs.iter().map(|r| words(r)).collect();
    let mut product = 1.0;
    for n in 1..=max_n {
        let cand = grams(&c, n);
        if cand.is_empty() {
            return 0.0;
        }
        let mut counts: BTreeMap<&Vec<String>, usize> = BTreeMap::new();
        for g in &cand {
            *counts.entry(g).or_default() += 1;
        }
        let mut matched = 0;
        for (g, count) in counts {
            let best = rs
                .iter()
                .map(|r| grams(r, n).iter().filter(|x| *x == g).count())
                .max()
                .unwrap_or(0);
            matched += count.min(best);
        }
        product *= matched as f64 / cand.len() as f64;
    }
    let mut best_len = usize::MAX;
    for r in &rs {
        let better = r.len().abs_diff(c.len()) < best_len.abs_diff(c.len())
            || (r.len().abs_diff(c.len()) == best_len.abs_diff(c.len()) && r.len() < best_len);
        if better {
            best_len = r.len();
        }
    }
    let bp = if c.len() >= best_len {
        1.0
    } else {
        (1.0 - best_len as f64 / c.len() as f64).exp()
    };
    bp * product.powf(1.0 / max_n as f64)
}

pub fn mbleu(captions: &[&str], n: usize) -> f64 {
    let m = captions.len();
    (0..m)
        .map(|i| {
            let rest: Vec<&str> = (0..m).filter(|&j| j != i).map(|j| captions[j]).collect();
            bleu(captions[i], &rest, n)
        })
        .sum::<f64>()
        / m as f64
}

/// Word-by-caption count matrix `M` (rows: sorted vocabulary).
pub fn word_caption_matrix(captions: &[&str]) -> DMatrix<f64> {
    let tokenized: Vec<Vec<String>> = captions.iter().map(|c| words(c)).collect();
    let vocab: BTreeSet<&String> = tokenized.iter().flatten().collect();
    let vocab: Vec<&String> = vocab.into_iter().collect();
    DMatrix::from_fn(vocab.len(), captions.len(), |w, c| {
        tokenized[c].iter().filter(|t| *t == vocab[w]).count() as f64
    })
}

/// Singular values of `M`, descending, padded with zeros to `len`.
pub fn singular_values(m: &DMatrix<f64>, len: usize) -> Vec<f64> {
    let svd = SVD::new(m.clone(), false, false);
    let mut s: Vec<f64> = svd.singular_values.iter().copied().collect();
    s.sort_by(|a, b| b.total_cmp(a));
    s.resize(len.max(s.len()), 0.0);
    s.truncate(len);
    s
}

/// Eigenvalues of a symmetric matrix, descending.
pub fn symmetric_eigenvalues(m: &DMatrix<f64>) -> Vec<f64> {
    let e = SymmetricEigen::new(m.clone());
    let mut v: Vec<f64> = e.eigenvalues.iter().copied().collect();
    v.sort_by(|a, b| b.total_cmp(a));
    v
}

/// `-log_m(σ₁ / Σσ)` straight from singular values.
pub fn div_from_singular_values(s: &[f64]) -> f64 {
    let total: f64 = s.iter().sum();
    let r = s[0] / total;
    -r.ln() / (s.len() as f64).ln()
}

pub fn mean(v: &[f64]) -> f64 {
    v.iter().sum::<f64>() / v.len() as f64
}

pub fn pearson(x: &[f64], y: &[f64]) -> f64 {
    let (mx, my) = (mean(x), mean(y));
    let cov: f64 = x.iter().zip(y).map(|(a, b)| (a - mx) * (b - my)).sum();
    let vx: f64 = x.iter().map(|a| (a - mx).powi(2)).sum();
    let vy: f64 = y.iter().map(|b| (b - my).powi(2)).sum();
    cov / (vx * vy).sqrt()
}
