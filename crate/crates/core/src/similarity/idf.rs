use std::collections::{HashMap, HashSet};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::text::{all_orders, tokenize, NGram, TokenizedCaption, MAX_ORDER};

/// Document frequencies of every n-gram (orders 1..=4) in a reference corpus.
///
/// One document is one image's reference set, so `df` counts images rather
/// than captions. Weights are `ln(n_docs / df)`; n-grams absent from the
/// corpus are weighted as if `df = 1`.
#[derive(Debug, Clone, PartialEq)]
pub struct IdfTable {
    n_docs: usize,
    df: [HashMap<NGram, usize>; MAX_ORDER],
}

impl IdfTable {
    pub fn n_docs(&self) -> usize {
        self.n_docs
    }

    pub fn document_frequency(&self, gram: &NGram) -> usize {
        gram.order()
            .checked_sub(1)
            .and_then(|i| self.df.get(i))
            .and_then(|table| table.get(gram))
            .copied()
            .unwrap_or(0)
    }

    pub fn weight(&self, gram: &NGram) -> f64 {
        let df = self.document_frequency(gram).max(1);
        (self.n_docs as f64 / df as f64).ln()
    }

    /// Number of distinct n-grams stored for `order`.
    pub fn len(&self, order: usize) -> usize {
        order
            .checked_sub(1)
            .and_then(|i| self.df.get(i))
            .map_or(0, HashMap::len)
    }

    pub fn to_file(&self) -> IdfFile {
        let mut records: Vec<IdfRecord> = self
            .df
            .iter()
            .flat_map(|table| table.iter())
            .map(|(gram, &df)| IdfRecord {
                n: gram.order(),
                gram: gram.tokens().map(str::to_string).collect(),
                df,
            })
            .collect();
        records.sort_by(|a, b| a.n.cmp(&b.n).then_with(|| a.gram.cmp(&b.gram)));
        IdfFile {
            n_docs: self.n_docs,
            records,
        }
    }

    pub fn from_file(file: IdfFile) -> Result<Self> {
        if file.n_docs == 0 {
            return Err(Error::EmptyCorpus);
        }
        let mut df: [HashMap<NGram, usize>; MAX_ORDER] = Default::default();
        for record in file.records {
            if !(1..=MAX_ORDER).contains(&record.n) {
                return Err(Error::InvalidIdf(format!(
                    "order {} outside 1..=4",
                    record.n
                )));
            }
            if record.gram.len() != record.n {
                return Err(Error::InvalidIdf(format!(
                    "gram {:?} does not have {} tokens",
                    record.gram, record.n
                )));
            }
            if record.gram.iter().any(|t| {
                t.is_empty()
                    || !t
                        .chars()
                        .all(|c| c.is_ascii_lowercase() || c.is_ascii_digit())
            }) {
                return Err(Error::InvalidIdf(format!(
                    "gram {:?} contains a non-normalized token",
                    record.gram
                )));
            }
            if record.df == 0 || record.df > file.n_docs {
                return Err(Error::InvalidIdf(format!(
                    "df {} for {:?} outside 1..={}",
                    record.df, record.gram, file.n_docs
                )));
            }
            let gram = NGram::new(&record.gram);
            if df[record.n - 1].insert(gram, record.df).is_some() {
                return Err(Error::InvalidIdf(format!(
                    "duplicate gram {:?}",
                    record.gram
                )));
            }
        }
        Ok(IdfTable {
            n_docs: file.n_docs,
            df,
        })
    }
}

/// On-disk form of an [`IdfTable`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IdfFile {
    pub n_docs: usize,
    pub records: Vec<IdfRecord>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IdfRecord {
    pub n: usize,
    pub gram: Vec<String>,
    pub df: usize,
}

#[derive(Deserialize)]
struct BundledCorpus {
    images: Vec<BundledImage>,
}

#[derive(Deserialize)]
struct BundledImage {
    references: Vec<String>,
}

/// Reference sets of the small corpus shipped with the crate (30 images,
/// 5 references each), in the dataset file layout.
pub const BUNDLED_CORPUS_JSON: &str = include_str!("../../data/reference_corpus.json");

/// Reference sets of the bundled corpus, one document per image.
pub fn bundled_documents() -> Vec<Vec<TokenizedCaption>> {
    let corpus: BundledCorpus =
        serde_json::from_str(BUNDLED_CORPUS_JSON).expect("bundled corpus is valid JSON");
    corpus
        .images
        .into_iter()
        .map(|img| img.references.iter().map(|r| tokenize(r)).collect())
        .collect()
}

/// IDF table of the bundled reference corpus.
pub fn bundled_idf() -> IdfTable {
    build_idf(&bundled_documents()).expect("bundled corpus is non-empty")
}

/// Build document frequencies where each document is one image's reference set.
pub fn build_idf<D>(documents: &[D]) -> Result<IdfTable>
where
    D: AsRef<[TokenizedCaption]>,
{
    if documents.is_empty() {
        return Err(Error::EmptyCorpus);
    }
    let mut df: [HashMap<NGram, usize>; MAX_ORDER] = Default::default();
    for document in documents {
        let mut seen: [HashSet<NGram>; MAX_ORDER] = Default::default();
        for caption in document.as_ref() {
            for (i, profile) in all_orders(caption).into_iter().enumerate() {
                seen[i].extend(profile.counts().keys().cloned());
            }
        }
        for (i, grams) in seen.into_iter().enumerate() {
            for gram in grams {
                *df[i].entry(gram).or_insert(0) += 1;
            }
        }
    }
    Ok(IdfTable {
        n_docs: documents.len(),
        df,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::text::tokenize;

    fn doc(captions: &[&str]) -> Vec<TokenizedCaption> {
        captions.iter().map(|c| tokenize(c)).collect()
    }

    #[test]
    #[allow(clippy::approx_constant)]
    fn weights_follow_log_ratio() {
        let idf = build_idf(&[doc(&["a b"]), doc(&["a c"])]).unwrap();
        assert_eq!(idf.weight(&NGram::new(&["a"])), 0.0);
        assert!((idf.weight(&NGram::new(&["b"])) - 2f64.ln()).abs() < 1e-15);
        assert!((idf.weight(&NGram::new(&["b"])) - 0.6931).abs() < 1e-4);

        let idf = build_idf(&[doc(&["x"]), doc(&["y"]), doc(&["z"]), doc(&["w"])]).unwrap();
        assert!((idf.weight(&NGram::new(&["x"])) - 1.3863).abs() < 1e-4);
    }

    #[test]
    fn df_counts_documents_not_captions() {
        let idf = build_idf(&[doc(&["a dog", "a dog runs"]), doc(&["a cat"])]).unwrap();
        assert_eq!(idf.document_frequency(&NGram::new(&["dog"])), 1);
        assert_eq!(idf.document_frequency(&NGram::new(&["a"])), 2);
        assert_eq!(idf.document_frequency(&NGram::new(&["a", "dog"])), 1);
        assert_eq!(
            idf.document_frequency(&NGram::new(&["a", "dog", "runs"])),
            1
        );
    }

    #[test]
    fn unseen_grams_get_df_one() {
        let idf = build_idf(&[doc(&["a"]), doc(&["b"]), doc(&["c"])]).unwrap();
        assert!((idf.weight(&NGram::new(&["zebra"])) - 3f64.ln()).abs() < 1e-15);
    }

    #[test]
    fn empty_corpus_is_rejected() {
        let empty: Vec<Vec<TokenizedCaption>> = vec![];
        assert_eq!(build_idf(&empty), Err(Error::EmptyCorpus));
    }

    #[test]
    fn bundled_corpus_loads() {
        let idf = bundled_idf();
        assert_eq!(idf.n_docs(), 30);
        assert!(idf.document_frequency(&NGram::new(&["zebras"])) >= 1);
        assert_eq!(bundled_documents().iter().map(Vec::len).sum::<usize>(), 150);
    }

    #[test]
    fn file_round_trip() {
        let idf = build_idf(&[doc(&["a man rides a horse"]), doc(&["a horse grazing"])]).unwrap();
        let json = serde_json::to_string(&idf.to_file()).unwrap();
        let back = IdfTable::from_file(serde_json::from_str(&json).unwrap()).unwrap();
        assert_eq!(back, idf);
        // Records come out sorted, so serialization is stable.
        assert_eq!(serde_json::to_string(&back.to_file()).unwrap(), json);
    }

    #[test]
    fn invalid_files_are_rejected() {
        let bad_df = IdfFile {
            n_docs: 2,
            records: vec![IdfRecord {
                n: 1,
                gram: vec!["a".into()],
                df: 3,
            }],
        };
        assert!(matches!(
            IdfTable::from_file(bad_df),
            Err(Error::InvalidIdf(_))
        ));
        let bad_len = IdfFile {
            n_docs: 2,
            records: vec![IdfRecord {
                n: 2,
                gram: vec!["a".into()],
                df: 1,
            }],
        };
        assert!(matches!(
            IdfTable::from_file(bad_len),
            Err(Error::InvalidIdf(_))
        ));
        let no_docs = IdfFile {
            n_docs: 0,
            records: vec![],
        };
        assert_eq!(IdfTable::from_file(no_docs), Err(Error::EmptyCorpus));
    }
}
