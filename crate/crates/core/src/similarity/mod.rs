//! TF-IDF n-gram vectors, the CIDEr kernel and the BLEU/mBLEU baselines.

mod bleu;
mod cider;
mod idf;

pub use bleu::{bleu, bleu_with, mbleu_mix_diversity, mbleu_n, BleuSmoothing};
pub(crate) use cider::mean_cider_vectors;
pub use cider::{cider, cider_n, cider_vs_set, tfidf_vector, WeightedNGramVector};
pub use idf::{
    build_idf, bundled_documents, bundled_idf, IdfFile, IdfRecord, IdfTable, BUNDLED_CORPUS_JSON,
};
