use serde::{Deserialize, Serialize};

use crate::text::{build_vocabulary, TokenizedCaption};

pub const DEFAULT_TOP_WORDS: usize = 5000;

/// One line of a rank/frequency table.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VocabRow {
    pub source: String,
    pub vocab_size: usize,
    pub rank: usize,
    pub word: String,
    pub frequency: usize,
}

/// Per source, the vocabulary size and the `top_k` most frequent words
/// (ties alphabetical). Sources are emitted in the order given.
pub fn vocab_report<S: AsRef<str>>(
    sources: &[(S, Vec<TokenizedCaption>)],
    top_k: usize,
) -> Vec<VocabRow> {
    let mut rows = Vec::new();
    for (source, captions) in sources {
        let vocab = build_vocabulary(captions);
        for (i, (word, frequency)) in vocab.ranked().into_iter().take(top_k).enumerate() {
            rows.push(VocabRow {
                source: source.as_ref().to_string(),
                vocab_size: vocab.size(),
                rank: i + 1,
                word: word.to_string(),
                frequency,
            });
        }
    }
    rows
}
