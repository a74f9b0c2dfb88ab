//! Caption normalization, n-gram counting and vocabulary statistics.

use std::collections::{BTreeMap, HashSet};
use std::fmt;
use std::sync::OnceLock;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Highest n-gram order used by CIDEr and BLEU.
pub const MAX_ORDER: usize = 4;

/// Lowercase word tokens of one caption.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(transparent)]
pub struct TokenizedCaption(Vec<String>);

impl TokenizedCaption {
    pub fn tokens(&self) -> &[String] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Space-joined form; re-tokenizing it yields the same tokens.
    pub fn joined(&self) -> String {
        self.0.join(" ")
    }

    /// Drop tokens that appear in `stop_words`.
    pub fn without(&self, stop_words: &HashSet<&str>) -> TokenizedCaption {
        TokenizedCaption(
            self.0
                .iter()
                .filter(|t| !stop_words.contains(t.as_str()))
                .cloned()
                .collect(),
        )
    }
}

impl From<Vec<String>> for TokenizedCaption {
    /// Tokens are re-normalized so the type invariant holds for any input.
    fn from(tokens: Vec<String>) -> Self {
        tokenize(&tokens.join(" "))
    }
}

/// Lowercase, treat every character outside `[a-z0-9]` as a separator and
/// collapse runs of separators.
pub fn tokenize(raw: &str) -> TokenizedCaption {
    let lower = raw.to_lowercase();
    let tokens = lower
        .split(|c: char| !(c.is_ascii_lowercase() || c.is_ascii_digit()))
        .filter(|t| !t.is_empty())
        .map(str::to_string)
        .collect();
    TokenizedCaption(tokens)
}

/// A contiguous run of `order` tokens, stored space-joined.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct NGram {
    order: usize,
    joined: String,
}

impl NGram {
    pub fn new<S: AsRef<str>>(tokens: &[S]) -> Self {
        let joined = tokens
            .iter()
            .map(AsRef::as_ref)
            .collect::<Vec<_>>()
            .join(" ");
        NGram {
            order: tokens.len(),
            joined,
        }
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn tokens(&self) -> impl Iterator<Item = &str> {
        self.joined.split(' ')
    }

    pub fn as_str(&self) -> &str {
        &self.joined
    }
}

impl fmt::Display for NGram {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.joined)
    }
}

/// Sliding-window n-gram counts of a single order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NGramProfile {
    order: usize,
    counts: BTreeMap<NGram, usize>,
}

impl NGramProfile {
    pub fn order(&self) -> usize {
        self.order
    }

    pub fn counts(&self) -> &BTreeMap<NGram, usize> {
        &self.counts
    }

    pub fn get(&self, gram: &NGram) -> usize {
        self.counts.get(gram).copied().unwrap_or(0)
    }

    pub fn total(&self) -> usize {
        self.counts.values().sum()
    }

    pub fn is_empty(&self) -> bool {
        self.counts.is_empty()
    }
}

pub(crate) fn check_order(n: usize) -> Result<()> {
    if (1..=MAX_ORDER).contains(&n) {
        Ok(())
    } else {
        Err(Error::InvalidOrder(n))
    }
}

pub fn ngrams(caption: &TokenizedCaption, n: usize) -> Result<NGramProfile> {
    check_order(n)?;
    let mut counts = BTreeMap::new();
    for window in caption.tokens().windows(n) {
        *counts.entry(NGram::new(window)).or_insert(0) += 1;
    }
    Ok(NGramProfile { order: n, counts })
}

/// All four orders at once; used on hot paths where the order is known valid.
pub(crate) fn all_orders(caption: &TokenizedCaption) -> [NGramProfile; MAX_ORDER] {
    std::array::from_fn(|i| ngrams(caption, i + 1).expect("order in range"))
}

/// Word frequencies over a collection of captions.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Vocabulary {
    frequencies: BTreeMap<String, usize>,
    total_tokens: usize,
}

impl Vocabulary {
    pub fn size(&self) -> usize {
        self.frequencies.len()
    }

    pub fn total_tokens(&self) -> usize {
        self.total_tokens
    }

    pub fn frequency(&self, word: &str) -> usize {
        self.frequencies.get(word).copied().unwrap_or(0)
    }

    pub fn frequencies(&self) -> &BTreeMap<String, usize> {
        &self.frequencies
    }

    /// Words by descending frequency, ties broken alphabetically.
    pub fn ranked(&self) -> Vec<(&str, usize)> {
        let mut rows: Vec<_> = self
            .frequencies
            .iter()
            .map(|(w, &f)| (w.as_str(), f))
            .collect();
        rows.sort_by(|a, b| b.1.cmp(&a.1).then_with(|| a.0.cmp(b.0)));
        rows
    }
}

pub fn build_vocabulary<'a, I>(captions: I) -> Vocabulary
where
    I: IntoIterator<Item = &'a TokenizedCaption>,
{
    let mut vocab = Vocabulary::default();
    for caption in captions {
        for token in caption.tokens() {
            *vocab.frequencies.entry(token.clone()).or_insert(0) += 1;
            vocab.total_tokens += 1;
        }
    }
    vocab
}

/// Bundled English stop-word list.
pub fn stop_words() -> &'static HashSet<&'static str> {
    static WORDS: OnceLock<HashSet<&'static str>> = OnceLock::new();
    WORDS.get_or_init(|| {
        include_str!("../data/stopwords_en.txt")
            .lines()
            .map(str::trim)
            .filter(|l| !l.is_empty() && !l.starts_with('#'))
            .collect()
    })
}
