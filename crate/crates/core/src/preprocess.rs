//! Bag-of-words preprocessing: raw text to a deduplicated token set.
//!
//! The pipeline is deliberately naive: replace a few punctuation characters
//! with spaces, lowercase, split on whitespace, drop tokens by length, keep
//! the set. The resulting [`TokenSet`] acts as a lossy compression of the
//! document and is the input to the Jaccard distance.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

/// Which side of the length threshold survives filtering.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum LengthFilter {
    /// Keep tokens with length > n (the default pipeline).
    KeepLonger,
    /// Keep tokens with length <= n (the inverted ablation variant).
    KeepAtMost,
}

/// Tokenization settings. The defaults reproduce the basic pipeline:
/// `.,?!` to spaces, lowercase, split, keep tokens longer than 3 characters.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PreprocessConfig {
    /// Characters replaced by a space before splitting.
    pub punctuation_to_space: BTreeSet<char>,
    /// Lowercase the text (applies only when `normalize` is true).
    pub lowercase: bool,
    /// Length threshold n; tokens are kept strictly longer than n
    /// (or at most n under [`LengthFilter::KeepAtMost`]).
    pub min_token_len_exclusive: usize,
    pub length_filter: LengthFilter,
    /// When false, skip punctuation replacement and lowercasing entirely;
    /// only whitespace splitting and length filtering apply.
    pub normalize: bool,
}

impl Default for PreprocessConfig {
    fn default() -> Self {
        Self {
            punctuation_to_space: ['.', ',', '?', '!'].into_iter().collect(),
            lowercase: true,
            min_token_len_exclusive: 3,
            length_filter: LengthFilter::KeepLonger,
            normalize: true,
        }
    }
}

impl PreprocessConfig {
    /// Default pipeline with a custom length threshold.
    pub fn with_min_len(n: usize) -> Self {
        Self {
            min_token_len_exclusive: n,
            ..Self::default()
        }
    }

    /// Inverted filter: keep only tokens of length <= n.
    pub fn keep_at_most(n: usize) -> Self {
        Self {
            min_token_len_exclusive: n,
            length_filter: LengthFilter::KeepAtMost,
            ..Self::default()
        }
    }

    /// No normalization: whitespace splitting and length filtering only.
    pub fn split_only(n: usize) -> Self {
        Self {
            min_token_len_exclusive: n,
            normalize: false,
            ..Self::default()
        }
    }
}

/// A document reduced to its set of normalized tokens.
///
/// Invariants for sets produced by [`string_to_set`]: tokens are non-empty,
/// contain no whitespace, and satisfy the configured length filter.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(transparent)]
pub struct TokenSet(BTreeSet<String>);

impl TokenSet {
    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn contains(&self, token: &str) -> bool {
        self.0.contains(token)
    }

    /// Tokens in lexicographic (byte) order.
    pub fn iter(&self) -> impl Iterator<Item = &str> {
        self.0.iter().map(String::as_str)
    }

    pub fn as_set(&self) -> &BTreeSet<String> {
        &self.0
    }

    /// Number of tokens shared with `other`.
    pub fn intersection_len(&self, other: &TokenSet) -> usize {
        // Iterate the smaller set against the larger one.
        let (small, large) = if self.len() <= other.len() {
            (&self.0, &other.0)
        } else {
            (&other.0, &self.0)
        };
        small.iter().filter(|t| large.contains(*t)).count()
    }

    /// Number of distinct tokens in the union with `other`.
    pub fn union_len(&self, other: &TokenSet) -> usize {
        self.len() + other.len() - self.intersection_len(other)
    }
}

impl FromIterator<String> for TokenSet {
    fn from_iter<I: IntoIterator<Item = String>>(iter: I) -> Self {
        Self(iter.into_iter().collect())
    }
}

impl<'a> FromIterator<&'a str> for TokenSet {
    fn from_iter<I: IntoIterator<Item = &'a str>>(iter: I) -> Self {
        Self(iter.into_iter().map(str::to_owned).collect())
    }
}

impl From<BTreeSet<String>> for TokenSet {
    fn from(set: BTreeSet<String>) -> Self {
        Self(set)
    }
}

/// Tokenizes `text` into a [`TokenSet`].
///
/// Steps, in order: punctuation-to-space replacement and lowercasing (both
/// skipped when `normalize` is false), splitting on runs of Unicode
/// whitespace, length filtering, set construction. Token length is counted
/// in Unicode scalar values, not bytes, so multilingual text filters the
/// same way regardless of encoding width. Lowercasing applies the full
/// per-character Unicode mapping (it can expand, e.g. `İ` becomes `i` plus
/// a combining dot); lengths are measured after expansion.
///
/// Total function: any input, including the empty string, yields a set.
pub fn string_to_set(text: &str, config: &PreprocessConfig) -> TokenSet {
    let normalized;
    let source = if config.normalize {
        let mut buf = String::with_capacity(text.len());
        for c in text.chars() {
            if config.punctuation_to_space.contains(&c) {
                buf.push(' ');
            } else if config.lowercase {
                buf.extend(c.to_lowercase());
            } else {
                buf.push(c);
            }
        }
        normalized = buf;
        normalized.as_str()
    } else {
        text
    };

    let n = config.min_token_len_exclusive;
    source
        .split_whitespace()
        .filter(|token| {
            let len = token.chars().count();
            match config.length_filter {
                LengthFilter::KeepLonger => len > n,
                LengthFilter::KeepAtMost => len <= n,
            }
        })
        .collect()
}
