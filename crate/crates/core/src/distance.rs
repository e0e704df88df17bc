//! Document distances: Jaccard over token sets and normalized compression
//! distance (NCD) over gzip-format compressed lengths.
//!
//! Both implementations sit behind [`DocumentDistance`], which splits work
//! into a per-document `prepare` step (tokenize once, compress once) and a
//! pairwise `distance` step. Prepared state is immutable, so pairwise
//! evaluation is safe to run from any number of workers.

use std::io::Write;

use flate2::write::GzEncoder;
use flate2::Compression;
use serde::{Deserialize, Serialize};

use crate::preprocess::{string_to_set, PreprocessConfig, TokenSet};

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
pub enum DistanceError {
    /// The compression-form Jaccard identity divides by the union size.
    #[error("jaccard compression form is undefined when both token sets are empty")]
    EmptyUnion,
}

/// Distance selector exposed on the CLI.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    /// Bag-of-words Jaccard distance over token sets.
    Simple,
    /// Normalized compression distance over gzip compressed lengths.
    Gzip,
}

impl std::fmt::Display for Method {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Method::Simple => f.write_str("simple"),
            Method::Gzip => f.write_str("gzip"),
        }
    }
}

impl std::str::FromStr for Method {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "simple" => Ok(Method::Simple),
            "gzip" => Ok(Method::Gzip),
            other => Err(format!("unknown method {other:?}, expected simple or gzip")),
        }
    }
}

/// Jaccard distance `1 - |a ∩ b| / |a ∪ b|`.
///
/// Two empty sets are treated as identical (distance 0); any constant would
/// satisfy totality, and 0 preserves `d(a, a) = 0`.
pub fn jaccard_distance(a: &TokenSet, b: &TokenSet) -> f64 {
    let union = a.union_len(b);
    if union == 0 {
        return 0.0;
    }
    let intersection = a.intersection_len(b);
    1.0 - intersection as f64 / union as f64
}

/// Jaccard distance rewritten in compression form:
/// `2 - (|a| + |b|) / |a ∪ b|`, reading the token set itself as a lossy
/// compression whose length is its cardinality and whose concatenation
/// compresses to the union.
///
/// Algebraically identical to [`jaccard_distance`] whenever the union is
/// non-empty; errors on two empty sets, where the ratio is undefined.
pub fn jaccard_distance_compression_form(a: &TokenSet, b: &TokenSet) -> Result<f64, DistanceError> {
    let union = a.union_len(b);
    if union == 0 {
        return Err(DistanceError::EmptyUnion);
    }
    Ok(2.0 - (a.len() + b.len()) as f64 / union as f64)
}

/// How two documents are joined before compressing the concatenation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Separator {
    /// A single ASCII space between the documents (the default).
    Space,
    /// Direct byte concatenation.
    None,
}

impl Default for Separator {
    fn default() -> Self {
        Separator::Space
    }
}

impl Separator {
    fn join(&self, x: &str, y: &str) -> String {
        match self {
            Separator::Space => {
                let mut s = String::with_capacity(x.len() + y.len() + 1);
                s.push_str(x);
                s.push(' ');
                s.push_str(y);
                s
            }
            Separator::None => {
                let mut s = String::with_capacity(x.len() + y.len());
                s.push_str(x);
                s.push_str(y);
                s
            }
        }
    }
}

impl std::fmt::Display for Separator {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Separator::Space => f.write_str("space"),
            Separator::None => f.write_str("none"),
        }
    }
}

impl std::str::FromStr for Separator {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "space" => Ok(Separator::Space),
            "none" => Ok(Separator::None),
            other => Err(format!("unknown separator {other:?}, expected space or none")),
        }
    }
}

/// Deterministic gzip-format DEFLATE compressor used as the length oracle
/// `C(x)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct GzipCompressor {
    level: u32,
}

pub const DEFAULT_COMPRESSION_LEVEL: u32 = 6;

impl GzipCompressor {
    /// `level` must be a valid DEFLATE level in 0..=9.
    pub fn new(level: u32) -> Self {
        assert!(level <= 9, "gzip compression level must be in 0..=9, got {level}");
        Self { level }
    }

    pub fn level(&self) -> u32 {
        self.level
    }

    /// Compressed byte length of `data` in gzip format, header and trailer
    /// included. Deterministic for a fixed level.
    pub fn compressed_len(&self, data: &[u8]) -> usize {
        let mut encoder = GzEncoder::new(Vec::new(), Compression::new(self.level));
        encoder
            .write_all(data)
            .expect("writing to an in-memory gzip encoder cannot fail");
        encoder
            .finish()
            .expect("finishing an in-memory gzip encoder cannot fail")
            .len()
    }
}

impl Default for GzipCompressor {
    fn default() -> Self {
        Self::new(DEFAULT_COMPRESSION_LEVEL)
    }
}

/// A document together with its cached compressed length `C(x)`.
///
/// The cached value always equals `compressed_len` recomputed from scratch;
/// it exists so corpus preparation compresses each document exactly once.
#[derive(Debug, Clone)]
pub struct CompressedDocument {
    text: String,
    compressed_len: usize,
}

impl CompressedDocument {
    pub fn new(text: &str, compressor: &GzipCompressor) -> Self {
        Self {
            text: text.to_owned(),
            compressed_len: compressor.compressed_len(text.as_bytes()),
        }
    }

    pub fn text(&self) -> &str {
        &self.text
    }

    pub fn compressed_len(&self) -> usize {
        self.compressed_len
    }
}

/// Normalized compression distance
/// `(C(x·y) - min(C(x), C(y))) / max(C(x), C(y))`.
///
/// `C(x)` and `C(y)` are served from the prepared documents; only the
/// concatenation is compressed here. The result is clamped at zero: a real
/// compressor can in principle shave a byte off the concatenation, and NCD
/// is defined as non-negative.
pub fn ncd_distance(
    x: &CompressedDocument,
    y: &CompressedDocument,
    compressor: &GzipCompressor,
    separator: Separator,
) -> f64 {
    let joined = separator.join(&x.text, &y.text);
    let c_xy = compressor.compressed_len(joined.as_bytes());
    let c_min = x.compressed_len.min(y.compressed_len);
    let c_max = x.compressed_len.max(y.compressed_len);
    c_xy.saturating_sub(c_min) as f64 / c_max as f64
}

/// A pluggable document distance with per-document precomputed state.
///
/// `prepare` runs once per document; `distance` runs per pair and must be
/// deterministic. Implementations are shared read-only across workers.
pub trait DocumentDistance: Sync {
    type Prepared: Send + Sync;

    fn prepare(&self, text: &str) -> Self::Prepared;

    fn distance(&self, a: &Self::Prepared, b: &Self::Prepared) -> f64;
}

/// Bag-of-words Jaccard distance (the `simple` method).
#[derive(Debug, Clone, Default)]
pub struct Jaccard {
    pub preprocess: PreprocessConfig,
}

impl Jaccard {
    pub fn new(preprocess: PreprocessConfig) -> Self {
        Self { preprocess }
    }
}

impl DocumentDistance for Jaccard {
    type Prepared = TokenSet;

    fn prepare(&self, text: &str) -> TokenSet {
        string_to_set(text, &self.preprocess)
    }

    fn distance(&self, a: &TokenSet, b: &TokenSet) -> f64 {
        jaccard_distance(a, b)
    }
}

/// Normalized compression distance (the `gzip` method).
#[derive(Debug, Clone, Default)]
pub struct Ncd {
    pub compressor: GzipCompressor,
    pub separator: Separator,
}

impl Ncd {
    pub fn new(compressor: GzipCompressor, separator: Separator) -> Self {
        Self { compressor, separator }
    }
}

impl DocumentDistance for Ncd {
    type Prepared = CompressedDocument;

    fn prepare(&self, text: &str) -> CompressedDocument {
        CompressedDocument::new(text, &self.compressor)
    }

    fn distance(&self, a: &CompressedDocument, b: &CompressedDocument) -> f64 {
        ncd_distance(a, b, &self.compressor, self.separator)
    }
}
