//! Brute-force K-nearest-neighbor classification with explicit ties.
//!
//! Predictions are either a decided label or the exact set of tied
//! candidates, so every tie-breaking policy (optimistic, pessimistic,
//! random-guess expectation, distance-informed) can be applied downstream
//! without re-running the scan. Neighbor selection orders by
//! `(distance, train_index)`, which makes the whole pipeline deterministic:
//! equal distances at the K boundary resolve to the smaller training index.

use std::time::Instant;

use serde::{Deserialize, Serialize};

use crate::data::Corpus;
use crate::distance::{
    DocumentDistance, GzipCompressor, Jaccard, Method, Ncd, Separator,
    DEFAULT_COMPRESSION_LEVEL,
};
use crate::parallel::{map_slice, Parallelism};
use crate::preprocess::PreprocessConfig;

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
pub enum KnnError {
    #[error("training corpus is empty")]
    EmptyTrainingSet,
    #[error("k = {k} is invalid for a training set of {train_size} documents (need 1 <= k <= size)")]
    InvalidK { k: usize, train_size: usize },
}

/// Full classifier configuration: K plus a fully specified distance
/// function.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct KnnConfig {
    pub method: Method,
    pub k: usize,
    /// Tokenization settings (used by the `simple` method).
    pub preprocess: PreprocessConfig,
    /// DEFLATE level 0..=9 (used by the `gzip` method).
    pub compression_level: u32,
    /// Concatenation convention for the compressed pair (used by `gzip`).
    pub separator: Separator,
}

impl KnnConfig {
    pub fn new(method: Method, k: usize) -> Self {
        Self {
            method,
            k,
            preprocess: PreprocessConfig::default(),
            compression_level: DEFAULT_COMPRESSION_LEVEL,
            separator: Separator::Space,
        }
    }

    pub fn simple(k: usize) -> Self {
        Self::new(Method::Simple, k)
    }

    pub fn gzip(k: usize) -> Self {
        Self::new(Method::Gzip, k)
    }
}

/// One training point as seen from a query.
#[derive(Debug, Clone, PartialEq)]
pub struct Neighbor {
    pub train_index: usize,
    pub distance: f64,
    pub label: String,
}

/// A label that tied for the maximum vote count.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TieCandidate {
    pub label: String,
    /// Smallest distance among the neighbors that voted for this label.
    pub nearest_distance: f64,
    /// Training index of that nearest voting neighbor.
    pub nearest_index: usize,
}

/// Classification outcome: a decided label, or the set of labels sharing
/// the maximum vote count (always at least two).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum Prediction {
    Decided(String),
    /// Candidates in lexicographic label order.
    Tied(Vec<TieCandidate>),
}

impl Prediction {
    pub fn is_tied(&self) -> bool {
        matches!(self, Prediction::Tied(_))
    }

    pub fn decided_label(&self) -> Option<&str> {
        match self {
            Prediction::Decided(label) => Some(label),
            Prediction::Tied(_) => None,
        }
    }

    pub fn candidates(&self) -> Option<&[TieCandidate]> {
        match self {
            Prediction::Decided(_) => None,
            Prediction::Tied(candidates) => Some(candidates),
        }
    }

    /// True when `label` is the decided label or among the tied candidates.
    pub fn admits(&self, label: &str) -> bool {
        match self {
            Prediction::Decided(l) => l == label,
            Prediction::Tied(candidates) => candidates.iter().any(|c| c.label == label),
        }
    }
}

/// Resolves a prediction to a single label: a tie goes to the candidate
/// whose nearest voting neighbor is closest, breaking equal distances by
/// the smaller training index. For K=2 this reproduces the K=1 prediction.
pub fn resolve_distance_informed(prediction: &Prediction) -> &str {
    match prediction {
        Prediction::Decided(label) => label,
        Prediction::Tied(candidates) => {
            &candidates
                .iter()
                .min_by(|a, b| {
                    a.nearest_distance
                        .total_cmp(&b.nearest_distance)
                        .then(a.nearest_index.cmp(&b.nearest_index))
                })
                .expect("tied predictions carry at least two candidates")
                .label
        }
    }
}

/// A training corpus with per-document distance state precomputed: token
/// sets for `simple`, compressed lengths for `gzip`. Immutable and
/// shareable across workers; classification results are bit-identical to
/// the uncached path.
pub struct PreparedCorpus<D: DocumentDistance> {
    distance: D,
    labels: Vec<String>,
    prepared: Vec<D::Prepared>,
}

impl<D: DocumentDistance> PreparedCorpus<D> {
    /// Precomputes per-document state for every training document.
    pub fn prepare(distance: D, corpus: &Corpus, par: Parallelism) -> Self {
        let prepared = map_slice(par, corpus.documents(), |doc| distance.prepare(&doc.text));
        Self {
            distance,
            labels: corpus.iter().map(|d| d.label.clone()).collect(),
            prepared,
        }
    }

    pub fn len(&self) -> usize {
        self.prepared.len()
    }

    pub fn is_empty(&self) -> bool {
        self.prepared.is_empty()
    }

    pub fn label(&self, train_index: usize) -> &str {
        &self.labels[train_index]
    }

    pub fn prepared(&self, train_index: usize) -> &D::Prepared {
        &self.prepared[train_index]
    }

    fn validate_k(&self, k: usize) -> Result<(), KnnError> {
        if self.prepared.is_empty() {
            return Err(KnnError::EmptyTrainingSet);
        }
        if k == 0 || k > self.prepared.len() {
            return Err(KnnError::InvalidK {
                k,
                train_size: self.prepared.len(),
            });
        }
        Ok(())
    }

    /// The K training points nearest to `query`, ordered by
    /// `(distance, train_index)` ascending.
    pub fn nearest_neighbors(
        &self,
        query: &D::Prepared,
        k: usize,
    ) -> Result<Vec<Neighbor>, KnnError> {
        self.validate_k(k)?;
        Ok(self.nearest_neighbors_unchecked(query, k))
    }

    fn nearest_neighbors_unchecked(&self, query: &D::Prepared, k: usize) -> Vec<Neighbor> {
        let mut distances: Vec<(f64, usize)> = self
            .prepared
            .iter()
            .enumerate()
            .map(|(index, doc)| (self.distance.distance(query, doc), index))
            .collect();
        let by_distance_then_index =
            |a: &(f64, usize), b: &(f64, usize)| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1));
        if k < distances.len() {
            distances.select_nth_unstable_by(k - 1, by_distance_then_index);
            distances.truncate(k);
        }
        distances.sort_unstable_by(by_distance_then_index);
        distances
            .into_iter()
            .map(|(distance, train_index)| Neighbor {
                train_index,
                distance,
                label: self.labels[train_index].clone(),
            })
            .collect()
    }

    /// Majority vote over the K nearest neighbors.
    pub fn classify(&self, query: &D::Prepared, k: usize) -> Result<Prediction, KnnError> {
        self.validate_k(k)?;
        Ok(self.classify_unchecked(query, k))
    }

    fn classify_unchecked(&self, query: &D::Prepared, k: usize) -> Prediction {
        let neighbors = self.nearest_neighbors_unchecked(query, k);

        // Neighbors arrive sorted by (distance, index), so the first voter
        // for a label is also its nearest voter.
        let mut votes: Vec<(&Neighbor, usize)> = Vec::new();
        for neighbor in &neighbors {
            match votes.iter_mut().find(|(v, _)| v.label == neighbor.label) {
                Some((_, count)) => *count += 1,
                None => votes.push((neighbor, 1)),
            }
        }
        let max_count = votes.iter().map(|(_, c)| *c).max().expect("k >= 1");
        let mut winners: Vec<&Neighbor> = votes
            .iter()
            .filter(|(_, count)| *count == max_count)
            .map(|(neighbor, _)| *neighbor)
            .collect();

        if winners.len() == 1 {
            Prediction::Decided(winners[0].label.clone())
        } else {
            winners.sort_by(|a, b| a.label.cmp(&b.label));
            Prediction::Tied(
                winners
                    .into_iter()
                    .map(|neighbor| TieCandidate {
                        label: neighbor.label.clone(),
                        nearest_distance: neighbor.distance,
                        nearest_index: neighbor.train_index,
                    })
                    .collect(),
            )
        }
    }

    /// Classifies a batch of raw texts, distributing queries across
    /// workers. Output order follows input order and is independent of the
    /// worker count.
    pub fn classify_all(
        &self,
        texts: &[&str],
        k: usize,
        par: Parallelism,
    ) -> Result<Vec<Prediction>, KnnError> {
        self.validate_k(k)?;
        Ok(map_slice(par, texts, |text| {
            let query = self.distance.prepare(text);
            self.classify_unchecked(&query, k)
        }))
    }
}

/// Predictions plus the wall-clock time of the full classification region
/// (training-side precomputation and every query, file I/O excluded).
#[derive(Debug, Clone)]
pub struct ClassificationRun {
    pub predictions: Vec<Prediction>,
    pub wall_time_seconds: f64,
}

/// End-to-end classification of `test_texts` against `train` under
/// `config`, timed with a monotonic clock.
pub fn classify_corpus(
    config: &KnnConfig,
    train: &Corpus,
    test_texts: &[&str],
    par: Parallelism,
) -> Result<ClassificationRun, KnnError> {
    if train.is_empty() {
        return Err(KnnError::EmptyTrainingSet);
    }
    if config.k == 0 || config.k > train.len() {
        return Err(KnnError::InvalidK {
            k: config.k,
            train_size: train.len(),
        });
    }

    let start = Instant::now();
    let predictions = match config.method {
        Method::Simple => {
            let prepared =
                PreparedCorpus::prepare(Jaccard::new(config.preprocess.clone()), train, par);
            prepared.classify_all(test_texts, config.k, par)?
        }
        Method::Gzip => {
            let distance = Ncd::new(GzipCompressor::new(config.compression_level), config.separator);
            let prepared = PreparedCorpus::prepare(distance, train, par);
            prepared.classify_all(test_texts, config.k, par)?
        }
    };
    Ok(ClassificationRun {
        predictions,
        wall_time_seconds: start.elapsed().as_secs_f64(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::data::Document;

    /// Test distance: documents are decimal numbers, distance is the
    /// absolute difference. Lets tests pin exact distance patterns.
    struct AbsDiff;

    impl DocumentDistance for AbsDiff {
        type Prepared = f64;

        fn prepare(&self, text: &str) -> f64 {
            text.trim().parse().expect("numeric test document")
        }

        fn distance(&self, a: &f64, b: &f64) -> f64 {
            (a - b).abs()
        }
    }

    fn numeric_corpus(values_and_labels: &[(&str, &str)]) -> PreparedCorpus<AbsDiff> {
        let corpus = Corpus::new(
            values_and_labels
                .iter()
                .map(|(value, label)| Document::new(*label, *value))
                .collect(),
        );
        PreparedCorpus::prepare(AbsDiff, &corpus, Parallelism::sequential())
    }

    #[test]
    fn self_match_has_distance_zero() {
        let corpus = Corpus::new(vec![
            Document::new("a", "an example document with words"),
            Document::new("b", "entirely different content here"),
        ]);
        let prepared =
            PreparedCorpus::prepare(Jaccard::default(), &corpus, Parallelism::sequential());
        let query = prepared.distance.prepare("an example document with words");
        let neighbors = prepared.nearest_neighbors(&query, 1).unwrap();
        assert_eq!(neighbors[0].train_index, 0);
        assert_eq!(neighbors[0].distance, 0.0);
    }

    #[test]
    fn boundary_ties_break_by_train_index() {
        // Distances from query 0.0: [0.2, 0.5, 0.5, 0.9].
        let prepared = numeric_corpus(&[("0.2", "a"), ("0.5", "b"), ("0.5", "c"), ("0.9", "d")]);
        let neighbors = prepared.nearest_neighbors(&0.0, 2).unwrap();
        let picked: Vec<usize> = neighbors.iter().map(|n| n.train_index).collect();
        assert_eq!(picked, [0, 1], "equal 0.5s must resolve to the smaller index");
    }

    #[test]
    fn k_equal_to_train_size_returns_everything_sorted() {
        let prepared = numeric_corpus(&[("0.9", "a"), ("0.1", "b"), ("0.5", "c")]);
        let neighbors = prepared.nearest_neighbors(&0.0, 3).unwrap();
        let order: Vec<usize> = neighbors.iter().map(|n| n.train_index).collect();
        assert_eq!(order, [1, 2, 0]);
    }

    #[test]
    fn invalid_k_is_rejected() {
        let prepared = numeric_corpus(&[("0.1", "a")]);
        assert_eq!(
            prepared.nearest_neighbors(&0.0, 2).unwrap_err(),
            KnnError::InvalidK { k: 2, train_size: 1 }
        );
        assert_eq!(
            prepared.nearest_neighbors(&0.0, 0).unwrap_err(),
            KnnError::InvalidK { k: 0, train_size: 1 }
        );
    }

    #[test]
    fn unanimous_vote_decides() {
        let prepared = numeric_corpus(&[("0.1", "a"), ("0.2", "a"), ("0.9", "b")]);
        let prediction = prepared.classify(&0.0, 2).unwrap();
        assert_eq!(prediction, Prediction::Decided("a".into()));
    }

    #[test]
    fn split_vote_ties_with_full_candidate_set() {
        let prepared = numeric_corpus(&[("0.1", "a"), ("0.2", "b"), ("0.9", "a")]);
        let prediction = prepared.classify(&0.0, 2).unwrap();
        let candidates = prediction.candidates().expect("tied");
        assert_eq!(candidates.len(), 2);
        assert_eq!(candidates[0].label, "a");
        assert_eq!(candidates[0].nearest_distance, 0.1);
        assert_eq!(candidates[1].label, "b");
        assert_eq!(candidates[1].nearest_distance, 0.2);
    }

    #[test]
    fn majority_beats_minority_at_k3() {
        let prepared = numeric_corpus(&[("0.1", "a"), ("0.2", "a"), ("0.3", "b"), ("0.9", "b")]);
        assert_eq!(
            prepared.classify(&0.0, 3).unwrap(),
            Prediction::Decided("a".into())
        );
    }

    #[test]
    fn even_split_at_k4_ties() {
        let prepared = numeric_corpus(&[("0.1", "a"), ("0.2", "a"), ("0.3", "b"), ("0.4", "b")]);
        let prediction = prepared.classify(&0.0, 4).unwrap();
        let labels: Vec<&str> = prediction
            .candidates()
            .expect("tied")
            .iter()
            .map(|c| c.label.as_str())
            .collect();
        assert_eq!(labels, ["a", "b"]);
    }

    #[test]
    fn distance_informed_resolution() {
        assert_eq!(
            resolve_distance_informed(&Prediction::Decided("a".into())),
            "a"
        );
        let tied = Prediction::Tied(vec![
            TieCandidate { label: "a".into(), nearest_distance: 0.3, nearest_index: 4 },
            TieCandidate { label: "b".into(), nearest_distance: 0.5, nearest_index: 1 },
        ]);
        assert_eq!(resolve_distance_informed(&tied), "a");
        // Equal distances fall back to the smaller training index.
        let equal = Prediction::Tied(vec![
            TieCandidate { label: "a".into(), nearest_distance: 0.5, nearest_index: 4 },
            TieCandidate { label: "b".into(), nearest_distance: 0.5, nearest_index: 1 },
        ]);
        assert_eq!(resolve_distance_informed(&equal), "b");
    }

    #[test]
    fn classify_corpus_is_deterministic() {
        let train = Corpus::new(vec![
            Document::new("a", "alpha beta gamma delta"),
            Document::new("b", "epsilon zeta eta theta"),
            Document::new("a", "alpha beta gamma words"),
            Document::new("b", "epsilon zeta other words"),
        ]);
        let texts = ["alpha beta something", "zeta eta something"];
        let config = KnnConfig::simple(2);
        let first = classify_corpus(&config, &train, &texts, Parallelism::sequential()).unwrap();
        let second = classify_corpus(&config, &train, &texts, Parallelism::sequential()).unwrap();
        assert_eq!(first.predictions, second.predictions);
        assert!(first.wall_time_seconds >= 0.0);
    }

    #[cfg(feature = "parallel")]
    #[test]
    fn worker_count_does_not_change_predictions() {
        let train = Corpus::new(
            (0..40)
                .map(|i| {
                    let label = if i % 2 == 0 { "even" } else { "odd" };
                    Document::new(label, format!("document number {i} about {label} things"))
                })
                .collect(),
        );
        let texts: Vec<String> = (0..25).map(|i| format!("query number {i} about things")).collect();
        let text_refs: Vec<&str> = texts.iter().map(String::as_str).collect();
        let config = KnnConfig::simple(2);
        let sequential =
            classify_corpus(&config, &train, &text_refs, Parallelism::sequential()).unwrap();
        for workers in [0, 2, 3] {
            let parallel =
                classify_corpus(&config, &train, &text_refs, Parallelism::workers(workers)).unwrap();
            assert_eq!(sequential.predictions, parallel.predictions, "workers={workers}");
        }
    }

    mod properties {
        use super::*;
        use proptest::prelude::*;

        fn arb_corpus() -> impl Strategy<Value = (Vec<(f64, u8)>, f64)> {
            (
                proptest::collection::vec((0.0f64..100.0, 0u8..4), 2..30),
                0.0f64..100.0,
            )
        }

        fn prepared_from(values: &[(f64, u8)]) -> PreparedCorpus<AbsDiff> {
            let corpus = Corpus::new(
                values
                    .iter()
                    .map(|(v, l)| Document::new(format!("label{l}"), format!("{v}")))
                    .collect(),
            );
            PreparedCorpus::prepare(AbsDiff, &corpus, Parallelism::sequential())
        }

        proptest! {
            #[test]
            fn k1_never_ties((values, query) in arb_corpus()) {
                let prepared = prepared_from(&values);
                let prediction = prepared.classify(&query, 1).unwrap();
                prop_assert!(!prediction.is_tied());
            }

            #[test]
            fn k2_with_distance_informed_resolution_equals_k1((values, query) in arb_corpus()) {
                let prepared = prepared_from(&values);
                let k1 = prepared.classify(&query, 1).unwrap();
                let k2 = prepared.classify(&query, 2).unwrap();
                prop_assert_eq!(
                    resolve_distance_informed(&k2),
                    k1.decided_label().expect("k=1 never ties")
                );
            }

            #[test]
            fn permutation_with_distinct_distances_preserves_prediction(
                (values, query) in arb_corpus(),
                seed in 0u64..1000,
            ) {
                use rand::seq::SliceRandom;
                use rand::SeedableRng;

                // Distinct distances make the prediction independent of
                // training order entirely.
                let distances: Vec<f64> = values.iter().map(|(v, _)| (v - query).abs()).collect();
                let mut sorted = distances.clone();
                sorted.sort_by(f64::total_cmp);
                prop_assume!(sorted.windows(2).all(|w| w[0] != w[1]));

                let prepared = prepared_from(&values);
                let baseline = prepared.classify(&query, 2.min(values.len())).unwrap();

                let mut shuffled = values.clone();
                shuffled.shuffle(&mut rand_chacha::ChaCha8Rng::seed_from_u64(seed));
                let permuted = prepared_from(&shuffled);
                let prediction = permuted.classify(&query, 2.min(values.len())).unwrap();

                match (baseline, prediction) {
                    (Prediction::Decided(a), Prediction::Decided(b)) => prop_assert_eq!(a, b),
                    (Prediction::Tied(a), Prediction::Tied(b)) => {
                        let labels_a: Vec<String> = a.iter().map(|c| c.label.clone()).collect();
                        let labels_b: Vec<String> = b.iter().map(|c| c.label.clone()).collect();
                        prop_assert_eq!(labels_a, labels_b);
                    }
                    (a, b) => prop_assert!(false, "prediction shape changed: {:?} vs {:?}", a, b),
                }
            }
        }
    }
}
