//! Wall-clock benchmark of end-to-end classification.
//!
//! The timed region covers training-side precomputation (tokenization or
//! compression of every training document, counted once) plus the full
//! test-set classification, and excludes file I/O. A short warm-up pass
//! runs first and is discarded. Timing never perturbs results: the
//! accuracies in a [`BenchResult`] are bit-identical to an untimed
//! evaluation of the same configuration.
//!
//! Single-threaded mode is the reference for cross-method comparisons;
//! parallel timings are valid but should be reported as such (the
//! `workers` field records the mode).

use serde::{Deserialize, Serialize};

use crate::data::Corpus;
use crate::distance::Method;
use crate::eval::{EvaluationReport, evaluate_corpus};
use crate::knn::KnnConfig;
use crate::parallel::Parallelism;
use crate::Error;

/// Documents classified during the discarded warm-up pass.
const WARMUP_QUERIES: usize = 10;

/// One timed classification run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BenchResult {
    pub method: Method,
    pub k: usize,
    /// Shots per class when the training set was few-shot sampled; absent
    /// for full training data.
    pub shots: Option<usize>,
    /// Worker count used inside the timed region (1 = single-threaded).
    pub workers: usize,
    #[serde(flatten)]
    pub report: EvaluationReport,
    pub docs_per_second: f64,
}

/// Times the classification of `test` against `train`.
pub fn run_benchmark(
    config: &KnnConfig,
    train: &Corpus,
    test: &Corpus,
    shots: Option<usize>,
    par: Parallelism,
) -> Result<BenchResult, Error> {
    let warmup = Corpus::new(
        test.documents()
            .iter()
            .take(WARMUP_QUERIES)
            .cloned()
            .collect(),
    );
    if !warmup.is_empty() {
        evaluate_corpus(config, train, &warmup, par)?;
    }

    let report = evaluate_corpus(config, train, test, par)?;
    let docs_per_second = test.len() as f64 / report.wall_time_seconds;
    Ok(BenchResult {
        method: config.method,
        k: config.k,
        shots,
        workers: if par.is_sequential() { 1 } else { par.worker_count() },
        report,
        docs_per_second,
    })
}
