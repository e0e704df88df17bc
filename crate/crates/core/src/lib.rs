//! KNN text classification with two pluggable document distances:
//!
//! - `simple`: Jaccard distance over bag-of-words token sets, where the
//!   token set doubles as a lossy "compression" of the document.
//! - `gzip`: normalized compression distance (NCD) computed from DEFLATE
//!   compressed lengths in gzip format.
//!
//! The classifier surfaces KNN voting ties explicitly instead of breaking
//! them silently, so evaluation can report optimistic, pessimistic, and
//! expected (random tie-breaking) accuracy side by side, plus a
//! distance-informed resolution that makes K=2 reproduce K=1.
//!
//! # Quick start
//!
//! ```
//! use textknn::data::{Corpus, Document};
//! use textknn::eval::evaluate_corpus;
//! use textknn::knn::KnnConfig;
//! use textknn::parallel::Parallelism;
//!
//! let train = Corpus::new(vec![
//!     Document::new("sports", "the match kicked off before a loud crowd"),
//!     Document::new("sports", "their striker scored twice in the final match"),
//!     Document::new("tech", "the chip vendor shipped a faster processor"),
//!     Document::new("tech", "software update brings faster boot times"),
//! ]);
//! let test = Corpus::new(vec![
//!     Document::new("sports", "the crowd cheered when the striker scored"),
//! ]);
//!
//! let config = KnnConfig::simple(2);
//! let report = evaluate_corpus(&config, &train, &test, Parallelism::sequential()).unwrap();
//! assert_eq!(report.n_test, 1);
//! ```
//!
//! Classification of distinct queries is embarrassingly parallel; the
//! `parallel` feature (on by default) backs [`parallel::Parallelism`] with a
//! rayon pool. Results are identical for any worker count.

pub mod bench;
pub mod data;
pub mod distance;
pub mod eval;
pub mod knn;
pub mod parallel;
pub mod preprocess;

pub use data::{Corpus, Document};
pub use distance::Method;
pub use eval::EvaluationReport;
pub use knn::{KnnConfig, Prediction};
pub use parallel::Parallelism;
pub use preprocess::{string_to_set, PreprocessConfig, TokenSet};

/// Umbrella error for corpus-level pipelines.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error(transparent)]
    Data(#[from] data::DataError),
    #[error(transparent)]
    Knn(#[from] knn::KnnError),
    #[error(transparent)]
    Eval(#[from] eval::EvalError),
    #[error(transparent)]
    Distance(#[from] distance::DistanceError),
}
