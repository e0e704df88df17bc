//! Corpus ingestion, few-shot sampling, and multi-run aggregation.
//!
//! The single ingestion format is CSV with columns `(label, text)` in that
//! order, UTF-8, LF or CRLF, standard quoting for embedded commas and
//! newlines. Document order is file order; training indices double as the
//! deterministic tiebreak in neighbor selection, so order is part of the
//! contract.

use std::collections::{BTreeMap, BTreeSet};
use std::fs::File;
use std::path::Path;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::eval::EvaluationReport;

#[derive(Debug, thiserror::Error)]
pub enum DataError {
    #[error("failed to read {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("{path}: malformed CSV: {source}")]
    Csv {
        path: String,
        #[source]
        source: csv::Error,
    },
    #[error("{path}:{line}: expected 2 columns (label, text), found {found}")]
    ColumnCount { path: String, line: u64, found: usize },
    #[error("{path}: corpus contains no documents")]
    EmptyCorpus { path: String },
    #[error(
        "class {label:?} has {available} documents, fewer than the {needed} required for \
         {needed}-shot sampling"
    )]
    ClassTooSmall {
        label: String,
        available: usize,
        needed: usize,
    },
    #[error("run index {run} is out of range for a plan with {n_runs} runs")]
    RunOutOfRange { run: usize, n_runs: usize },
    #[error("cannot aggregate an empty list of reports")]
    NoReports,
}

/// A labeled document, the atomic classification unit.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Document {
    pub label: String,
    pub text: String,
}

impl Document {
    pub fn new(label: impl Into<String>, text: impl Into<String>) -> Self {
        Self {
            label: label.into(),
            text: text.into(),
        }
    }
}

/// An ordered list of labeled documents.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Corpus {
    documents: Vec<Document>,
}

impl Corpus {
    pub fn new(documents: Vec<Document>) -> Self {
        Self { documents }
    }

    pub fn len(&self) -> usize {
        self.documents.len()
    }

    pub fn is_empty(&self) -> bool {
        self.documents.is_empty()
    }

    pub fn documents(&self) -> &[Document] {
        &self.documents
    }

    pub fn iter(&self) -> impl Iterator<Item = &Document> {
        self.documents.iter()
    }

    pub fn texts(&self) -> Vec<&str> {
        self.documents.iter().map(|d| d.text.as_str()).collect()
    }

    pub fn labels(&self) -> Vec<&str> {
        self.documents.iter().map(|d| d.label.as_str()).collect()
    }

    /// Distinct labels present in the corpus.
    pub fn label_set(&self) -> BTreeSet<&str> {
        self.documents.iter().map(|d| d.label.as_str()).collect()
    }

    /// Documents per class.
    pub fn class_counts(&self) -> BTreeMap<&str, usize> {
        let mut counts = BTreeMap::new();
        for doc in &self.documents {
            *counts.entry(doc.label.as_str()).or_insert(0) += 1;
        }
        counts
    }
}

/// CSV parsing options.
#[derive(Debug, Clone, Copy, Default, Serialize, Deserialize)]
pub struct CsvOptions {
    /// Skip the first line as a header.
    pub has_header: bool,
}

/// Loads a corpus from CSV with columns `(label, text)`.
///
/// Errors name the file and, for malformed rows, the line number.
pub fn load_corpus(path: &Path, options: CsvOptions) -> Result<Corpus, DataError> {
    let display = path.display().to_string();
    let file = File::open(path).map_err(|source| DataError::Io {
        path: display.clone(),
        source,
    })?;
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(options.has_header)
        .flexible(true)
        .from_reader(file);

    let mut documents = Vec::new();
    for record in reader.records() {
        let record = record.map_err(|source| DataError::Csv {
            path: display.clone(),
            source,
        })?;
        if record.len() != 2 {
            let line = record.position().map_or(0, |p| p.line());
            return Err(DataError::ColumnCount {
                path: display,
                line,
                found: record.len(),
            });
        }
        documents.push(Document::new(&record[0], &record[1]));
    }
    if documents.is_empty() {
        return Err(DataError::EmptyCorpus { path: display });
    }
    Ok(Corpus::new(documents))
}

/// Writes a corpus back to `(label, text)` CSV without a header.
///
/// `load_corpus` on the written file round-trips to an identical corpus.
pub fn save_corpus(corpus: &Corpus, path: &Path) -> Result<(), DataError> {
    let display = path.display().to_string();
    let file = File::create(path).map_err(|source| DataError::Io {
        path: display.clone(),
        source,
    })?;
    let mut writer = csv::Writer::from_writer(file);
    for doc in corpus.iter() {
        writer
            .write_record([doc.label.as_str(), doc.text.as_str()])
            .map_err(|source| DataError::Csv {
                path: display.clone(),
                source,
            })?;
    }
    writer.flush().map_err(|source| DataError::Io {
        path: display,
        source,
    })
}

/// Seeded n-shot sampling plan: `n_runs` independent samples, run `r`
/// seeded with `base_seed + r`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct FewShotPlan {
    pub shots_per_class: usize,
    pub n_runs: usize,
    pub base_seed: u64,
}

impl FewShotPlan {
    /// `n`-shot plan with the conventional five runs and seed 0.
    pub fn new(shots_per_class: usize) -> Self {
        Self {
            shots_per_class,
            n_runs: 5,
            base_seed: 0,
        }
    }

    pub fn seed_for_run(&self, run: usize) -> u64 {
        self.base_seed.wrapping_add(run as u64)
    }
}

/// Uniformly samples `shots_per_class` documents per class without
/// replacement, preserving the original relative document order.
///
/// Deterministic given `(plan, run)`; different runs use different seeds.
pub fn sample_few_shot(train: &Corpus, plan: &FewShotPlan, run: usize) -> Result<Corpus, DataError> {
    if run >= plan.n_runs {
        return Err(DataError::RunOutOfRange {
            run,
            n_runs: plan.n_runs,
        });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(plan.seed_for_run(run));

    let mut by_class: BTreeMap<&str, Vec<usize>> = BTreeMap::new();
    for (index, doc) in train.iter().enumerate() {
        by_class.entry(doc.label.as_str()).or_default().push(index);
    }

    let mut selected = Vec::with_capacity(by_class.len() * plan.shots_per_class);
    for (label, indices) in &by_class {
        if indices.len() < plan.shots_per_class {
            return Err(DataError::ClassTooSmall {
                label: (*label).to_owned(),
                available: indices.len(),
                needed: plan.shots_per_class,
            });
        }
        let picks = rand::seq::index::sample(&mut rng, indices.len(), plan.shots_per_class);
        selected.extend(picks.iter().map(|i| indices[i]));
    }
    selected.sort_unstable();

    Ok(Corpus::new(
        selected
            .into_iter()
            .map(|i| train.documents()[i].clone())
            .collect(),
    ))
}

/// Mean of the accuracy and timing fields across runs.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MeanReport {
    pub n_runs: usize,
    pub optimistic_accuracy: f64,
    pub pessimistic_accuracy: f64,
    pub expected_accuracy: f64,
    pub distance_informed_accuracy: f64,
    pub wall_time_seconds: f64,
}

/// Arithmetic mean of each accuracy field and of wall time.
pub fn mean_over_runs(reports: &[EvaluationReport]) -> Result<MeanReport, DataError> {
    if reports.is_empty() {
        return Err(DataError::NoReports);
    }
    let n = reports.len() as f64;
    let mean = |extract: fn(&EvaluationReport) -> f64| reports.iter().map(extract).sum::<f64>() / n;
    Ok(MeanReport {
        n_runs: reports.len(),
        optimistic_accuracy: mean(|r| r.optimistic_accuracy),
        pessimistic_accuracy: mean(|r| r.pessimistic_accuracy),
        expected_accuracy: mean(|r| r.expected_accuracy),
        distance_informed_accuracy: mean(|r| r.distance_informed_accuracy),
        wall_time_seconds: mean(|r| r.wall_time_seconds),
    })
}
