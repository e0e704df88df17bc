//! Tie-aware accuracy evaluation.
//!
//! A tied prediction is never silently resolved. Instead the report carries
//! three accuracies side by side:
//!
//! - optimistic: a tie containing the true label counts as correct,
//! - pessimistic: a tie containing the true label counts as wrong,
//! - expected: a tie contributes `1/c` when the true label is among its `c`
//!   candidates, the average accuracy of a uniform random tie-breaker.
//!
//! Ties whose candidate set excludes the truth contribute zero everywhere: a
//! random guess over wrong candidates can never be correct. With that guard
//! the identities `P <= E <= O` and, when every tie has two candidates,
//! `E = (O + P) / 2` hold exactly; the internal tallies use rational
//! arithmetic so tests can check them without float tolerance.
//!
//! [`monte_carlo_accuracy`] estimates the expected accuracy by actually
//! drawing random tie resolutions; it is an independent oracle for the
//! closed-form computation.

use std::collections::BTreeMap;

use num_rational::Ratio;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::data::Corpus;
use crate::knn::{classify_corpus, resolve_distance_informed, KnnConfig, Prediction};
use crate::parallel::Parallelism;
use crate::Error;

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
pub enum EvalError {
    #[error("cannot evaluate an empty prediction list")]
    Empty,
    #[error("monte carlo estimation needs at least one trial")]
    ZeroTrials,
}

/// A prediction paired with the ground-truth label.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Outcome {
    pub prediction: Prediction,
    pub truth: String,
}

impl Outcome {
    pub fn new(prediction: Prediction, truth: impl Into<String>) -> Self {
        Self {
            prediction,
            truth: truth.into(),
        }
    }
}

/// Pairs predictions with their true labels.
pub fn pair_with_truth(predictions: Vec<Prediction>, truths: &[&str]) -> Vec<Outcome> {
    assert_eq!(
        predictions.len(),
        truths.len(),
        "predictions and truths must align"
    );
    predictions
        .into_iter()
        .zip(truths)
        .map(|(prediction, truth)| Outcome::new(prediction, *truth))
        .collect()
}

/// Integer/rational bookkeeping behind the accuracy scores.
///
/// All accessors return exact rationals; [`EvaluationReport`] converts to
/// `f64` at the edge.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PredictionTally {
    n_untied: usize,
    n_tied: usize,
    n_untied_correct: usize,
    n_tied_with_truth: usize,
    distance_informed_correct: usize,
    tie_sizes: BTreeMap<usize, usize>,
    /// Sum of 1/c over ties whose candidates contain the truth.
    expected_tie_contribution: Ratio<u64>,
}

impl PredictionTally {
    pub fn from_outcomes(outcomes: &[Outcome]) -> Result<Self, EvalError> {
        if outcomes.is_empty() {
            return Err(EvalError::Empty);
        }
        let mut tally = Self {
            n_untied: 0,
            n_tied: 0,
            n_untied_correct: 0,
            n_tied_with_truth: 0,
            distance_informed_correct: 0,
            tie_sizes: BTreeMap::new(),
            expected_tie_contribution: Ratio::from_integer(0),
        };
        for outcome in outcomes {
            if resolve_distance_informed(&outcome.prediction) == outcome.truth {
                tally.distance_informed_correct += 1;
            }
            match &outcome.prediction {
                Prediction::Decided(label) => {
                    tally.n_untied += 1;
                    if *label == outcome.truth {
                        tally.n_untied_correct += 1;
                    }
                }
                Prediction::Tied(candidates) => {
                    tally.n_tied += 1;
                    *tally.tie_sizes.entry(candidates.len()).or_insert(0) += 1;
                    if candidates.iter().any(|c| c.label == outcome.truth) {
                        tally.n_tied_with_truth += 1;
                        tally.expected_tie_contribution +=
                            Ratio::new(1, candidates.len() as u64);
                    }
                }
            }
        }
        Ok(tally)
    }

    pub fn total(&self) -> usize {
        self.n_untied + self.n_tied
    }

    pub fn n_untied(&self) -> usize {
        self.n_untied
    }

    pub fn n_tied(&self) -> usize {
        self.n_tied
    }

    pub fn n_untied_correct(&self) -> usize {
        self.n_untied_correct
    }

    pub fn n_tied_with_truth(&self) -> usize {
        self.n_tied_with_truth
    }

    pub fn tie_sizes(&self) -> &BTreeMap<usize, usize> {
        &self.tie_sizes
    }

    /// Ties containing the truth count as correct.
    pub fn optimistic(&self) -> Ratio<u64> {
        Ratio::new(
            (self.n_untied_correct + self.n_tied_with_truth) as u64,
            self.total() as u64,
        )
    }

    /// Ties containing the truth count as wrong.
    pub fn pessimistic(&self) -> Ratio<u64> {
        Ratio::new(self.n_untied_correct as u64, self.total() as u64)
    }

    /// Average accuracy under uniform random tie resolution.
    pub fn expected(&self) -> Ratio<u64> {
        (Ratio::from_integer(self.n_untied_correct as u64) + self.expected_tie_contribution)
            / Ratio::from_integer(self.total() as u64)
    }

    /// Accuracy after resolving every tie toward its nearest candidate.
    pub fn distance_informed(&self) -> Ratio<u64> {
        Ratio::new(self.distance_informed_correct as u64, self.total() as u64)
    }

    /// Finalizes the tally into a float report.
    pub fn into_report(self, wall_time_seconds: f64) -> EvaluationReport {
        let to_f64 = |r: Ratio<u64>| *r.numer() as f64 / *r.denom() as f64;
        EvaluationReport {
            n_test: self.total(),
            n_untied: self.n_untied,
            n_tied: self.n_tied,
            n_untied_correct: self.n_untied_correct,
            n_tied_with_truth: self.n_tied_with_truth,
            optimistic_accuracy: to_f64(self.optimistic()),
            pessimistic_accuracy: to_f64(self.pessimistic()),
            expected_accuracy: to_f64(self.expected()),
            distance_informed_accuracy: to_f64(self.distance_informed()),
            tie_sizes: self.tie_sizes,
            wall_time_seconds,
        }
    }
}

/// Per-run evaluation results. Field names are part of the CLI report
/// contract.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EvaluationReport {
    pub n_test: usize,
    pub n_untied: usize,
    pub n_tied: usize,
    pub n_untied_correct: usize,
    pub n_tied_with_truth: usize,
    pub optimistic_accuracy: f64,
    pub pessimistic_accuracy: f64,
    pub expected_accuracy: f64,
    pub distance_informed_accuracy: f64,
    /// Tie size histogram: candidate count -> number of ties.
    pub tie_sizes: BTreeMap<usize, usize>,
    /// Distance computation plus prediction time for the test set.
    pub wall_time_seconds: f64,
}

pub fn optimistic_accuracy(outcomes: &[Outcome]) -> Result<f64, EvalError> {
    let tally = PredictionTally::from_outcomes(outcomes)?;
    Ok(*tally.optimistic().numer() as f64 / *tally.optimistic().denom() as f64)
}

pub fn pessimistic_accuracy(outcomes: &[Outcome]) -> Result<f64, EvalError> {
    let tally = PredictionTally::from_outcomes(outcomes)?;
    Ok(*tally.pessimistic().numer() as f64 / *tally.pessimistic().denom() as f64)
}

pub fn expected_accuracy(outcomes: &[Outcome]) -> Result<f64, EvalError> {
    let tally = PredictionTally::from_outcomes(outcomes)?;
    Ok(*tally.expected().numer() as f64 / *tally.expected().denom() as f64)
}

pub fn distance_informed_accuracy(outcomes: &[Outcome]) -> Result<f64, EvalError> {
    let tally = PredictionTally::from_outcomes(outcomes)?;
    Ok(*tally.distance_informed().numer() as f64 / *tally.distance_informed().denom() as f64)
}

/// Estimates expected accuracy by resolving every tie with a seeded uniform
/// draw over its candidates, averaged over `trials` independent passes.
///
/// Verification oracle for [`expected_accuracy`]; the two must agree within
/// sampling error.
pub fn monte_carlo_accuracy(
    outcomes: &[Outcome],
    trials: usize,
    seed: u64,
) -> Result<f64, EvalError> {
    if outcomes.is_empty() {
        return Err(EvalError::Empty);
    }
    if trials == 0 {
        return Err(EvalError::ZeroTrials);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut correct_total: u64 = 0;
    for _ in 0..trials {
        for outcome in outcomes {
            let guessed_right = match &outcome.prediction {
                Prediction::Decided(label) => *label == outcome.truth,
                Prediction::Tied(candidates) => {
                    let pick = rng.random_range(0..candidates.len());
                    candidates[pick].label == outcome.truth
                }
            };
            if guessed_right {
                correct_total += 1;
            }
        }
    }
    Ok(correct_total as f64 / (trials as u64 * outcomes.len() as u64) as f64)
}

/// Which accuracy a row reports as its headline number.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TiePolicy {
    Optimistic,
    Pessimistic,
    Expected,
    DistanceInformed,
}

impl TiePolicy {
    pub fn select(&self, report: &EvaluationReport) -> f64 {
        match self {
            TiePolicy::Optimistic => report.optimistic_accuracy,
            TiePolicy::Pessimistic => report.pessimistic_accuracy,
            TiePolicy::Expected => report.expected_accuracy,
            TiePolicy::DistanceInformed => report.distance_informed_accuracy,
        }
    }
}

impl std::fmt::Display for TiePolicy {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            TiePolicy::Optimistic => f.write_str("optimistic"),
            TiePolicy::Pessimistic => f.write_str("pessimistic"),
            TiePolicy::Expected => f.write_str("expected"),
            TiePolicy::DistanceInformed => f.write_str("distance-informed"),
        }
    }
}

impl std::str::FromStr for TiePolicy {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "optimistic" => Ok(TiePolicy::Optimistic),
            "pessimistic" => Ok(TiePolicy::Pessimistic),
            "expected" => Ok(TiePolicy::Expected),
            "distance-informed" => Ok(TiePolicy::DistanceInformed),
            other => Err(format!(
                "unknown tie policy {other:?}, expected optimistic, pessimistic, expected, \
                 or distance-informed"
            )),
        }
    }
}

/// Classifies `test` against `train` and evaluates the predictions in one
/// step. The report's wall time covers classification only, not evaluation
/// bookkeeping.
pub fn evaluate_corpus(
    config: &KnnConfig,
    train: &Corpus,
    test: &Corpus,
    par: Parallelism,
) -> Result<EvaluationReport, Error> {
    let run = classify_corpus(config, train, &test.texts(), par)?;
    let outcomes = pair_with_truth(run.predictions, &test.labels());
    let tally = PredictionTally::from_outcomes(&outcomes)?;
    Ok(tally.into_report(run.wall_time_seconds))
}
