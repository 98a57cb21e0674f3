//! Parameter tuning: pick the K-schedule whose ratings predict outcomes best.
//!
//! For every candidate configuration (a K triple crossed with a cutoff
//! rule), the match log is replayed, each non-draw game becomes a labeled
//! point (pre-match rating difference, did player 1 win), a logistic model
//! is fitted on the chronologically first 80% and scored by F1 on the last
//! 20%, and configurations are ranked by that held-out F1. Ties resolve to
//! the earliest configuration in declaration order so the selection is
//! reproducible.
//!
//! Player orientation is randomized per emitted point (seeded), so a log
//! that systematically lists winners first cannot fake predictive power.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::data::{percentile_cutoff, DataError, GameCountDistribution, MatchRecord};
use crate::elo::{replay, EloConfig, EloError, KSchedule, MatchOutcome};
use crate::logit::{
    evaluate_metrics, fit_logistic, ClassificationMetrics, FitError, LabeledPoint, LogisticModel,
};
use crate::rng::derive_stream;

/// Classification threshold used throughout tuning.
pub const PREDICTION_THRESHOLD: f64 = 0.5;
/// A dataset must yield at least this many non-draw points.
pub const MIN_NON_DRAW_RECORDS: usize = 10;
/// Absolute rating-difference bucket edges: `[0,30]`, `(30,60]`,
/// `(60,100]`, `(100,200]`, `(200,500]`, `(500,10000]`.
pub const DEFAULT_BUCKET_EDGES: [f64; 7] = [0.0, 30.0, 60.0, 100.0, 200.0, 500.0, 10000.0];

const SALT_ORIENTATION: u64 = 0x6f72_6965; // "orie"

#[derive(Debug, Error, PartialEq)]
pub enum TuneError {
    #[error("cutoffs must resolve to strictly increasing thresholds, got ({0}, {1})")]
    DegenerateCutoffs(u32, u32),
    #[error("need at least {MIN_NON_DRAW_RECORDS} non-draw records, got {0}")]
    InsufficientData(usize),
    #[error("parameter grid is empty")]
    EmptyGrid,
    #[error("every configuration in the grid failed to evaluate")]
    AllEvaluationsFailed,
    #[error("bucket edges must be finite, strictly ascending, and at least two")]
    BadBucketEdges,
    #[error(transparent)]
    Data(#[from] DataError),
    #[error(transparent)]
    Elo(#[from] EloError),
    #[error(transparent)]
    Fit(#[from] FitError),
}

/// How the game-count cutoffs `(n_c1, n_c2)` are chosen: fixed thresholds,
/// or percentiles of the per-player game-count distribution (resolved as
/// `percentile + 1`).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CutoffSpec {
    Fixed(u32, u32),
    Quantile(f64, f64),
}

/// The candidate space: every K triple crossed with every cutoff rule.
/// The initial rating and scale are held fixed across the grid.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ParamGrid {
    pub k_triples: Vec<[f64; 3]>,
    #[serde(rename = "cutoffs")]
    pub cutoff_specs: Vec<CutoffSpec>,
    #[serde(default = "default_initial_rating")]
    pub initial_rating: f64,
    #[serde(default = "default_scale")]
    pub scale: f64,
}

fn default_initial_rating() -> f64 {
    crate::elo::DEFAULT_INITIAL_RATING
}

fn default_scale() -> f64 {
    crate::elo::DEFAULT_SCALE
}

impl ParamGrid {
    /// The standard comparison grid: four K triples (a chess-style baseline,
    /// a constant-K control, a halved variant, and a doubled variant) crossed
    /// with one fixed and two quantile cutoff rules.
    pub fn baseline() -> Self {
        Self {
            k_triples: vec![
                [60.0, 30.0, 16.0],
                [30.0, 30.0, 30.0],
                [30.0, 16.0, 8.0],
                [100.0, 50.0, 25.0],
            ],
            cutoff_specs: vec![
                CutoffSpec::Fixed(5, 10),
                CutoffSpec::Quantile(10.0, 25.0),
                CutoffSpec::Quantile(25.0, 50.0),
            ],
            initial_rating: default_initial_rating(),
            scale: default_scale(),
        }
    }
}

/// One scored configuration.
#[derive(Debug, Clone, PartialEq)]
pub struct ConfigEvaluation {
    pub config: EloConfig,
    pub resolved_cutoffs: (u32, u32),
    pub model: LogisticModel,
    pub metrics: ClassificationMetrics,
    /// Position in declaration order (k-triple major, cutoff minor).
    pub grid_index: usize,
}

/// Accuracy and F1 within one band of absolute rating difference.
/// `accuracy`/`f1` are `None` for empty buckets.
#[derive(Debug, Clone, PartialEq)]
pub struct BucketRow {
    pub lo: f64,
    pub hi: f64,
    pub games: usize,
    pub accuracy: Option<f64>,
    pub f1: Option<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct BucketReport {
    pub rows: Vec<BucketRow>,
}

/// Resolves a cutoff rule against the game-count distribution.
pub fn resolve_cutoffs(
    spec: &CutoffSpec,
    dist: &GameCountDistribution,
) -> Result<(u32, u32), TuneError> {
    let (first, second) = match *spec {
        CutoffSpec::Fixed(a, b) => (a, b),
        CutoffSpec::Quantile(k1, k2) => {
            (percentile_cutoff(dist, k1)?, percentile_cutoff(dist, k2)?)
        }
    };
    if first >= second {
        return Err(TuneError::DegenerateCutoffs(first, second));
    }
    Ok((first, second))
}

/// Replays the log under `config` and turns each non-draw record into a
/// labeled point: x is the pre-match rating difference, y whether player 1
/// won, with the orientation flipped with probability one half (seeded).
/// Returns the chronological 80/20 train/test split.
pub fn build_dataset(
    records: &[MatchRecord],
    config: &EloConfig,
    seed: u64,
) -> Result<(Vec<LabeledPoint>, Vec<LabeledPoint>), TuneError> {
    let replayed = replay(records, config)?;
    let mut rng = derive_stream(seed, 0, SALT_ORIENTATION);
    let mut points = Vec::with_capacity(records.len());
    for (record, entry) in records.iter().zip(&replayed.entries) {
        let won = match record.outcome {
            MatchOutcome::WinP1 => true,
            MatchOutcome::WinP2 => false,
            MatchOutcome::Draw => continue,
        };
        let diff = entry.pre_rating_1 - entry.pre_rating_2;
        let point = if rng.next_bool() {
            LabeledPoint::new(-diff, !won)
        } else {
            LabeledPoint::new(diff, won)
        };
        points.push(point);
    }
    if points.len() < MIN_NON_DRAW_RECORDS {
        return Err(TuneError::InsufficientData(points.len()));
    }
    let train_len = points.len() * 4 / 5;
    let test = points.split_off(train_len);
    Ok((points, test))
}

/// Builds the dataset, fits on train, and scores on test at threshold 0.5.
/// Deterministic given `(records, config, seed)`.
pub fn evaluate_config(
    records: &[MatchRecord],
    config: &EloConfig,
    seed: u64,
) -> Result<ConfigEvaluation, TuneError> {
    let (train, test) = build_dataset(records, config, seed)?;
    let model = fit_logistic(&train)?;
    let metrics = evaluate_metrics(&model, &test, PREDICTION_THRESHOLD)?;
    Ok(ConfigEvaluation {
        config: *config,
        resolved_cutoffs: (config.schedule().n_c1(), config.schedule().n_c2()),
        model,
        metrics,
        grid_index: 0,
    })
}

/// Evaluates every configuration in the grid and returns them ranked by F1
/// descending, ties broken by declaration order. Configurations that fail
/// to evaluate (degenerate cutoffs, separation, ...) are excluded from the
/// ranking; it is an error only if all of them fail.
pub fn grid_search(
    records: &[MatchRecord],
    grid: &ParamGrid,
    seed: u64,
) -> Result<Vec<ConfigEvaluation>, TuneError> {
    if grid.k_triples.is_empty() || grid.cutoff_specs.is_empty() {
        return Err(TuneError::EmptyGrid);
    }
    let dist = GameCountDistribution::from_records(records);
    let mut evaluations = Vec::new();
    for (triple_index, triple) in grid.k_triples.iter().enumerate() {
        for (cutoff_index, spec) in grid.cutoff_specs.iter().enumerate() {
            let grid_index = triple_index * grid.cutoff_specs.len() + cutoff_index;
            let outcome = resolve_cutoffs(spec, &dist)
                .and_then(|(n_c1, n_c2)| {
                    Ok(KSchedule::new(triple[0], triple[1], triple[2], n_c1, n_c2)?)
                })
                .and_then(|schedule| Ok(EloConfig::new(grid.initial_rating, grid.scale, schedule)?))
                .and_then(|config| evaluate_config(records, &config, seed));
            if let Ok(mut evaluation) = outcome {
                evaluation.grid_index = grid_index;
                evaluations.push(evaluation);
            }
        }
    }
    if evaluations.is_empty() {
        return Err(TuneError::AllEvaluationsFailed);
    }
    evaluations.sort_by(|a, b| {
        b.metrics
            .f1
            .partial_cmp(&a.metrics.f1)
            .expect("F1 is never NaN")
            .then(a.grid_index.cmp(&b.grid_index))
    });
    Ok(evaluations)
}

/// Splits the test points into bands of absolute rating difference and
/// scores the model inside each band. The first bucket is closed on both
/// ends, later buckets are half-open `(lo, hi]`; points outside the edge
/// range are absorbed by the first or last bucket so the rows always
/// partition the input.
pub fn bucket_analysis(
    model: &LogisticModel,
    test: &[LabeledPoint],
    edges: &[f64],
) -> Result<BucketReport, TuneError> {
    if edges.len() < 2
        || edges.iter().any(|e| !e.is_finite())
        || edges.windows(2).any(|w| w[0] >= w[1])
    {
        return Err(TuneError::BadBucketEdges);
    }
    let bucket_count = edges.len() - 1;
    let mut grouped: Vec<Vec<LabeledPoint>> = vec![Vec::new(); bucket_count];
    for &point in test {
        let magnitude = point.x.abs();
        let mut bucket = bucket_count - 1;
        for i in 0..bucket_count {
            if magnitude <= edges[i + 1] {
                bucket = i;
                break;
            }
        }
        grouped[bucket].push(point);
    }
    let mut rows = Vec::with_capacity(bucket_count);
    for (i, points) in grouped.iter().enumerate() {
        let (accuracy, f1) = if points.is_empty() {
            (None, None)
        } else {
            let metrics = evaluate_metrics(model, points, PREDICTION_THRESHOLD)?;
            (Some(metrics.accuracy), Some(metrics.f1))
        };
        rows.push(BucketRow {
            lo: edges[i],
            hi: edges[i + 1],
            games: points.len(),
            accuracy,
            f1,
        });
    }
    Ok(BucketReport { rows })
}
