//! Elo rating engine with an experience-dependent K-factor.
//!
//! Ratings follow the classic Elo update: after a match the winner gains and
//! the loser loses `K * (actual - expected)` points, where the expected score
//! is a logistic function of the rating difference. The K-factor is not a
//! single constant but a step function of how many games a player has played,
//! so fresh players converge quickly while veterans stay stable.
//!
//! The module is deliberately small and pure: [`expected_score`], [`k_for`]
//! and [`apply_match`] are stateless, and [`replay`] folds them over a
//! chronological match log.

use std::collections::{BTreeMap, HashMap};

use serde::Serialize;
use thiserror::Error;

use crate::data::MatchRecord;

/// Player identifiers are opaque strings (bot names, account ids, ...).
pub type PlayerId = String;

/// Conventional starting rating for unseen players.
pub const DEFAULT_INITIAL_RATING: f64 = 1000.0;
/// Conventional logistic scale: this many rating points correspond to 10:1
/// expected odds.
pub const DEFAULT_SCALE: f64 = 400.0;

#[derive(Debug, Error, PartialEq)]
pub enum EloError {
    #[error("rating inputs must be finite")]
    NonFiniteRating,
    #[error("scale must be positive and finite, got {0}")]
    InvalidScale(f64),
    #[error("K values must satisfy k_a >= k_b >= k_c > 0, got ({0}, {1}, {2})")]
    InvalidKValues(f64, f64, f64),
    #[error("game-count cutoffs must satisfy n_c1 < n_c2, got ({0}, {1})")]
    InvalidCutoffs(u32, u32),
    #[error("initial rating must be finite")]
    InvalidInitialRating,
    #[error("a match requires two distinct players, got '{0}' on both sides")]
    SamePlayer(String),
    #[error("records out of order at index {0}: expected ascending (timestamp, game_id)")]
    UnsortedRecords(usize),
}

/// Step schedule for the K-factor: `k_a` while `games <= n_c1`, `k_b` while
/// `n_c1 < games <= n_c2`, and `k_c` afterwards.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct KSchedule {
    k_a: f64,
    k_b: f64,
    k_c: f64,
    n_c1: u32,
    n_c2: u32,
}

impl KSchedule {
    /// Validates `k_a >= k_b >= k_c > 0` and `n_c1 < n_c2`.
    pub fn new(k_a: f64, k_b: f64, k_c: f64, n_c1: u32, n_c2: u32) -> Result<Self, EloError> {
        if !(k_a.is_finite() && k_b.is_finite() && k_c.is_finite())
            || !(k_a >= k_b && k_b >= k_c && k_c > 0.0)
        {
            return Err(EloError::InvalidKValues(k_a, k_b, k_c));
        }
        if n_c1 >= n_c2 {
            return Err(EloError::InvalidCutoffs(n_c1, n_c2));
        }
        Ok(Self {
            k_a,
            k_b,
            k_c,
            n_c1,
            n_c2,
        })
    }

    pub fn k_a(&self) -> f64 {
        self.k_a
    }

    pub fn k_b(&self) -> f64 {
        self.k_b
    }

    pub fn k_c(&self) -> f64 {
        self.k_c
    }

    pub fn n_c1(&self) -> u32 {
        self.n_c1
    }

    pub fn n_c2(&self) -> u32 {
        self.n_c2
    }
}

/// Full parameter set of the rating engine.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EloConfig {
    initial_rating: f64,
    scale: f64,
    schedule: KSchedule,
}

impl EloConfig {
    pub fn new(initial_rating: f64, scale: f64, schedule: KSchedule) -> Result<Self, EloError> {
        if !initial_rating.is_finite() {
            return Err(EloError::InvalidInitialRating);
        }
        if !scale.is_finite() || scale <= 0.0 {
            return Err(EloError::InvalidScale(scale));
        }
        Ok(Self {
            initial_rating,
            scale,
            schedule,
        })
    }

    /// Config with the conventional 1000 starting rating and 400 scale.
    pub fn with_defaults(schedule: KSchedule) -> Self {
        Self {
            initial_rating: DEFAULT_INITIAL_RATING,
            scale: DEFAULT_SCALE,
            schedule,
        }
    }

    pub fn initial_rating(&self) -> f64 {
        self.initial_rating
    }

    pub fn scale(&self) -> f64 {
        self.scale
    }

    pub fn schedule(&self) -> &KSchedule {
        &self.schedule
    }
}

/// A player's rating state: current rating and games played so far.
#[derive(Debug, Clone, PartialEq)]
pub struct PlayerState {
    pub player_id: PlayerId,
    pub rating: f64,
    pub games_played: u32,
}

impl PlayerState {
    /// Fresh player at the configured initial rating with zero games.
    pub fn fresh(player_id: impl Into<PlayerId>, config: &EloConfig) -> Self {
        Self {
            player_id: player_id.into(),
            rating: config.initial_rating,
            games_played: 0,
        }
    }
}

/// Match result from player 1's perspective.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum MatchOutcome {
    WinP1,
    WinP2,
    Draw,
}

impl MatchOutcome {
    /// Actual scores `(S_1, S_2)`; they always sum to 1.
    pub fn scores(self) -> (f64, f64) {
        match self {
            MatchOutcome::WinP1 => (1.0, 0.0),
            MatchOutcome::WinP2 => (0.0, 1.0),
            MatchOutcome::Draw => (0.5, 0.5),
        }
    }
}

/// Everything recorded about one applied match: ratings before and after,
/// player 1's expected score, and the K each side was updated with.
#[derive(Debug, Clone, PartialEq)]
pub struct HistoryEntry {
    pub game_id: String,
    pub pre_rating_1: f64,
    pub pre_rating_2: f64,
    pub post_rating_1: f64,
    pub post_rating_2: f64,
    pub expected_score_1: f64,
    pub k_applied_1: f64,
    pub k_applied_2: f64,
}

/// Expected score of the first player: `1 / (1 + 10^((rating_b - rating_a) / scale))`.
///
/// Always in `(0, 1)` for finite inputs, and complementary:
/// `expected_score(a, b, s) + expected_score(b, a, s) == 1`.
pub fn expected_score(rating_a: f64, rating_b: f64, scale: f64) -> Result<f64, EloError> {
    if !rating_a.is_finite() || !rating_b.is_finite() {
        return Err(EloError::NonFiniteRating);
    }
    if !scale.is_finite() || scale <= 0.0 {
        return Err(EloError::InvalidScale(scale));
    }
    Ok(1.0 / (1.0 + 10f64.powf((rating_b - rating_a) / scale)))
}

/// K-factor for a player who has completed `games_played` games.
pub fn k_for(schedule: &KSchedule, games_played: u32) -> f64 {
    if games_played <= schedule.n_c1 {
        schedule.k_a
    } else if games_played <= schedule.n_c2 {
        schedule.k_b
    } else {
        schedule.k_c
    }
}

/// Applies one match between two players and returns their updated states
/// plus the history entry describing the update.
///
/// Each side is updated with its own K, looked up from that player's
/// pre-match game count. When both K values are equal the update conserves
/// the rating sum.
pub fn apply_match(
    state_1: &PlayerState,
    state_2: &PlayerState,
    outcome: MatchOutcome,
    config: &EloConfig,
    game_id: &str,
) -> Result<(PlayerState, PlayerState, HistoryEntry), EloError> {
    if state_1.player_id == state_2.player_id {
        return Err(EloError::SamePlayer(state_1.player_id.clone()));
    }
    let expected_1 = expected_score(state_1.rating, state_2.rating, config.scale)?;
    let expected_2 = 1.0 - expected_1;
    let (score_1, score_2) = outcome.scores();
    let k_1 = k_for(&config.schedule, state_1.games_played);
    let k_2 = k_for(&config.schedule, state_2.games_played);

    let post_1 = state_1.rating + k_1 * (score_1 - expected_1);
    let post_2 = state_2.rating + k_2 * (score_2 - expected_2);

    let entry = HistoryEntry {
        game_id: game_id.to_string(),
        pre_rating_1: state_1.rating,
        pre_rating_2: state_2.rating,
        post_rating_1: post_1,
        post_rating_2: post_2,
        expected_score_1: expected_1,
        k_applied_1: k_1,
        k_applied_2: k_2,
    };
    let next_1 = PlayerState {
        player_id: state_1.player_id.clone(),
        rating: post_1,
        games_played: state_1.games_played + 1,
    };
    let next_2 = PlayerState {
        player_id: state_2.player_id.clone(),
        rating: post_2,
        games_played: state_2.games_played + 1,
    };
    Ok((next_1, next_2, entry))
}

/// Result of replaying a match log: one history entry per record, the final
/// state of every player, and each player's rating trajectory.
///
/// A trajectory starts with the initial rating at index 0 and appends the
/// post-match rating after each of the player's games, so `trajectory[i]` is
/// the rating after `i` games.
#[derive(Debug, Clone, PartialEq)]
pub struct ReplayResult {
    pub entries: Vec<HistoryEntry>,
    pub final_states: BTreeMap<PlayerId, PlayerState>,
    pub trajectories: BTreeMap<PlayerId, Vec<f64>>,
}

/// Replays a chronological match log under a config.
///
/// Records must already be sorted by `(timestamp, game_id)` ascending;
/// anything else is rejected so two replays of the same input are always
/// bit-identical. Unseen players are registered at the initial rating with
/// zero games.
pub fn replay(records: &[MatchRecord], config: &EloConfig) -> Result<ReplayResult, EloError> {
    for (i, pair) in records.windows(2).enumerate() {
        let earlier = (pair[0].timestamp, pair[0].game_id.as_str());
        let later = (pair[1].timestamp, pair[1].game_id.as_str());
        if later <= earlier {
            return Err(EloError::UnsortedRecords(i + 1));
        }
    }

    let mut index: HashMap<String, usize> = HashMap::new();
    let mut states: Vec<PlayerState> = Vec::new();
    let mut trajectories: Vec<Vec<f64>> = Vec::new();
    let mut entries = Vec::with_capacity(records.len());

    fn slot_for(
        id: &str,
        initial_rating: f64,
        index: &mut HashMap<String, usize>,
        states: &mut Vec<PlayerState>,
        trajectories: &mut Vec<Vec<f64>>,
    ) -> usize {
        if let Some(&slot) = index.get(id) {
            return slot;
        }
        let slot = states.len();
        states.push(PlayerState {
            player_id: id.to_string(),
            rating: initial_rating,
            games_played: 0,
        });
        trajectories.push(vec![initial_rating]);
        index.insert(id.to_string(), slot);
        slot
    }

    for record in records {
        if record.player_1 == record.player_2 {
            return Err(EloError::SamePlayer(record.player_1.clone()));
        }
        let slot_1 = slot_for(
            &record.player_1,
            config.initial_rating,
            &mut index,
            &mut states,
            &mut trajectories,
        );
        let slot_2 = slot_for(
            &record.player_2,
            config.initial_rating,
            &mut index,
            &mut states,
            &mut trajectories,
        );
        let (next_1, next_2, entry) = apply_match(
            &states[slot_1],
            &states[slot_2],
            record.outcome,
            config,
            &record.game_id,
        )?;
        trajectories[slot_1].push(next_1.rating);
        trajectories[slot_2].push(next_2.rating);
        states[slot_1] = next_1;
        states[slot_2] = next_2;
        entries.push(entry);
    }

    let mut final_states = BTreeMap::new();
    let mut trajectory_map = BTreeMap::new();
    for (state, trajectory) in states.into_iter().zip(trajectories) {
        trajectory_map.insert(state.player_id.clone(), trajectory);
        final_states.insert(state.player_id.clone(), state);
    }
    Ok(ReplayResult {
        entries,
        final_states,
        trajectories: trajectory_map,
    })
}
