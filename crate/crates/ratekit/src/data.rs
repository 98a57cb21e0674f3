//! Match-log files, game-count distributions, and rating summaries.
//!
//! The on-disk match format is a plain CSV with the exact header
//! `game_id,timestamp,player_1,player_2,outcome`. Timestamps are integer
//! milliseconds, outcomes are `1` (player 1 won), `2` (player 2 won) or `D`
//! (draw). Identifiers must not contain commas, so no quoting is needed and
//! the files stay trivially diffable.

use std::collections::{BTreeMap, HashSet};
use std::fmt;

use thiserror::Error;

use crate::elo::{MatchOutcome, PlayerId, PlayerState};

/// Exact header line of a match CSV.
pub const MATCH_CSV_HEADER: &str = "game_id,timestamp,player_1,player_2,outcome";
/// Exact header line of a final-ratings CSV.
pub const RATINGS_CSV_HEADER: &str = "player_id,rating,games_played";
/// Exact header line of a trajectory CSV.
pub const TRAJECTORY_CSV_HEADER: &str = "player_id,game_index,rating";

#[derive(Debug, Error, PartialEq)]
pub enum DataError {
    #[error("line {line}: {kind}")]
    Parse { line: usize, kind: ParseErrorKind },
    #[error("game-count distribution is empty")]
    EmptyDistribution,
    #[error("game counts must be at least 1")]
    ZeroGameCount,
    #[error("percentile must lie strictly between 0 and 100, got {0}")]
    InvalidPercentile(f64),
    #[error("cannot summarize an empty rating list")]
    EmptyRatings,
    #[error("ratings must be finite")]
    NonFiniteRatings,
}

#[derive(Debug, PartialEq, Eq)]
pub enum ParseErrorKind {
    MissingHeader,
    WrongHeader,
    WrongColumnCount { found: usize },
    EmptyField { column: &'static str },
    BadTimestamp { value: String },
    UnknownOutcome { token: String },
    SelfMatch { player: String },
    DuplicateGameId { game_id: String },
}

impl fmt::Display for ParseErrorKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ParseErrorKind::MissingHeader => write!(f, "missing header line"),
            ParseErrorKind::WrongHeader => {
                write!(f, "header must be exactly '{MATCH_CSV_HEADER}'")
            }
            ParseErrorKind::WrongColumnCount { found } => {
                write!(f, "expected 5 columns, found {found}")
            }
            ParseErrorKind::EmptyField { column } => write!(f, "column '{column}' is empty"),
            ParseErrorKind::BadTimestamp { value } => {
                write!(f, "timestamp '{value}' is not an integer")
            }
            ParseErrorKind::UnknownOutcome { token } => {
                write!(f, "outcome '{token}' is not one of 1, 2, D")
            }
            ParseErrorKind::SelfMatch { player } => {
                write!(f, "player '{player}' appears on both sides")
            }
            ParseErrorKind::DuplicateGameId { game_id } => {
                write!(f, "duplicate game_id '{game_id}'")
            }
        }
    }
}

/// One chronological match observation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MatchRecord {
    pub game_id: String,
    /// Milliseconds since epoch; integer so ordering is unambiguous.
    pub timestamp: i64,
    pub player_1: PlayerId,
    pub player_2: PlayerId,
    pub outcome: MatchOutcome,
}

fn outcome_token(outcome: MatchOutcome) -> &'static str {
    match outcome {
        MatchOutcome::WinP1 => "1",
        MatchOutcome::WinP2 => "2",
        MatchOutcome::Draw => "D",
    }
}

/// Parses a match CSV, returning records in file order.
///
/// Errors carry the 1-based line number (the header is line 1).
pub fn parse_matches(text: &str) -> Result<Vec<MatchRecord>, DataError> {
    let mut lines = text.lines().enumerate();
    let (_, header) = lines.next().ok_or(DataError::Parse {
        line: 1,
        kind: ParseErrorKind::MissingHeader,
    })?;
    if header.trim_end_matches('\r') != MATCH_CSV_HEADER {
        return Err(DataError::Parse {
            line: 1,
            kind: ParseErrorKind::WrongHeader,
        });
    }

    let mut records = Vec::new();
    let mut seen_ids: HashSet<&str> = HashSet::new();
    for (idx, raw_line) in lines {
        let line = idx + 1;
        let row = raw_line.trim_end_matches('\r');
        if row.is_empty() {
            continue;
        }
        let fields: Vec<&str> = row.split(',').collect();
        if fields.len() != 5 {
            return Err(DataError::Parse {
                line,
                kind: ParseErrorKind::WrongColumnCount {
                    found: fields.len(),
                },
            });
        }
        let columns = ["game_id", "timestamp", "player_1", "player_2", "outcome"];
        for (field, column) in fields.iter().zip(columns) {
            if field.is_empty() {
                return Err(DataError::Parse {
                    line,
                    kind: ParseErrorKind::EmptyField { column },
                });
            }
        }
        let timestamp: i64 = fields[1].parse().map_err(|_| DataError::Parse {
            line,
            kind: ParseErrorKind::BadTimestamp {
                value: fields[1].to_string(),
            },
        })?;
        let outcome = match fields[4] {
            "1" => MatchOutcome::WinP1,
            "2" => MatchOutcome::WinP2,
            "D" => MatchOutcome::Draw,
            token => {
                return Err(DataError::Parse {
                    line,
                    kind: ParseErrorKind::UnknownOutcome {
                        token: token.to_string(),
                    },
                })
            }
        };
        if fields[2] == fields[3] {
            return Err(DataError::Parse {
                line,
                kind: ParseErrorKind::SelfMatch {
                    player: fields[2].to_string(),
                },
            });
        }
        if !seen_ids.insert(fields[0]) {
            return Err(DataError::Parse {
                line,
                kind: ParseErrorKind::DuplicateGameId {
                    game_id: fields[0].to_string(),
                },
            });
        }
        records.push(MatchRecord {
            game_id: fields[0].to_string(),
            timestamp,
            player_1: fields[2].to_string(),
            player_2: fields[3].to_string(),
            outcome,
        });
    }
    Ok(records)
}

/// Writes records as a match CSV (LF line endings, trailing newline).
pub fn write_matches(records: &[MatchRecord]) -> String {
    let mut out = String::with_capacity(32 * (records.len() + 1));
    out.push_str(MATCH_CSV_HEADER);
    out.push('\n');
    for r in records {
        out.push_str(&format!(
            "{},{},{},{},{}\n",
            r.game_id,
            r.timestamp,
            r.player_1,
            r.player_2,
            outcome_token(r.outcome)
        ));
    }
    out
}

/// Multiset of per-player total game counts.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GameCountDistribution {
    counts: Vec<u32>,
}

impl GameCountDistribution {
    /// Builds from raw counts; every count must be at least 1.
    pub fn from_counts(counts: Vec<u32>) -> Result<Self, DataError> {
        if counts.contains(&0) {
            return Err(DataError::ZeroGameCount);
        }
        Ok(Self { counts })
    }

    /// Tallies how many games each player in the records appears in.
    pub fn from_records(records: &[MatchRecord]) -> Self {
        let mut per_player: BTreeMap<&str, u32> = BTreeMap::new();
        for r in records {
            *per_player.entry(&r.player_1).or_insert(0) += 1;
            *per_player.entry(&r.player_2).or_insert(0) += 1;
        }
        Self {
            counts: per_player.into_values().collect(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.counts.is_empty()
    }

    pub fn len(&self) -> usize {
        self.counts.len()
    }

    pub fn counts(&self) -> &[u32] {
        &self.counts
    }
}

/// Index of the nearest-rank percentile in a sorted list of `n` items:
/// the smallest 1-based rank r with 100*r >= percent*n, clamped to n.
fn nearest_rank(n: usize, percent: f64) -> usize {
    debug_assert!(n > 0);
    let target = percent * n as f64;
    let mut rank = 1usize;
    while rank < n && (rank as f64) * 100.0 < target {
        rank += 1;
    }
    rank
}

/// Game-count threshold `q_percent + 1`, where `q_percent` is the
/// nearest-rank percentile of the distribution.
pub fn percentile_cutoff(dist: &GameCountDistribution, percent: f64) -> Result<u32, DataError> {
    if dist.is_empty() {
        return Err(DataError::EmptyDistribution);
    }
    if !(percent > 0.0 && percent < 100.0) {
        return Err(DataError::InvalidPercentile(percent));
    }
    let mut sorted = dist.counts.clone();
    sorted.sort_unstable();
    let rank = nearest_rank(sorted.len(), percent);
    Ok(sorted[rank - 1] + 1)
}

/// Order statistics of a rating population.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RatingSummary {
    pub min: f64,
    pub p10: f64,
    pub p25: f64,
    pub p50: f64,
    pub mean: f64,
    pub p75: f64,
    pub p90: f64,
    pub max: f64,
}

/// Summary statistics of a non-empty rating list; percentiles are
/// nearest-rank, the mean is arithmetic.
pub fn summary_stats(ratings: &[f64]) -> Result<RatingSummary, DataError> {
    if ratings.is_empty() {
        return Err(DataError::EmptyRatings);
    }
    if ratings.iter().any(|r| !r.is_finite()) {
        return Err(DataError::NonFiniteRatings);
    }
    let mut sorted = ratings.to_vec();
    sorted.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let n = sorted.len();
    let at = |percent: f64| sorted[nearest_rank(n, percent) - 1];
    Ok(RatingSummary {
        min: sorted[0],
        p10: at(10.0),
        p25: at(25.0),
        p50: at(50.0),
        mean: sorted.iter().sum::<f64>() / n as f64,
        p75: at(75.0),
        p90: at(90.0),
        max: sorted[n - 1],
    })
}

/// Final ratings as CSV, players in id order.
pub fn write_ratings_csv(states: &BTreeMap<PlayerId, PlayerState>) -> String {
    let mut out = String::new();
    out.push_str(RATINGS_CSV_HEADER);
    out.push('\n');
    for (id, state) in states {
        out.push_str(&format!("{},{},{}\n", id, state.rating, state.games_played));
    }
    out
}

/// Rating trajectories as CSV; `game_index` 0 is the initial rating and
/// index `i` is the rating after the player's i-th game.
pub fn write_trajectories_csv(trajectories: &BTreeMap<PlayerId, Vec<f64>>) -> String {
    let mut out = String::new();
    out.push_str(TRAJECTORY_CSV_HEADER);
    out.push('\n');
    for (id, ratings) in trajectories {
        for (i, rating) in ratings.iter().enumerate() {
            out.push_str(&format!("{id},{i},{rating}\n"));
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::SplitMix64;

    #[test]
    fn parses_a_minimal_file() {
        let text = "game_id,timestamp,player_1,player_2,outcome\ng1,1700000000000,alice,bob,1\n";
        let records = parse_matches(text).unwrap();
        assert_eq!(records.len(), 1);
        assert_eq!(records[0].game_id, "g1");
        assert_eq!(records[0].timestamp, 1_700_000_000_000);
        assert_eq!(records[0].player_1, "alice");
        assert_eq!(records[0].player_2, "bob");
        assert_eq!(records[0].outcome, MatchOutcome::WinP1);
    }

    #[test]
    fn rejects_unknown_outcome_with_line_number() {
        let text = "game_id,timestamp,player_1,player_2,outcome\ng1,1,a,b,1\ng2,2,a,b,X\n";
        let err = parse_matches(text).unwrap_err();
        assert_eq!(
            err,
            DataError::Parse {
                line: 3,
                kind: ParseErrorKind::UnknownOutcome { token: "X".into() }
            }
        );
    }

    #[test]
    fn rejects_self_match() {
        let text = "game_id,timestamp,player_1,player_2,outcome\ng2,1700000001000,carol,carol,2\n";
        let err = parse_matches(text).unwrap_err();
        assert_eq!(
            err,
            DataError::Parse {
                line: 2,
                kind: ParseErrorKind::SelfMatch {
                    player: "carol".into()
                }
            }
        );
    }

    #[test]
    fn rejects_bad_header_and_column_counts_and_timestamps() {
        assert!(matches!(
            parse_matches("id,ts,p1,p2,res\n"),
            Err(DataError::Parse {
                line: 1,
                kind: ParseErrorKind::WrongHeader
            })
        ));
        let missing = "game_id,timestamp,player_1,player_2,outcome\ng1,1,a,b\n";
        assert!(matches!(
            parse_matches(missing),
            Err(DataError::Parse {
                line: 2,
                kind: ParseErrorKind::WrongColumnCount { found: 4 }
            })
        ));
        let bad_ts = "game_id,timestamp,player_1,player_2,outcome\ng1,soon,a,b,1\n";
        assert!(matches!(
            parse_matches(bad_ts),
            Err(DataError::Parse {
                line: 2,
                kind: ParseErrorKind::BadTimestamp { .. }
            })
        ));
    }

    #[test]
    fn rejects_duplicate_game_ids() {
        let text = "game_id,timestamp,player_1,player_2,outcome\ng1,1,a,b,1\ng1,2,c,d,2\n";
        assert!(matches!(
            parse_matches(text),
            Err(DataError::Parse {
                line: 3,
                kind: ParseErrorKind::DuplicateGameId { .. }
            })
        ));
    }

    #[test]
    fn round_trips_random_record_sets() {
        let mut rng = SplitMix64::new(41);
        let names = ["ana", "ben", "cho", "dee"];
        for _ in 0..20 {
            let n = 1 + rng.next_below(40);
            let mut records = Vec::new();
            for i in 0..n {
                let p1 = names[rng.next_below(4) as usize];
                let mut p2 = names[rng.next_below(4) as usize];
                while p2 == p1 {
                    p2 = names[rng.next_below(4) as usize];
                }
                let outcome = match rng.next_below(3) {
                    0 => MatchOutcome::WinP1,
                    1 => MatchOutcome::WinP2,
                    _ => MatchOutcome::Draw,
                };
                records.push(MatchRecord {
                    game_id: format!("g{i:05}"),
                    timestamp: i as i64 * 1000,
                    player_1: p1.into(),
                    player_2: p2.into(),
                    outcome,
                });
            }
            let parsed = parse_matches(&write_matches(&records)).unwrap();
            assert_eq!(parsed, records);
        }
    }

    #[test]
    fn cutoff_on_constant_counts_is_count_plus_one() {
        let dist = GameCountDistribution::from_counts(vec![7; 13]).unwrap();
        for k in [1.0, 10.0, 25.0, 50.0, 99.0] {
            assert_eq!(percentile_cutoff(&dist, k).unwrap(), 8);
        }
    }

    #[test]
    fn cutoff_on_one_to_hundred_at_ten_percent() {
        let dist = GameCountDistribution::from_counts((1..=100).collect()).unwrap();
        assert_eq!(percentile_cutoff(&dist, 10.0).unwrap(), 11);
        assert_eq!(percentile_cutoff(&dist, 25.0).unwrap(), 26);
        assert_eq!(percentile_cutoff(&dist, 50.0).unwrap(), 51);
    }

    #[test]
    fn cutoff_uses_nearest_rank() {
        // ceil(0.25 * 6) = 2, so the 25th percentile of these six counts is 8.
        let dist = GameCountDistribution::from_counts(vec![4, 8, 15, 16, 23, 42]).unwrap();
        assert_eq!(percentile_cutoff(&dist, 25.0).unwrap(), 9);
    }

    #[test]
    fn cutoff_rejects_empty_and_bad_percentiles() {
        let empty = GameCountDistribution::from_counts(vec![]).unwrap();
        assert_eq!(
            percentile_cutoff(&empty, 10.0),
            Err(DataError::EmptyDistribution)
        );
        let dist = GameCountDistribution::from_counts(vec![1, 2, 3]).unwrap();
        assert_eq!(
            percentile_cutoff(&dist, 0.0),
            Err(DataError::InvalidPercentile(0.0))
        );
        assert_eq!(
            percentile_cutoff(&dist, 100.0),
            Err(DataError::InvalidPercentile(100.0))
        );
    }

    #[test]
    fn cutoff_is_monotone_in_percentile() {
        let mut rng = SplitMix64::new(77);
        for _ in 0..50 {
            let n = 1 + rng.next_below(60) as usize;
            let counts: Vec<u32> = (0..n).map(|_| 1 + rng.next_below(500) as u32).collect();
            let dist = GameCountDistribution::from_counts(counts).unwrap();
            let mut prev = 0;
            for k in 1..100 {
                let cutoff = percentile_cutoff(&dist, k as f64).unwrap();
                assert!(cutoff >= prev);
                prev = cutoff;
            }
        }
    }

    #[test]
    fn distribution_from_records_counts_appearances() {
        let text = "game_id,timestamp,player_1,player_2,outcome\n\
                    g1,1,a,b,1\ng2,2,a,c,2\ng3,3,a,b,D\n";
        let records = parse_matches(text).unwrap();
        let dist = GameCountDistribution::from_records(&records);
        let mut counts = dist.counts().to_vec();
        counts.sort_unstable();
        assert_eq!(counts, vec![1, 2, 3]);
    }

    #[test]
    fn summary_of_constant_vector_is_constant() {
        let s = summary_stats(&[1000.0, 1000.0, 1000.0]).unwrap();
        for v in [s.min, s.p10, s.p25, s.p50, s.mean, s.p75, s.p90, s.max] {
            assert_eq!(v, 1000.0);
        }
    }

    #[test]
    fn summary_of_one_to_ten() {
        let values: Vec<f64> = (1..=10).map(f64::from).collect();
        let s = summary_stats(&values).unwrap();
        assert_eq!(s.min, 1.0);
        assert_eq!(s.p50, 5.0);
        assert_eq!(s.mean, 5.5);
        assert_eq!(s.max, 10.0);
        assert_eq!(s.p10, 1.0);
        assert_eq!(s.p25, 3.0);
        assert_eq!(s.p75, 8.0);
        assert_eq!(s.p90, 9.0);
    }

    #[test]
    fn summary_is_permutation_invariant_and_ordered() {
        let mut rng = SplitMix64::new(3);
        for _ in 0..30 {
            let n = 1 + rng.next_below(100) as usize;
            let mut values: Vec<f64> = (0..n).map(|_| 700.0 + rng.next_f64() * 800.0).collect();
            let original = summary_stats(&values).unwrap();
            // Fisher-Yates shuffle.
            for i in (1..values.len()).rev() {
                let j = rng.next_below(i as u64 + 1) as usize;
                values.swap(i, j);
            }
            let shuffled = summary_stats(&values).unwrap();
            assert_eq!(original, shuffled);
            for pair in [
                (original.min, original.p10),
                (original.p10, original.p25),
                (original.p25, original.p50),
                (original.p50, original.p75),
                (original.p75, original.p90),
                (original.p90, original.max),
            ] {
                assert!(pair.0 <= pair.1);
            }
        }
    }

    #[test]
    fn summary_rejects_empty_input() {
        assert_eq!(summary_stats(&[]), Err(DataError::EmptyRatings));
    }
}
