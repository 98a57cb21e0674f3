//! Seeded tournament generator: random bot pairings played to completion
//! and emitted as match records.
//!
//! Every game gets two independent PRNG streams derived from
//! `(master_seed, game_index)`: one draws the pairing and the seat order,
//! the other drives the dice and the bots. Games are therefore independent
//! and the whole dataset is reproducible from the master seed alone.

use crate::data::MatchRecord;
use crate::rng::{derive_seed, derive_stream, SplitMix64};

use super::{play_game, GameResult, LudoError, LudoRules, Strategy, StrategyKind};

const SALT_PAIRING: u64 = 0x7061_6972; // "pair"
const SALT_GAME: u64 = 0x6761_6d65; // "game"

/// A named strategy; the name becomes the player id in match records.
#[derive(Debug, Clone, PartialEq)]
pub struct Bot {
    pub name: String,
    pub strategy: Strategy,
}

impl Bot {
    pub fn new(name: impl Into<String>, strategy: Strategy) -> Self {
        Self {
            name: name.into(),
            strategy,
        }
    }
}

/// The seven standard bots. `mcts_iterations` applies to the three
/// Monte-Carlo players.
pub fn default_roster(mcts_iterations: u32) -> Result<Vec<Bot>, LudoError> {
    let kinds = [
        ("naive", StrategyKind::Naive),
        ("aggressive", StrategyKind::Aggressive),
        ("responsible_pair", StrategyKind::ResponsiblePair),
        ("full_info", StrategyKind::FullInfo),
        ("limited_info", StrategyKind::LimitedInfo),
        ("defeat_seeking", StrategyKind::DefeatSeeking),
        ("random", StrategyKind::Random),
    ];
    kinds
        .into_iter()
        .map(|(name, kind)| {
            Ok(Bot::new(
                name,
                Strategy::with_iterations(kind, mcts_iterations)?,
            ))
        })
        .collect()
}

/// Uniform draw of an ordered pairing: an unordered pair of distinct
/// indices chosen uniformly from all `n(n-1)/2` pairs, then a fair coin for
/// the seat order.
pub fn draw_pairing(n: usize, rng: &mut SplitMix64) -> (usize, usize) {
    assert!(n >= 2, "need at least two bots to pair");
    let pair_count = n * (n - 1) / 2;
    let mut k = rng.next_below(pair_count as u64) as usize;
    let mut first = 0usize;
    loop {
        let row = n - 1 - first;
        if k < row {
            break;
        }
        k -= row;
        first += 1;
    }
    let second = first + 1 + k;
    if rng.next_bool() {
        (second, first)
    } else {
        (first, second)
    }
}

fn validate_roster(roster: &[Bot]) -> Result<(), LudoError> {
    if roster.len() < 2 {
        return Err(LudoError::InvalidRoster);
    }
    for (i, bot) in roster.iter().enumerate() {
        if roster[..i].iter().any(|other| other.name == bot.name) {
            return Err(LudoError::InvalidRoster);
        }
    }
    Ok(())
}

/// Plays game number `game_index` of a tournament and returns its record
/// (timestamped by game index) together with the full game result.
pub fn play_indexed_game(
    roster: &[Bot],
    game_index: u64,
    master_seed: u64,
    rules: &LudoRules,
) -> Result<(MatchRecord, GameResult), LudoError> {
    validate_roster(roster)?;
    rules.validate()?;
    let mut pairing_rng = derive_stream(master_seed, game_index, SALT_PAIRING);
    let (seat_1, seat_2) = draw_pairing(roster.len(), &mut pairing_rng);
    let game_seed = derive_seed(master_seed, game_index, SALT_GAME);
    let result = play_game(
        &roster[seat_1].strategy,
        &roster[seat_2].strategy,
        rules,
        game_seed,
    );
    let record = MatchRecord {
        game_id: format!("g{game_index:07}"),
        timestamp: game_index as i64,
        player_1: roster[seat_1].name.clone(),
        player_2: roster[seat_2].name.clone(),
        outcome: result.winner,
    };
    Ok((record, result))
}

/// Generates `n_games` match records with uniformly random pairings.
pub fn generate_dataset(
    roster: &[Bot],
    n_games: u64,
    master_seed: u64,
    rules: &LudoRules,
) -> Result<Vec<MatchRecord>, LudoError> {
    validate_roster(roster)?;
    rules.validate()?;
    let mut records = Vec::with_capacity(n_games as usize);
    for game_index in 0..n_games {
        let (record, _) = play_indexed_game(roster, game_index, master_seed, rules)?;
        records.push(record);
    }
    Ok(records)
}
