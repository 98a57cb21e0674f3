//! The seven bot strategies.
//!
//! Three rule-based players (Naive, Aggressive, Responsible Pair), three
//! flat-Monte-Carlo players that score candidate moves by rollout win rate
//! (Full-Information over every remaining die, Limited-Information over the
//! first remaining die only, Defeat-Seeking picking the worst candidate),
//! and a uniform Random player.
//!
//! Every decision rule is deterministic given the rollout RNG stream: ties
//! are broken by (die index, token index) order, so a whole game is
//! reproducible from its seed.

use crate::rng::SplitMix64;

use super::{
    legal_moves, loop_square, rollout_winrate, would_capture, LudoError, LudoGameState, LudoRules,
    Move,
};

/// Rollout count per candidate for the Monte-Carlo players.
pub const DEFAULT_MCTS_ITERATIONS: u32 = 100;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum StrategyKind {
    Naive,
    Aggressive,
    ResponsiblePair,
    FullInfo,
    LimitedInfo,
    DefeatSeeking,
    Random,
}

impl StrategyKind {
    pub fn uses_rollouts(self) -> bool {
        matches!(
            self,
            StrategyKind::FullInfo | StrategyKind::LimitedInfo | StrategyKind::DefeatSeeking
        )
    }
}

/// A strategy kind plus its rollout budget (ignored by non-Monte-Carlo
/// kinds).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Strategy {
    pub kind: StrategyKind,
    pub mcts_iterations: u32,
}

impl Strategy {
    pub fn new(kind: StrategyKind) -> Self {
        Self {
            kind,
            mcts_iterations: DEFAULT_MCTS_ITERATIONS,
        }
    }

    pub fn with_iterations(kind: StrategyKind, mcts_iterations: u32) -> Result<Self, LudoError> {
        if mcts_iterations == 0 {
            return Err(LudoError::InvalidIterations);
        }
        Ok(Self {
            kind,
            mcts_iterations,
        })
    }
}

/// Picks the strategy's move for the current state, or `None` to forfeit
/// the first remaining die.
pub fn choose_move(
    strategy: &Strategy,
    state: &LudoGameState,
    rng: &mut SplitMix64,
    rules: &LudoRules,
) -> Option<Move> {
    match strategy.kind {
        StrategyKind::Naive => naive_move(state, rules),
        StrategyKind::Aggressive => aggressive_move(state, rules),
        StrategyKind::ResponsiblePair => responsible_pair_move(state, rules),
        StrategyKind::Random => {
            let moves = legal_moves(state, rules);
            if moves.is_empty() {
                None
            } else {
                Some(moves[rng.next_below(moves.len() as u64) as usize])
            }
        }
        StrategyKind::FullInfo => {
            monte_carlo_move(state, rng, rules, strategy.mcts_iterations, false, false)
        }
        StrategyKind::LimitedInfo => {
            monte_carlo_move(state, rng, rules, strategy.mcts_iterations, true, false)
        }
        StrategyKind::DefeatSeeking => {
            monte_carlo_move(state, rng, rules, strategy.mcts_iterations, false, true)
        }
    }
}

/// Naive: move the first (lowest-index) token that can legally use the
/// first remaining die. Capture history does not change priorities.
fn naive_move(state: &LudoGameState, rules: &LudoRules) -> Option<Move> {
    let die = *state.dice_in_hand().first()?;
    let player = state.player_to_move;
    for token_index in 0..4 {
        let step = state.tokens[player][token_index].step;
        if step < rules.track_length && step + die <= rules.track_length {
            return Some(Move {
                die_index: 0,
                token_index,
            });
        }
    }
    None
}

fn destination(state: &LudoGameState, mv: Move) -> u8 {
    state.tokens[state.player_to_move][mv.token_index].step + state.dice_in_hand()[mv.die_index]
}

fn lands_on_safe_square(state: &LudoGameState, mv: Move, rules: &LudoRules) -> bool {
    loop_square(state.player_to_move, destination(state, mv), rules)
        .is_some_and(|sq| rules.is_safe_square(sq))
}

/// Highest die value playable by `token_index`, ties to the earliest die.
fn best_roll_for_token(moves: &[Move], state: &LudoGameState, token_index: usize) -> Option<Move> {
    moves
        .iter()
        .filter(|m| m.token_index == token_index)
        .max_by_key(|m| {
            (
                state.dice_in_hand()[m.die_index],
                std::cmp::Reverse(m.die_index),
            )
        })
        .copied()
}

/// Aggressive, in priority order: promote, capture, reach a safe square,
/// otherwise push the first movable token with its highest playable roll.
fn aggressive_move(state: &LudoGameState, rules: &LudoRules) -> Option<Move> {
    let moves = legal_moves(state, rules);
    if moves.is_empty() {
        return None;
    }
    if let Some(&mv) = moves
        .iter()
        .find(|&&m| destination(state, m) == rules.track_length)
    {
        return Some(mv);
    }
    if let Some(&mv) = moves.iter().find(|&&m| would_capture(state, m, rules)) {
        return Some(mv);
    }
    if let Some(&mv) = moves
        .iter()
        .find(|&&m| lands_on_safe_square(state, m, rules))
    {
        return Some(mv);
    }
    for token_index in 0..4 {
        if let Some(mv) = best_roll_for_token(&moves, state, token_index) {
            return Some(mv);
        }
    }
    None
}

/// Responsible Pair, in priority order: promote; capture; when an opponent
/// token is close to promotion (step >= 50) push the own token with the
/// most points; reach a safe square; chase an opponent with one of the last
/// two tokens; advance the active pair -- tokens (1,2) until both reach
/// step 27, then (3,4) -- rear token first with the highest playable roll;
/// once all four have reached 27, keep advancing the rearmost token. Falls
/// back to the first legal move if no clause applies.
///
/// A chase means landing one of the last two tokens within a single die
/// throw behind an opponent loop token (forward gap 1..=6), threatening a
/// capture next turn; the smallest gap wins.
fn responsible_pair_move(state: &LudoGameState, rules: &LudoRules) -> Option<Move> {
    let moves = legal_moves(state, rules);
    if moves.is_empty() {
        return None;
    }
    let player = state.player_to_move;
    let opponent = 1 - player;

    if let Some(&mv) = moves
        .iter()
        .find(|&&m| destination(state, m) == rules.track_length)
    {
        return Some(mv);
    }
    if let Some(&mv) = moves.iter().find(|&&m| would_capture(state, m, rules)) {
        return Some(mv);
    }

    // Situational aggressive movement once the opponent threatens to
    // promote: race the own highest-point token that can still move.
    let opponent_near_home = state.tokens[opponent]
        .iter()
        .any(|t| t.step >= 50 && !t.promoted(rules));
    if opponent_near_home {
        let highest = moves
            .iter()
            .map(|m| m.token_index)
            .max_by_key(|&t| (state.tokens[player][t].points(rules), std::cmp::Reverse(t)));
        if let Some(token_index) = highest {
            if let Some(mv) = best_roll_for_token(&moves, state, token_index) {
                return Some(mv);
            }
        }
    }

    if let Some(&mv) = moves
        .iter()
        .find(|&&m| lands_on_safe_square(state, m, rules))
    {
        return Some(mv);
    }

    let opponent_squares: Vec<u8> = state.tokens[opponent]
        .iter()
        .filter_map(|t| loop_square(opponent, t.step, rules))
        .collect();
    if !opponent_squares.is_empty() {
        let chase = moves
            .iter()
            .filter(|m| m.token_index >= 2)
            .filter_map(|&m| {
                let dest_sq = loop_square(player, destination(state, m), rules)?;
                let gap = opponent_squares
                    .iter()
                    .map(|&sq| (sq + rules.loop_length - dest_sq) % rules.loop_length)
                    .filter(|&gap| (1..=6).contains(&gap))
                    .min()?;
                Some((gap, m))
            })
            .min_by_key(|&(gap, m)| (gap, m.die_index, m.token_index));
        if let Some((_, mv)) = chase {
            return Some(mv);
        }
    }

    // Pair play, pair (1,2) then pair (3,4): the active pair is advanced
    // alternately (rear token first, highest playable roll), first to the
    // opponent's entry at step 27 and from there on home; the second pair
    // takes over once the first is fully promoted.
    let promoted = |t: usize| state.tokens[player][t].promoted(rules);
    let mut pair = if promoted(0) && promoted(1) {
        [2usize, 3]
    } else {
        [0usize, 1]
    };
    pair.sort_by_key(|&t| (state.tokens[player][t].step, t));
    for token_index in pair {
        if let Some(mv) = best_roll_for_token(&moves, state, token_index) {
            return Some(mv);
        }
    }

    // No clause applied (e.g. the active pair cannot move): first legal move.
    Some(moves[0])
}

/// Flat Monte-Carlo decision shared by Full-Information, Limited-Information
/// and Defeat-Seeking: score candidates by rollout win rate, then take the
/// best (or, for Defeat-Seeking, the worst). Ties resolve to the earliest
/// candidate in (die index, token index) order.
fn monte_carlo_move(
    state: &LudoGameState,
    rng: &mut SplitMix64,
    rules: &LudoRules,
    iterations: u32,
    first_die_only: bool,
    pick_worst: bool,
) -> Option<Move> {
    let mut candidates = legal_moves(state, rules);
    if first_die_only {
        candidates.retain(|m| m.die_index == 0);
    }
    // Two dice showing the same value give identical actions for a token;
    // keep only the earliest instance so the rollout budget is not wasted
    // re-estimating duplicates.
    let dice = state.dice_in_hand().to_vec();
    let mut seen = [[false; 4]; 6];
    candidates.retain(|m| {
        let slot = &mut seen[(dice[m.die_index] - 1) as usize][m.token_index];
        !std::mem::replace(slot, true)
    });
    match candidates.len() {
        0 => None,
        1 => Some(candidates[0]),
        _ => {
            let rates = rollout_winrate(state, &candidates, iterations, rng, rules)
                .expect("legal candidates and positive iterations");
            let mut best = 0;
            for (i, &rate) in rates.iter().enumerate().skip(1) {
                let better = if pick_worst {
                    rate < rates[best]
                } else {
                    rate > rates[best]
                };
                if better {
                    best = i;
                }
            }
            Some(candidates[best])
        }
    }
}
