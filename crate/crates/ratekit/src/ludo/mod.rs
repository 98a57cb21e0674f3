//! 3-dice, 2-player Ludo rule engine and bot simulator.
//!
//! Board geometry: each player walks a private linear track of 57 steps.
//! Step 0 is the start, steps 1..=51 map onto a shared 52-square loop (the
//! opponent's path enters the loop 26 squares further along), steps 52..=56
//! are a private home column, and landing exactly on step 57 promotes the
//! token. All four tokens start active at step 0; there is no six-to-enter
//! rule and no extra turn on a six.
//!
//! A turn rolls three dice up front; the mover then assigns the dice one at
//! a time, seeing whatever dice remain. A die with no legal move is
//! forfeited. Landing on a shared-loop square occupied by exactly one
//! opponent token captures it (back to start, points reset) unless the
//! square is safe. A game ends when one player promotes all four tokens or
//! when both players have used their turn budget, in which case the higher
//! total of token points wins and equal points is a draw. A promoted token
//! is worth its 57 traveled steps plus a 56-point bonus.

mod generate;
mod strategy;

pub use generate::{default_roster, draw_pairing, generate_dataset, play_indexed_game, Bot};
pub use strategy::{choose_move, Strategy, StrategyKind, DEFAULT_MCTS_ITERATIONS};

use serde::Serialize;
use thiserror::Error;

use crate::elo::MatchOutcome;
use crate::rng::SplitMix64;

#[derive(Debug, Error, PartialEq)]
pub enum LudoError {
    #[error("illegal move: die index {die_index}, token index {token_index}")]
    IllegalMove {
        die_index: usize,
        token_index: usize,
    },
    #[error("invalid rules: {0}")]
    InvalidRules(&'static str),
    #[error("rollout iterations must be at least 1")]
    InvalidIterations,
    #[error("a roster needs at least two bots with distinct names")]
    InvalidRoster,
}

/// Board and scoring parameters. Defaults describe the 3-dice game; only
/// `max_turns_per_player` is commonly changed.
#[derive(Debug, Clone, PartialEq)]
pub struct LudoRules {
    /// Steps to promotion; a token promotes by landing exactly here.
    pub track_length: u8,
    /// Dice rolled at the start of each turn (at most 3).
    pub dice_per_turn: u8,
    /// Shared-loop squares (1-based) where tokens cannot be captured.
    pub safe_squares: Vec<u8>,
    /// Turn budget per player; once both are spent, points decide.
    pub max_turns_per_player: u32,
    /// Points added when a token promotes.
    pub promotion_bonus: u16,
    /// Number of squares on the shared loop.
    pub loop_length: u8,
    /// How far along the loop the opponent's path is rotated.
    pub opponent_offset: u8,
}

impl Default for LudoRules {
    fn default() -> Self {
        Self {
            track_length: 57,
            dice_per_turn: 3,
            // Entry squares of the four seats plus the star squares.
            safe_squares: vec![1, 9, 14, 22, 27, 35, 40, 48],
            max_turns_per_player: 24,
            promotion_bonus: 56,
            loop_length: 52,
            opponent_offset: 26,
        }
    }
}

impl LudoRules {
    pub fn validate(&self) -> Result<(), LudoError> {
        if self.dice_per_turn == 0 || self.dice_per_turn > MAX_DICE as u8 {
            return Err(LudoError::InvalidRules("dice_per_turn must be 1..=3"));
        }
        if self.loop_length == 0 || self.track_length <= self.loop_length {
            return Err(LudoError::InvalidRules(
                "track_length must exceed loop_length",
            ));
        }
        if self.opponent_offset >= self.loop_length {
            return Err(LudoError::InvalidRules(
                "opponent_offset must lie on the loop",
            ));
        }
        if self
            .safe_squares
            .iter()
            .any(|&s| s == 0 || s > self.loop_length)
        {
            return Err(LudoError::InvalidRules("safe squares must be loop squares"));
        }
        Ok(())
    }

    pub fn is_safe_square(&self, loop_square: u8) -> bool {
        self.safe_squares.contains(&loop_square)
    }
}

const MAX_DICE: usize = 3;
const TOKENS_PER_PLAYER: usize = 4;

/// One token: its step along the owner's 0..=57 track. Points are derived:
/// a token is worth the steps it has traveled (captures reset it to the
/// start) plus the promotion bonus once promoted.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TokenState {
    pub step: u8,
}

impl TokenState {
    pub fn promoted(&self, rules: &LudoRules) -> bool {
        self.step == rules.track_length
    }

    pub fn points(&self, rules: &LudoRules) -> u16 {
        if self.promoted(rules) {
            self.step as u16 + rules.promotion_bonus
        } else {
            self.step as u16
        }
    }
}

/// Full state of a game in progress. Small and `Copy`, so rollouts can
/// fork it freely.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct LudoGameState {
    pub tokens: [[TokenState; 4]; 2],
    /// Turns started so far (both players combined).
    pub turn_counter: u32,
    pub player_to_move: usize,
    dice: [u8; MAX_DICE],
    dice_len: u8,
}

impl LudoGameState {
    /// Start-of-game state: all tokens at step 0, player 1 to move, no dice
    /// rolled yet.
    pub fn initial() -> Self {
        Self {
            tokens: [[TokenState { step: 0 }; 4]; 2],
            turn_counter: 0,
            player_to_move: 0,
            dice: [0; MAX_DICE],
            dice_len: 0,
        }
    }

    /// Mid-game position for tests and analysis.
    pub fn from_position(steps: [[u8; 4]; 2], player_to_move: usize, dice: &[u8]) -> Self {
        assert!(dice.len() <= MAX_DICE);
        let mut state = Self::initial();
        for (p, row) in steps.iter().enumerate() {
            for (t, &step) in row.iter().enumerate() {
                state.tokens[p][t] = TokenState { step };
            }
        }
        state.player_to_move = player_to_move;
        state.turn_counter = 1;
        for &d in dice {
            state.push_die(d);
        }
        state
    }

    /// Dice still to be assigned this turn, in roll order.
    pub fn dice_in_hand(&self) -> &[u8] {
        &self.dice[..self.dice_len as usize]
    }

    fn push_die(&mut self, value: u8) {
        self.dice[self.dice_len as usize] = value;
        self.dice_len += 1;
    }

    fn remove_die(&mut self, index: usize) -> u8 {
        let value = self.dice[index];
        for i in index..self.dice_len as usize - 1 {
            self.dice[i] = self.dice[i + 1];
        }
        self.dice_len -= 1;
        value
    }
}

/// A die assignment: which remaining die moves which token.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Move {
    pub die_index: usize,
    pub token_index: usize,
}

/// What a single applied move did.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct MoveOutcome {
    pub die: u8,
    pub from: u8,
    pub to: u8,
    pub captured: bool,
    pub promoted: bool,
}

/// One transcript line. A forfeited die is recorded with `token: None`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct MoveEvent {
    pub turn: u32,
    pub player: u8,
    pub die: u8,
    pub token: Option<u8>,
    pub from: u8,
    pub to: u8,
    pub captured: bool,
}

/// Shared-loop square (1-based) occupied by `player`'s token at `step`, or
/// `None` while the token is off the loop (start, home column, promoted).
pub fn loop_square(player: usize, step: u8, rules: &LudoRules) -> Option<u8> {
    if step >= 1 && step < rules.loop_length {
        let rotated = (step - 1 + player as u8 * rules.opponent_offset) % rules.loop_length;
        Some(rotated + 1)
    } else {
        None
    }
}

/// All legal die assignments for the player to move, ordered by die index
/// then token index. A token may move if it is unpromoted and would not
/// overshoot the final step. An empty list means every remaining die is
/// unplayable.
pub fn legal_moves(state: &LudoGameState, rules: &LudoRules) -> Vec<Move> {
    let mut moves = Vec::with_capacity(MAX_DICE * TOKENS_PER_PLAYER);
    let player = state.player_to_move;
    for (die_index, &die) in state.dice_in_hand().iter().enumerate() {
        for token_index in 0..TOKENS_PER_PLAYER {
            let step = state.tokens[player][token_index].step;
            if step < rules.track_length && step + die <= rules.track_length {
                moves.push(Move {
                    die_index,
                    token_index,
                });
            }
        }
    }
    moves
}

fn is_legal(state: &LudoGameState, mv: Move, rules: &LudoRules) -> bool {
    if mv.die_index >= state.dice_len as usize || mv.token_index >= TOKENS_PER_PLAYER {
        return false;
    }
    let die = state.dice[mv.die_index];
    let step = state.tokens[state.player_to_move][mv.token_index].step;
    step < rules.track_length && step + die <= rules.track_length
}

/// Would this move capture an opponent token? True exactly when the
/// destination is a non-safe loop square holding exactly one opponent token.
pub fn would_capture(state: &LudoGameState, mv: Move, rules: &LudoRules) -> bool {
    let player = state.player_to_move;
    let die = state.dice[mv.die_index];
    let dest = state.tokens[player][mv.token_index].step + die;
    capture_target(state, player, dest, rules).is_some()
}

fn capture_target(
    state: &LudoGameState,
    mover: usize,
    dest_step: u8,
    rules: &LudoRules,
) -> Option<usize> {
    let square = loop_square(mover, dest_step, rules)?;
    if rules.is_safe_square(square) {
        return None;
    }
    let opponent = 1 - mover;
    let mut found = None;
    let mut count = 0;
    for (i, token) in state.tokens[opponent].iter().enumerate() {
        if loop_square(opponent, token.step, rules) == Some(square) {
            count += 1;
            found = Some(i);
        }
    }
    if count == 1 {
        found
    } else {
        None
    }
}

/// Applies a legal move: advances the token, consumes the die, resolves
/// captures, and marks promotion. Turn flow (rolling, passing the turn) is
/// the game driver's job.
pub fn apply_move(
    state: &mut LudoGameState,
    mv: Move,
    rules: &LudoRules,
) -> Result<MoveOutcome, LudoError> {
    if !is_legal(state, mv, rules) {
        return Err(LudoError::IllegalMove {
            die_index: mv.die_index,
            token_index: mv.token_index,
        });
    }
    let player = state.player_to_move;
    let die = state.remove_die(mv.die_index);
    let from = state.tokens[player][mv.token_index].step;
    let to = from + die;
    state.tokens[player][mv.token_index].step = to;

    let captured = match capture_target(state, player, to, rules) {
        Some(victim) => {
            state.tokens[1 - player][victim].step = 0;
            true
        }
        None => false,
    };
    Ok(MoveOutcome {
        die,
        from,
        to,
        captured,
        promoted: to == rules.track_length,
    })
}

pub fn all_promoted(state: &LudoGameState, player: usize, rules: &LudoRules) -> bool {
    state.tokens[player].iter().all(|t| t.promoted(rules))
}

/// Sum of a player's token points.
pub fn total_points(state: &LudoGameState, player: usize, rules: &LudoRules) -> u32 {
    state.tokens[player]
        .iter()
        .map(|t| t.points(rules) as u32)
        .sum()
}

/// Final state of a finished game.
#[derive(Debug, Clone, PartialEq)]
pub struct GameResult {
    pub winner: MatchOutcome,
    pub final_points: (u32, u32),
    pub turns_used: u32,
    pub transcript: Vec<MoveEvent>,
}

/// Winner by points once the turn budget is spent; `None` is a draw.
fn points_winner(state: &LudoGameState, rules: &LudoRules) -> Option<usize> {
    let p0 = total_points(state, 0, rules);
    let p1 = total_points(state, 1, rules);
    match p0.cmp(&p1) {
        std::cmp::Ordering::Greater => Some(0),
        std::cmp::Ordering::Less => Some(1),
        std::cmp::Ordering::Equal => None,
    }
}

/// Plays a full game between two strategies. Deterministic: the transcript
/// is a pure function of `(strategies, rules, seed)`.
pub fn play_game(
    strategy_1: &Strategy,
    strategy_2: &Strategy,
    rules: &LudoRules,
    seed: u64,
) -> GameResult {
    rules.validate().expect("invalid Ludo rules");
    let strategies = [strategy_1, strategy_2];
    let mut state = LudoGameState::initial();
    let mut rng = SplitMix64::new(seed);
    let mut transcript = Vec::new();

    let winner = loop {
        if state.dice_in_hand().is_empty() {
            if state.turn_counter >= 2 * rules.max_turns_per_player {
                break points_winner(&state, rules);
            }
            state.turn_counter += 1;
            for _ in 0..rules.dice_per_turn {
                let roll = rng.roll_die();
                state.push_die(roll);
            }
        }
        let player = state.player_to_move;
        match choose_move(strategies[player], &state, &mut rng, rules) {
            Some(mv) => {
                let outcome =
                    apply_move(&mut state, mv, rules).expect("strategies must return legal moves");
                transcript.push(MoveEvent {
                    turn: state.turn_counter,
                    player: player as u8,
                    die: outcome.die,
                    token: Some(mv.token_index as u8),
                    from: outcome.from,
                    to: outcome.to,
                    captured: outcome.captured,
                });
                if outcome.promoted && all_promoted(&state, player, rules) {
                    break Some(player);
                }
            }
            None => {
                // No playable assignment: forfeit the first remaining die.
                let die = state.remove_die(0);
                transcript.push(MoveEvent {
                    turn: state.turn_counter,
                    player: player as u8,
                    die,
                    token: None,
                    from: 0,
                    to: 0,
                    captured: false,
                });
            }
        }
        if state.dice_in_hand().is_empty() {
            state.player_to_move = 1 - player;
        }
    };

    let final_points = (
        total_points(&state, 0, rules),
        total_points(&state, 1, rules),
    );
    let winner = match winner {
        Some(0) => MatchOutcome::WinP1,
        Some(_) => MatchOutcome::WinP2,
        None => MatchOutcome::Draw,
    };
    GameResult {
        winner,
        final_points,
        turns_used: state.turn_counter,
        transcript,
    }
}

/// Fixed-capacity move list for the rollout hot path.
struct MoveBuf {
    moves: [Move; MAX_DICE * TOKENS_PER_PLAYER],
    len: usize,
}

impl MoveBuf {
    fn collect(state: &LudoGameState, rules: &LudoRules) -> Self {
        let mut buf = Self {
            moves: [Move {
                die_index: 0,
                token_index: 0,
            }; MAX_DICE * TOKENS_PER_PLAYER],
            len: 0,
        };
        let player = state.player_to_move;
        for (die_index, &die) in state.dice_in_hand().iter().enumerate() {
            for token_index in 0..TOKENS_PER_PLAYER {
                let step = state.tokens[player][token_index].step;
                if step < rules.track_length && step + die <= rules.track_length {
                    buf.moves[buf.len] = Move {
                        die_index,
                        token_index,
                    };
                    buf.len += 1;
                }
            }
        }
        buf
    }
}

/// Plays the rest of a game with uniform-random legal play on both sides.
/// Returns the winner, or `None` for a points draw at the turn cap.
fn random_playout(
    state: &mut LudoGameState,
    rules: &LudoRules,
    rng: &mut SplitMix64,
) -> Option<usize> {
    loop {
        if state.dice_in_hand().is_empty() {
            if state.turn_counter >= 2 * rules.max_turns_per_player {
                return points_winner(state, rules);
            }
            state.turn_counter += 1;
            for _ in 0..rules.dice_per_turn {
                let roll = rng.roll_die();
                state.push_die(roll);
            }
        }
        let player = state.player_to_move;
        let buf = MoveBuf::collect(state, rules);
        if buf.len == 0 {
            state.remove_die(0);
        } else {
            let mv = buf.moves[rng.next_below(buf.len as u64) as usize];
            let outcome = apply_move(state, mv, rules).expect("buffered moves are legal");
            if outcome.promoted && all_promoted(state, player, rules) {
                return Some(player);
            }
        }
        if state.dice_in_hand().is_empty() {
            state.player_to_move = 1 - player;
        }
    }
}

/// Flat Monte-Carlo evaluation: for each candidate move, applies it and
/// plays to termination with random legal play `iterations` times,
/// returning the mover's win rate per candidate.
///
/// All candidates share the same per-iteration playout streams (common
/// random numbers), so the comparison between candidates is paired and far
/// less noisy than independent sampling at the same budget.
pub fn rollout_winrate(
    state: &LudoGameState,
    candidates: &[Move],
    iterations: u32,
    rng: &mut SplitMix64,
    rules: &LudoRules,
) -> Result<Vec<f64>, LudoError> {
    if iterations == 0 {
        return Err(LudoError::InvalidIterations);
    }
    const SALT_ROLLOUT: u64 = 0x726f_6c6c; // "roll"
    let base = rng.next_u64();
    let mover = state.player_to_move;
    let mut rates = Vec::with_capacity(candidates.len());
    for &candidate in candidates {
        let mut wins = 0u32;
        for iteration in 0..iterations {
            let mut fork = *state;
            let outcome = apply_move(&mut fork, candidate, rules)?;
            let winner = if outcome.promoted && all_promoted(&fork, mover, rules) {
                Some(mover)
            } else {
                if fork.dice_in_hand().is_empty() {
                    fork.player_to_move = 1 - mover;
                }
                let mut playout_rng =
                    crate::rng::derive_stream(base, u64::from(iteration), SALT_ROLLOUT);
                random_playout(&mut fork, rules, &mut playout_rng)
            };
            if winner == Some(mover) {
                wins += 1;
            }
        }
        rates.push(f64::from(wins) / f64::from(iterations));
    }
    Ok(rates)
}
