//! Rating-system engineering toolkit.
//!
//! The crate covers an end-to-end pipeline for building and validating Elo
//! ratings on two-player match logs:
//!
//! - [`elo`]: the rating engine with logistic expected scores, an
//!   experience-dependent step K-factor, and chronological match replay.
//! - [`data`]: match CSV parsing and writing, game-count quantiles, and
//!   rating summary statistics.
//! - [`logit`]: a from-scratch logistic regression of match outcome on
//!   rating difference, with Wald standard errors and p-values.
//! - [`tune`]: grid search over K-schedule and cutoff configurations,
//!   scored by the held-out F1 of the outcome classifier.
//! - [`ludo`]: a 3-dice 2-player Ludo rule engine with seven bot
//!   strategies (three of them flat-Monte-Carlo players) and a seeded
//!   match generator.
//! - [`rng`]: the deterministic SplitMix64 generator every seeded
//!   component shares.
//!
//! Everything seeded is reproducible: the same inputs and seeds produce
//! bit-identical outputs.

pub mod data;
pub mod elo;
pub mod logit;
pub mod ludo;
pub mod rng;
pub mod tune;
