//! End-to-end flow at the crate boundary: simulate a small tournament,
//! round-trip it through the CSV layer, replay it, and tune on it.

use ratekit::data::{parse_matches, write_matches, GameCountDistribution};
use ratekit::elo::{replay, EloConfig, KSchedule, MatchOutcome};
use ratekit::logit::fit_logistic;
use ratekit::ludo::{default_roster, generate_dataset, LudoRules};
use ratekit::tune::{bucket_analysis, build_dataset, grid_search, CutoffSpec, ParamGrid};

fn small_tournament() -> Vec<ratekit::data::MatchRecord> {
    let roster = default_roster(3).unwrap();
    generate_dataset(&roster, 240, 1234, &LudoRules::default()).unwrap()
}

#[test]
fn simulated_logs_survive_the_csv_round_trip() {
    let records = small_tournament();
    let text = write_matches(&records);
    let parsed = parse_matches(&text).unwrap();
    assert_eq!(parsed, records);
}

#[test]
fn replay_tracks_every_bot_and_game() {
    let records = small_tournament();
    let config = EloConfig::with_defaults(KSchedule::new(60.0, 30.0, 16.0, 5, 10).unwrap());
    let result = replay(&records, &config).unwrap();
    assert_eq!(result.entries.len(), records.len());
    assert_eq!(result.final_states.len(), 7);
    let games: u32 = result.final_states.values().map(|s| s.games_played).sum();
    assert_eq!(games as usize, 2 * records.len());
    for (id, trajectory) in &result.trajectories {
        assert_eq!(
            trajectory.len() as u32,
            result.final_states[id].games_played + 1
        );
        assert_eq!(trajectory[0], 1000.0);
    }
}

#[test]
fn tuning_pipeline_runs_on_simulated_data() {
    let records = small_tournament();
    let grid = ParamGrid {
        k_triples: vec![[60.0, 30.0, 16.0], [30.0, 30.0, 30.0]],
        cutoff_specs: vec![CutoffSpec::Fixed(5, 10), CutoffSpec::Quantile(10.0, 25.0)],
        initial_rating: 1000.0,
        scale: 400.0,
    };
    let ranked = grid_search(&records, &grid, 99).unwrap();
    assert_eq!(ranked.len(), 4);
    for pair in ranked.windows(2) {
        assert!(
            pair[0].metrics.f1 > pair[1].metrics.f1
                || (pair[0].metrics.f1 == pair[1].metrics.f1
                    && pair[0].grid_index < pair[1].grid_index)
        );
    }
    let again = grid_search(&records, &grid, 99).unwrap();
    assert_eq!(ranked, again);

    // Quantile cutoffs resolved against the actual game-count distribution.
    let dist = GameCountDistribution::from_records(&records);
    assert_eq!(dist.len(), 7);
    for evaluation in &ranked {
        let (n_c1, n_c2) = evaluation.resolved_cutoffs;
        assert!(n_c1 < n_c2);
    }
}

#[test]
fn bucket_rows_partition_the_held_out_points() {
    let records = small_tournament();
    let config = EloConfig::with_defaults(KSchedule::new(60.0, 30.0, 16.0, 5, 10).unwrap());
    let (train, test) = build_dataset(&records, &config, 7).unwrap();
    let model = fit_logistic(&train).unwrap();
    let report = bucket_analysis(&model, &test, &[0.0, 50.0, 150.0, 400.0, 10000.0]).unwrap();
    let counted: usize = report.rows.iter().map(|r| r.games).sum();
    assert_eq!(counted, test.len());
    let draws = records
        .iter()
        .filter(|r| r.outcome == MatchOutcome::Draw)
        .count();
    assert_eq!(train.len() + test.len() + draws, records.len());
}
