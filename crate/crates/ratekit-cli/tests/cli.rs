use std::fs;
use std::path::{Path, PathBuf};
use std::process::Command;

use ratekit::data::parse_matches;
use ratekit::elo::{replay, EloConfig, KSchedule};
use ratekit::tune::{grid_search, ParamGrid};
use ratekit_cli::{
    run_buckets, run_rate, run_report, run_simulate, run_tune, BucketsArgs, RateArgs, ReportArgs,
    SimulateArgs, TuneArgs,
};

fn workdir(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("ratekit-cli-{}-{name}", std::process::id()));
    let _ = fs::remove_dir_all(&dir);
    fs::create_dir_all(&dir).unwrap();
    dir
}

fn simulate_small(dir: &Path, name: &str) -> PathBuf {
    let out = dir.join(name);
    run_simulate(&SimulateArgs {
        games: 160,
        seed: 9,
        out: out.clone(),
        mcts_iterations: 4,
        max_turns: 24,
        transcripts: None,
    })
    .unwrap();
    out
}

#[test]
fn simulate_writes_a_parseable_deterministic_log() {
    let dir = workdir("simulate");
    let first = simulate_small(&dir, "a.csv");
    let second = simulate_small(&dir, "b.csv");
    let text = fs::read_to_string(&first).unwrap();
    assert_eq!(text, fs::read_to_string(&second).unwrap());
    let records = parse_matches(&text).unwrap();
    assert_eq!(records.len(), 160);
    fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn simulate_can_dump_transcripts() {
    let dir = workdir("transcripts");
    let transcripts = dir.join("games");
    run_simulate(&SimulateArgs {
        games: 3,
        seed: 5,
        out: dir.join("m.csv"),
        mcts_iterations: 2,
        max_turns: 24,
        transcripts: Some(transcripts.clone()),
    })
    .unwrap();
    let body = fs::read_to_string(transcripts.join("g0000000.json")).unwrap();
    let events: serde_json::Value = serde_json::from_str(&body).unwrap();
    assert!(events.as_array().unwrap().len() > 4);
    let first = &events.as_array().unwrap()[0];
    assert!(first.get("turn").is_some());
    assert!(first.get("die").is_some());
    fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn rate_matches_a_direct_replay() {
    let dir = workdir("rate");
    let matches = simulate_small(&dir, "m.csv");
    let out = dir.join("ratings.csv");
    let trajectories = dir.join("traj.csv");
    run_rate(&RateArgs {
        matches: matches.clone(),
        k: "60,30,16".into(),
        cutoffs: "5,10".into(),
        out: out.clone(),
        trajectories: Some(trajectories.clone()),
        initial_rating: 1000.0,
        scale: 400.0,
    })
    .unwrap();

    let records = parse_matches(&fs::read_to_string(&matches).unwrap()).unwrap();
    let config = EloConfig::with_defaults(KSchedule::new(60.0, 30.0, 16.0, 5, 10).unwrap());
    let expected = replay(&records, &config).unwrap();

    let ratings = fs::read_to_string(&out).unwrap();
    let mut lines = ratings.lines();
    assert_eq!(lines.next(), Some("player_id,rating,games_played"));
    for line in lines {
        let fields: Vec<&str> = line.split(',').collect();
        let state = &expected.final_states[fields[0]];
        assert_eq!(fields[1].parse::<f64>().unwrap(), state.rating);
        assert_eq!(fields[2].parse::<u32>().unwrap(), state.games_played);
    }

    let traj = fs::read_to_string(&trajectories).unwrap();
    assert!(traj.starts_with("player_id,game_index,rating\n"));
    let rows = traj.lines().count() - 1;
    let expected_rows: usize = expected.trajectories.values().map(Vec::len).sum();
    assert_eq!(rows, expected_rows);
    fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn tune_report_selects_the_grid_search_winner() {
    let dir = workdir("tune");
    let matches = simulate_small(&dir, "m.csv");
    let grid_path = dir.join("grid.json");
    fs::write(
        &grid_path,
        r#"{"k_triples": [[60,30,16],[30,30,30]], "cutoffs": [{"fixed":[5,10]},{"quantile":[10,25]}]}"#,
    )
    .unwrap();
    let out = dir.join("report.json");
    run_tune(&TuneArgs {
        matches: matches.clone(),
        grid: Some(grid_path),
        seed: 11,
        out: out.clone(),
    })
    .unwrap();

    let report: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(&out).unwrap()).unwrap();
    let evaluations = report["evaluations"].as_array().unwrap();
    assert_eq!(evaluations.len(), 4);
    let selected = report["selected"].as_u64().unwrap() as usize;
    let selected_row = &evaluations[selected];

    let records = parse_matches(&fs::read_to_string(&matches).unwrap()).unwrap();
    let grid = ParamGrid {
        k_triples: vec![[60.0, 30.0, 16.0], [30.0, 30.0, 30.0]],
        cutoff_specs: vec![
            ratekit::tune::CutoffSpec::Fixed(5, 10),
            ratekit::tune::CutoffSpec::Quantile(10.0, 25.0),
        ],
        initial_rating: 1000.0,
        scale: 400.0,
    };
    let ranked = grid_search(&records, &grid, 11).unwrap();
    let winner = &ranked[0];
    assert_eq!(selected_row["f1"].as_f64().unwrap(), winner.metrics.f1);
    assert_eq!(
        selected_row["k_a"].as_f64().unwrap(),
        winner.config.schedule().k_a()
    );
    assert_eq!(selected_row["tie_group"].as_u64().unwrap(), 0);
    assert_eq!(
        selected_row["n_c1"].as_u64().unwrap() as u32,
        winner.resolved_cutoffs.0
    );
    fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn buckets_csv_has_the_documented_shape() {
    let dir = workdir("buckets");
    let matches = simulate_small(&dir, "m.csv");
    let out = dir.join("buckets.csv");
    run_buckets(&BucketsArgs {
        matches,
        k: "60,30,16".into(),
        cutoffs: "5,10".into(),
        seed: 3,
        out: out.clone(),
        edges: None,
    })
    .unwrap();
    let text = fs::read_to_string(&out).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("bucket_lo,bucket_hi,games,accuracy,f1"));
    let rows: Vec<&str> = lines.collect();
    assert_eq!(rows.len(), 6);
    assert!(rows[0].starts_with("0,30,"));
    assert!(rows[5].starts_with("500,10000,"));
    fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn report_emits_summary_and_charts() {
    let dir = workdir("report");
    let matches = simulate_small(&dir, "m.csv");
    let out_dir = dir.join("report");
    run_report(&ReportArgs {
        matches,
        k: "60,30,16".into(),
        cutoffs: "5,10".into(),
        out_dir: out_dir.clone(),
        players: Some("aggressive,random".into()),
        initial_rating: 1000.0,
        scale: 400.0,
        bin_width: 25.0,
    })
    .unwrap();
    let summary = fs::read_to_string(out_dir.join("summary.csv")).unwrap();
    assert!(summary.starts_with("min,p10,p25,p50,mean,p75,p90,max\n"));
    assert_eq!(summary.lines().count(), 2);
    let histogram = fs::read_to_string(out_dir.join("histogram.svg")).unwrap();
    assert!(histogram.starts_with("<?xml"));
    assert!(histogram.contains("ratekit report"));
    let chart = fs::read_to_string(out_dir.join("trajectories.svg")).unwrap();
    assert_eq!(chart.matches("<polyline").count(), 2);
    assert!(chart.contains("aggressive"));
    fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn quantile_cutoffs_are_accepted_on_the_command_line() {
    let dir = workdir("quantile");
    let matches = simulate_small(&dir, "m.csv");
    let out = dir.join("ratings.csv");
    run_rate(&RateArgs {
        matches,
        k: "60,30,16".into(),
        cutoffs: "q10,q25".into(),
        out: out.clone(),
        trajectories: None,
        initial_rating: 1000.0,
        scale: 400.0,
    })
    .unwrap();
    assert!(fs::read_to_string(&out).unwrap().lines().count() > 1);
    fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn usage_and_data_errors_have_distinct_exit_codes() {
    let binary = env!("CARGO_BIN_EXE_ratekit");
    let dir = workdir("exitcodes");

    // Unknown flag: usage error, exit 1.
    let out = Command::new(binary)
        .args(["simulate", "--nonsense"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(1));
    assert!(!out.stderr.is_empty());

    // Bad flag value: usage error, exit 1, one-line diagnostic.
    let out = Command::new(binary)
        .args([
            "rate",
            "--matches",
            "x.csv",
            "--k",
            "sixty",
            "--cutoffs",
            "5,10",
            "--out",
            "y",
        ])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(1));

    // Missing input file: data error, exit 2.
    let missing = dir.join("missing.csv").display().to_string();
    let out = Command::new(binary)
        .args([
            "rate",
            "--matches",
            &missing,
            "--k",
            "60,30,16",
            "--cutoffs",
            "5,10",
            "--out",
            "y",
        ])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
    let diagnostic = String::from_utf8_lossy(&out.stderr);
    assert_eq!(diagnostic.trim().lines().count(), 1);

    // Malformed match file: data error, exit 2.
    let bad = dir.join("bad.csv");
    fs::write(&bad, "not,a,match,log\n").unwrap();
    let out = Command::new(binary)
        .args([
            "rate",
            "--matches",
            &bad.display().to_string(),
            "--k",
            "60,30,16",
            "--cutoffs",
            "5,10",
            "--out",
            &dir.join("out.csv").display().to_string(),
        ])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));

    // A good run exits 0.
    let matches = simulate_small(&dir, "m.csv");
    let out = Command::new(binary)
        .args([
            "rate",
            "--matches",
            &matches.display().to_string(),
            "--k",
            "60,30,16",
            "--cutoffs",
            "5,10",
            "--out",
            &dir.join("ok.csv").display().to_string(),
        ])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn missing_player_in_report_is_a_data_error() {
    let dir = workdir("badplayer");
    let matches = simulate_small(&dir, "m.csv");
    let err = run_report(&ReportArgs {
        matches,
        k: "60,30,16".into(),
        cutoffs: "5,10".into(),
        out_dir: dir.join("report"),
        players: Some("nobody".into()),
        initial_rating: 1000.0,
        scale: 400.0,
        bin_width: 25.0,
    })
    .unwrap_err();
    assert_eq!(err.exit_code(), 2);
    fs::remove_dir_all(&dir).unwrap();
}
