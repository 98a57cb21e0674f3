//! Command implementations behind the `ratekit` binary.
//!
//! Every command is a pure function of its input files, flags, and seed:
//! re-running with identical arguments rewrites byte-identical artifacts.
//! Commands that consume randomness take an explicit seed; nothing ever
//! falls back to the wall clock.

pub mod chart;

use std::fmt;
use std::fs;
use std::path::{Path, PathBuf};

use serde::Serialize;

use ratekit::data::{
    parse_matches, summary_stats, write_matches, write_ratings_csv, write_trajectories_csv,
    GameCountDistribution, MatchRecord,
};
use ratekit::elo::{replay, EloConfig, KSchedule, ReplayResult};
use ratekit::logit::fit_logistic;
use ratekit::ludo::{default_roster, play_indexed_game, LudoRules};
use ratekit::tune::{
    bucket_analysis, build_dataset, grid_search, resolve_cutoffs, CutoffSpec, ParamGrid,
    DEFAULT_BUCKET_EDGES,
};

/// Usage errors exit with 1, data errors with 2.
#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Data(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 1,
            CliError::Data(_) => 2,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Usage(msg) => write!(f, "usage error: {msg}"),
            CliError::Data(msg) => write!(f, "error: {msg}"),
        }
    }
}

impl std::error::Error for CliError {}

fn read_file(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|e| CliError::Data(format!("{}: {e}", path.display())))
}

fn write_file(path: &Path, contents: &str) -> Result<(), CliError> {
    if let Some(parent) = path.parent() {
        if !parent.as_os_str().is_empty() {
            fs::create_dir_all(parent)
                .map_err(|e| CliError::Data(format!("{}: {e}", parent.display())))?;
        }
    }
    fs::write(path, contents).map_err(|e| CliError::Data(format!("{}: {e}", path.display())))
}

fn load_matches(path: &Path) -> Result<Vec<MatchRecord>, CliError> {
    let text = read_file(path)?;
    parse_matches(&text).map_err(|e| CliError::Data(format!("{}: {e}", path.display())))
}

/// Parses `"60,30,16"` into a K triple.
pub fn parse_k_triple(text: &str) -> Result<(f64, f64, f64), CliError> {
    let parts: Vec<&str> = text.split(',').collect();
    if parts.len() != 3 {
        return Err(CliError::Usage(format!(
            "--k expects three comma-separated values, got '{text}'"
        )));
    }
    let mut values = [0.0f64; 3];
    for (slot, part) in values.iter_mut().zip(&parts) {
        *slot = part
            .trim()
            .parse()
            .map_err(|_| CliError::Usage(format!("--k component '{part}' is not a number")))?;
    }
    Ok((values[0], values[1], values[2]))
}

/// Parses `"5,10"` (fixed) or `"q10,q25"` (quantile) cutoffs.
pub fn parse_cutoff_spec(text: &str) -> Result<CutoffSpec, CliError> {
    let parts: Vec<&str> = text.split(',').map(str::trim).collect();
    if parts.len() != 2 {
        return Err(CliError::Usage(format!(
            "--cutoffs expects two comma-separated values, got '{text}'"
        )));
    }
    let quantile = parts.iter().filter(|p| p.starts_with('q')).count();
    match quantile {
        0 => {
            let a = parts[0].parse().map_err(|_| {
                CliError::Usage(format!(
                    "--cutoffs component '{}' is not an integer",
                    parts[0]
                ))
            })?;
            let b = parts[1].parse().map_err(|_| {
                CliError::Usage(format!(
                    "--cutoffs component '{}' is not an integer",
                    parts[1]
                ))
            })?;
            Ok(CutoffSpec::Fixed(a, b))
        }
        2 => {
            let k1 = parts[0][1..].parse().map_err(|_| {
                CliError::Usage(format!(
                    "--cutoffs percentile '{}' is not a number",
                    parts[0]
                ))
            })?;
            let k2 = parts[1][1..].parse().map_err(|_| {
                CliError::Usage(format!(
                    "--cutoffs percentile '{}' is not a number",
                    parts[1]
                ))
            })?;
            Ok(CutoffSpec::Quantile(k1, k2))
        }
        _ => Err(CliError::Usage(format!(
            "--cutoffs must be both fixed ('5,10') or both quantile ('q10,q25'), got '{text}'"
        ))),
    }
}

/// Flag values for commands that take `--k` and `--cutoffs`, validated
/// before any file is touched so usage errors surface first.
struct ConfigFlags {
    triple: (f64, f64, f64),
    spec: CutoffSpec,
    initial_rating: f64,
    scale: f64,
}

impl ConfigFlags {
    fn parse(k: &str, cutoffs: &str, initial_rating: f64, scale: f64) -> Result<Self, CliError> {
        Ok(Self {
            triple: parse_k_triple(k)?,
            spec: parse_cutoff_spec(cutoffs)?,
            initial_rating,
            scale,
        })
    }

    /// Resolves quantile cutoffs against the input records.
    fn resolve(&self, records: &[MatchRecord]) -> Result<EloConfig, CliError> {
        let dist = GameCountDistribution::from_records(records);
        let (n_c1, n_c2) =
            resolve_cutoffs(&self.spec, &dist).map_err(|e| CliError::Data(e.to_string()))?;
        let (k_a, k_b, k_c) = self.triple;
        let schedule = KSchedule::new(k_a, k_b, k_c, n_c1, n_c2)
            .map_err(|e| CliError::Usage(e.to_string()))?;
        EloConfig::new(self.initial_rating, self.scale, schedule)
            .map_err(|e| CliError::Usage(e.to_string()))
    }
}

#[derive(Debug, Clone)]
pub struct SimulateArgs {
    pub games: u64,
    pub seed: u64,
    pub out: PathBuf,
    pub mcts_iterations: u32,
    pub max_turns: u32,
    /// Directory for per-game transcript JSON files, if wanted.
    pub transcripts: Option<PathBuf>,
}

/// Plays the requested number of bot games and writes the match CSV.
pub fn run_simulate(args: &SimulateArgs) -> Result<(), CliError> {
    if args.games == 0 {
        return Err(CliError::Usage("--games must be at least 1".into()));
    }
    let rules = LudoRules {
        max_turns_per_player: args.max_turns,
        ..LudoRules::default()
    };
    let roster =
        default_roster(args.mcts_iterations).map_err(|e| CliError::Usage(e.to_string()))?;
    let mut records = Vec::with_capacity(args.games as usize);
    for game_index in 0..args.games {
        let (record, result) = play_indexed_game(&roster, game_index, args.seed, &rules)
            .map_err(|e| CliError::Data(e.to_string()))?;
        if let Some(dir) = &args.transcripts {
            let body = serde_json::to_string_pretty(&result.transcript)
                .map_err(|e| CliError::Data(e.to_string()))?;
            write_file(&dir.join(format!("{}.json", record.game_id)), &body)?;
        }
        records.push(record);
    }
    write_file(&args.out, &write_matches(&records))
}

#[derive(Debug, Clone)]
pub struct TuneArgs {
    pub matches: PathBuf,
    /// Grid JSON path; the built-in baseline grid when absent.
    pub grid: Option<PathBuf>,
    pub seed: u64,
    pub out: PathBuf,
}

#[derive(Debug, Serialize)]
struct TuningReportRow {
    k_a: f64,
    k_b: f64,
    k_c: f64,
    n_c1: u32,
    n_c2: u32,
    f1: f64,
    accuracy: f64,
    beta_0: f64,
    beta_1: f64,
    se_0: f64,
    se_1: f64,
    p_0: f64,
    p_1: f64,
    /// Configurations with identical F1 share a group: 0 for the best F1.
    tie_group: usize,
}

#[derive(Debug, Serialize)]
struct TuningReport {
    /// Index into `evaluations` of the selected configuration.
    selected: usize,
    evaluations: Vec<TuningReportRow>,
}

/// Runs the grid search and writes the tuning report JSON; echoes the
/// selected configuration on stdout.
pub fn run_tune(args: &TuneArgs) -> Result<(), CliError> {
    let records = load_matches(&args.matches)?;
    let grid: ParamGrid = match &args.grid {
        Some(path) => serde_json::from_str(&read_file(path)?)
            .map_err(|e| CliError::Data(format!("{}: {e}", path.display())))?,
        None => ParamGrid::baseline(),
    };
    let ranked =
        grid_search(&records, &grid, args.seed).map_err(|e| CliError::Data(e.to_string()))?;

    // Tie groups follow the ranking; the report lists rows in grid order.
    let mut tie_groups = vec![0usize; ranked.len()];
    for i in 1..ranked.len() {
        tie_groups[i] = if ranked[i].metrics.f1 == ranked[i - 1].metrics.f1 {
            tie_groups[i - 1]
        } else {
            tie_groups[i - 1] + 1
        };
    }
    let mut order: Vec<usize> = (0..ranked.len()).collect();
    order.sort_by_key(|&i| ranked[i].grid_index);
    let selected = order
        .iter()
        .position(|&i| i == 0)
        .expect("the ranking head is present");

    let rows: Vec<TuningReportRow> = order
        .iter()
        .map(|&i| {
            let ev = &ranked[i];
            let s = ev.config.schedule();
            TuningReportRow {
                k_a: s.k_a(),
                k_b: s.k_b(),
                k_c: s.k_c(),
                n_c1: ev.resolved_cutoffs.0,
                n_c2: ev.resolved_cutoffs.1,
                f1: ev.metrics.f1,
                accuracy: ev.metrics.accuracy,
                beta_0: ev.model.beta_0,
                beta_1: ev.model.beta_1,
                se_0: ev.model.se_0,
                se_1: ev.model.se_1,
                p_0: ev.model.p_0,
                p_1: ev.model.p_1,
                tie_group: tie_groups[i],
            }
        })
        .collect();

    let best = &ranked[0];
    let schedule = best.config.schedule();
    println!(
        "selected K = ({}, {}, {}) with cutoffs ({}, {}): F1 {:.4} over {} configurations",
        schedule.k_a(),
        schedule.k_b(),
        schedule.k_c(),
        best.resolved_cutoffs.0,
        best.resolved_cutoffs.1,
        best.metrics.f1,
        rows.len()
    );

    let report = TuningReport {
        selected,
        evaluations: rows,
    };
    let body = serde_json::to_string_pretty(&report).map_err(|e| CliError::Data(e.to_string()))?;
    write_file(&args.out, &body)
}

#[derive(Debug, Clone)]
pub struct RateArgs {
    pub matches: PathBuf,
    pub k: String,
    pub cutoffs: String,
    pub out: PathBuf,
    pub trajectories: Option<PathBuf>,
    pub initial_rating: f64,
    pub scale: f64,
}

fn replay_from_flags(args: &RateArgs) -> Result<ReplayResult, CliError> {
    let flags = ConfigFlags::parse(&args.k, &args.cutoffs, args.initial_rating, args.scale)?;
    let records = load_matches(&args.matches)?;
    let config = flags.resolve(&records)?;
    replay(&records, &config).map_err(|e| CliError::Data(e.to_string()))
}

/// Replays the log under one configuration and writes final ratings (and
/// optionally per-player trajectories).
pub fn run_rate(args: &RateArgs) -> Result<(), CliError> {
    let result = replay_from_flags(args)?;
    write_file(&args.out, &write_ratings_csv(&result.final_states))?;
    if let Some(path) = &args.trajectories {
        write_file(path, &write_trajectories_csv(&result.trajectories))?;
    }
    Ok(())
}

#[derive(Debug, Clone)]
pub struct BucketsArgs {
    pub matches: PathBuf,
    pub k: String,
    pub cutoffs: String,
    pub seed: u64,
    pub out: PathBuf,
    /// Comma-separated ascending edges; the default covers 0 to 10000.
    pub edges: Option<String>,
}

/// Fits the outcome model and writes per-band accuracy/F1 rows.
pub fn run_buckets(args: &BucketsArgs) -> Result<(), CliError> {
    let flags = ConfigFlags::parse(
        &args.k,
        &args.cutoffs,
        ratekit::elo::DEFAULT_INITIAL_RATING,
        ratekit::elo::DEFAULT_SCALE,
    )?;
    let edges: Vec<f64> = match &args.edges {
        Some(text) => text
            .split(',')
            .map(|p| {
                p.trim().parse().map_err(|_| {
                    CliError::Usage(format!("--edges component '{p}' is not a number"))
                })
            })
            .collect::<Result<_, _>>()?,
        None => DEFAULT_BUCKET_EDGES.to_vec(),
    };
    let records = load_matches(&args.matches)?;
    let config = flags.resolve(&records)?;
    let (train, test) =
        build_dataset(&records, &config, args.seed).map_err(|e| CliError::Data(e.to_string()))?;
    let model = fit_logistic(&train).map_err(|e| CliError::Data(e.to_string()))?;
    let report =
        bucket_analysis(&model, &test, &edges).map_err(|e| CliError::Data(e.to_string()))?;

    let mut out = String::from("bucket_lo,bucket_hi,games,accuracy,f1\n");
    for row in &report.rows {
        let accuracy = row.accuracy.map(|v| v.to_string()).unwrap_or_default();
        let f1 = row.f1.map(|v| v.to_string()).unwrap_or_default();
        out.push_str(&format!(
            "{},{},{},{},{}\n",
            row.lo, row.hi, row.games, accuracy, f1
        ));
    }
    write_file(&args.out, &out)
}

#[derive(Debug, Clone)]
pub struct ReportArgs {
    pub matches: PathBuf,
    pub k: String,
    pub cutoffs: String,
    pub out_dir: PathBuf,
    /// Players to draw trajectories for; everyone when absent.
    pub players: Option<String>,
    pub initial_rating: f64,
    pub scale: f64,
    pub bin_width: f64,
}

/// Writes summary statistics CSV plus histogram and trajectory SVG charts.
pub fn run_report(args: &ReportArgs) -> Result<(), CliError> {
    if args.bin_width <= 0.0 {
        return Err(CliError::Usage("--bin-width must be positive".into()));
    }
    let rate_args = RateArgs {
        matches: args.matches.clone(),
        k: args.k.clone(),
        cutoffs: args.cutoffs.clone(),
        out: PathBuf::new(),
        trajectories: None,
        initial_rating: args.initial_rating,
        scale: args.scale,
    };
    let result = replay_from_flags(&rate_args)?;

    let ratings: Vec<f64> = result.final_states.values().map(|s| s.rating).collect();
    let summary = summary_stats(&ratings).map_err(|e| CliError::Data(e.to_string()))?;
    let summary_csv = format!(
        "min,p10,p25,p50,mean,p75,p90,max\n{},{},{},{},{},{},{},{}\n",
        summary.min,
        summary.p10,
        summary.p25,
        summary.p50,
        summary.mean,
        summary.p75,
        summary.p90,
        summary.max
    );
    write_file(&args.out_dir.join("summary.csv"), &summary_csv)?;

    let provenance = format!(
        "ratekit report matches={} k={} cutoffs={} initial_rating={} scale={} bin_width={}",
        args.matches.display(),
        args.k,
        args.cutoffs,
        args.initial_rating,
        args.scale,
        args.bin_width
    );
    let histogram = chart::histogram_svg(
        &ratings,
        args.bin_width,
        "Final rating distribution",
        &provenance,
    );
    write_file(&args.out_dir.join("histogram.svg"), &histogram)?;

    let selected: Vec<(String, Vec<f64>)> = match &args.players {
        Some(list) => {
            let mut series = Vec::new();
            for name in list.split(',').map(str::trim) {
                let trajectory = result.trajectories.get(name).ok_or_else(|| {
                    CliError::Data(format!("player '{name}' does not appear in the match log"))
                })?;
                series.push((name.to_string(), trajectory.clone()));
            }
            series
        }
        None => result
            .trajectories
            .iter()
            .map(|(k, v)| (k.clone(), v.clone()))
            .collect(),
    };
    let chart = chart::trajectories_svg(&selected, "Rating trajectories", &provenance);
    write_file(&args.out_dir.join("trajectories.svg"), &chart)
}
