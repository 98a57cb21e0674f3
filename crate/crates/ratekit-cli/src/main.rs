use std::path::PathBuf;
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::{Parser, Subcommand};

use ratekit_cli::{
    run_buckets, run_rate, run_report, run_simulate, run_tune, BucketsArgs, RateArgs, ReportArgs,
    SimulateArgs, TuneArgs,
};

/// Elo rating engineering toolkit: simulate bot tournaments, tune
/// K-schedules by predictive power, and report on rating populations.
#[derive(Parser)]
#[command(name = "ratekit", version, disable_help_subcommand = true)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a synthetic match log from the seven-bot Ludo tournament.
    Simulate {
        /// Number of games to play.
        #[arg(long)]
        games: u64,
        /// Master seed; every run with the same seed is identical.
        #[arg(long)]
        seed: u64,
        /// Output match CSV path.
        #[arg(long)]
        out: PathBuf,
        /// Rollout count per candidate for the Monte-Carlo bots.
        #[arg(long, default_value_t = 100)]
        mcts_iterations: u32,
        /// Turn budget per player before points decide.
        #[arg(long, default_value_t = 24)]
        max_turns: u32,
        /// Directory to write per-game transcript JSON files into.
        #[arg(long)]
        transcripts: Option<PathBuf>,
    },
    /// Grid-search K-schedules and cutoffs by held-out F1.
    Tune {
        /// Input match CSV.
        #[arg(long)]
        matches: PathBuf,
        /// Grid JSON (`{"k_triples": [[60,30,16]], "cutoffs": [{"fixed": [5,10]}]}`);
        /// the built-in baseline grid when omitted.
        #[arg(long)]
        grid: Option<PathBuf>,
        /// Seed for the dataset orientation randomization.
        #[arg(long)]
        seed: u64,
        /// Output tuning report JSON path.
        #[arg(long)]
        out: PathBuf,
    },
    /// Replay a match log under one configuration and write final ratings.
    Rate {
        /// Input match CSV.
        #[arg(long)]
        matches: PathBuf,
        /// K triple, e.g. 60,30,16.
        #[arg(long)]
        k: String,
        /// Game-count cutoffs: fixed ('5,10') or quantile ('q10,q25').
        #[arg(long)]
        cutoffs: String,
        /// Output ratings CSV path.
        #[arg(long)]
        out: PathBuf,
        /// Optional trajectory CSV path.
        #[arg(long)]
        trajectories: Option<PathBuf>,
        #[arg(long, default_value_t = 1000.0)]
        initial_rating: f64,
        #[arg(long, default_value_t = 400.0)]
        scale: f64,
    },
    /// Score the outcome model within bands of absolute rating difference.
    Buckets {
        /// Input match CSV.
        #[arg(long)]
        matches: PathBuf,
        /// K triple, e.g. 60,30,16.
        #[arg(long)]
        k: String,
        /// Game-count cutoffs: fixed ('5,10') or quantile ('q10,q25').
        #[arg(long)]
        cutoffs: String,
        /// Seed for the dataset orientation randomization.
        #[arg(long)]
        seed: u64,
        /// Output bucket CSV path.
        #[arg(long)]
        out: PathBuf,
        /// Ascending bucket edges, e.g. 0,30,60,100,200,500,10000.
        #[arg(long)]
        edges: Option<String>,
    },
    /// Summary statistics, rating histogram, and trajectory charts.
    Report {
        /// Input match CSV.
        #[arg(long)]
        matches: PathBuf,
        /// K triple, e.g. 60,30,16.
        #[arg(long)]
        k: String,
        /// Game-count cutoffs: fixed ('5,10') or quantile ('q10,q25').
        #[arg(long)]
        cutoffs: String,
        /// Directory receiving summary.csv, histogram.svg, trajectories.svg.
        #[arg(long)]
        out_dir: PathBuf,
        /// Comma-separated players to chart; everyone when omitted.
        #[arg(long)]
        players: Option<String>,
        #[arg(long, default_value_t = 1000.0)]
        initial_rating: f64,
        #[arg(long, default_value_t = 400.0)]
        scale: f64,
        /// Histogram bin width in rating points.
        #[arg(long, default_value_t = 25.0)]
        bin_width: f64,
    },
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(err) => {
            if matches!(
                err.kind(),
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion
            ) {
                print!("{err}");
                return ExitCode::SUCCESS;
            }
            eprintln!("{err}");
            return ExitCode::from(1);
        }
    };
    let outcome = match cli.command {
        Command::Simulate {
            games,
            seed,
            out,
            mcts_iterations,
            max_turns,
            transcripts,
        } => run_simulate(&SimulateArgs {
            games,
            seed,
            out,
            mcts_iterations,
            max_turns,
            transcripts,
        }),
        Command::Tune {
            matches,
            grid,
            seed,
            out,
        } => run_tune(&TuneArgs {
            matches,
            grid,
            seed,
            out,
        }),
        Command::Rate {
            matches,
            k,
            cutoffs,
            out,
            trajectories,
            initial_rating,
            scale,
        } => run_rate(&RateArgs {
            matches,
            k,
            cutoffs,
            out,
            trajectories,
            initial_rating,
            scale,
        }),
        Command::Buckets {
            matches,
            k,
            cutoffs,
            seed,
            out,
            edges,
        } => run_buckets(&BucketsArgs {
            matches,
            k,
            cutoffs,
            seed,
            out,
            edges,
        }),
        Command::Report {
            matches,
            k,
            cutoffs,
            out_dir,
            players,
            initial_rating,
            scale,
            bin_width,
        } => run_report(&ReportArgs {
            matches,
            k,
            cutoffs,
            out_dir,
            players,
            initial_rating,
            scale,
            bin_width,
        }),
    };
    match outcome {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("{err}");
            ExitCode::from(err.exit_code() as u8)
        }
    }
}
