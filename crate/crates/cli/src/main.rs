//! `meanpart`: consensus clustering via mean partitions.
//!
//! Subcommands: `consensus`, `distance`, `asymmetry`, `diversity`,
//! `simulate`. All randomness derives from `--seed`; identical settings
//! produce byte-identical reports. Failures print a machine-readable error
//! JSON and exit nonzero.

mod commands;
mod config;
mod error;
mod labels;

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

use config::{parse_prob_spec, parse_usize_list, RunConfig, Settings};
use error::CliResult;

#[derive(Parser)]
#[command(
    name = "meanpart",
    version,
    about = "Consensus clustering via mean partitions"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Mean partition of a clustering ensemble, with convergence diagnostics
    Consensus(CommonArgs),
    /// Metric distances between the input clusterings
    Distance(CommonArgs),
    /// Degree of asymmetry and ball radius of each input clustering
    Asymmetry(CommonArgs),
    /// Diversity report, plus loss decomposition when a truth file is given
    Diversity(CommonArgs),
    /// Monte Carlo majority-vote convergence experiment (JSON + CSV)
    Simulate(CommonArgs),
}

#[derive(Args)]
struct CommonArgs {
    /// Label file with the input clusterings
    #[arg(long)]
    input: Option<PathBuf>,
    /// Label file with the ground-truth clustering (first row)
    #[arg(long)]
    truth: Option<PathBuf>,
    /// Report path; stdout when omitted. `simulate` also writes a CSV sibling
    #[arg(long)]
    output: Option<PathBuf>,
    /// JSON config file; command-line flags override its keys
    #[arg(long)]
    config: Option<PathBuf>,
    /// Seed for all randomness
    #[arg(long)]
    seed: Option<u64>,
    /// Force exact (enumeration) mean computation
    #[arg(long, conflicts_with = "heuristic")]
    exact: bool,
    /// Force heuristic (multi-restart fixed-point) mean computation
    #[arg(long)]
    heuristic: bool,
    /// Sampling mode: unconstrained | ball
    #[arg(long)]
    mode: Option<String>,
    /// Cluster capacity of the simulated ground truth
    #[arg(long)]
    ell: Option<usize>,
    /// Number of data points of the simulated ground truth
    #[arg(long = "points", alias = "m")]
    points: Option<usize>,
    /// Correctness probability: one value, or a comma list per point
    #[arg(long)]
    p: Option<String>,
    /// Sample sizes, comma separated
    #[arg(long = "n-grid")]
    n_grid: Option<String>,
    /// Monte Carlo trials per sample size
    #[arg(long)]
    trials: Option<u32>,
    /// Enumeration budget (also via MEANPART_BUDGET)
    #[arg(long)]
    budget: Option<u64>,
    /// Iteration cap for the heuristic mean
    #[arg(long)]
    max_iter: Option<usize>,
    /// Convergence tolerance for the heuristic mean
    #[arg(long)]
    tol: Option<f64>,
    /// Heuristic restarts (default: min(n, 8))
    #[arg(long)]
    restarts: Option<usize>,
    /// Retry cap for ball-rejection sampling
    #[arg(long)]
    max_retries: Option<u32>,
}

impl CommonArgs {
    fn into_settings(self) -> CliResult<Settings> {
        let file_cfg = match &self.config {
            Some(path) => RunConfig::load(path)?,
            None => RunConfig::default(),
        };
        let flag_cfg = RunConfig {
            input: self.input,
            truth: self.truth,
            output: self.output,
            seed: self.seed,
            exact: if self.exact {
                Some(true)
            } else if self.heuristic {
                Some(false)
            } else {
                None
            },
            mode: self.mode,
            ell: self.ell,
            m: self.points,
            p: self.p.as_deref().map(parse_prob_spec).transpose()?,
            n_grid: self.n_grid.as_deref().map(parse_usize_list).transpose()?,
            trials: self.trials,
            budget: self.budget,
            max_iter: self.max_iter,
            tol: self.tol,
            restarts: self.restarts,
            max_retries: self.max_retries,
        };
        Settings::from_config(file_cfg.overlay(flag_cfg))
    }
}

fn run(cli: Cli) -> CliResult<()> {
    match cli.command {
        Command::Consensus(a) => commands::consensus(&a.into_settings()?),
        Command::Distance(a) => commands::distance(&a.into_settings()?),
        Command::Asymmetry(a) => commands::asymmetry(&a.into_settings()?),
        Command::Diversity(a) => commands::diversity(&a.into_settings()?),
        Command::Simulate(a) => commands::simulate(&a.into_settings()?),
    }
}

fn main() {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                print!("{e}");
                std::process::exit(0);
            }
            let payload = serde_json::json!({
                "error": {"kind": "invalid-usage", "message": e.to_string()}
            });
            println!("{payload}");
            std::process::exit(2);
        }
    };
    if let Err(e) = run(cli) {
        let payload = serde_json::json!({
            "error": {"kind": e.kind, "message": e.message}
        });
        println!("{payload}");
        std::process::exit(1);
    }
}
