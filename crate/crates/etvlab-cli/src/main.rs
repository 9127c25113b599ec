//! Command-line front end: batch experiments plus standalone ETV, fit, and
//! trend analyses over the text formats the runner emits.

use std::fs;
use std::path::PathBuf;

use anyhow::{bail, Context, Result};
use clap::{ArgAction, Parser, Subcommand};

use etvlab::config::ExperimentConfig;
use etvlab::experiment::{
    parse_fit_series, render_fit_series, render_trend_table, run_experiment, trends_from_rows,
};
use etvlab::ga::records_from_lines;
use etvlab::genealogy::build_graph;
use etvlab::qexp;
use etvlab::stats::parse_distribution;

#[derive(Parser)]
#[command(name = "etvlab", version, about = "GA population laboratory: genealogical impact distributions, q-exponential fits, and power trends")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Execute a batch experiment described by a config file.
    Run {
        /// Flat key = value experiment configuration.
        #[arg(long)]
        config: PathBuf,
        /// Override the master seed from the config.
        #[arg(long)]
        seed: Option<u64>,
        /// Override the output directory from the config.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Number of parallel workers (default: all cores).
        #[arg(long)]
        workers: Option<usize>,
    },
    /// Compute an ETV table from a serialized birth-record stream.
    Etv {
        /// Record-stream file (one `j i pj pi clone uncoupled` line per birth).
        #[arg(long)]
        records: PathBuf,
        /// Snapshot horizon; defaults to the last recorded generation.
        #[arg(long)]
        horizon: Option<u32>,
        /// Cap on per-generation descendant counts.
        #[arg(long)]
        edge_cap: Option<u32>,
        /// Apply hitchhiking elimination (on by default).
        #[arg(long, default_value_t = true, action = ArgAction::Set)]
        detach: bool,
    },
    /// Fit a q-exponential to a two-column distribution file.
    Fit {
        #[arg(long)]
        dist: PathBuf,
    },
    /// Build the power-trend summary table from a fit-series file.
    Trend {
        #[arg(long)]
        fits: PathBuf,
    },
}

fn main() -> Result<()> {
    match Cli::parse().command {
        Command::Run {
            config,
            seed,
            out,
            workers,
        } => {
            let text = fs::read_to_string(&config)
                .with_context(|| format!("reading config {}", config.display()))?;
            let mut cfg = ExperimentConfig::parse(&text)?;
            if let Some(seed) = seed {
                cfg.master_seed = seed;
            }
            if let Some(out) = out {
                cfg.out_dir = out;
            }
            let (result, manifest) = run_experiment(&cfg, workers)?;
            print!("{}", render_fit_series(&result));
            print!("{}", render_trend_table(&result.trends));
            if let Some(anomaly) = &result.anomaly {
                let balanced = anomaly
                    .per_run
                    .iter()
                    .filter(|r| r.balance_generation.is_some())
                    .count();
                println!(
                    "# anomaly: {balanced}/{} runs reached fitness balance; tail flagged: {}",
                    anomaly.per_run.len(),
                    anomaly.tail.map_or(false, |t| t.flagged)
                );
            }
            println!(
                "# wrote {} files under {}",
                manifest.distribution_files.len()
                    + manifest.record_files.len()
                    + manifest.plot_files.len()
                    + 3,
                cfg.out_dir.display()
            );
        }
        Command::Etv {
            records,
            horizon,
            edge_cap,
            detach,
        } => {
            let text = fs::read_to_string(&records)
                .with_context(|| format!("reading records {}", records.display()))?;
            let stream = records_from_lines(&text)?;
            let graph = build_graph(&stream)?;
            let horizon = horizon.unwrap_or_else(|| graph.generations());
            if horizon == 0 || horizon > graph.generations() {
                bail!(
                    "horizon {horizon} outside the recorded range 1..={}",
                    graph.generations()
                );
            }
            let table = graph.compute_etv_snapshot(horizon, edge_cap, detach);
            print!("{}", table.to_two_column());
        }
        Command::Fit { dist } => {
            let text = fs::read_to_string(&dist)
                .with_context(|| format!("reading distribution {}", dist.display()))?;
            let distribution = parse_distribution(&text)?;
            let fit = qexp::fit(&distribution)?;
            println!(
                "q {}\nx0 {}\np0 {}\ngamma {}\nscore {}",
                fit.params.q,
                fit.params.x0,
                fit.params.p0(),
                fit.gamma,
                fit.score
            );
        }
        Command::Trend { fits } => {
            let text = fs::read_to_string(&fits)
                .with_context(|| format!("reading fit series {}", fits.display()))?;
            let rows = parse_fit_series(&text)?;
            let trends = trends_from_rows(&rows)?;
            print!("{}", render_trend_table(&trends));
        }
    }
    Ok(())
}
