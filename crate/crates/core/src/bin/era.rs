use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use era::pipeline::{
    cmd_extract, cmd_plot, cmd_rank, cmd_report, cmd_synth, ExtractOptions, PipelineError,
    PlotOptions, RankOptions, ReportOptions, SynthOptions,
};
use era::report::{Palette, PlotMode, PlotSpec};

/// Metric-pair selection for expressive range analysis.
#[derive(Parser)]
#[command(name = "era", version)]
struct Cli {
    /// Worker threads; defaults to one per core. Outputs do not depend on it.
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Compute all candidate metrics and Playability for a level corpus.
    Extract {
        /// Corpus root holding one directory per generator.
        levels_dir: PathBuf,
        #[arg(short, long)]
        out: PathBuf,
        /// Character to tile-class table (`key = value` lines).
        #[arg(long)]
        tilemap: Option<PathBuf>,
        /// Agent parameters (`key = value` lines).
        #[arg(long)]
        agent_config: Option<PathBuf>,
    },
    /// Rank every metric pair by FI, MC, AMC and average rank.
    Rank {
        metrics_csv: PathBuf,
        #[arg(short, long)]
        out: PathBuf,
        /// Top-N summary path; defaults to the output with an .md extension.
        #[arg(long)]
        summary: Option<PathBuf>,
        #[command(flatten)]
        grid: GridArgs,
        #[arg(long, default_value_t = 5)]
        top: usize,
    },
    /// Render one ERA plot as SVG.
    Plot {
        metrics_csv: PathBuf,
        /// Two metric names, x axis first: `Density,AverageY`.
        #[arg(long, value_parser = parse_pair)]
        pair: (String, String),
        /// fitness_heatmap, count_heatmap or generator_overlay.
        #[arg(long, default_value = "fitness_heatmap")]
        mode: String,
        #[arg(short, long)]
        out: PathBuf,
        #[command(flatten)]
        grid: GridArgs,
        #[command(flatten)]
        style: StyleArgs,
    },
    /// Write the ranking, summaries and best/worst pair plots to a directory.
    Report {
        metrics_csv: PathBuf,
        #[arg(short, long)]
        out: PathBuf,
        #[command(flatten)]
        grid: GridArgs,
        #[arg(long, default_value_t = 5)]
        top: usize,
        #[arg(long, default_value = "viridis")]
        palette: String,
    },
    /// Generate a synthetic corpus.
    Synth {
        /// One params file per generator (`key = value` lines).
        params: Vec<PathBuf>,
        #[arg(short, long)]
        out: PathBuf,
        /// Add the nine-generator, 9014-level ensemble.
        #[arg(long)]
        benchmark: bool,
        /// Seed for every generator, offset by its position.
        #[arg(long)]
        seed: Option<u64>,
    },
}

#[derive(Args)]
struct GridArgs {
    /// Cells per axis of the ERA grid.
    #[arg(long, default_value_t = 20)]
    grid: usize,
}

#[derive(Args)]
struct StyleArgs {
    #[arg(long, default_value = "viridis")]
    palette: String,
    #[arg(long, default_value_t = 480)]
    width: u32,
    #[arg(long, default_value_t = 480)]
    height: u32,
}

fn parse_pair(s: &str) -> Result<(String, String), String> {
    match s.split(',').map(str::trim).collect::<Vec<_>>()[..] {
        [a, b] if !a.is_empty() && !b.is_empty() => Ok((a.to_string(), b.to_string())),
        _ => Err(format!(
            "expected two metric names separated by a comma, got {s:?}"
        )),
    }
}

fn run(cli: Cli) -> Result<Vec<String>, PipelineError> {
    let threads = cli.threads;
    match cli.command {
        Command::Extract {
            levels_dir,
            out,
            tilemap,
            agent_config,
        } => {
            let outcome = cmd_extract(&ExtractOptions {
                levels_dir,
                tilemap,
                agent_config,
                out_csv: out,
                threads,
            })?;
            let mut warnings = outcome.warnings;
            if outcome.failures > 0 {
                warnings.push(format!(
                    "{} level(s) skipped, {} extracted",
                    outcome.failures, outcome.levels
                ));
            }
            Ok(warnings)
        }
        Command::Rank {
            metrics_csv,
            out,
            summary,
            grid,
            top,
        } => cmd_rank(&RankOptions {
            metrics_csv,
            grid: grid.grid,
            out_csv: out,
            summary,
            top_n: top,
            threads,
        }),
        Command::Plot {
            metrics_csv,
            pair,
            mode,
            out,
            grid,
            style,
        } => {
            let mode: PlotMode = mode.parse()?;
            let mut spec = PlotSpec::new(pair.0, pair.1, mode);
            spec.resolution = grid.grid;
            spec.palette = style.palette.parse::<Palette>()?;
            spec.width_px = style.width;
            spec.height_px = style.height;
            cmd_plot(&PlotOptions {
                metrics_csv,
                spec,
                out_svg: out,
            })?;
            Ok(Vec::new())
        }
        Command::Report {
            metrics_csv,
            out,
            grid,
            top,
            palette,
        } => cmd_report(&ReportOptions {
            metrics_csv,
            out_dir: out,
            top_n: top,
            grid: grid.grid,
            palette: palette.parse()?,
            threads,
        }),
        Command::Synth {
            params,
            out,
            benchmark,
            seed,
        } => {
            cmd_synth(&SynthOptions {
                params_files: params,
                benchmark,
                seed,
                out_dir: out,
                threads,
            })?;
            Ok(Vec::new())
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(warnings) => {
            for w in warnings {
                eprintln!("warning: {w}");
            }
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}
