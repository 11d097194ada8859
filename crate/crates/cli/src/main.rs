//! `repsep`: representational similarity matrices and model-family
//! separability reports from a manifest of activation files.

mod commands;
mod config;
mod figures;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use config::{parse_metric_list, Overrides, RunConfig};

#[derive(Parser)]
#[command(name = "repsep", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check a manifest: schema, files, stimulus counts and finiteness.
    Validate { manifest: PathBuf },
    /// Compute a similarity matrix per metric.
    Similarity {
        #[arg(long)]
        config: PathBuf,
        /// Comma-separated subset of rsa,softmatch,procrustes,linpred.
        #[arg(long)]
        metrics: Option<String>,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        jobs: Option<usize>,
    },
    /// Build separability reports from the similarity matrices.
    Separability {
        #[arg(long)]
        config: PathBuf,
        /// Also write heatmap and ROC figures.
        #[arg(long)]
        svg: bool,
        #[arg(long)]
        metrics: Option<String>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn run(cli: Cli) -> anyhow::Result<bool> {
    match cli.command {
        Command::Validate { manifest } => commands::validate(&manifest),
        Command::Similarity {
            config,
            metrics,
            out,
            jobs,
        } => {
            let overrides = Overrides {
                metrics: metrics.as_deref().map(parse_metric_list).transpose()?,
                output_dir: out,
                jobs,
                svg: false,
            };
            let cfg = RunConfig::load(&config, &overrides)?;
            let files = commands::similarity(&cfg)?;
            println!("wrote {} file(s) to {}", files.len(), cfg.output_dir.display());
            Ok(true)
        }
        Command::Separability {
            config,
            svg,
            metrics,
            out,
        } => {
            let overrides = Overrides {
                metrics: metrics.as_deref().map(parse_metric_list).transpose()?,
                output_dir: out,
                jobs: None,
                svg,
            };
            let cfg = RunConfig::load(&config, &overrides)?;
            let files = commands::separability(&cfg)?;
            println!("wrote {} file(s) to {}", files.len(), cfg.output_dir.display());
            Ok(true)
        }
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().filter_or("REPSEP_LOG", "warn"))
        .format_timestamp(None)
        .init();
    match run(Cli::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::FAILURE,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
