use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::Result;
use clap::{Parser, Subcommand};

mod commands;
mod files;

use commands::{complete, eval, experiment, gen, graph, sample};

#[derive(Parser)]
#[command(
    name = "dualshift",
    version,
    about = "Graph sampling and dual-graph matrix completion"
)]
struct Cli {
    /// Log level filter (error, warn, info, debug, trace).
    #[arg(long, global = true, default_value = "warn")]
    log: String,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a synthetic rating matrix with its row and column graphs.
    Gen(gen::Args),
    /// Build a row or column graph from ratings or node features.
    Graph(graph::Args),
    /// Select entries to sample.
    Sample(sample::Args),
    /// Fill in a rating matrix from observed entries.
    Complete(complete::Args),
    /// Score an estimate, or summarize a metrics file.
    Eval(eval::Args),
    /// Run a sweep described by a TOML file.
    Experiment {
        #[arg(long)]
        config: PathBuf,
        /// Overrides `output_dir` from the config.
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    env_logger::Builder::new().parse_filters(&cli.log).init();
    let result: Result<()> = match cli.command {
        Command::Gen(a) => gen::run(a),
        Command::Graph(a) => graph::run(a),
        Command::Sample(a) => sample::run(a),
        Command::Complete(a) => complete::run(a),
        Command::Eval(a) => eval::run(a),
        Command::Experiment { config, out } => experiment::run(&config, out),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
