use std::path::PathBuf;
use std::sync::Arc;

use anyhow::{Context, Result};
use dualshift::completion::{dglr_solve, CompletionProblem};
use dualshift::experiments::load_ratings;
use dualshift::graphs::Shape;
use dualshift::linalg::SolverOptions;
use dualshift::sampling::SampleSet;

use crate::files::{read_graph, read_sample_set};

#[derive(clap::Args)]
pub struct Args {
    #[arg(long)]
    ratings: PathBuf,
    /// `row,col` file of entries to use; all known ratings when absent.
    #[arg(long)]
    omega: Option<PathBuf>,
    #[arg(long)]
    row_graph: PathBuf,
    #[arg(long)]
    col_graph: PathBuf,
    #[arg(long, default_value_t = 0.1)]
    alpha: f64,
    #[arg(long, default_value_t = 0.1)]
    beta: f64,
    /// Relative residual target for conjugate gradient.
    #[arg(long, default_value_t = 1e-8)]
    tol: f64,
    #[arg(long)]
    max_iter: Option<usize>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Completed matrix as CSV, one row per line.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Solver summary as JSON.
    #[arg(long)]
    report: Option<PathBuf>,
}

pub fn run(a: Args) -> Result<()> {
    let ratings = load_ratings(&a.ratings)?;
    let row = Arc::new(read_graph(&a.row_graph)?);
    let col = Arc::new(read_graph(&a.col_graph)?);
    let shape = Shape::new(row.n(), col.n());
    let omega = match &a.omega {
        Some(p) => read_sample_set(p, shape)?,
        None => SampleSet::from_pairs(shape, &ratings.positions())
            .context("ratings do not fit the graphs")?,
    };
    let problem = CompletionProblem::new(&ratings, omega, row, col, a.alpha, a.beta)?;
    let mut cg = SolverOptions::cg_default(shape.len())
        .with_tol(a.tol)
        .with_seed(a.seed);
    if let Some(it) = a.max_iter {
        cg = cg.with_max_iter(it);
    }
    let report = dglr_solve(&problem, &cg)?;
    if let Some(out) = &a.out {
        report.write_matrix_csv(out)?;
    }
    if let Some(path) = &a.report {
        report.write_json(path)?;
    }
    println!("{}", serde_json::to_string_pretty(&report.summary())?);
    Ok(())
}
