use std::fs;
use std::path::PathBuf;

use anyhow::{Context, Result};
use dualshift::completion::write_dense_csv;
use dualshift::experiments::write_ratings;
use dualshift::graphs::{synthetic_netflix, SyntheticParams};

use crate::files::write_graph;

#[derive(clap::Args)]
pub struct Args {
    #[arg(long, default_value_t = 200)]
    m: usize,
    #[arg(long, default_value_t = 100)]
    n: usize,
    #[arg(long, default_value_t = 4)]
    row_communities: usize,
    #[arg(long, default_value_t = 4)]
    col_communities: usize,
    /// Standard deviation of the additive Gaussian noise.
    #[arg(long, default_value_t = 0.0)]
    noise: f64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Output directory.
    #[arg(long)]
    out: PathBuf,
}

/// Writes `ratings.csv`, `truth.csv`, `row_graph.edges`, `col_graph.edges`
/// and the community labels.
pub fn run(a: Args) -> Result<()> {
    let params = SyntheticParams::new(a.m, a.n, a.row_communities, a.col_communities)
        .with_noise(a.noise)
        .with_seed(a.seed);
    let data = synthetic_netflix(&params)?;
    fs::create_dir_all(&a.out).with_context(|| format!("creating {}", a.out.display()))?;
    write_ratings(&a.out.join("ratings.csv"), &data.observed)?;
    write_dense_csv(&data.truth, &a.out.join("truth.csv"))?;
    write_graph(&a.out.join("row_graph.edges"), &data.row_graph)?;
    write_graph(&a.out.join("col_graph.edges"), &data.col_graph)?;
    for (name, labels) in [
        ("row_labels.txt", &data.row_labels),
        ("col_labels.txt", &data.col_labels),
    ] {
        let text: String = labels.iter().map(|l| format!("{l}\n")).collect();
        fs::write(a.out.join(name), text)?;
    }
    println!(
        "wrote {}x{} synthetic data to {}",
        a.m,
        a.n,
        a.out.display()
    );
    Ok(())
}
