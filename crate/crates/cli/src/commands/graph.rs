use std::path::PathBuf;

use anyhow::{bail, Result};
use clap::ValueEnum;
use dualshift::experiments::{load_features, load_ratings};
use dualshift::graphs::{content_graph_detailed, knn_feature_graph, Axis, DEFAULT_NEIGHBORS};

use crate::files::write_graph;

#[derive(Clone, Copy, ValueEnum)]
enum Kind {
    /// kNN graph on node feature vectors.
    Features,
    /// Graph from co-rated entries of a ratings file.
    Content,
}

#[derive(clap::Args)]
pub struct Args {
    #[arg(long, value_enum)]
    kind: Kind,
    /// Ratings file (content graphs).
    #[arg(long)]
    ratings: Option<PathBuf>,
    /// `rows` or `cols` (content graphs).
    #[arg(long, default_value = "rows")]
    axis: Axis,
    /// Distance threshold; defaults to the 60th percentile.
    #[arg(long)]
    d_s: Option<f64>,
    /// Kernel width; defaults to the mean squared offset of retained pairs.
    #[arg(long)]
    gamma: Option<f64>,
    /// Feature file, one comma-separated vector per node (feature graphs).
    #[arg(long)]
    features: Option<PathBuf>,
    #[arg(long, default_value_t = DEFAULT_NEIGHBORS)]
    neighbors: usize,
    /// Edge-list output.
    #[arg(long)]
    out: PathBuf,
}

pub fn run(a: Args) -> Result<()> {
    let graph = match a.kind {
        Kind::Content => {
            let Some(path) = &a.ratings else {
                bail!("--ratings is required for content graphs");
            };
            let c = content_graph_detailed(&load_ratings(path)?, a.axis, a.d_s, a.gamma)?;
            println!(
                "d_min {:.4}, d_s {:.4}, gamma {:.4}, {} components",
                c.d_min, c.d_s, c.gamma, c.components
            );
            c.graph
        }
        Kind::Features => {
            let Some(path) = &a.features else {
                bail!("--features is required for feature graphs");
            };
            knn_feature_graph(&load_features(path)?, a.neighbors)?
        }
    };
    write_graph(&a.out, &graph)?;
    println!("wrote {}-node graph to {}", graph.n(), a.out.display());
    Ok(())
}
