use std::collections::{BTreeMap, HashSet};
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use dualshift::completion::{read_dense_csv, rmse_eval};
use dualshift::experiments::{load_ratings, read_metrics};
use dualshift::nalgebra::DMatrix;
use dualshift::sampling::persist::parse_pairs;

#[derive(clap::Args)]
pub struct Args {
    /// Estimated matrix (CSV, one row per line).
    #[arg(long, requires = "truth")]
    estimate: Option<PathBuf>,
    /// Reference ratings; every known entry is scored unless `--entries`
    /// is given.
    #[arg(long)]
    truth: Option<PathBuf>,
    /// `row,col` file restricting the scored entries.
    #[arg(long)]
    entries: Option<PathBuf>,
    /// Metrics CSV to summarize as mean RMSE per method and budget.
    #[arg(long, conflicts_with = "estimate")]
    metrics: Option<PathBuf>,
}

pub fn run(a: Args) -> Result<()> {
    if let Some(path) = &a.metrics {
        return summarize(path);
    }
    let (Some(estimate), Some(truth)) = (&a.estimate, &a.truth) else {
        bail!("pass --estimate with --truth, or --metrics");
    };
    let x = read_dense_csv(estimate)?;
    let (reference, known) = read_reference(truth)?;
    let entries = match &a.entries {
        Some(p) => {
            let text = std::fs::read_to_string(p)?;
            parse_pairs(&text, p)?.into_iter().map(|(_, e)| e).collect()
        }
        None => known.clone(),
    };
    let known: HashSet<_> = known.into_iter().collect();
    if let Some(&(i, j)) = entries.iter().find(|e| !known.contains(e)) {
        bail!("entry ({i}, {j}) has no reference value");
    }
    let rmse = rmse_eval(&x, &reference, &entries)?;
    println!("rmse {rmse:.6} over {} entries", entries.len());
    Ok(())
}

type Entries = Vec<(usize, usize)>;

/// Reference values from a ratings file, or from a dense CSV where every
/// entry counts as known.
fn read_reference(path: &Path) -> Result<(DMatrix<f64>, Entries)> {
    match load_ratings(path) {
        Ok(r) => Ok((r.to_dense_zero_filled(), r.positions())),
        Err(ratings_err) => {
            let x = read_dense_csv(path)
                .with_context(|| format!("not a ratings file either: {ratings_err}"))?;
            let all = (0..x.ncols())
                .flat_map(|j| (0..x.nrows()).map(move |i| (i, j)))
                .collect();
            Ok((x, all))
        }
    }
}

fn summarize(path: &Path) -> Result<()> {
    let rows = read_metrics(path)?;
    let mut acc: BTreeMap<(String, usize), Vec<f64>> = BTreeMap::new();
    for r in &rows {
        acc.entry((r.method.clone(), r.k)).or_default().push(r.rmse);
    }
    println!("method,K,runs,mean_rmse,std_rmse");
    for ((method, k), v) in acc {
        let n = v.len() as f64;
        let mean = v.iter().sum::<f64>() / n;
        let var = v.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / n;
        println!("{method},{k},{},{mean:.6},{:.6}", v.len(), var.sqrt());
    }
    Ok(())
}
