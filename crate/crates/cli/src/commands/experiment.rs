use std::path::{Path, PathBuf};

use anyhow::{bail, Result};
use dualshift::experiments::{run_experiment, ExperimentConfig};

pub fn run(config: &Path, out: Option<PathBuf>) -> Result<()> {
    let mut cfg = ExperimentConfig::load(config)?;
    if out.is_some() {
        cfg.output_dir = out;
    }
    let res = run_experiment(&cfg)?;
    for f in &res.failures {
        eprintln!(
            "failed: {} seed {} K {} at {}: {}",
            f.method, f.seed, f.k, f.stage, f.error
        );
    }
    println!(
        "{} cells succeeded, {} failed",
        res.rows.len(),
        res.failures.len()
    );
    if let Some(dir) = &cfg.output_dir {
        println!("results in {}", dir.display());
    }
    if res.rows.is_empty() {
        bail!("every cell failed");
    }
    Ok(())
}
