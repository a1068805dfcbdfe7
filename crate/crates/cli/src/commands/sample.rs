use std::path::PathBuf;
use std::str::FromStr;
use std::sync::Arc;

use anyhow::{bail, Result};
use dualshift::experiments::{run_sampler, SamplerKind, SamplerParams};
use dualshift::graphs::Shape;
use dualshift::linalg::SolverOptions;
use dualshift::sampling::{sidecar_path, write_meta, write_samples, IndexMask, SampleMeta};

use crate::files::{read_graph, read_mask};

/// An entry count, or a fraction of `m·n` when written with a decimal point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Budget {
    Count(usize),
    Fraction(f64),
}

impl FromStr for Budget {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        if let Ok(k) = s.parse::<usize>() {
            return Ok(Budget::Count(k));
        }
        match s.parse::<f64>() {
            Ok(f) if (0.0..=1.0).contains(&f) => Ok(Budget::Fraction(f)),
            _ => Err(format!("`{s}` is neither a count nor a fraction in [0, 1]")),
        }
    }
}

impl Budget {
    pub fn resolve(self, mn: usize) -> usize {
        match self {
            Budget::Count(k) => k,
            Budget::Fraction(f) => (f * mn as f64).round() as usize,
        }
    }
}

#[derive(clap::Args)]
pub struct Args {
    #[arg(long)]
    method: SamplerKind,
    #[arg(long)]
    budget: Budget,
    #[arg(long, default_value_t = 0.1)]
    alpha: f64,
    #[arg(long, default_value_t = 0.1)]
    beta: f64,
    /// Split weight for the block sampler.
    #[arg(long, default_value_t = 0.5)]
    q: f64,
    /// Picks per block before the block sampler switches.
    #[arg(long, default_value_t = 1)]
    zeta: usize,
    /// `row,col` file of selectable entries; everything when absent.
    #[arg(long)]
    pool: Option<PathBuf>,
    /// `row,col` file of entries already observed.
    #[arg(long)]
    initial: Option<PathBuf>,
    /// Candidates scored per step by the A-optimal sampler.
    #[arg(long, default_value_t = 32)]
    pool_size: usize,
    #[arg(long, default_value_t = 3)]
    k1: usize,
    #[arg(long, default_value_t = 3)]
    k2: usize,
    /// Start every eigensolve from a fresh random vector.
    #[arg(long)]
    cold: bool,
    #[arg(long, default_value_t = 1e-9)]
    tol: f64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    row_graph: PathBuf,
    #[arg(long)]
    col_graph: PathBuf,
    /// Sample CSV; a `.json` sidecar is written next to it.
    #[arg(long)]
    out: PathBuf,
}

pub fn run(a: Args) -> Result<()> {
    let row = Arc::new(read_graph(&a.row_graph)?);
    let col = Arc::new(read_graph(&a.col_graph)?);
    let shape = Shape::new(row.n(), col.n());
    let pool = match &a.pool {
        Some(p) => read_mask(p, shape)?,
        None => IndexMask::full(shape.len()),
    };
    let initial = match &a.initial {
        Some(p) => read_mask(p, shape)?,
        None => IndexMask::empty(shape.len()),
    };
    let k = a.budget.resolve(shape.len());
    if k == 0 {
        bail!("budget resolves to zero entries");
    }
    let params = SamplerParams {
        alpha: a.alpha,
        beta: a.beta,
        q: a.q,
        zeta: a.zeta,
        pool_size: a.pool_size,
        k1: a.k1,
        k2: a.k2,
        warm_start: !a.cold,
    };
    let solver = SolverOptions::sampler_default()
        .with_tol(a.tol)
        .with_seed(a.seed);
    let run = run_sampler(a.method, &params, &row, &col, &initial, &pool, k, solver)?;
    write_samples(&a.out, &run.samples)?;
    let block = a.method == SamplerKind::Igcs;
    let meta = SampleMeta {
        method: a.method.name().to_string(),
        k,
        seed: a.seed,
        alpha: a.alpha,
        beta: a.beta,
        q: block.then_some(a.q),
        zeta: block.then_some(a.zeta),
        iter_counts: run.iter_counts.clone(),
        wall_time_seconds: run.wall_time_seconds,
    };
    write_meta(&sidecar_path(&a.out), &meta)?;
    println!(
        "{} samples in {:.3}s ({} eigensolver iterations) -> {}",
        run.samples.len(),
        run.wall_time_seconds,
        run.total_iterations(),
        a.out.display()
    );
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn budget_parsing() {
        assert_eq!("12".parse::<Budget>().unwrap(), Budget::Count(12));
        assert_eq!("0.25".parse::<Budget>().unwrap(), Budget::Fraction(0.25));
        assert_eq!("1.0".parse::<Budget>().unwrap().resolve(40), 40);
        assert!("1.5".parse::<Budget>().is_err());
        assert!("-3".parse::<Budget>().is_err());
        assert_eq!(Budget::Fraction(0.1).resolve(2400), 240);
    }
}
