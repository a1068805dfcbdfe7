//! Small readers shared by the subcommands.

use std::fs;
use std::path::Path;

use anyhow::{Context, Result};
use dualshift::graphs::{laplacian_from_weights, GraphLaplacian, Shape};
use dualshift::linalg::SparseSym;
use dualshift::sampling::persist::parse_pairs;
use dualshift::sampling::{IndexMask, SampleSet};

pub fn read_graph(path: &Path) -> Result<GraphLaplacian> {
    let w = SparseSym::read_edge_list(path)?;
    laplacian_from_weights(w).with_context(|| format!("graph {}", path.display()))
}

pub fn write_graph(path: &Path, g: &GraphLaplacian) -> Result<()> {
    g.weights().write_edge_list(path)?;
    Ok(())
}

fn read_pairs(path: &Path) -> Result<Vec<(usize, usize)>> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    Ok(parse_pairs(&text, path)?
        .into_iter()
        .map(|(_, p)| p)
        .collect())
}

/// A `row,col` file as a mask over an `m × n` grid.
pub fn read_mask(path: &Path, shape: Shape) -> Result<IndexMask> {
    let pairs = read_pairs(path)?;
    IndexMask::from_pairs(shape, &pairs).with_context(|| format!("mask {}", path.display()))
}

/// A `row,col` file as an ordered sample set.
pub fn read_sample_set(path: &Path, shape: Shape) -> Result<SampleSet> {
    Ok(dualshift::sampling::read_samples(path, shape)?)
}
