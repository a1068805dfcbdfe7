//! Content-based graph built from co-observed entries of a partial matrix.
//!
//! For nodes `i`, `j` along the chosen axis, with overlap `R_ij` of their
//! observed positions:
//!
//! ```text
//! d_ij = ‖z_i(R_ij) − z_j(R_ij)‖₂ / sqrt(|R_ij|)      (∞ when R_ij = ∅)
//! w_ij = exp(−(d_ij − d_min)² / γ)  if d_ij ≤ d_s, else 0
//! ```

use serde::{Deserialize, Serialize};

use super::laplacian::{laplacian_from_weights, GraphLaplacian};
use super::ratings::RatingMatrix;
use crate::error::{Error, Result};
use crate::linalg::SparseSym;

/// Percentile of the finite pairwise distances used as the default `d_s`.
pub const DEFAULT_THRESHOLD_PERCENTILE: f64 = 0.6;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Axis {
    Rows,
    Cols,
}

impl std::str::FromStr for Axis {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "rows" | "row" => Ok(Axis::Rows),
            "cols" | "col" | "columns" => Ok(Axis::Cols),
            other => Err(Error::InvalidArgument(format!("unknown axis `{other}`"))),
        }
    }
}

#[derive(Debug, Clone)]
pub struct ContentGraph {
    pub graph: GraphLaplacian,
    pub d_min: f64,
    pub d_s: f64,
    pub gamma: f64,
    pub components: usize,
}

/// Pairwise distances `d_ij` for `i < j`; `f64::INFINITY` marks an empty
/// overlap.
pub fn content_distances(z: &RatingMatrix, axis: Axis) -> Vec<(usize, usize, f64)> {
    let nodes = match axis {
        Axis::Rows => z.rows(),
        Axis::Cols => z.cols(),
    };
    let mut profiles: Vec<Vec<(usize, f64)>> = vec![Vec::new(); nodes];
    for &(i, j, v) in z.entries() {
        match axis {
            Axis::Rows => profiles[i].push((j, v)),
            Axis::Cols => profiles[j].push((i, v)),
        }
    }
    for p in &mut profiles {
        p.sort_by_key(|&(k, _)| k);
    }

    let mut out = Vec::with_capacity(nodes * nodes.saturating_sub(1) / 2);
    for i in 0..nodes {
        for j in (i + 1)..nodes {
            let (a, b) = (&profiles[i], &profiles[j]);
            let (mut x, mut y) = (0, 0);
            let mut sq = 0.0;
            let mut overlap = 0usize;
            while x < a.len() && y < b.len() {
                match a[x].0.cmp(&b[y].0) {
                    std::cmp::Ordering::Less => x += 1,
                    std::cmp::Ordering::Greater => y += 1,
                    std::cmp::Ordering::Equal => {
                        sq += (a[x].1 - b[y].1).powi(2);
                        overlap += 1;
                        x += 1;
                        y += 1;
                    }
                }
            }
            let d = if overlap == 0 {
                f64::INFINITY
            } else {
                sq.sqrt() / (overlap as f64).sqrt()
            };
            out.push((i, j, d));
        }
    }
    out
}

/// Nearest-rank percentile of a nonempty sorted slice.
fn percentile(sorted: &[f64], p: f64) -> f64 {
    let rank = ((p * sorted.len() as f64).ceil() as usize).clamp(1, sorted.len());
    sorted[rank - 1]
}

/// Content graph along `axis`. `d_s` defaults to the 60th percentile of the
/// finite distances and `gamma` to the mean of `(d_ij − d_min)²` over the
/// retained pairs.
pub fn content_graph(
    z: &RatingMatrix,
    axis: Axis,
    d_s: Option<f64>,
    gamma: Option<f64>,
) -> Result<GraphLaplacian> {
    content_graph_detailed(z, axis, d_s, gamma).map(|c| c.graph)
}

pub fn content_graph_detailed(
    z: &RatingMatrix,
    axis: Axis,
    d_s: Option<f64>,
    gamma: Option<f64>,
) -> Result<ContentGraph> {
    let nodes = match axis {
        Axis::Rows => z.rows(),
        Axis::Cols => z.cols(),
    };
    if nodes < 2 {
        return Err(Error::InvalidArgument(format!(
            "content graph needs at least 2 nodes, got {nodes}"
        )));
    }
    if let Some(g) = gamma {
        if !(g > 0.0) {
            return Err(Error::InvalidArgument(format!(
                "gamma must be positive, got {g}"
            )));
        }
    }
    let dists = content_distances(z, axis);
    let mut finite: Vec<f64> = dists
        .iter()
        .map(|t| t.2)
        .filter(|d| d.is_finite())
        .collect();
    if finite.is_empty() {
        return Err(Error::InvalidArgument(
            "no pair of nodes shares an observed entry; cannot build a content graph".into(),
        ));
    }
    finite.sort_by(f64::total_cmp);
    let d_min = finite[0];
    let d_s = d_s.unwrap_or_else(|| percentile(&finite, DEFAULT_THRESHOLD_PERCENTILE));
    let gamma = gamma.unwrap_or_else(|| {
        let kept: Vec<f64> = finite.iter().filter(|&&d| d <= d_s).copied().collect();
        let mean = if kept.is_empty() {
            0.0
        } else {
            kept.iter().map(|d| (d - d_min).powi(2)).sum::<f64>() / kept.len() as f64
        };
        // every retained pair sits at d_min, so the kernel width is irrelevant
        if mean > 0.0 {
            mean
        } else {
            1.0
        }
    });

    let triplets: Vec<(usize, usize, f64)> = dists
        .into_iter()
        .filter(|&(_, _, d)| d.is_finite() && d <= d_s)
        .map(|(i, j, d)| (i, j, (-(d - d_min).powi(2) / gamma).exp()))
        .filter(|&(_, _, w)| w > 0.0)
        .collect();
    let graph = laplacian_from_weights(SparseSym::from_upper_triplets(nodes, &triplets)?)?;
    let components = graph.components().1;
    if components > 1 {
        log::warn!(
            "content graph along {:?} is disconnected: {} components over {} nodes",
            axis,
            components,
            nodes
        );
    }
    Ok(ContentGraph {
        graph,
        d_min,
        d_s,
        gamma,
        components,
    })
}
