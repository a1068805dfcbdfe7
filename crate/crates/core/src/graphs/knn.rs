//! Feature-based k-nearest-neighbor graph with a Gaussian kernel.

use std::collections::BTreeMap;

use super::laplacian::{laplacian_from_weights, GraphLaplacian};
use crate::error::{Error, Result};
use crate::linalg::SparseSym;

pub const DEFAULT_NEIGHBORS: usize = 10;

/// Distances within this of the k-th nearest distance count as ties and are
/// all kept.
const DISTANCE_TIE_TOL: f64 = 1e-12;

fn euclidean(a: &[f64], b: &[f64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y).powi(2))
        .sum::<f64>()
        .sqrt()
}

/// Connects every node to its `k` nearest neighbors (ties at the k-th
/// distance included) with weight `exp(−d² / σ²)`, where `σ` is the mean
/// distance over all selected neighbor pairs. The directed kNN relation is
/// symmetrized with `max(w_ij, w_ji)`.
pub fn knn_feature_graph(features: &[Vec<f64>], k: usize) -> Result<GraphLaplacian> {
    let n = features.len();
    if k == 0 {
        return Err(Error::InvalidArgument("k must be at least 1".into()));
    }
    if k >= n {
        return Err(Error::InvalidArgument(format!(
            "k = {k} needs at least {} nodes, got {n}",
            k + 1
        )));
    }
    let dim = features[0].len();
    for (i, f) in features.iter().enumerate() {
        if f.len() != dim {
            return Err(Error::DimensionMismatch {
                expected: dim,
                got: f.len(),
            });
        }
        if f.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidArgument(format!(
                "feature vector {i} has non-finite entries"
            )));
        }
    }

    let mut directed: Vec<Vec<(usize, f64)>> = Vec::with_capacity(n);
    for i in 0..n {
        let mut dists: Vec<(usize, f64)> = (0..n)
            .filter(|&j| j != i)
            .map(|j| (j, euclidean(&features[i], &features[j])))
            .collect();
        dists.sort_by(|a, b| a.1.total_cmp(&b.1).then(a.0.cmp(&b.0)));
        let kth = dists[k - 1].1;
        dists.retain(|&(_, d)| d <= kth + DISTANCE_TIE_TOL);
        directed.push(dists);
    }

    let (sum, count) = directed
        .iter()
        .flatten()
        .fold((0.0, 0usize), |(s, c), &(_, d)| (s + d, c + 1));
    let sigma = sum / count as f64;

    let kernel = |d: f64| {
        if sigma > 0.0 {
            (-(d * d) / (sigma * sigma)).exp()
        } else {
            1.0
        }
    };
    let mut upper: BTreeMap<(usize, usize), f64> = BTreeMap::new();
    for (i, nbrs) in directed.iter().enumerate() {
        for &(j, d) in nbrs {
            let key = (i.min(j), i.max(j));
            let w = kernel(d);
            let e = upper.entry(key).or_insert(0.0);
            *e = e.max(w);
        }
    }
    let triplets: Vec<(usize, usize, f64)> = upper
        .into_iter()
        .filter(|&(_, w)| w > 0.0)
        .map(|((i, j), w)| (i, j, w))
        .collect();
    laplacian_from_weights(SparseSym::from_upper_triplets(n, &triplets)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn identical_points_form_complete_graph() {
        let g = knn_feature_graph(&[vec![1.0, 2.0], vec![1.0, 2.0], vec![1.0, 2.0]], 1).unwrap();
        let w = g.weights();
        for i in 0..3 {
            for j in 0..3 {
                assert_eq!(w.get(i, j), if i == j { 0.0 } else { 1.0 });
            }
        }
    }

    #[test]
    fn collinear_points() {
        // 0 -> 1, 1 -> 0, 10 -> 1; the pair (0, 10) is never nearest
        let g = knn_feature_graph(&[vec![0.0], vec![1.0], vec![10.0]], 1).unwrap();
        let w = g.weights();
        assert!(w.get(0, 1) > 0.0);
        assert!(w.get(1, 2) > 0.0);
        assert_eq!(w.get(0, 2), 0.0);
    }

    #[test]
    fn random_features_give_symmetric_nonnegative_weights() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let feats: Vec<Vec<f64>> = (0..40)
            .map(|_| (0..3).map(|_| rng.random_range(-1.0..1.0)).collect())
            .collect();
        let g = knn_feature_graph(&feats, DEFAULT_NEIGHBORS).unwrap();
        let w = g.weights();
        for i in 0..40 {
            assert!(w.row(i).filter(|&(j, _)| j != i).count() >= DEFAULT_NEIGHBORS);
            for (j, v) in w.row(i) {
                assert!((0.0..=1.0).contains(&v));
                assert_eq!(v, w.get(j, i));
            }
        }
    }

    #[test]
    fn rejects_bad_inputs() {
        assert!(knn_feature_graph(&[vec![0.0], vec![1.0]], 2).is_err());
        assert!(knn_feature_graph(&[vec![0.0], vec![f64::NAN], vec![1.0]], 1).is_err());
    }
}
