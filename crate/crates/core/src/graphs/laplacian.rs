use crate::error::{Error, Result};
use crate::linalg::operator::dot;
use crate::linalg::SparseSym;

/// Weighted undirected graph together with its combinatorial Laplacian
/// `L = D − W`.
#[derive(Debug, Clone, PartialEq)]
pub struct GraphLaplacian {
    n: usize,
    weights: SparseSym,
    laplacian: SparseSym,
    max_degree: f64,
}

impl GraphLaplacian {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn weights(&self) -> &SparseSym {
        &self.weights
    }

    pub fn laplacian(&self) -> &SparseSym {
        &self.laplacian
    }

    /// `max_i D(i, i)`.
    pub fn max_degree(&self) -> f64 {
        self.max_degree
    }

    pub fn degrees(&self) -> Vec<f64> {
        self.laplacian.diagonal()
    }

    /// Connected-component label per node (labels are `0..count`, assigned
    /// in order of the smallest node in each component).
    pub fn components(&self) -> (Vec<usize>, usize) {
        connected_components(&self.weights)
    }

    pub fn is_connected(&self) -> bool {
        self.components().1 <= 1
    }

    /// Edgeless graph on `n` nodes.
    pub fn empty(n: usize) -> Self {
        Self {
            n,
            weights: SparseSym::zeros(n),
            laplacian: SparseSym::zeros(n),
            max_degree: 0.0,
        }
    }
}

/// Builds `L = D − W` from a nonnegative, zero-diagonal weight matrix.
pub fn laplacian_from_weights(weights: SparseSym) -> Result<GraphLaplacian> {
    let n = weights.n();
    let mut triplets = Vec::with_capacity(weights.nnz() + n);
    let mut degrees = vec![0.0; n];
    for (i, degree) in degrees.iter_mut().enumerate() {
        for (j, w) in weights.row(i) {
            if i == j {
                if w != 0.0 {
                    return Err(Error::NonzeroDiagonal { node: i, value: w });
                }
                continue;
            }
            if w < 0.0 {
                return Err(Error::NegativeWeight {
                    row: i,
                    col: j,
                    weight: w,
                });
            }
            if w > 0.0 {
                *degree += w;
                triplets.push((i, j, -w));
            }
        }
    }
    for (i, &d) in degrees.iter().enumerate() {
        if d > 0.0 {
            triplets.push((i, i, d));
        }
    }
    let laplacian = SparseSym::from_triplets(n, &triplets)?;
    let max_degree = degrees.iter().copied().fold(0.0, f64::max);
    Ok(GraphLaplacian {
        n,
        weights,
        laplacian,
        max_degree,
    })
}

/// Builds a graph from undirected weighted edges `(i, j, w)` with `i != j`.
/// Each unordered pair may appear once.
pub fn graph_from_edges(n: usize, edges: &[(usize, usize, f64)]) -> Result<GraphLaplacian> {
    let upper: Vec<(usize, usize, f64)> = edges
        .iter()
        .map(|&(i, j, w)| if i <= j { (i, j, w) } else { (j, i, w) })
        .collect();
    laplacian_from_weights(SparseSym::from_upper_triplets(n, &upper)?)
}

/// Total variation `xᵀ L x`.
pub fn graph_variation(graph: &GraphLaplacian, x: &[f64]) -> Result<f64> {
    let lx = crate::linalg::spmv(graph.laplacian(), x)?;
    Ok(dot(x, &lx))
}

pub(crate) fn connected_components(adjacency: &SparseSym) -> (Vec<usize>, usize) {
    let n = adjacency.n();
    let mut label = vec![usize::MAX; n];
    let mut count = 0;
    let mut stack = Vec::new();
    for start in 0..n {
        if label[start] != usize::MAX {
            continue;
        }
        label[start] = count;
        stack.push(start);
        while let Some(u) = stack.pop() {
            for (v, w) in adjacency.row(u) {
                if w != 0.0 && label[v] == usize::MAX {
                    label[v] = count;
                    stack.push(v);
                }
            }
        }
        count += 1;
    }
    (label, count)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::sym_eigen;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_graph(n: usize, p: f64, seed: u64) -> GraphLaplacian {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut edges = Vec::new();
        for i in 0..n {
            for j in (i + 1)..n {
                if rng.random_bool(p) {
                    edges.push((i, j, rng.random_range(0.1..2.0)));
                }
            }
        }
        graph_from_edges(n, &edges).unwrap()
    }

    #[test]
    fn two_node_graph() {
        let g = graph_from_edges(2, &[(0, 1, 1.0)]).unwrap();
        let l = g.laplacian().to_dense();
        assert_eq!(l.as_slice(), &[1.0, -1.0, -1.0, 1.0]);
        assert_eq!(g.max_degree(), 1.0);
    }

    #[test]
    fn edgeless_graph() {
        let g = laplacian_from_weights(SparseSym::zeros(4)).unwrap();
        assert_eq!(g.laplacian().nnz(), 0);
        assert_eq!(g.max_degree(), 0.0);
        assert_eq!(g.components().1, 4);
    }

    #[test]
    fn rejects_bad_weights() {
        let neg = SparseSym::from_upper_triplets(2, &[(0, 1, -0.5)]).unwrap();
        assert!(matches!(
            laplacian_from_weights(neg),
            Err(Error::NegativeWeight { .. })
        ));
        let diag = SparseSym::from_upper_triplets(2, &[(0, 0, 1.0), (0, 1, 1.0)]).unwrap();
        assert!(matches!(
            laplacian_from_weights(diag),
            Err(Error::NonzeroDiagonal { .. })
        ));
    }

    #[test]
    fn random_laplacian_invariants() {
        for seed in 0..10 {
            let g = random_graph(12, 0.3, seed);
            let l = g.laplacian();
            for i in 0..g.n() {
                let s: f64 = l.row(i).map(|(_, v)| v).sum();
                assert!(s.abs() <= 1e-12);
                assert!(l.row(i).all(|(j, v)| j == i || v <= 0.0));
            }
            let eig = sym_eigen(&l.to_dense()).unwrap();
            assert!(eig.min_value() >= -1e-10);
            assert!(eig.min_value().abs() <= 1e-10);
        }
    }

    #[test]
    fn variation_special_cases() {
        let g = graph_from_edges(2, &[(0, 1, 1.0)]).unwrap();
        assert_eq!(graph_variation(&g, &[0.0, 1.0]).unwrap(), 1.0);
        let g = random_graph(8, 0.5, 3);
        assert!(graph_variation(&g, &[2.5; 8]).unwrap().abs() < 1e-12);
        assert!(graph_variation(&g, &[1.0; 3]).is_err());
    }

    #[test]
    fn variation_matches_pairwise_sum() {
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        for seed in 0..10 {
            let g = random_graph(10, 0.4, seed);
            let x: Vec<f64> = (0..10).map(|_| rng.random_range(-3.0..3.0)).collect();
            let mut pairwise = 0.0;
            for (i, j, w) in g.weights().upper_triplets() {
                pairwise += w * (x[i] - x[j]).powi(2);
            }
            let quad = graph_variation(&g, &x).unwrap();
            assert!((quad - pairwise).abs() <= 1e-10, "{quad} vs {pairwise}");
        }
    }
}
