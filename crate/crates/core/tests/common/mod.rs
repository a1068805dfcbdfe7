#![allow(dead_code)]

use nalgebra::DMatrix;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

use dualshift::graphs::{graph_from_edges, GraphLaplacian, ProductOperator};

pub use rand::SeedableRng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn path(n: usize) -> GraphLaplacian {
    let edges: Vec<_> = (1..n).map(|i| (i - 1, i, 1.0)).collect();
    graph_from_edges(n, &edges).unwrap()
}

/// Connected graph: a random spanning tree plus extra edges, weights in
/// `[0.1, 1]`.
pub fn random_connected_graph(n: usize, rng: &mut ChaCha8Rng) -> GraphLaplacian {
    let mut edges = Vec::new();
    for i in 1..n {
        let j = rng.random_range(0..i);
        edges.push((j, i, rng.random_range(0.1..1.0)));
    }
    for i in 0..n {
        for j in (i + 1)..n {
            if rng.random_bool(0.25) && !edges.iter().any(|&(a, b, _)| (a, b) == (i, j)) {
                edges.push((i, j, rng.random_range(0.1..1.0)));
            }
        }
    }
    graph_from_edges(n, &edges).unwrap()
}

/// Random `(m, n)` with `2 <= m, n` and `m·n <= max_mn`.
pub fn random_dims(rng: &mut ChaCha8Rng, max_mn: usize) -> (usize, usize) {
    loop {
        let m = rng.random_range(2..=max_mn / 2);
        let n = rng.random_range(2..=max_mn / 2);
        if m * n <= max_mn {
            return (m, n);
        }
    }
}

pub fn random_operator(rng: &mut ChaCha8Rng, max_mn: usize) -> ProductOperator {
    let (m, n) = random_dims(rng, max_mn);
    let alpha = rng.random_range(0.05..1.0);
    let beta = rng.random_range(0.05..1.0);
    ProductOperator::from_graphs(
        random_connected_graph(m, rng),
        random_connected_graph(n, rng),
        alpha,
        beta,
    )
    .unwrap()
}

/// Marks each entry as sampled with probability `p`, leaving at least one
/// entry unsampled.
pub fn random_samples(op: &mut ProductOperator, p: f64, rng: &mut ChaCha8Rng) {
    let mn = op.m() * op.n();
    for l in 0..mn - 1 {
        if rng.random_bool(p) {
            op.add_sample(l).unwrap();
        }
    }
}

pub fn random_matrix(m: usize, n: usize, rng: &mut ChaCha8Rng) -> DMatrix<f64> {
    DMatrix::from_fn(m, n, |_, _| rng.random_range(-1.0..1.0))
}
