//! Fixtures shared by the benchmarks.

use std::sync::Arc;

use dualshift::graphs::{community_graph, ProductOperator};

/// Operator over two planted-partition graphs with a few entries sampled
/// on a diagonal stripe.
pub fn fixture(m: usize, n: usize, seed: u64) -> ProductOperator {
    let (row, _) = community_graph(m, 4, 0.5, 0.02, seed).expect("row graph");
    let (col, _) = community_graph(n, 4, 0.5, 0.02, seed + 1).expect("col graph");
    let mut op = ProductOperator::new(Arc::new(row), Arc::new(col), 0.1, 0.1).expect("operator");
    let stripe: Vec<usize> = (0..m.min(n)).map(|i| i + m * i).collect();
    op.add_samples(&stripe).expect("samples");
    op
}
