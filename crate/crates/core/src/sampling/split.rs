//! The split `Q = Q1 + Q2` with `Q1 = q Ã + α I_n⊗L_r` (block diagonal in
//! column blocks) and `Q2 = (1−q) Ã + β L_c⊗I_m`, which a perfect shuffle
//! turns into the block-diagonal `Q̂2 = (1−q) Â + β I_m⊗L_c`.

use std::sync::Arc;

use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::graphs::{GraphLaplacian, ProductOperator, Shape};
use crate::linalg::SparseSym;

#[derive(Debug, Clone)]
pub struct SplitView {
    q: f64,
    alpha: f64,
    beta: f64,
    shape: Shape,
    row_graph: Arc<GraphLaplacian>,
    col_graph: Arc<GraphLaplacian>,
    sample_diag: Vec<f64>,
    perm: Vec<usize>,
}

/// Perfect shuffle `π(i + m·j) = j + n·i`, mapping column-major positions
/// of an `m × n` grid to row-major ones.
pub fn perfect_shuffle(m: usize, n: usize) -> Vec<usize> {
    let mut p = vec![0; m * n];
    for j in 0..n {
        for i in 0..m {
            p[i + m * j] = j + n * i;
        }
    }
    p
}

/// `P A Pᵀ` for the permutation matrix with `P[π(l), l] = 1`.
pub fn permute_dense(a: &DMatrix<f64>, perm: &[usize]) -> Result<DMatrix<f64>> {
    let n = a.nrows();
    if perm.len() != n || a.ncols() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            got: perm.len(),
        });
    }
    let mut out = DMatrix::zeros(n, n);
    for c in 0..n {
        for r in 0..n {
            out[(perm[r], perm[c])] = a[(r, c)];
        }
    }
    Ok(out)
}

pub fn build_split(op: &ProductOperator, q: f64) -> Result<SplitView> {
    if !(q > 0.0 && q < 1.0) {
        return Err(Error::InvalidArgument(format!(
            "q must lie in (0, 1), got {q}"
        )));
    }
    let shape = op.shape();
    Ok(SplitView {
        q,
        alpha: op.alpha(),
        beta: op.beta(),
        shape,
        row_graph: op.row_graph_arc(),
        col_graph: op.col_graph_arc(),
        sample_diag: op.sample_diag().to_vec(),
        perm: perfect_shuffle(shape.m, shape.n),
    })
}

impl SplitView {
    pub fn q(&self) -> f64 {
        self.q
    }

    pub fn shape(&self) -> Shape {
        self.shape
    }

    pub fn perm(&self) -> &[usize] {
        &self.perm
    }

    /// Diagonal of `Ã_j`: which rows are sampled in column `j`.
    pub fn cluster_indicator(&self, j: usize) -> Vec<f64> {
        let m = self.shape.m;
        self.sample_diag[j * m..(j + 1) * m].to_vec()
    }

    /// Diagonal of `Â_i`: which columns are sampled in row `i`, read through
    /// the shuffle.
    pub fn group_indicator(&self, i: usize) -> Vec<f64> {
        let n = self.shape.n;
        let mut shuffled = vec![0.0; self.sample_diag.len()];
        for (l, &d) in self.sample_diag.iter().enumerate() {
            shuffled[self.perm[l]] = d;
        }
        shuffled[i * n..(i + 1) * n].to_vec()
    }

    /// `q Ã_j + α L_r`
    pub fn cluster(&self, j: usize) -> Result<SparseSym> {
        if j >= self.shape.n {
            return Err(Error::InvalidArgument(format!(
                "cluster {j} out of range for {} columns",
                self.shape.n
            )));
        }
        let shift: Vec<f64> = self
            .cluster_indicator(j)
            .iter()
            .map(|d| self.q * d)
            .collect();
        self.row_graph
            .laplacian()
            .scaled_plus_diagonal(self.alpha, &shift)
    }

    /// `(1−q) Â_i + β L_c`
    pub fn group(&self, i: usize) -> Result<SparseSym> {
        if i >= self.shape.m {
            return Err(Error::InvalidArgument(format!(
                "group {i} out of range for {} rows",
                self.shape.m
            )));
        }
        let shift: Vec<f64> = self
            .group_indicator(i)
            .iter()
            .map(|d| (1.0 - self.q) * d)
            .collect();
        self.col_graph
            .laplacian()
            .scaled_plus_diagonal(self.beta, &shift)
    }

    fn dense_part(&self, weight: f64, alpha: f64, beta: f64) -> Result<DMatrix<f64>> {
        let op = ProductOperator::new(
            Arc::clone(&self.row_graph),
            Arc::clone(&self.col_graph),
            alpha,
            beta,
        )?;
        let mut a = op.materialize()?;
        for (l, &d) in self.sample_diag.iter().enumerate() {
            a[(l, l)] += weight * d;
        }
        Ok(a)
    }

    /// Dense `Q1`, for small-scale checks.
    pub fn q1_dense(&self) -> Result<DMatrix<f64>> {
        self.dense_part(self.q, self.alpha, 0.0)
    }

    /// Dense `Q2`, for small-scale checks.
    pub fn q2_dense(&self) -> Result<DMatrix<f64>> {
        self.dense_part(1.0 - self.q, 0.0, self.beta)
    }

    /// Dense block-diagonal `Q̂2 = P Q2 Pᵀ`.
    pub fn q2_hat_dense(&self) -> Result<DMatrix<f64>> {
        permute_dense(&self.q2_dense()?, &self.perm)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graphs::graph_from_edges;

    fn path(n: usize) -> GraphLaplacian {
        let edges: Vec<_> = (1..n).map(|i| (i - 1, i, 1.0)).collect();
        graph_from_edges(n, &edges).unwrap()
    }

    #[test]
    fn no_samples_gives_plain_laplacians() {
        let op = ProductOperator::from_graphs(path(3), path(4), 0.1, 0.2).unwrap();
        let s = build_split(&op, 0.5).unwrap();
        let lr = op.row_graph().laplacian().to_dense() * 0.1;
        let lc = op.col_graph().laplacian().to_dense() * 0.2;
        for j in 0..4 {
            assert_eq!(s.cluster(j).unwrap().to_dense(), lr);
        }
        for i in 0..3 {
            assert_eq!(s.group(i).unwrap().to_dense(), lc);
        }
    }

    #[test]
    fn duality_of_indicators() {
        let mut op = ProductOperator::from_graphs(path(3), path(2), 0.1, 0.1).unwrap();
        op.add_sample(2).unwrap(); // (2, 0)
        let s = build_split(&op, 0.5).unwrap();
        assert_eq!(s.cluster_indicator(0), vec![0.0, 0.0, 1.0]);
        assert_eq!(s.group_indicator(2), vec![1.0, 0.0]);
        assert_eq!(s.group_indicator(0), vec![0.0, 0.0]);
        assert_eq!(s.cluster(0).unwrap().get(2, 2), 0.1 * 1.0 + 0.5);
        assert_eq!(s.group(2).unwrap().get(0, 0), 0.1 * 1.0 + 0.5);
    }

    #[test]
    fn shuffle_values() {
        assert_eq!(perfect_shuffle(3, 2), vec![0, 2, 4, 1, 3, 5]);
        assert!(build_split(
            &ProductOperator::from_graphs(path(2), path(2), 0.1, 0.1).unwrap(),
            1.0
        )
        .is_err());
    }

    #[test]
    fn q2_hat_is_block_diagonal() {
        let mut op = ProductOperator::from_graphs(path(3), path(4), 0.1, 0.3).unwrap();
        op.add_samples(&[1, 5, 10]).unwrap();
        let s = build_split(&op, 0.3).unwrap();
        let hat = s.q2_hat_dense().unwrap();
        let n = 4;
        for i in 0..3 {
            let g = s.group(i).unwrap().to_dense();
            for a in 0..n {
                for b in 0..n {
                    assert!((hat[(i * n + a, i * n + b)] - g[(a, b)]).abs() < 1e-15);
                }
            }
        }
        let off: f64 = (0..12)
            .flat_map(|r| (0..12).map(move |c| (r, c)))
            .filter(|&(r, c)| r / n != c / n)
            .map(|(r, c)| hat[(r, c)].abs())
            .sum();
        assert_eq!(off, 0.0);
        let total = s.q1_dense().unwrap() + s.q2_dense().unwrap();
        assert!((total - op.materialize().unwrap()).amax() < 1e-15);
    }
}
