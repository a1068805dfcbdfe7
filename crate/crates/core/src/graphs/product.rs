//! The product-graph operator `Q = Ã_Ω + α I_n⊗L_r + β L_c⊗I_m`, applied
//! without forming the `mn × mn` matrix.
//!
//! Vectors of length `mn` are column-major stackings of `m × n` matrices:
//! entry `(i, j)` lives at `l = i + m·j`.

use std::sync::Arc;

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use super::laplacian::GraphLaplacian;
use crate::error::{Error, Result};
use crate::linalg::LinearOperator;

/// Largest `mn` that [`ProductOperator::materialize`] will build.
pub const MATERIALIZE_CAP: usize = 4096;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Shape {
    pub m: usize,
    pub n: usize,
}

impl Shape {
    pub fn new(m: usize, n: usize) -> Self {
        Self { m, n }
    }

    pub fn len(&self) -> usize {
        self.m * self.n
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn lin_index(&self, i: usize, j: usize) -> Result<usize> {
        if i >= self.m || j >= self.n {
            return Err(Error::IndexOutOfRange {
                row: i,
                col: j,
                rows: self.m,
                cols: self.n,
            });
        }
        Ok(i + self.m * j)
    }

    pub fn mat_index(&self, l: usize) -> Result<(usize, usize)> {
        if l >= self.len() {
            return Err(Error::InvalidArgument(format!(
                "linear index {l} out of range for {}x{}",
                self.m, self.n
            )));
        }
        Ok((l % self.m, l / self.m))
    }
}

/// Column-major linear index `i + m·j`.
pub fn lin_index(i: usize, j: usize, m: usize) -> Result<usize> {
    if i >= m {
        return Err(Error::IndexOutOfRange {
            row: i,
            col: j,
            rows: m,
            cols: usize::MAX,
        });
    }
    Ok(i + m * j)
}

/// Inverse of [`lin_index`].
pub fn mat_index(l: usize, m: usize) -> Result<(usize, usize)> {
    if m == 0 {
        return Err(Error::InvalidArgument("row count must be positive".into()));
    }
    Ok((l % m, l / m))
}

#[derive(Debug, Clone)]
pub struct ProductOperator {
    row_graph: Arc<GraphLaplacian>,
    col_graph: Arc<GraphLaplacian>,
    alpha: f64,
    beta: f64,
    sample_diag: Vec<f64>,
}

impl ProductOperator {
    /// Operator with no samples. `alpha` and `beta` must be finite and
    /// nonnegative; zero weights are accepted for the fully sampled case.
    pub fn new(
        row_graph: Arc<GraphLaplacian>,
        col_graph: Arc<GraphLaplacian>,
        alpha: f64,
        beta: f64,
    ) -> Result<Self> {
        for (name, v) in [("alpha", alpha), ("beta", beta)] {
            if !v.is_finite() || v < 0.0 {
                return Err(Error::InvalidArgument(format!(
                    "{name} must be finite and nonnegative, got {v}"
                )));
            }
        }
        let mn = row_graph.n() * col_graph.n();
        if mn == 0 {
            return Err(Error::InvalidArgument(
                "factor graphs must be nonempty".into(),
            ));
        }
        Ok(Self {
            row_graph,
            col_graph,
            alpha,
            beta,
            sample_diag: vec![0.0; mn],
        })
    }

    pub fn from_graphs(
        row_graph: GraphLaplacian,
        col_graph: GraphLaplacian,
        alpha: f64,
        beta: f64,
    ) -> Result<Self> {
        Self::new(Arc::new(row_graph), Arc::new(col_graph), alpha, beta)
    }

    pub fn row_graph(&self) -> &GraphLaplacian {
        &self.row_graph
    }

    pub fn col_graph(&self) -> &GraphLaplacian {
        &self.col_graph
    }

    pub fn row_graph_arc(&self) -> Arc<GraphLaplacian> {
        Arc::clone(&self.row_graph)
    }

    pub fn col_graph_arc(&self) -> Arc<GraphLaplacian> {
        Arc::clone(&self.col_graph)
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    pub fn m(&self) -> usize {
        self.row_graph.n()
    }

    pub fn n(&self) -> usize {
        self.col_graph.n()
    }

    pub fn shape(&self) -> Shape {
        Shape::new(self.m(), self.n())
    }

    pub fn sample_diag(&self) -> &[f64] {
        &self.sample_diag
    }

    pub fn is_sampled(&self, l: usize) -> bool {
        self.sample_diag.get(l).is_some_and(|&d| d != 0.0)
    }

    pub fn sampled_count(&self) -> usize {
        self.sample_diag.iter().filter(|&&d| d != 0.0).count()
    }

    /// Sets `Ã_Ω(l, l) = 1`. Returns `false` if `l` was already sampled.
    pub fn add_sample(&mut self, l: usize) -> Result<bool> {
        let len = self.sample_diag.len();
        let slot = self.sample_diag.get_mut(l).ok_or_else(|| {
            Error::InvalidArgument(format!("linear index {l} out of range for length {len}"))
        })?;
        let fresh = *slot == 0.0;
        *slot = 1.0;
        Ok(fresh)
    }

    pub fn add_samples(&mut self, linear: &[usize]) -> Result<()> {
        for &l in linear {
            self.add_sample(l)?;
        }
        Ok(())
    }

    pub fn clear_samples(&mut self) {
        self.sample_diag.iter_mut().for_each(|d| *d = 0.0);
    }

    /// Replaces the whole indicator. Entries must be 0 or 1.
    pub fn set_sample_diag(&mut self, diag: Vec<f64>) -> Result<()> {
        if diag.len() != self.sample_diag.len() {
            return Err(Error::DimensionMismatch {
                expected: self.sample_diag.len(),
                got: diag.len(),
            });
        }
        if let Some(bad) = diag.iter().find(|&&d| d != 0.0 && d != 1.0) {
            return Err(Error::InvalidArgument(format!(
                "sample indicator entries must be 0 or 1, found {bad}"
            )));
        }
        self.sample_diag = diag;
        Ok(())
    }

    /// Adds `α vec(L_r X) + β vec(X L_c)` to `y`.
    fn add_regularizer(&self, x: &[f64], y: &mut [f64]) {
        let m = self.m();
        let n = self.n();
        let lr = self.row_graph.laplacian();
        let lc = self.col_graph.laplacian();
        if self.alpha != 0.0 {
            for j in 0..n {
                let xs = &x[j * m..(j + 1) * m];
                let ys = &mut y[j * m..(j + 1) * m];
                for (i, yi) in ys.iter_mut().enumerate() {
                    let mut acc = 0.0;
                    for (k, v) in lr.row(i) {
                        acc += v * xs[k];
                    }
                    *yi += self.alpha * acc;
                }
            }
        }
        if self.beta != 0.0 {
            // column j of X L_c is Σ_k L_c(k, j) X[:, k]; L_c is symmetric
            for j in 0..n {
                for (k, v) in lc.row(j) {
                    let w = self.beta * v;
                    for i in 0..m {
                        y[i + m * j] += w * x[i + m * k];
                    }
                }
            }
        }
    }

    /// `(α I⊗L_r + β L_c⊗I) x`, the smoothness part alone.
    pub fn regularizer_apply(&self, x: &[f64]) -> Result<Vec<f64>> {
        self.check_len(x)?;
        let mut y = vec![0.0; x.len()];
        self.add_regularizer(x, &mut y);
        Ok(y)
    }

    fn check_len(&self, x: &[f64]) -> Result<()> {
        if x.len() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                got: x.len(),
            });
        }
        Ok(())
    }

    /// Dense `mn × mn` matrix, for tests and small-scale oracles.
    pub fn materialize(&self) -> Result<DMatrix<f64>> {
        let mn = self.dim();
        if mn > MATERIALIZE_CAP {
            return Err(Error::TooLarge {
                n: mn,
                cap: MATERIALIZE_CAP,
            });
        }
        let (m, n) = (self.m(), self.n());
        let mut q = DMatrix::zeros(mn, mn);
        for (l, &d) in self.sample_diag.iter().enumerate() {
            q[(l, l)] += d;
        }
        for j in 0..n {
            for (a, b, v) in self.row_graph.laplacian().upper_triplets() {
                q[(a + m * j, b + m * j)] += self.alpha * v;
                if a != b {
                    q[(b + m * j, a + m * j)] += self.alpha * v;
                }
            }
        }
        for i in 0..m {
            for (a, b, v) in self.col_graph.laplacian().upper_triplets() {
                q[(i + m * a, i + m * b)] += self.beta * v;
                if a != b {
                    q[(i + m * b, i + m * a)] += self.beta * v;
                }
            }
        }
        Ok(q)
    }
}

impl LinearOperator for ProductOperator {
    fn dim(&self) -> usize {
        self.sample_diag.len()
    }

    fn apply_into(&self, x: &[f64], y: &mut [f64]) {
        for ((yi, xi), di) in y.iter_mut().zip(x).zip(&self.sample_diag) {
            *yi = di * xi;
        }
        self.add_regularizer(x, y);
    }

    fn diagonal(&self) -> Option<Vec<f64>> {
        let m = self.m();
        let dr = self.row_graph.degrees();
        let dc = self.col_graph.degrees();
        Some(
            self.sample_diag
                .iter()
                .enumerate()
                .map(|(l, s)| s + self.alpha * dr[l % m] + self.beta * dc[l / m])
                .collect(),
        )
    }
}

/// `Q x` with a length check.
pub fn product_apply(op: &ProductOperator, x: &[f64]) -> Result<Vec<f64>> {
    op.check_len(x)?;
    Ok(op.apply(x))
}
