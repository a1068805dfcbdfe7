use std::sync::Arc;

use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::graphs::{GraphLaplacian, ProductOperator, RatingMatrix, Shape};
use crate::sampling::SampleSet;

/// Observed entries `Y` on `Ω`, the two factor graphs and the smoothness
/// weights of the regularized least-squares fit.
#[derive(Debug, Clone)]
pub struct CompletionProblem {
    observations: RatingMatrix,
    omega: SampleSet,
    row_graph: Arc<GraphLaplacian>,
    col_graph: Arc<GraphLaplacian>,
    alpha: f64,
    beta: f64,
}

impl CompletionProblem {
    /// `data` may hold more entries than `omega`; only those in `omega` are
    /// kept.
    pub fn new(
        data: &RatingMatrix,
        omega: SampleSet,
        row_graph: Arc<GraphLaplacian>,
        col_graph: Arc<GraphLaplacian>,
        alpha: f64,
        beta: f64,
    ) -> Result<Self> {
        let shape = Shape::new(row_graph.n(), col_graph.n());
        if data.rows() != shape.m || data.cols() != shape.n {
            return Err(Error::InvalidArgument(format!(
                "ratings are {}x{} but the graphs have {} and {} nodes",
                data.rows(),
                data.cols(),
                shape.m,
                shape.n
            )));
        }
        if omega.shape() != shape {
            return Err(Error::InvalidArgument(format!(
                "sample set is {}x{}, expected {}x{}",
                omega.shape().m,
                omega.shape().n,
                shape.m,
                shape.n
            )));
        }
        for (name, v) in [("alpha", alpha), ("beta", beta)] {
            if !v.is_finite() || v < 0.0 {
                return Err(Error::InvalidArgument(format!(
                    "{name} must be finite and nonnegative, got {v}"
                )));
            }
        }
        if (alpha == 0.0 || beta == 0.0) && omega.len() != shape.len() {
            return Err(Error::InvalidArgument(
                "zero regularization weights require every entry to be sampled".into(),
            ));
        }
        let observations = data.restrict(omega.pairs())?;
        Ok(Self {
            observations,
            omega,
            row_graph,
            col_graph,
            alpha,
            beta,
        })
    }

    /// Convenience constructor reading `Y` off a dense matrix.
    pub fn from_dense(
        y: &DMatrix<f64>,
        omega: SampleSet,
        row_graph: Arc<GraphLaplacian>,
        col_graph: Arc<GraphLaplacian>,
        alpha: f64,
        beta: f64,
    ) -> Result<Self> {
        let triplets: Vec<(usize, usize, f64)> = omega
            .pairs()
            .iter()
            .map(|&(i, j)| {
                if i < y.nrows() && j < y.ncols() {
                    Ok((i, j, y[(i, j)]))
                } else {
                    Err(Error::IndexOutOfRange {
                        row: i,
                        col: j,
                        rows: y.nrows(),
                        cols: y.ncols(),
                    })
                }
            })
            .collect::<Result<_>>()?;
        let data = RatingMatrix::from_triplets(y.nrows(), y.ncols(), &triplets)?;
        Self::new(&data, omega, row_graph, col_graph, alpha, beta)
    }

    pub fn observations(&self) -> &RatingMatrix {
        &self.observations
    }

    pub fn omega(&self) -> &SampleSet {
        &self.omega
    }

    pub fn row_graph(&self) -> &GraphLaplacian {
        &self.row_graph
    }

    pub fn col_graph(&self) -> &GraphLaplacian {
        &self.col_graph
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    pub fn shape(&self) -> Shape {
        self.omega.shape()
    }

    /// `Q = Ã_Ω + α I⊗L_r + β L_c⊗I` with the indicator of `Ω`.
    pub fn operator(&self) -> Result<ProductOperator> {
        let mut op = ProductOperator::new(
            Arc::clone(&self.row_graph),
            Arc::clone(&self.col_graph),
            self.alpha,
            self.beta,
        )?;
        op.set_sample_diag(self.omega.indicator())?;
        Ok(op)
    }

    /// `vec(Y)` with zeros off `Ω`, column-major.
    pub fn rhs(&self) -> Vec<f64> {
        let m = self.shape().m;
        let mut b = vec![0.0; self.shape().len()];
        for &(i, j, v) in self.observations.entries() {
            b[i + m * j] = v;
        }
        b
    }

    /// Checks that every connected component of the product graph holds a
    /// sample, which makes `Q` positive definite. With a zero weight the
    /// corresponding factor contributes no edges.
    pub fn check_positive_definite(&self) -> Result<()> {
        let (m, n) = (self.shape().m, self.shape().n);
        let (rl, rc) = if self.alpha > 0.0 {
            self.row_graph.components()
        } else {
            ((0..m).collect(), m)
        };
        let (cl, cc) = if self.beta > 0.0 {
            self.col_graph.components()
        } else {
            ((0..n).collect(), n)
        };
        let mut covered = vec![false; rc * cc];
        for &(i, j) in self.omega.pairs() {
            covered[rl[i] + rc * cl[j]] = true;
        }
        let empty = covered.iter().filter(|&&c| !c).count();
        if empty == 0 {
            return Ok(());
        }
        let first = covered
            .iter()
            .position(|&c| !c)
            .expect("some component is empty");
        let (a, b) = (first % rc, first / rc);
        let i = rl.iter().position(|&x| x == a).unwrap_or(0);
        let j = cl.iter().position(|&x| x == b).unwrap_or(0);
        Err(Error::Singular(format!(
            "{empty} of {} product-graph components hold no sample (for example the one \
             containing entry ({i}, {j})); the system matrix is singular",
            rc * cc
        )))
    }
}
