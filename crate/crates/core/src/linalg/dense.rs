//! Dense symmetric eigendecomposition for small matrices.
//!
//! This is the reference path used to cross-check the iterative solvers and
//! to diagonalize small factor-graph Laplacians.

use nalgebra::DMatrix;

use super::EigenPair;
use crate::error::{Error, Result};

/// Largest dimension accepted by the dense eigensolver.
pub const DENSE_EIG_CAP: usize = 512;

/// Maximum tolerated `|a_ij − a_ji|`.
pub const ASYMMETRY_TOL: f64 = 1e-10;

/// Full spectrum with eigenvalues ascending and eigenvectors as columns.
#[derive(Debug, Clone)]
pub struct SymEigen {
    pub values: Vec<f64>,
    pub vectors: DMatrix<f64>,
}

impl SymEigen {
    pub fn vector(&self, k: usize) -> Vec<f64> {
        self.vectors.column(k).iter().copied().collect()
    }

    pub fn min_value(&self) -> f64 {
        self.values[0]
    }

    pub fn max_value(&self) -> f64 {
        self.values[self.values.len() - 1]
    }
}

fn check_symmetric(a: &DMatrix<f64>, cap: usize) -> Result<()> {
    if a.nrows() != a.ncols() {
        return Err(Error::DimensionMismatch {
            expected: a.nrows(),
            got: a.ncols(),
        });
    }
    let n = a.nrows();
    if n > cap {
        return Err(Error::TooLarge { n, cap });
    }
    for i in 0..n {
        for j in (i + 1)..n {
            let diff = (a[(i, j)] - a[(j, i)]).abs();
            if diff > ASYMMETRY_TOL {
                return Err(Error::NotSymmetric {
                    row: i,
                    col: j,
                    diff,
                });
            }
        }
    }
    if a.iter().any(|v| !v.is_finite()) {
        return Err(Error::NotANumber("dense eigensolver input"));
    }
    Ok(())
}

/// Eigendecomposition with the default cap of [`DENSE_EIG_CAP`].
pub fn sym_eigen(a: &DMatrix<f64>) -> Result<SymEigen> {
    sym_eigen_capped(a, DENSE_EIG_CAP)
}

pub fn sym_eigen_capped(a: &DMatrix<f64>, cap: usize) -> Result<SymEigen> {
    check_symmetric(a, cap)?;
    let n = a.nrows();
    if n == 0 {
        return Ok(SymEigen {
            values: Vec::new(),
            vectors: DMatrix::zeros(0, 0),
        });
    }
    // symmetrize exactly so the solver sees a Hermitian input
    let sym = (a + a.transpose()) * 0.5;
    let eig = sym.symmetric_eigen();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&x, &y| eig.eigenvalues[x].total_cmp(&eig.eigenvalues[y]));
    let values = order.iter().map(|&k| eig.eigenvalues[k]).collect();
    let mut vectors = DMatrix::zeros(n, n);
    for (dst, &src) in order.iter().enumerate() {
        vectors.set_column(dst, &eig.eigenvectors.column(src));
    }
    Ok(SymEigen { values, vectors })
}

/// Full spectrum as ascending [`EigenPair`]s.
pub fn dense_sym_eig(a: &DMatrix<f64>) -> Result<Vec<EigenPair>> {
    let eig = sym_eigen(a)?;
    Ok((0..eig.values.len())
        .map(|k| EigenPair {
            value: eig.values[k],
            vec: eig.vector(k),
        })
        .collect())
}
