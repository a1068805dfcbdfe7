use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use super::problem::CompletionProblem;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ErrorBound {
    /// `‖(αI⊗L_r + βL_c⊗I) vec(X + N)‖₂`
    pub rho: f64,
    /// `ρ / λ_min(Q) + ‖vec(N)‖₂`
    pub bound: f64,
    /// `‖vec(X*) − vec(X)‖₂`
    pub actual_error: f64,
}

fn same_shape(a: &DMatrix<f64>, b: &DMatrix<f64>) -> Result<()> {
    if a.shape() != b.shape() {
        return Err(Error::InvalidArgument(format!(
            "shape mismatch: {}x{} vs {}x{}",
            a.nrows(),
            a.ncols(),
            b.nrows(),
            b.ncols()
        )));
    }
    Ok(())
}

/// Reconstruction error bound for `X*` solved from observations `X + N` on
/// `Ω`. `noise` is the full noise matrix.
pub fn mse_upper_bound(
    x_star: &DMatrix<f64>,
    truth: &DMatrix<f64>,
    noise: &DMatrix<f64>,
    p: &CompletionProblem,
    lambda_min: f64,
) -> Result<ErrorBound> {
    if !(lambda_min > 0.0) {
        return Err(Error::InvalidArgument(format!(
            "lambda_min must be positive, got {lambda_min}"
        )));
    }
    same_shape(x_star, truth)?;
    same_shape(noise, truth)?;
    if truth.nrows() != p.shape().m || truth.ncols() != p.shape().n {
        return Err(Error::InvalidArgument(
            "ground truth does not match the problem".into(),
        ));
    }
    let z = truth + noise;
    let smooth = p.operator()?.regularizer_apply(z.as_slice())?;
    let rho = smooth.iter().map(|v| v * v).sum::<f64>().sqrt();
    let bound = rho / lambda_min + noise.norm();
    let actual_error = (x_star - truth).norm();
    Ok(ErrorBound {
        rho,
        bound,
        actual_error,
    })
}

/// Root mean square error over the listed entries.
pub fn rmse_eval(
    x_star: &DMatrix<f64>,
    truth: &DMatrix<f64>,
    eval_set: &[(usize, usize)],
) -> Result<f64> {
    same_shape(x_star, truth)?;
    if eval_set.is_empty() {
        return Err(Error::InvalidArgument("evaluation set is empty".into()));
    }
    let mut sum = 0.0;
    for &(i, j) in eval_set {
        if i >= truth.nrows() || j >= truth.ncols() {
            return Err(Error::IndexOutOfRange {
                row: i,
                col: j,
                rows: truth.nrows(),
                cols: truth.ncols(),
            });
        }
        sum += (x_star[(i, j)] - truth[(i, j)]).powi(2);
    }
    Ok((sum / eval_set.len() as f64).sqrt())
}
