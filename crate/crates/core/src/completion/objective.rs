use nalgebra::DMatrix;

use super::problem::CompletionProblem;
use crate::error::{Error, Result};

fn check_shape(x: &DMatrix<f64>, p: &CompletionProblem) -> Result<()> {
    let s = p.shape();
    if x.nrows() != s.m || x.ncols() != s.n {
        return Err(Error::InvalidArgument(format!(
            "matrix is {}x{}, problem is {}x{}",
            x.nrows(),
            x.ncols(),
            s.m,
            s.n
        )));
    }
    Ok(())
}

/// `½‖A_Ω∘(X−Y)‖²_F + (α/2) Tr(XᵀL_rX) + (β/2) Tr(X L_c Xᵀ)`
pub fn dglr_objective(x: &DMatrix<f64>, p: &CompletionProblem) -> Result<f64> {
    check_shape(x, p)?;
    let fit: f64 = p
        .observations()
        .entries()
        .iter()
        .map(|&(i, j, y)| (x[(i, j)] - y).powi(2))
        .sum();
    let op = p.operator()?;
    let smooth = op.regularizer_apply(x.as_slice())?;
    let quad: f64 = smooth.iter().zip(x.as_slice()).map(|(a, b)| a * b).sum();
    Ok(0.5 * fit + 0.5 * quad)
}

/// `A_Ω∘(X−Y) + α L_r X + β X L_c`
pub fn dglr_gradient(x: &DMatrix<f64>, p: &CompletionProblem) -> Result<DMatrix<f64>> {
    check_shape(x, p)?;
    let op = p.operator()?;
    let smooth = op.regularizer_apply(x.as_slice())?;
    let mut g = DMatrix::from_column_slice(x.nrows(), x.ncols(), &smooth);
    for &(i, j, y) in p.observations().entries() {
        g[(i, j)] += x[(i, j)] - y;
    }
    Ok(g)
}
