use std::fs;
use std::path::Path;

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use super::bounds::{mse_upper_bound, rmse_eval, ErrorBound};
use super::problem::CompletionProblem;
use crate::error::{Error, Result};
use crate::linalg::{cg_solve, lobpcg_smallest, random_unit_vector, SolverOptions};

/// Default budget for the `λ_min(Q)` estimate.
pub fn eig_estimate_default(seed: u64) -> SolverOptions {
    SolverOptions::lobpcg_default()
        .with_max_iter(5000)
        .with_seed(seed)
}

#[derive(Debug, Clone)]
pub struct CompletionReport {
    pub x_star: DMatrix<f64>,
    /// Relative CG residual `‖Q x − b‖ / ‖b‖`.
    pub residual: f64,
    pub cg_iterations: usize,
    pub lambda_min_est: f64,
    /// `false` when the eigensolver hit its iteration cap; the estimate is
    /// then a Rayleigh quotient, which overestimates `λ_min`.
    pub lambda_converged: bool,
    pub rho: Option<f64>,
    pub bound: Option<f64>,
    pub actual_error: Option<f64>,
    pub rmse: Option<f64>,
}

/// Scalar fields of a [`CompletionReport`], as written to JSON.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReportSummary {
    pub m: usize,
    pub n: usize,
    pub residual: f64,
    pub cg_iterations: usize,
    pub lambda_min_est: f64,
    pub lambda_converged: bool,
    pub rho: Option<f64>,
    pub bound: Option<f64>,
    pub actual_error: Option<f64>,
    pub rmse: Option<f64>,
}

impl CompletionReport {
    pub fn summary(&self) -> ReportSummary {
        ReportSummary {
            m: self.x_star.nrows(),
            n: self.x_star.ncols(),
            residual: self.residual,
            cg_iterations: self.cg_iterations,
            lambda_min_est: self.lambda_min_est,
            lambda_converged: self.lambda_converged,
            rho: self.rho,
            bound: self.bound,
            actual_error: self.actual_error,
            rmse: self.rmse,
        }
    }

    /// Fills `rho`, `bound` and `actual_error` using the estimated `λ_min`.
    pub fn attach_ground_truth(
        &mut self,
        p: &CompletionProblem,
        truth: &DMatrix<f64>,
        noise: &DMatrix<f64>,
    ) -> Result<ErrorBound> {
        let b = mse_upper_bound(&self.x_star, truth, noise, p, self.lambda_min_est)?;
        self.rho = Some(b.rho);
        self.bound = Some(b.bound);
        self.actual_error = Some(b.actual_error);
        Ok(b)
    }

    pub fn attach_rmse(
        &mut self,
        truth: &DMatrix<f64>,
        eval_set: &[(usize, usize)],
    ) -> Result<f64> {
        let r = rmse_eval(&self.x_star, truth, eval_set)?;
        self.rmse = Some(r);
        Ok(r)
    }

    pub fn write_json(&self, path: &Path) -> Result<()> {
        let text = serde_json::to_string_pretty(&self.summary())?;
        fs::write(path, text).map_err(|e| Error::io(path, e))
    }

    /// Dense `X*` as CSV, one matrix row per line, no header.
    pub fn write_matrix_csv(&self, path: &Path) -> Result<()> {
        write_dense_csv(&self.x_star, path)
    }
}

pub fn write_dense_csv(x: &DMatrix<f64>, path: &Path) -> Result<()> {
    let mut out = String::with_capacity(x.len() * 8);
    for i in 0..x.nrows() {
        let row: Vec<String> = (0..x.ncols()).map(|j| x[(i, j)].to_string()).collect();
        out.push_str(&row.join(","));
        out.push('\n');
    }
    fs::write(path, out).map_err(|e| Error::io(path, e))
}

/// Reads the format written by [`write_dense_csv`].
pub fn read_dense_csv(path: &Path) -> Result<DMatrix<f64>> {
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    let mut rows: Vec<Vec<f64>> = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let s = raw.trim();
        if s.is_empty() || s.starts_with('#') {
            continue;
        }
        let parse_err = |message: String| Error::Parse {
            path: path.to_path_buf(),
            line: idx + 1,
            message,
        };
        let row = s
            .split(',')
            .map(|f| {
                f.trim()
                    .parse::<f64>()
                    .map_err(|e| parse_err(format!("bad value `{f}`: {e}")))
            })
            .collect::<Result<Vec<f64>>>()?;
        if let Some(first) = rows.first() {
            if first.len() != row.len() {
                return Err(parse_err(format!(
                    "expected {} values, got {}",
                    first.len(),
                    row.len()
                )));
            }
        }
        rows.push(row);
    }
    let n = rows.first().map_or(0, Vec::len);
    Ok(DMatrix::from_fn(rows.len(), n, |i, j| rows[i][j]))
}

/// Solves `Q vec(X*) = vec(Y)` by conjugate gradient on the implicit
/// product operator and estimates `λ_min(Q)`.
pub fn dglr_solve(p: &CompletionProblem, opts: &SolverOptions) -> Result<CompletionReport> {
    dglr_solve_with(p, opts, &eig_estimate_default(opts.seed))
}

pub fn dglr_solve_with(
    p: &CompletionProblem,
    cg_opts: &SolverOptions,
    eig_opts: &SolverOptions,
) -> Result<CompletionReport> {
    p.check_positive_definite()?;
    let op = p.operator()?;
    let b = p.rhs();
    let cg = cg_solve(&op, &b, cg_opts, None)?;
    let start = random_unit_vector(b.len(), eig_opts.seed);
    let eig = lobpcg_smallest(&op, &start, eig_opts)?;
    if !eig.converged {
        log::warn!(
            "lambda_min estimate did not converge in {} iterations (residual {:.2e})",
            eig.iterations,
            eig.residual
        );
    }
    let s = p.shape();
    Ok(CompletionReport {
        x_star: DMatrix::from_column_slice(s.m, s.n, &cg.x),
        residual: cg.residual,
        cg_iterations: cg.iterations,
        lambda_min_est: eig.pair.value,
        lambda_converged: eig.converged,
        rho: None,
        bound: None,
        actual_error: None,
        rmse: None,
    })
}
