//! Conjugate gradient for symmetric positive definite operators.

use super::operator::{axpy, dot, norm, LinearOperator};
use super::SolverOptions;
use crate::error::{Error, Result};

#[derive(Debug, Clone)]
pub struct CgOutcome {
    pub x: Vec<f64>,
    pub iterations: usize,
    /// Final relative residual `‖A x − b‖ / ‖b‖`, recomputed from scratch.
    pub residual: f64,
}

/// Solves `A x = b` until `‖A x − b‖₂ / ‖b‖₂ ≤ opts.tol`.
///
/// `b = 0` returns `x = 0` immediately. Convergence is judged on the
/// recurrence residual and then confirmed with an explicit product; if the
/// true residual lags behind, iteration continues from the current iterate.
pub fn cg_solve<A: LinearOperator + ?Sized>(
    a: &A,
    b: &[f64],
    opts: &SolverOptions,
    x0: Option<&[f64]>,
) -> Result<CgOutcome> {
    opts.validate()?;
    let n = a.dim();
    if b.len() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            got: b.len(),
        });
    }
    let b_norm = norm(b);
    if b_norm.is_nan() {
        return Err(Error::NotANumber("cg right-hand side"));
    }
    if b_norm == 0.0 {
        return Ok(CgOutcome {
            x: vec![0.0; n],
            iterations: 0,
            residual: 0.0,
        });
    }

    let mut x = match x0 {
        Some(x0) if x0.len() != n => {
            return Err(Error::DimensionMismatch {
                expected: n,
                got: x0.len(),
            })
        }
        Some(x0) => x0.to_vec(),
        None => vec![0.0; n],
    };
    let mut ax = vec![0.0; n];
    let mut r = vec![0.0; n];
    let mut p = vec![0.0; n];
    let mut ap = vec![0.0; n];

    let true_residual = |x: &[f64], ax: &mut [f64], r: &mut [f64]| {
        a.apply_into(x, ax);
        for ((ri, bi), axi) in r.iter_mut().zip(b).zip(ax.iter()) {
            *ri = bi - axi;
        }
        norm(r)
    };

    let mut iterations = 0;
    let mut r_norm = true_residual(&x, &mut ax, &mut r);
    'restart: loop {
        if r_norm / b_norm <= opts.tol {
            return Ok(CgOutcome {
                x,
                iterations,
                residual: r_norm / b_norm,
            });
        }
        p.copy_from_slice(&r);
        let mut rr = r_norm * r_norm;
        while iterations < opts.max_iter {
            iterations += 1;
            a.apply_into(&p, &mut ap);
            let pap = dot(&p, &ap);
            if pap.is_nan() || rr.is_nan() {
                return Err(Error::NotANumber("conjugate gradient"));
            }
            if pap <= 0.0 {
                return Err(Error::Singular(format!(
                    "operator is not positive definite (pᵀAp = {pap:e} at iteration {iterations})"
                )));
            }
            let step = rr / pap;
            axpy(step, &p, &mut x);
            axpy(-step, &ap, &mut r);
            let rr_new = dot(&r, &r);
            if rr_new.sqrt() / b_norm <= opts.tol {
                r_norm = true_residual(&x, &mut ax, &mut r);
                continue 'restart;
            }
            let beta = rr_new / rr;
            for (pi, ri) in p.iter_mut().zip(&r) {
                *pi = ri + beta * *pi;
            }
            rr = rr_new;
        }
        let residual = true_residual(&x, &mut ax, &mut r) / b_norm;
        if residual <= opts.tol {
            return Ok(CgOutcome {
                x,
                iterations,
                residual,
            });
        }
        return Err(Error::NoConvergence {
            solver: "conjugate gradient",
            iterations,
            residual,
        });
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::SparseSym;
    use nalgebra::DMatrix;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn identity_returns_rhs() {
        let b = vec![1.5, -2.0, 0.25, 4.0];
        let out = cg_solve(
            &SparseSym::identity(4),
            &b,
            &SolverOptions::cg_default(4),
            None,
        )
        .unwrap();
        for (x, y) in out.x.iter().zip(&b) {
            assert!((x - y).abs() < 1e-14);
        }
    }

    #[test]
    fn zero_rhs_gives_zero() {
        let out = cg_solve(
            &SparseSym::identity(3),
            &[0.0; 3],
            &SolverOptions::cg_default(3),
            None,
        )
        .unwrap();
        assert_eq!(out.x, vec![0.0; 3]);
        assert_eq!(out.iterations, 0);
    }

    #[test]
    fn matches_dense_lu_on_random_spd() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let n = 12;
        let m = DMatrix::from_fn(n, n, |_, _| rng.random_range(-1.0..1.0));
        let a = &m * m.transpose() + DMatrix::identity(n, n) * 0.5;
        let b: Vec<f64> = (0..n).map(|_| rng.random_range(-1.0..1.0)).collect();
        let expected = a
            .clone()
            .lu()
            .solve(&nalgebra::DVector::from_vec(b.clone()))
            .unwrap();
        let out = cg_solve(&a, &b, &SolverOptions::cg_default(n).with_tol(1e-12), None).unwrap();
        let err: f64 = out
            .x
            .iter()
            .zip(expected.iter())
            .map(|(x, y)| (x - y).powi(2))
            .sum::<f64>()
            .sqrt()
            / expected.norm();
        assert!(err <= 1e-8, "relative error {err:e}");
    }

    #[test]
    fn singular_operator_is_reported() {
        // path Laplacian with a right-hand side outside its range
        let l =
            SparseSym::from_upper_triplets(2, &[(0, 0, 1.0), (0, 1, -1.0), (1, 1, 1.0)]).unwrap();
        let err = cg_solve(&l, &[1.0, 1.0], &SolverOptions::cg_default(2), None).unwrap_err();
        assert!(matches!(
            err,
            Error::Singular(_) | Error::NoConvergence { .. }
        ));
    }

    #[test]
    fn nan_rhs_rejected() {
        let err = cg_solve(
            &SparseSym::identity(2),
            &[f64::NAN, 1.0],
            &SolverOptions::cg_default(2),
            None,
        )
        .unwrap_err();
        assert!(matches!(err, Error::NotANumber(_)));
    }
}
