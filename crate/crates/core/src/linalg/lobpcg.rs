//! Single-vector LOBPCG for the smallest eigenpair of a symmetric operator.
//!
//! Each iteration performs one operator application (on the residual
//! direction) and a Rayleigh-Ritz step over `span{x, w, p}`, where `w` is the
//! (optionally preconditioned) residual and `p` the previous update
//! direction. The operator images of `x` and `p` are carried along by linear
//! recombination and refreshed periodically to bound drift.

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use super::operator::{dot, norm, LinearOperator};
use super::{EigenPair, SolverOptions};
use crate::error::{Error, Result};

/// Iterations between explicit recomputations of `A x` and `A p`.
const REFRESH_EVERY: usize = 16;

/// A direction whose norm falls below this fraction of its pre-projection
/// norm is treated as linearly dependent and dropped from the subspace.
const DEPENDENCE_TOL: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Preconditioner {
    #[default]
    None,
    /// Divide the residual by the operator diagonal.
    Jacobi,
}

#[derive(Debug, Clone)]
pub struct LobpcgOutcome {
    pub pair: EigenPair,
    pub iterations: usize,
    /// `‖A v − λ v‖₂` of the returned pair, from an explicit product.
    pub residual: f64,
    /// `false` when `max_iter` was exhausted; `pair` is then the iterate with
    /// the smallest residual seen.
    pub converged: bool,
}

impl LobpcgOutcome {
    /// Turns a non-converged outcome into [`Error::NoConvergence`].
    pub fn require_converged(self) -> Result<Self> {
        if self.converged {
            Ok(self)
        } else {
            Err(Error::NoConvergence {
                solver: "lobpcg",
                iterations: self.iterations,
                residual: self.residual,
            })
        }
    }
}

/// Smallest eigenpair of `a` starting from `x0`, without preconditioning.
pub fn lobpcg_smallest<A: LinearOperator + ?Sized>(
    a: &A,
    x0: &[f64],
    opts: &SolverOptions,
) -> Result<LobpcgOutcome> {
    lobpcg_smallest_with(a, x0, opts, Preconditioner::None)
}

struct Direction {
    v: Vec<f64>,
    av: Vec<f64>,
}

impl Direction {
    /// Removes the components along the (orthonormal) `basis` twice, then
    /// normalizes. Returns `None` when the remainder is numerically zero.
    fn orthonormalize(mut self, basis: &[&Direction]) -> Option<Self> {
        let start = norm(&self.v);
        if !(start > 0.0) || !start.is_finite() {
            return None;
        }
        let inv = 1.0 / start;
        self.v.iter_mut().for_each(|x| *x *= inv);
        self.av.iter_mut().for_each(|x| *x *= inv);
        for _ in 0..2 {
            for b in basis {
                let c = dot(&b.v, &self.v);
                for ((v, av), (bv, bav)) in self
                    .v
                    .iter_mut()
                    .zip(self.av.iter_mut())
                    .zip(b.v.iter().zip(&b.av))
                {
                    *v -= c * bv;
                    *av -= c * bav;
                }
            }
        }
        let rem = norm(&self.v);
        if rem < DEPENDENCE_TOL {
            return None;
        }
        let inv = 1.0 / rem;
        self.v.iter_mut().for_each(|x| *x *= inv);
        self.av.iter_mut().for_each(|x| *x *= inv);
        Some(self)
    }
}

pub fn lobpcg_smallest_with<A: LinearOperator + ?Sized>(
    a: &A,
    x0: &[f64],
    opts: &SolverOptions,
    preconditioner: Preconditioner,
) -> Result<LobpcgOutcome> {
    opts.validate()?;
    let n = a.dim();
    if x0.len() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            got: x0.len(),
        });
    }
    if x0.iter().any(|v| !v.is_finite()) {
        return Err(Error::NotANumber("lobpcg initial vector"));
    }
    let x0_norm = norm(x0);
    if x0_norm == 0.0 {
        return Err(Error::InvalidArgument(
            "lobpcg initial vector is zero".into(),
        ));
    }

    let inv_diag = match preconditioner {
        Preconditioner::None => None,
        Preconditioner::Jacobi => Some(
            a.diagonal()
                .unwrap_or_else(|| vec![1.0; n])
                .into_iter()
                .map(|d| if d > 0.0 { 1.0 / d } else { 1.0 })
                .collect::<Vec<f64>>(),
        ),
    };

    let mut x = Direction {
        v: x0.iter().map(|v| v / x0_norm).collect(),
        av: vec![0.0; n],
    };
    a.apply_into(&x.v, &mut x.av);
    let mut p: Option<Direction> = None;
    let mut r = vec![0.0; n];

    let mut best: Option<(f64, EigenPair)> = None;
    let mut iterations = 0;
    let mut since_refresh = 0;

    loop {
        let lambda = dot(&x.v, &x.av);
        if !lambda.is_finite() {
            return Err(Error::NotANumber("lobpcg Rayleigh quotient"));
        }
        for ((ri, axi), xi) in r.iter_mut().zip(&x.av).zip(&x.v) {
            *ri = axi - lambda * xi;
        }
        let mut r_norm = norm(&r);
        if r_norm <= opts.tol && since_refresh > 0 {
            // confirm against an explicit product before declaring success
            a.apply_into(&x.v, &mut x.av);
            since_refresh = 0;
            continue;
        }
        if since_refresh == 0 {
            // residual computed from an exact image
            let pair = EigenPair {
                value: lambda,
                vec: x.v.clone(),
            };
            if r_norm <= opts.tol {
                return Ok(LobpcgOutcome {
                    pair,
                    iterations,
                    residual: r_norm,
                    converged: true,
                });
            }
            if best.as_ref().is_none_or(|(res, _)| r_norm < *res) {
                best = Some((r_norm, pair));
            }
        }
        if iterations >= opts.max_iter {
            break;
        }
        iterations += 1;

        let mut w = r.clone();
        if let Some(inv) = &inv_diag {
            for (wi, di) in w.iter_mut().zip(inv) {
                *wi *= di;
            }
        }
        let mut aw = vec![0.0; n];
        a.apply_into(&w, &mut aw);
        let w = Direction { v: w, av: aw }.orthonormalize(&[&x]);
        let p_dir = match (p.take(), &w) {
            (Some(p), Some(w)) => p.orthonormalize(&[&x, w]),
            (Some(p), None) => p.orthonormalize(&[&x]),
            (None, _) => None,
        };

        let mut basis: Vec<&Direction> = vec![&x];
        if let Some(w) = &w {
            basis.push(w);
        }
        if let Some(p) = &p_dir {
            basis.push(p);
        }
        let k = basis.len();
        if k == 1 {
            // the residual is numerically zero relative to x
            r_norm = norm(&r);
            let pair = EigenPair {
                value: lambda,
                vec: x.v.clone(),
            };
            return Ok(LobpcgOutcome {
                converged: r_norm <= opts.tol,
                pair,
                iterations,
                residual: r_norm,
            });
        }

        let gram = DMatrix::from_fn(k, k, |i, j| {
            0.5 * (dot(&basis[i].v, &basis[j].av) + dot(&basis[j].v, &basis[i].av))
        });
        let eig = gram.symmetric_eigen();
        let imin = (0..k)
            .min_by(|&i, &j| eig.eigenvalues[i].total_cmp(&eig.eigenvalues[j]))
            .expect("nonempty basis");
        let coef: Vec<f64> = eig.eigenvectors.column(imin).iter().copied().collect();

        let mut new_p = Direction {
            v: vec![0.0; n],
            av: vec![0.0; n],
        };
        for (c, b) in coef.iter().zip(&basis).skip(1) {
            for i in 0..n {
                new_p.v[i] += c * b.v[i];
                new_p.av[i] += c * b.av[i];
            }
        }
        let mut new_x = Direction {
            v: new_p.v.clone(),
            av: new_p.av.clone(),
        };
        for i in 0..n {
            new_x.v[i] += coef[0] * x.v[i];
            new_x.av[i] += coef[0] * x.av[i];
        }
        let nx = norm(&new_x.v);
        new_x.v.iter_mut().for_each(|v| *v /= nx);
        new_x.av.iter_mut().for_each(|v| *v /= nx);

        x = new_x;
        p = Some(new_p);
        since_refresh += 1;
        if since_refresh >= REFRESH_EVERY {
            a.apply_into(&x.v, &mut x.av);
            if let Some(p) = p.as_mut() {
                a.apply_into(&p.v, &mut p.av);
            }
            since_refresh = 0;
        }
    }

    // out of iterations: report the best exactly-evaluated iterate
    a.apply_into(&x.v, &mut x.av);
    let lambda = dot(&x.v, &x.av);
    let last = EigenPair {
        value: lambda,
        vec: x.v.clone(),
    };
    let last_res = last.residual(a);
    let (residual, pair) = match best {
        Some((res, pair)) if res < last_res => (res, pair),
        _ => (last_res, last),
    };
    Ok(LobpcgOutcome {
        converged: residual <= opts.tol,
        pair,
        iterations,
        residual,
    })
}
