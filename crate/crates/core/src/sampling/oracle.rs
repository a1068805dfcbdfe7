//! Brute-force reference sampler and spectral bounds.

use super::sample_set::SampleSet;
use crate::error::{Error, Result};
use crate::graphs::{GraphLaplacian, ProductOperator};
use crate::linalg::sym_eigen;

/// Largest `mn` accepted by [`exact_greedy_oracle`].
pub const ORACLE_CAP: usize = 64;

/// Candidates whose `λ_min` lies within this of the best count as tied.
const ORACLE_TIE_TOL: f64 = 1e-12;

/// Exhaustive greedy maximization of `λ_min(Q + e_k e_kᵀ)` with dense
/// eigendecompositions. Returns the selections and `λ_min` after each step.
pub fn exact_greedy_oracle(op: &ProductOperator, k: usize) -> Result<(SampleSet, Vec<f64>)> {
    let mn = op.m() * op.n();
    if mn > ORACLE_CAP {
        return Err(Error::TooLarge {
            n: mn,
            cap: ORACLE_CAP,
        });
    }
    let pool = mn - op.sampled_count();
    if k > pool {
        return Err(Error::BudgetExceedsPool { budget: k, pool });
    }
    let mut op = op.clone();
    let mut set = SampleSet::new(op.shape(), k);
    let mut trace = Vec::with_capacity(k);
    for _ in 0..k {
        let q = op.materialize()?;
        let mut best: Option<(usize, f64)> = None;
        for l in (0..mn).filter(|&l| !op.is_sampled(l)) {
            let mut c = q.clone();
            c[(l, l)] += 1.0;
            let lam = sym_eigen(&c)?.min_value();
            if best.is_none_or(|(_, b)| lam > b + ORACLE_TIE_TOL) {
                best = Some((l, lam));
            }
        }
        let (l, lam) = best.expect("pool is nonempty");
        op.add_sample(l)?;
        set.push_linear(l)?;
        trace.push(lam);
    }
    Ok((set, trace))
}

/// `2α·max_degree(L_r) + 2β·max_degree(L_c) + 1`, an upper bound on
/// `λ_max(Q)` for any 0/1 sampling indicator.
pub fn lambda_max_bound(
    row_graph: &GraphLaplacian,
    col_graph: &GraphLaplacian,
    alpha: f64,
    beta: f64,
) -> f64 {
    2.0 * alpha * row_graph.max_degree() + 2.0 * beta * col_graph.max_degree() + 1.0
}
