//! Dual-bandlimited signal model: `X = V_k2 X̃ U_k1ᵀ`, i.e.
//! `vec(X) = (U_k1 ⊗ V_k2) vec(X̃)`, with `V` the low-frequency eigenvectors
//! of the row Laplacian and `U` those of the column Laplacian. Includes the
//! A-optimal design objective, a local-search sampler driven by the greedy
//! disc-shift ranking, and least-squares reconstruction.

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use super::gcs::{check_mask, GcsOptions, GcsState};
use super::sample_set::{IndexMask, SampleSet};
use super::select::rank_by_magnitude;
use crate::error::{Error, Result};
use crate::graphs::{GraphLaplacian, ProductOperator, Shape};
use crate::linalg::sym_eigen;

/// Gram eigenvalues at or below this are treated as exactly zero.
pub const GRAM_ZERO_TOL: f64 = 1e-12;

/// Regularizer added to a rank-deficient Gram matrix by
/// [`Regularization::Auto`].
pub const DEFAULT_EPSILON: f64 = 1e-8;

/// Singular values below this fraction of the largest count as zero in
/// [`bandlimited_reconstruct`].
const RANK_RTOL: f64 = 1e-10;

/// Relative tolerance under which two objective values are tied.
const OBJECTIVE_TIE_RTOL: f64 = 1e-9;

#[derive(Debug, Clone)]
pub struct BandlimitedBasis {
    /// `n × k1`, ascending eigenvalues of `L_c`.
    u: DMatrix<f64>,
    /// `m × k2`, ascending eigenvalues of `L_r`.
    v: DMatrix<f64>,
    u_values: Vec<f64>,
    v_values: Vec<f64>,
}

fn low_modes(g: &GraphLaplacian, k: usize) -> Result<(DMatrix<f64>, Vec<f64>)> {
    let eig = sym_eigen(&g.laplacian().to_dense())?;
    let mut vecs = eig.vectors.columns(0, k).into_owned();
    // sign convention: first entry of noticeable size is positive
    for mut col in vecs.column_iter_mut() {
        if let Some(first) = col.iter().copied().find(|v| v.abs() > 1e-12) {
            if first < 0.0 {
                col.neg_mut();
            }
        }
    }
    Ok((vecs, eig.values[..k].to_vec()))
}

/// Lowest `k1` eigenvectors of the column Laplacian and lowest `k2` of the
/// row Laplacian.
pub fn bandlimited_basis(
    row_graph: &GraphLaplacian,
    col_graph: &GraphLaplacian,
    k1: usize,
    k2: usize,
) -> Result<BandlimitedBasis> {
    let (m, n) = (row_graph.n(), col_graph.n());
    if k1 == 0 || k1 > n || k2 == 0 || k2 > m {
        return Err(Error::InvalidArgument(format!(
            "need 1 <= k1 <= {n} and 1 <= k2 <= {m}, got k1 = {k1}, k2 = {k2}"
        )));
    }
    let (u, u_values) = low_modes(col_graph, k1)?;
    let (v, v_values) = low_modes(row_graph, k2)?;
    Ok(BandlimitedBasis {
        u,
        v,
        u_values,
        v_values,
    })
}

impl BandlimitedBasis {
    pub fn m(&self) -> usize {
        self.v.nrows()
    }

    pub fn n(&self) -> usize {
        self.u.nrows()
    }

    pub fn k1(&self) -> usize {
        self.u.ncols()
    }

    pub fn k2(&self) -> usize {
        self.v.ncols()
    }

    /// Number of basis columns `k1·k2`.
    pub fn rank(&self) -> usize {
        self.k1() * self.k2()
    }

    pub fn shape(&self) -> Shape {
        Shape::new(self.m(), self.n())
    }

    pub fn u(&self) -> &DMatrix<f64> {
        &self.u
    }

    pub fn v(&self) -> &DMatrix<f64> {
        &self.v
    }

    pub fn u_values(&self) -> &[f64] {
        &self.u_values
    }

    pub fn v_values(&self) -> &[f64] {
        &self.v_values
    }

    /// Row `l = i + m·j` of `T = U ⊗ V`; column `c·k2 + d` holds
    /// `U[j, c]·V[i, d]`.
    pub fn row(&self, l: usize) -> Vec<f64> {
        let m = self.m();
        let (i, j) = (l % m, l / m);
        let mut out = Vec::with_capacity(self.rank());
        for c in 0..self.k1() {
            for d in 0..self.k2() {
                out.push(self.u[(j, c)] * self.v[(i, d)]);
            }
        }
        out
    }

    /// `T c` computed as `vec(V C Uᵀ)` with `C` the `k2 × k1` reshape of `c`.
    pub fn apply(&self, coeffs: &[f64]) -> Result<Vec<f64>> {
        if coeffs.len() != self.rank() {
            return Err(Error::DimensionMismatch {
                expected: self.rank(),
                got: coeffs.len(),
            });
        }
        let c = DMatrix::from_column_slice(self.k2(), self.k1(), coeffs);
        let x = &self.v * c * self.u.transpose();
        Ok(x.as_slice().to_vec())
    }

    /// `Tᵀ x` computed as `vec(Vᵀ X U)`.
    pub fn apply_transpose(&self, x: &[f64]) -> Result<Vec<f64>> {
        if x.len() != self.m() * self.n() {
            return Err(Error::DimensionMismatch {
                expected: self.m() * self.n(),
                got: x.len(),
            });
        }
        let xm = DMatrix::from_column_slice(self.m(), self.n(), x);
        let c = self.v.transpose() * xm * &self.u;
        Ok(c.as_slice().to_vec())
    }

    /// Dense `mn × k1k2` matrix `T`.
    pub fn materialize(&self) -> DMatrix<f64> {
        self.u.kronecker(&self.v)
    }

    /// `Σ_{l∈S} t_l t_lᵀ`.
    fn gram(&self, linear: impl IntoIterator<Item = usize>) -> DMatrix<f64> {
        let k = self.rank();
        let mut g = DMatrix::zeros(k, k);
        for l in linear {
            let t = DVector::from_vec(self.row(l));
            g.ger(1.0, &t, &t, 1.0);
        }
        g
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub enum Regularization {
    /// `ε = 1e-8` while the Gram matrix is rank-deficient, `ε = 0` once it
    /// has full rank.
    #[default]
    Auto,
    Fixed(f64),
}

fn trace_inverse(gram: &DMatrix<f64>, reg: Regularization) -> Result<f64> {
    let k = gram.nrows();
    let mu: Vec<f64> = sym_eigen(gram)?
        .values
        .into_iter()
        .map(|v| if v <= GRAM_ZERO_TOL { 0.0 } else { v })
        .collect();
    let eps = match reg {
        Regularization::Auto => {
            if mu.contains(&0.0) {
                DEFAULT_EPSILON
            } else {
                0.0
            }
        }
        Regularization::Fixed(e) => {
            if !(e >= 0.0) || !e.is_finite() {
                return Err(Error::InvalidArgument(format!(
                    "regularization must be finite and nonnegative, got {e}"
                )));
            }
            e
        }
    };
    if eps == 0.0 && mu.contains(&0.0) {
        return Err(Error::Singular(format!(
            "Gram matrix of the sampled basis is singular ({} of {k} eigenvalues vanish)",
            mu.iter().filter(|&&v| v == 0.0).count()
        )));
    }
    Ok(mu.iter().map(|v| 1.0 / (v + eps)).sum())
}

/// A-optimal design value `Tr[(Tᵀ diag(S) T + εI)⁻¹]`.
pub fn aopt_objective(basis: &BandlimitedBasis, s: &SampleSet, reg: Regularization) -> Result<f64> {
    if s.shape() != basis.shape() {
        return Err(Error::InvalidArgument(format!(
            "sample shape {}x{} does not match basis {}x{}",
            s.shape().m,
            s.shape().n,
            basis.m(),
            basis.n()
        )));
    }
    trace_inverse(&basis.gram(s.linear().iter().copied()), reg)
}

/// Lowest-index minimizer among values within a relative tie tolerance.
pub(crate) fn tie_aware_min(values: &[(usize, f64)]) -> Option<usize> {
    let best = values.iter().map(|&(_, v)| v).fold(f64::INFINITY, f64::min);
    if !best.is_finite() {
        return None;
    }
    let tol = OBJECTIVE_TIE_RTOL * best.abs().max(1.0);
    values
        .iter()
        .filter(|&&(_, v)| v <= best + tol)
        .map(|&(l, _)| l)
        .min()
}

#[derive(Debug, Clone)]
pub struct AoptRun {
    pub samples: SampleSet,
    pub state: GcsState,
    /// Objective value after each selection.
    pub objective_trace: Vec<f64>,
}

/// A-optimal greedy selection restricted, at each step, to the `pool_size`
/// unsampled entries with the largest first-eigenvector magnitude.
pub fn aopt_local_search(
    basis: &BandlimitedBasis,
    op: ProductOperator,
    k: usize,
    pool_size: usize,
    allowed: Option<&IndexMask>,
    options: &GcsOptions,
) -> Result<AoptRun> {
    let mn = op.m() * op.n();
    if basis.shape() != op.shape() {
        return Err(Error::InvalidArgument(
            "basis and operator shapes differ".into(),
        ));
    }
    if pool_size == 0 || pool_size > mn {
        return Err(Error::InvalidArgument(format!(
            "local pool size must lie in 1..={mn}, got {pool_size}"
        )));
    }
    check_mask(allowed, mn)?;
    // already-observed entries contribute to the design from the start
    let initial: Vec<usize> = (0..mn).filter(|&l| op.is_sampled(l)).collect();
    let mut state = GcsState::new(op, k, *options)?;
    let pool = state.pool_size(allowed);
    if k > pool {
        return Err(Error::BudgetExceedsPool { budget: k, pool });
    }
    let mut gram = basis.gram(initial);
    let mut objective_trace = Vec::with_capacity(k);
    for step in 0..k {
        let pair = state.first_eigenpair()?;
        let candidates = rank_by_magnitude(&pair.vec, |l| state.is_eligible(l, allowed), pool_size);
        let mut scored = Vec::with_capacity(candidates.len());
        for &l in &candidates {
            let t = DVector::from_vec(basis.row(l));
            let mut g = gram.clone();
            g.ger(1.0, &t, &t, 1.0);
            let h = trace_inverse(&g, Regularization::Auto).map_err(|e| e.at_step(step))?;
            scored.push((l, h));
        }
        let pick = tie_aware_min(&scored)
            .ok_or_else(|| Error::NotANumber("A-optimal objective").at_step(step))?;
        let t = DVector::from_vec(basis.row(pick));
        gram.ger(1.0, &t, &t, 1.0);
        let h = scored
            .iter()
            .find(|&&(l, _)| l == pick)
            .map(|&(_, h)| h)
            .unwrap_or(f64::NAN);
        objective_trace.push(h);
        state.commit(pick, pair.vec)?;
    }
    Ok(AoptRun {
        samples: state.chosen.clone(),
        state,
        objective_trace,
    })
}

/// Least-squares fit `x̂ = T (C T)† y_S` from the sampled values (given in
/// the order of `s.pairs()`).
pub fn bandlimited_reconstruct(
    basis: &BandlimitedBasis,
    s: &SampleSet,
    y: &[f64],
) -> Result<Vec<f64>> {
    if y.len() != s.len() {
        return Err(Error::DimensionMismatch {
            expected: s.len(),
            got: y.len(),
        });
    }
    if s.shape() != basis.shape() {
        return Err(Error::InvalidArgument(
            "sample shape does not match basis".into(),
        ));
    }
    let k = basis.rank();
    let linear = s.linear_in_order();
    let ct = DMatrix::from_fn(linear.len(), k, |r, c| basis.row(linear[r])[c]);
    let svd = ct.svd(true, true);
    let smax = svd.singular_values.iter().copied().fold(0.0, f64::max);
    let rank = svd
        .singular_values
        .iter()
        .filter(|&&v| v > RANK_RTOL * smax && v > 0.0)
        .count();
    if rank < k {
        return Err(Error::RankDeficient { rank, required: k });
    }
    let coeffs = svd
        .solve(&DVector::from_column_slice(y), RANK_RTOL * smax)
        .map_err(|e| Error::Singular(e.to_string()))?;
    basis.apply(coeffs.as_slice())
}
