//! Sparse and small dense linear algebra.

pub mod cg;
pub mod dense;
pub mod gershgorin;
pub mod lobpcg;
pub mod operator;
pub mod sparse;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use cg::{cg_solve, CgOutcome};
pub use dense::{dense_sym_eig, sym_eigen, SymEigen, DENSE_EIG_CAP};
pub use gershgorin::{gershgorin_bounds, min_left_end, DiscBound};
pub use lobpcg::{lobpcg_smallest, LobpcgOutcome, Preconditioner};
pub use operator::{LinearOperator, ShiftedOperator};
pub use sparse::{spmv, SparseSym};

/// Tolerance and iteration budget for the iterative solvers.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SolverOptions {
    pub tol: f64,
    pub max_iter: usize,
    pub seed: u64,
}

impl SolverOptions {
    pub fn new(tol: f64, max_iter: usize, seed: u64) -> Result<Self> {
        let opts = Self {
            tol,
            max_iter,
            seed,
        };
        opts.validate()?;
        Ok(opts)
    }

    /// CG defaults for an `n`-dimensional system: `tol = 1e-8`, `max_iter = 10 n`.
    pub fn cg_default(n: usize) -> Self {
        Self {
            tol: 1e-8,
            max_iter: (10 * n).max(1),
            seed: 0,
        }
    }

    /// LOBPCG defaults: `tol = 1e-6`, `max_iter = 500`.
    pub fn lobpcg_default() -> Self {
        Self {
            tol: 1e-6,
            max_iter: 500,
            seed: 0,
        }
    }

    /// Eigensolver settings used by the greedy samplers: `tol = 1e-9`,
    /// `max_iter = 2000`. Tighter than [`SolverOptions::lobpcg_default`] so
    /// that entries of `φ` tied by symmetry stay tied after rounding.
    pub fn sampler_default() -> Self {
        Self {
            tol: 1e-9,
            max_iter: 2000,
            seed: 0,
        }
    }

    pub fn with_tol(mut self, tol: f64) -> Self {
        self.tol = tol;
        self
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn with_max_iter(mut self, max_iter: usize) -> Self {
        self.max_iter = max_iter;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.tol > 0.0) {
            return Err(Error::InvalidArgument(format!(
                "solver tolerance must be positive, got {}",
                self.tol
            )));
        }
        if self.max_iter == 0 {
            return Err(Error::InvalidArgument("max_iter must be at least 1".into()));
        }
        Ok(())
    }
}

/// An eigenvalue with its unit-norm eigenvector.
#[derive(Debug, Clone, PartialEq)]
pub struct EigenPair {
    pub value: f64,
    pub vec: Vec<f64>,
}

impl EigenPair {
    /// `‖A v − λ v‖₂`
    pub fn residual<A: LinearOperator + ?Sized>(&self, a: &A) -> f64 {
        let mut av = vec![0.0; self.vec.len()];
        a.apply_into(&self.vec, &mut av);
        av.iter()
            .zip(&self.vec)
            .map(|(x, v)| (x - self.value * v).powi(2))
            .sum::<f64>()
            .sqrt()
    }
}

/// Seeded uniform random point on the unit sphere in `R^n`.
pub fn random_unit_vector(n: usize, seed: u64) -> Vec<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    random_unit_vector_with(n, &mut rng)
}

pub fn random_unit_vector_with<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Vec<f64> {
    loop {
        let mut v: Vec<f64> = (0..n).map(|_| rng.sample(StandardNormal)).collect();
        let nrm = operator::norm(&v);
        if nrm > 1e-300 {
            operator::scale(1.0 / nrm, &mut v);
            return v;
        }
    }
}
