//! Greedy disc-shift sampling on the product graph.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::sample_set::{IndexMask, SampleSet};
use super::select::argmax_magnitude;
use crate::error::{Error, Result};
use crate::graphs::ProductOperator;
use crate::linalg::lobpcg::lobpcg_smallest_with;
use crate::linalg::{
    random_unit_vector_with, EigenPair, LinearOperator, Preconditioner, SolverOptions,
};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GcsOptions {
    pub solver: SolverOptions,
    /// Seed each eigensolve with the previous eigenvector. When off, every
    /// step starts from a fresh random vector.
    pub warm_start: bool,
    pub preconditioner: Preconditioner,
}

impl Default for GcsOptions {
    fn default() -> Self {
        Self {
            solver: SolverOptions::sampler_default(),
            warm_start: true,
            preconditioner: Preconditioner::None,
        }
    }
}

impl GcsOptions {
    pub fn with_solver(solver: SolverOptions) -> Self {
        Self {
            solver,
            ..Self::default()
        }
    }

    pub fn cold(mut self) -> Self {
        self.warm_start = false;
        self
    }
}

/// Sampler state: the operator with its running indicator, the selections so
/// far and the last eigenvector.
///
/// When the operator arrives with samples already set (an initial observed
/// set), `chosen` holds only the new selections.
#[derive(Debug, Clone)]
pub struct GcsState {
    pub op: ProductOperator,
    pub chosen: SampleSet,
    pub warm_vec: Vec<f64>,
    /// LOBPCG iterations per step.
    pub iter_counts: Vec<usize>,
    /// Smallest eigenvalue of the operator before each step.
    pub lambda_trace: Vec<f64>,
    options: GcsOptions,
    rng: ChaCha8Rng,
}

impl GcsState {
    pub fn new(op: ProductOperator, budget: usize, options: GcsOptions) -> Result<Self> {
        options.solver.validate()?;
        let mut rng = ChaCha8Rng::seed_from_u64(options.solver.seed);
        let warm_vec = random_unit_vector_with(op.dim(), &mut rng);
        let chosen = SampleSet::new(op.shape(), budget);
        Ok(Self {
            op,
            chosen,
            warm_vec,
            iter_counts: Vec::new(),
            lambda_trace: Vec::new(),
            options,
            rng,
        })
    }

    pub fn options(&self) -> &GcsOptions {
        &self.options
    }

    pub fn total_iterations(&self) -> usize {
        self.iter_counts.iter().sum()
    }

    pub fn is_eligible(&self, l: usize, allowed: Option<&IndexMask>) -> bool {
        !self.op.is_sampled(l) && allowed.is_none_or(|a| a.contains(l))
    }

    /// Number of indices still available for selection.
    pub fn pool_size(&self, allowed: Option<&IndexMask>) -> usize {
        (0..self.op.dim())
            .filter(|&l| self.is_eligible(l, allowed))
            .count()
    }

    /// First eigenpair of the current operator, seeded from `warm_vec`.
    pub(crate) fn first_eigenpair(&mut self) -> Result<EigenPair> {
        let step = self.chosen.len();
        let out = lobpcg_smallest_with(
            &self.op,
            &self.warm_vec,
            &self.options.solver,
            self.options.preconditioner,
        )
        .and_then(|o| o.require_converged())
        .map_err(|e| e.at_step(step))?;
        self.iter_counts.push(out.iterations);
        self.lambda_trace.push(out.pair.value);
        Ok(out.pair)
    }

    /// Shifts disc `l` and records it. `phi` becomes the next warm start.
    pub(crate) fn commit(&mut self, l: usize, phi: Vec<f64>) -> Result<()> {
        self.op.add_sample(l)?;
        self.chosen.push_linear(l)?;
        self.warm_vec = if self.options.warm_start {
            phi
        } else {
            random_unit_vector_with(self.op.dim(), &mut self.rng)
        };
        Ok(())
    }

    /// One greedy step; returns the chosen linear index.
    pub fn step(&mut self, allowed: Option<&IndexMask>) -> Result<usize> {
        let pair = self.first_eigenpair()?;
        let step = self.chosen.len();
        let pick =
            argmax_magnitude(&pair.vec, |l| self.is_eligible(l, allowed)).ok_or_else(|| {
                Error::BudgetExceedsPool {
                    budget: step + 1,
                    pool: step,
                }
                .at_step(step)
            })?;
        self.commit(pick, pair.vec)?;
        Ok(pick)
    }
}

pub(crate) fn check_mask(allowed: Option<&IndexMask>, len: usize) -> Result<()> {
    match allowed {
        Some(a) if a.len() != len => Err(Error::DimensionMismatch {
            expected: len,
            got: a.len(),
        }),
        _ => Ok(()),
    }
}

/// Selects `k` entries greedily: each step computes the first eigenvector of
/// the current operator and samples its largest-magnitude unsampled entry.
pub fn gcs_sample(
    op: ProductOperator,
    k: usize,
    allowed: Option<&IndexMask>,
    opts: &SolverOptions,
) -> Result<(SampleSet, GcsState)> {
    gcs_sample_with(op, k, allowed, &GcsOptions::with_solver(*opts))
}

pub fn gcs_sample_with(
    op: ProductOperator,
    k: usize,
    allowed: Option<&IndexMask>,
    options: &GcsOptions,
) -> Result<(SampleSet, GcsState)> {
    check_mask(allowed, op.dim())?;
    let mut state = GcsState::new(op, k, *options)?;
    let pool = state.pool_size(allowed);
    if k > pool {
        return Err(Error::BudgetExceedsPool { budget: k, pool });
    }
    for _ in 0..k {
        state.step(allowed)?;
    }
    log::debug!(
        "gcs: {} samples, {} lobpcg iterations",
        k,
        state.total_iterations()
    );
    Ok((state.chosen.clone(), state))
}
