//! Block-wise greedy sampling that alternates between column blocks
//! ("clusters", operator `q Ã_j + α L_r` on `m` nodes) and row blocks
//! ("groups", operator `(1−q) Â_i + β L_c` on `n` nodes).

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::gcs::check_mask;
use super::sample_set::{IndexMask, SampleSet};
use super::select::argmax_magnitude;
use crate::error::{Error, Result};
use crate::graphs::GraphLaplacian;
use crate::linalg::lobpcg::lobpcg_smallest_with;
use crate::linalg::{random_unit_vector_with, Preconditioner, ShiftedOperator, SolverOptions};

pub const DEFAULT_Q: f64 = 0.5;
pub const DEFAULT_ZETA: usize = 1;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct IgcsParams {
    pub alpha: f64,
    pub beta: f64,
    pub q: f64,
    pub zeta: usize,
    pub solver: SolverOptions,
    pub preconditioner: Preconditioner,
}

impl Default for IgcsParams {
    fn default() -> Self {
        Self {
            alpha: 0.1,
            beta: 0.1,
            q: DEFAULT_Q,
            zeta: DEFAULT_ZETA,
            solver: SolverOptions::sampler_default(),
            preconditioner: Preconditioner::None,
        }
    }
}

impl IgcsParams {
    pub fn validate(&self) -> Result<()> {
        for (name, v) in [("alpha", self.alpha), ("beta", self.beta)] {
            if !v.is_finite() || v < 0.0 {
                return Err(Error::InvalidArgument(format!(
                    "{name} must be finite and nonnegative, got {v}"
                )));
            }
        }
        if !(self.q > 0.0 && self.q < 1.0) {
            return Err(Error::InvalidArgument(format!(
                "q must lie in (0, 1), got {}",
                self.q
            )));
        }
        if self.zeta == 0 {
            return Err(Error::InvalidArgument("zeta must be at least 1".into()));
        }
        self.solver.validate()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BlockKind {
    Cluster,
    Group,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IgcsStep {
    pub kind: BlockKind,
    /// Column index for clusters, row index for groups.
    pub block: usize,
    pub pick: (usize, usize),
    /// The next step moves to the other block kind.
    pub switched: bool,
    pub iterations: usize,
}

#[derive(Debug, Clone)]
pub struct IgcsRun {
    pub samples: SampleSet,
    pub trace: Vec<IgcsStep>,
}

impl IgcsRun {
    pub fn iter_counts(&self) -> Vec<usize> {
        self.trace.iter().map(|s| s.iterations).collect()
    }
}

/// Alternating block sampler. `initial` marks entries that are already
/// observed (they shift their discs but are never selected); `allowed`
/// restricts the selectable entries.
pub fn igcs_sample(
    row_graph: &GraphLaplacian,
    col_graph: &GraphLaplacian,
    params: &IgcsParams,
    k: usize,
    allowed: Option<&IndexMask>,
    initial: Option<&IndexMask>,
) -> Result<IgcsRun> {
    params.validate()?;
    let m = row_graph.n();
    let n = col_graph.n();
    let mn = m * n;
    if mn == 0 {
        return Err(Error::InvalidArgument(
            "factor graphs must be nonempty".into(),
        ));
    }
    check_mask(allowed, mn)?;
    check_mask(initial, mn)?;

    let mut sampled = vec![false; mn];
    if let Some(init) = initial {
        for l in init.iter() {
            sampled[l] = true;
        }
    }
    let eligible =
        |sampled: &[bool], l: usize| !sampled[l] && allowed.is_none_or(|a| a.contains(l));
    let pool = (0..mn).filter(|&l| eligible(&sampled, l)).count();
    if k > pool {
        return Err(Error::BudgetExceedsPool { budget: k, pool });
    }

    let shape = crate::graphs::Shape::new(m, n);
    let mut samples = SampleSet::new(shape, k);
    let mut trace = Vec::with_capacity(k);
    let mut rng = ChaCha8Rng::seed_from_u64(params.solver.seed);
    let mut kind = BlockKind::Cluster;
    let mut block = 0usize;
    let mut w = 0usize;
    let mut phi: Vec<f64> = Vec::new();

    while samples.len() < k {
        let step = samples.len();
        let (size, count) = match kind {
            BlockKind::Cluster => (m, n),
            BlockKind::Group => (n, m),
        };
        let lin = |b: usize, t: usize| match kind {
            BlockKind::Cluster => t + m * b,
            BlockKind::Group => b + m * t,
        };
        // advance past blocks with nothing left to pick
        let mut hops = 0;
        while !(0..size).any(|t| eligible(&sampled, lin(block, t))) {
            block = (block + 1) % count;
            w = 0;
            hops += 1;
            if hops > count {
                return Err(Error::BudgetExceedsPool {
                    budget: k,
                    pool: step,
                }
                .at_step(step));
            }
        }

        let (base, weight, scale) = match kind {
            BlockKind::Cluster => (row_graph.laplacian(), params.q, params.alpha),
            BlockKind::Group => (col_graph.laplacian(), 1.0 - params.q, params.beta),
        };
        let shift: Vec<f64> = (0..size)
            .map(|t| if sampled[lin(block, t)] { weight } else { 0.0 })
            .collect();
        let op = ShiftedOperator { base, scale, shift };

        w += 1;
        let v = if w == 1 {
            random_unit_vector_with(size, &mut rng)
        } else {
            std::mem::take(&mut phi)
        };
        let out = lobpcg_smallest_with(&op, &v, &params.solver, params.preconditioner)
            .and_then(|o| o.require_converged())
            .map_err(|e| e.at_step(step))?;
        let t = argmax_magnitude(&out.pair.vec, |t| eligible(&sampled, lin(block, t)))
            .expect("block has an eligible entry");
        let l = lin(block, t);
        sampled[l] = true;
        let pick = (l % m, l / m);
        samples.push(pick.0, pick.1)?;
        phi = out.pair.vec;

        let switched = w >= params.zeta;
        trace.push(IgcsStep {
            kind,
            block,
            pick,
            switched,
            iterations: out.iterations,
        });
        if switched {
            kind = match kind {
                BlockKind::Cluster => BlockKind::Group,
                BlockKind::Group => BlockKind::Cluster,
            };
            block = t;
            w = 0;
        }
    }
    Ok(IgcsRun { samples, trace })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graphs::graph_from_edges;
    use crate::linalg::sym_eigen;
    use nalgebra::DMatrix;

    fn path(n: usize) -> GraphLaplacian {
        let edges: Vec<_> = (1..n).map(|i| (i - 1, i, 1.0)).collect();
        graph_from_edges(n, &edges).unwrap()
    }

    #[test]
    fn single_sample_starts_at_origin() {
        let run = igcs_sample(&path(4), &path(3), &IgcsParams::default(), 1, None, None).unwrap();
        assert_eq!(run.samples.pairs(), &[(0, 0)]);
        assert_eq!(run.trace[0].kind, BlockKind::Cluster);
    }

    #[test]
    fn rejects_bad_parameters() {
        let g = path(3);
        for p in [
            IgcsParams {
                q: 0.0,
                ..Default::default()
            },
            IgcsParams {
                q: 1.0,
                ..Default::default()
            },
            IgcsParams {
                zeta: 0,
                ..Default::default()
            },
        ] {
            assert!(igcs_sample(&g, &g, &p, 1, None, None).is_err());
        }
        assert!(igcs_sample(&g, &g, &IgcsParams::default(), 10, None, None).is_err());
    }

    /// Straight transcription of the pseudo-code with dense block matrices.
    fn dense_trace(
        lr: &DMatrix<f64>,
        lc: &DMatrix<f64>,
        p: &IgcsParams,
        k: usize,
    ) -> Vec<(BlockKind, usize, (usize, usize), bool)> {
        let (m, n) = (lr.nrows(), lc.nrows());
        let mut a_tilde = vec![vec![0.0; m]; n];
        let mut a_hat = vec![vec![0.0; n]; m];
        let (mut s, mut w, mut j, mut i) = (1, 0, 0, 0);
        let mut out = Vec::new();
        while out.len() < k {
            if s == 1 {
                let mut l = lr * p.alpha;
                for t in 0..m {
                    l[(t, t)] += p.q * a_tilde[j][t];
                }
                w += 1;
                let phi = sym_eigen(&l).unwrap().vector(0);
                let ks = argmax_magnitude(&phi, |t| a_tilde[j][t] == 0.0).unwrap();
                a_tilde[j][ks] = 1.0;
                a_hat[ks][j] = 1.0;
                let sw = w >= p.zeta;
                out.push((BlockKind::Cluster, j, (ks, j), sw));
                if sw {
                    i = ks;
                    s = 2;
                    w = 0;
                }
            } else {
                let mut l = lc * p.beta;
                for t in 0..n {
                    l[(t, t)] += (1.0 - p.q) * a_hat[i][t];
                }
                w += 1;
                let phi = sym_eigen(&l).unwrap().vector(0);
                let ks = argmax_magnitude(&phi, |t| a_hat[i][t] == 0.0).unwrap();
                a_tilde[ks][i] = 1.0;
                a_hat[i][ks] = 1.0;
                let sw = w >= p.zeta;
                out.push((BlockKind::Group, i, (i, ks), sw));
                if sw {
                    j = ks;
                    s = 1;
                    w = 0;
                }
            }
        }
        out
    }

    #[test]
    fn four_by_three_trace_matches_pseudo_code() {
        let lr =
            graph_from_edges(4, &[(0, 1, 1.0), (1, 2, 0.5), (2, 3, 2.0), (0, 3, 0.3)]).unwrap();
        let lc = graph_from_edges(3, &[(0, 1, 1.0), (1, 2, 0.7)]).unwrap();
        let p = IgcsParams {
            zeta: 2,
            ..Default::default()
        };
        let run = igcs_sample(&lr, &lc, &p, 6, None, None).unwrap();
        let got: Vec<_> = run
            .trace
            .iter()
            .map(|s| (s.kind, s.block, s.pick, s.switched))
            .collect();
        let expected = dense_trace(
            &lr.laplacian().to_dense(),
            &lc.laplacian().to_dense(),
            &p,
            6,
        );
        assert_eq!(got, expected);
    }

    #[test]
    fn exhausted_block_advances() {
        // a single row: every group step sees the same row block, clusters have one entry
        let p = IgcsParams {
            zeta: 1,
            ..Default::default()
        };
        let run = igcs_sample(&path(1), &path(4), &p, 4, None, None).unwrap();
        let mut cols: Vec<usize> = run.samples.pairs().iter().map(|&(_, j)| j).collect();
        cols.sort();
        assert_eq!(cols, vec![0, 1, 2, 3]);
    }

    #[test]
    fn mask_and_initial_set_are_respected() {
        let mask = IndexMask::from_linear(12, [1, 2, 5, 6, 9, 10, 11]).unwrap();
        let init = IndexMask::from_linear(12, [0, 3]).unwrap();
        let run = igcs_sample(
            &path(4),
            &path(3),
            &IgcsParams::default(),
            7,
            Some(&mask),
            Some(&init),
        )
        .unwrap();
        let mut got: Vec<usize> = run.samples.linear().iter().copied().collect();
        got.sort();
        assert_eq!(got, vec![1, 2, 5, 6, 9, 10, 11]);
    }
}
