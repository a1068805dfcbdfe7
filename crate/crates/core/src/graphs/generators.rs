//! Seeded synthetic graphs and datasets.

use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};
use serde::{Deserialize, Serialize};

use super::laplacian::{graph_from_edges, GraphLaplacian};
use super::ratings::RatingMatrix;
use crate::error::{Error, Result};
use crate::linalg::dense::sym_eigen_capped;

/// Connectivity resampling budget for [`community_graph`].
pub const MAX_CONNECT_ATTEMPTS: usize = 100;

/// Factor graphs larger than this are rejected by [`synthetic_netflix`],
/// which needs a dense eigendecomposition of each factor.
pub const SYNTHETIC_EIG_CAP: usize = 2048;

/// Community label of node `i` when `n` nodes are cut into `k` contiguous
/// blocks of near-equal size.
pub fn block_label(i: usize, n: usize, k: usize) -> usize {
    i * k / n
}

/// Planted-partition graph with unit weights. Nodes are split into `k`
/// contiguous blocks; each intra-block pair is joined with probability
/// `p_in` and each inter-block pair with probability `p_out`. The draw is
/// repeated until the graph is connected.
pub fn community_graph(
    n: usize,
    k: usize,
    p_in: f64,
    p_out: f64,
    seed: u64,
) -> Result<(GraphLaplacian, Vec<usize>)> {
    if k == 0 || k > n {
        return Err(Error::InvalidArgument(format!(
            "need 1 <= communities <= nodes, got {k} communities for {n} nodes"
        )));
    }
    if !(0.0..=1.0).contains(&p_out) || !(0.0..=1.0).contains(&p_in) || p_out >= p_in {
        return Err(Error::InvalidArgument(format!(
            "need 0 <= p_out < p_in <= 1, got p_in = {p_in}, p_out = {p_out}"
        )));
    }
    let labels: Vec<usize> = (0..n).map(|i| block_label(i, n, k)).collect();
    if n == 1 {
        return Ok((GraphLaplacian::empty(1), labels));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for attempt in 0..MAX_CONNECT_ATTEMPTS {
        let mut edges = Vec::new();
        for i in 0..n {
            for j in (i + 1)..n {
                let p = if labels[i] == labels[j] { p_in } else { p_out };
                if rng.random_bool(p) {
                    edges.push((i, j, 1.0));
                }
            }
        }
        let g = graph_from_edges(n, &edges)?;
        if g.is_connected() {
            log::debug!("community graph connected after {} attempt(s)", attempt + 1);
            return Ok((g, labels));
        }
    }
    Err(Error::Disconnected {
        attempts: MAX_CONNECT_ATTEMPTS,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct SyntheticParams {
    pub m: usize,
    pub n: usize,
    pub row_communities: usize,
    pub col_communities: usize,
    pub noise_sigma: f64,
    pub p_in: f64,
    pub p_out: f64,
    /// Largest absolute value of the smooth perturbation.
    pub perturbation: f64,
    pub seed: u64,
}

impl Default for SyntheticParams {
    fn default() -> Self {
        Self {
            m: 200,
            n: 100,
            row_communities: 4,
            col_communities: 4,
            noise_sigma: 0.0,
            p_in: 0.5,
            p_out: 0.02,
            perturbation: 0.5,
            seed: 0,
        }
    }
}

impl SyntheticParams {
    pub fn new(m: usize, n: usize, row_communities: usize, col_communities: usize) -> Self {
        Self {
            m,
            n,
            row_communities,
            col_communities,
            ..Self::default()
        }
    }

    pub fn with_noise(mut self, sigma: f64) -> Self {
        self.noise_sigma = sigma;
        self
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }
}

#[derive(Debug, Clone)]
pub struct SyntheticData {
    /// Fully observed noisy matrix.
    pub observed: RatingMatrix,
    pub truth: DMatrix<f64>,
    /// `observed − truth`.
    pub noise: DMatrix<f64>,
    pub row_graph: GraphLaplacian,
    pub col_graph: GraphLaplacian,
    pub row_labels: Vec<usize>,
    pub col_labels: Vec<usize>,
}

/// Lowest nonconstant Laplacian eigenvectors (at most `count`), as columns.
fn low_frequency_modes(g: &GraphLaplacian, count: usize) -> Result<DMatrix<f64>> {
    let eig = sym_eigen_capped(&g.laplacian().to_dense(), SYNTHETIC_EIG_CAP)?;
    let take = count.min(g.n().saturating_sub(1));
    Ok(eig.vectors.columns(1, take).into_owned())
}

/// Block-piecewise-smooth rating matrix on two community graphs.
///
/// Each (row community, column community) block gets a base level drawn
/// uniformly from `{1, …, 5}`. A perturbation spanned by the three lowest
/// nonconstant eigenvectors of each factor Laplacian is added, scaled so its
/// largest magnitude equals `perturbation`, and the result is clipped to
/// `[1, 5]`. Observations add i.i.d. `N(0, noise_sigma²)` noise and are not
/// clipped.
pub fn synthetic_netflix(params: &SyntheticParams) -> Result<SyntheticData> {
    let &SyntheticParams {
        m,
        n,
        row_communities,
        col_communities,
        noise_sigma,
        p_in,
        p_out,
        perturbation,
        seed,
    } = params;
    if m == 0 || n == 0 {
        return Err(Error::InvalidArgument(format!(
            "invalid dimensions {m}x{n}"
        )));
    }
    if m > SYNTHETIC_EIG_CAP || n > SYNTHETIC_EIG_CAP {
        return Err(Error::TooLarge {
            n: m.max(n),
            cap: SYNTHETIC_EIG_CAP,
        });
    }
    if !(noise_sigma >= 0.0) || !noise_sigma.is_finite() {
        return Err(Error::InvalidArgument(format!(
            "noise_sigma must be finite and nonnegative, got {noise_sigma}"
        )));
    }
    if !(perturbation >= 0.0) || !perturbation.is_finite() {
        return Err(Error::InvalidArgument(format!(
            "perturbation must be finite and nonnegative, got {perturbation}"
        )));
    }

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (row_graph, row_labels) = community_graph(m, row_communities, p_in, p_out, rng.random())?;
    let (col_graph, col_labels) = community_graph(n, col_communities, p_in, p_out, rng.random())?;

    let levels = DMatrix::from_fn(row_communities, col_communities, |_, _| {
        rng.random_range(1..=5) as f64
    });

    let v = low_frequency_modes(&row_graph, 3)?;
    let u = low_frequency_modes(&col_graph, 3)?;
    // constant columns let the perturbation vary along one axis only
    let mut vr = DMatrix::from_element(m, v.ncols() + 1, 1.0 / (m as f64).sqrt());
    vr.columns_mut(1, v.ncols()).copy_from(&v);
    let mut uc = DMatrix::from_element(n, u.ncols() + 1, 1.0 / (n as f64).sqrt());
    uc.columns_mut(1, u.ncols()).copy_from(&u);
    let std_normal = Normal::new(0.0, 1.0).expect("unit normal");
    let mut coeffs = DMatrix::from_fn(vr.ncols(), uc.ncols(), |_, _| std_normal.sample(&mut rng));
    coeffs[(0, 0)] = 0.0;
    let mut pert = &vr * coeffs * uc.transpose();
    let peak = pert.amax();
    if peak > 0.0 {
        pert *= perturbation / peak;
    }

    let truth = DMatrix::from_fn(m, n, |i, j| {
        (levels[(row_labels[i], col_labels[j])] + pert[(i, j)]).clamp(1.0, 5.0)
    });
    let noise = if noise_sigma > 0.0 {
        let dist = Normal::new(0.0, noise_sigma)
            .map_err(|e| Error::InvalidArgument(format!("noise distribution: {e}")))?;
        DMatrix::from_fn(m, n, |_, _| dist.sample(&mut rng))
    } else {
        DMatrix::zeros(m, n)
    };
    let observed = RatingMatrix::from_dense(&(&truth + &noise))?;

    Ok(SyntheticData {
        observed,
        truth,
        noise,
        row_graph,
        col_graph,
        row_labels,
        col_labels,
    })
}
