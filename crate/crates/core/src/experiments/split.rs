use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::config::SplitFractions;
use crate::error::{Error, Result};
use crate::graphs::{RatingMatrix, Shape};
use crate::sampling::IndexMask;

/// Disjoint partition of the known entries.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DatasetSplit {
    pub shape: Shape,
    /// Observed before sampling starts.
    pub initial: Vec<(usize, usize)>,
    /// Candidates the sampler may pick from.
    pub pool: Vec<(usize, usize)>,
    /// Held out for scoring only.
    pub eval: Vec<(usize, usize)>,
}

impl DatasetSplit {
    fn mask(&self, set: &[(usize, usize)]) -> IndexMask {
        IndexMask::from_pairs(self.shape, set).expect("split positions lie in the grid")
    }

    pub fn initial_mask(&self) -> IndexMask {
        self.mask(&self.initial)
    }

    pub fn pool_mask(&self) -> IndexMask {
        self.mask(&self.pool)
    }

    pub fn eval_mask(&self) -> IndexMask {
        self.mask(&self.eval)
    }
}

/// Shuffles the known entries with `seed` and cuts them into initial, pool
/// and eval parts of `round(f · N)` entries each.
pub fn split_dataset(
    data: &RatingMatrix,
    fractions: &SplitFractions,
    seed: u64,
) -> Result<DatasetSplit> {
    fractions.validate()?;
    let total = data.len();
    let size = |f: f64| (f * total as f64).round() as usize;
    let (n_init, n_pool, n_eval) = (
        size(fractions.initial),
        size(fractions.pool),
        size(fractions.eval),
    );
    if n_init + n_pool + n_eval > total {
        return Err(Error::Config(format!(
            "split sizes {n_init}+{n_pool}+{n_eval} exceed the {total} known entries"
        )));
    }
    let mut positions = data.positions();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    positions.shuffle(&mut rng);
    let mut rest = positions.into_iter();
    let mut take = |k: usize| -> Vec<(usize, usize)> {
        let mut v: Vec<_> = rest.by_ref().take(k).collect();
        v.sort_by_key(|&(i, j)| (j, i));
        v
    };
    let initial = take(n_init);
    let pool = take(n_pool);
    let eval = take(n_eval);
    Ok(DatasetSplit {
        shape: Shape::new(data.rows(), data.cols()),
        initial,
        pool,
        eval,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::HashSet;

    fn hundred() -> RatingMatrix {
        let t: Vec<_> = (0..100).map(|l| (l % 10, l / 10, l as f64)).collect();
        RatingMatrix::from_triplets(10, 10, &t).unwrap()
    }

    #[test]
    fn sizes_and_disjointness() {
        let s = split_dataset(&hundred(), &SplitFractions::new(0.6, 0.2, 0.2).unwrap(), 3).unwrap();
        assert_eq!((s.initial.len(), s.pool.len(), s.eval.len()), (60, 20, 20));
        let all: HashSet<_> = s.initial.iter().chain(&s.pool).chain(&s.eval).collect();
        assert_eq!(all.len(), 100);
    }

    #[test]
    fn deterministic_per_seed() {
        let f = SplitFractions::new(0.5, 0.3, 0.1).unwrap();
        let a = split_dataset(&hundred(), &f, 9).unwrap();
        assert_eq!(a, split_dataset(&hundred(), &f, 9).unwrap());
        assert_ne!(a, split_dataset(&hundred(), &f, 10).unwrap());
    }

    #[test]
    fn degenerate_split_has_empty_pool() {
        let s = split_dataset(&hundred(), &SplitFractions::new(1.0, 0.0, 0.0).unwrap(), 0).unwrap();
        assert_eq!(s.initial.len(), 100);
        assert!(s.pool.is_empty() && s.eval.is_empty());
    }

    #[test]
    fn rounding_overflow_is_an_error() {
        let t = [(0, 0, 1.0), (0, 1, 2.0), (1, 0, 3.0)];
        let r = RatingMatrix::from_triplets(2, 2, &t).unwrap();
        let f = SplitFractions::new(0.5, 0.5, 0.0).unwrap();
        assert!(matches!(split_dataset(&r, &f, 0), Err(Error::Config(_))));
    }
}
