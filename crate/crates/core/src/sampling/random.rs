use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::sample_set::{IndexMask, SampleSet};
use crate::error::{Error, Result};
use crate::graphs::Shape;

/// `k` indices drawn uniformly without replacement from `pool` (or the
/// whole grid), in draw order.
pub fn random_sample(
    shape: Shape,
    pool: Option<&IndexMask>,
    k: usize,
    seed: u64,
) -> Result<SampleSet> {
    let candidates: Vec<usize> = match pool {
        Some(p) => {
            if p.len() != shape.len() {
                return Err(Error::DimensionMismatch {
                    expected: shape.len(),
                    got: p.len(),
                });
            }
            p.iter().collect()
        }
        None => (0..shape.len()).collect(),
    };
    if k > candidates.len() {
        return Err(Error::BudgetExceedsPool {
            budget: k,
            pool: candidates.len(),
        });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let picks: Vec<usize> = rand::seq::index::sample(&mut rng, candidates.len(), k)
        .into_iter()
        .map(|p| candidates[p])
        .collect();
    SampleSet::from_linear(shape, &picks)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exhaustive_draw_returns_pool() {
        let pool = IndexMask::from_linear(6, [1, 3, 4]).unwrap();
        let s = random_sample(Shape::new(3, 2), Some(&pool), 3, 0).unwrap();
        let got: Vec<usize> = s.linear().iter().copied().collect();
        assert_eq!(got, vec![1, 3, 4]);
        assert!(random_sample(Shape::new(3, 2), Some(&pool), 4, 0).is_err());
    }

    #[test]
    fn same_seed_same_set() {
        let a = random_sample(Shape::new(10, 10), None, 17, 5).unwrap();
        let b = random_sample(Shape::new(10, 10), None, 17, 5).unwrap();
        assert_eq!(a, b);
        let c = random_sample(Shape::new(10, 10), None, 17, 6).unwrap();
        assert_ne!(a, c);
    }

    #[test]
    fn single_draws_are_uniform() {
        let draws = 10_000;
        let mut counts = [0usize; 4];
        for seed in 0..draws {
            let s = random_sample(Shape::new(2, 2), None, 1, seed as u64).unwrap();
            counts[s.linear_in_order()[0]] += 1;
        }
        let expected = draws as f64 / 4.0;
        let sigma = (draws as f64 * 0.25 * 0.75).sqrt();
        for c in counts {
            assert!((c as f64 - expected).abs() <= 3.0 * sigma, "{counts:?}");
        }
    }
}
