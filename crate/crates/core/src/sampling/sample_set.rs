use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graphs::Shape;

/// Ordered selection of matrix entries with its linear-index view.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SampleSet {
    shape: Shape,
    pairs: Vec<(usize, usize)>,
    linear: BTreeSet<usize>,
    budget: usize,
}

impl SampleSet {
    pub fn new(shape: Shape, budget: usize) -> Self {
        Self {
            shape,
            pairs: Vec::new(),
            linear: BTreeSet::new(),
            budget,
        }
    }

    /// Budget defaults to the number of pairs.
    pub fn from_pairs(shape: Shape, pairs: &[(usize, usize)]) -> Result<Self> {
        let mut s = Self::new(shape, pairs.len());
        for &(i, j) in pairs {
            s.push(i, j)?;
        }
        Ok(s)
    }

    pub fn from_linear(shape: Shape, linear: &[usize]) -> Result<Self> {
        let mut s = Self::new(shape, linear.len());
        for &l in linear {
            s.push_linear(l)?;
        }
        Ok(s)
    }

    pub fn push(&mut self, i: usize, j: usize) -> Result<()> {
        let l = self.shape.lin_index(i, j)?;
        if self.linear.contains(&l) {
            return Err(Error::DuplicateEntry { row: i, col: j });
        }
        if self.pairs.len() >= self.budget {
            return Err(Error::BudgetExceedsPool {
                budget: self.pairs.len() + 1,
                pool: self.budget,
            });
        }
        self.linear.insert(l);
        self.pairs.push((i, j));
        Ok(())
    }

    pub fn push_linear(&mut self, l: usize) -> Result<()> {
        let (i, j) = self.shape.mat_index(l)?;
        self.push(i, j)
    }

    pub fn shape(&self) -> Shape {
        self.shape
    }

    pub fn budget(&self) -> usize {
        self.budget
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    /// Selections in the order they were made.
    pub fn pairs(&self) -> &[(usize, usize)] {
        &self.pairs
    }

    /// Linear indices `i + m·j` in selection order.
    pub fn linear_in_order(&self) -> Vec<usize> {
        self.pairs
            .iter()
            .map(|&(i, j)| i + self.shape.m * j)
            .collect()
    }

    /// Linear indices, ascending.
    pub fn linear(&self) -> &BTreeSet<usize> {
        &self.linear
    }

    pub fn contains(&self, i: usize, j: usize) -> bool {
        i < self.shape.m && j < self.shape.n && self.linear.contains(&(i + self.shape.m * j))
    }

    pub fn contains_linear(&self, l: usize) -> bool {
        self.linear.contains(&l)
    }

    /// 0/1 indicator of length `mn`.
    pub fn indicator(&self) -> Vec<f64> {
        let mut d = vec![0.0; self.shape.len()];
        for &l in &self.linear {
            d[l] = 1.0;
        }
        d
    }

    /// The first `k` selections, with budget `k`.
    pub fn prefix(&self, k: usize) -> Result<Self> {
        if k > self.len() {
            return Err(Error::InvalidArgument(format!(
                "prefix of length {k} requested from {} selections",
                self.len()
            )));
        }
        let mut s = Self::from_pairs(self.shape, &self.pairs[..k])?;
        s.budget = k;
        Ok(s)
    }
}

/// Set of admissible linear indices over an `mn` grid.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IndexMask {
    bits: Vec<bool>,
    count: usize,
}

impl IndexMask {
    pub fn full(len: usize) -> Self {
        Self {
            bits: vec![true; len],
            count: len,
        }
    }

    pub fn empty(len: usize) -> Self {
        Self {
            bits: vec![false; len],
            count: 0,
        }
    }

    pub fn from_linear(len: usize, linear: impl IntoIterator<Item = usize>) -> Result<Self> {
        let mut mask = Self::empty(len);
        for l in linear {
            mask.insert(l)?;
        }
        Ok(mask)
    }

    pub fn from_pairs(shape: Shape, pairs: &[(usize, usize)]) -> Result<Self> {
        let mut mask = Self::empty(shape.len());
        for &(i, j) in pairs {
            mask.insert(shape.lin_index(i, j)?)?;
        }
        Ok(mask)
    }

    pub fn insert(&mut self, l: usize) -> Result<()> {
        let len = self.bits.len();
        let bit = self.bits.get_mut(l).ok_or_else(|| {
            Error::InvalidArgument(format!("mask index {l} out of range for length {len}"))
        })?;
        if !*bit {
            *bit = true;
            self.count += 1;
        }
        Ok(())
    }

    pub fn remove(&mut self, l: usize) {
        if let Some(bit) = self.bits.get_mut(l) {
            if *bit {
                *bit = false;
                self.count -= 1;
            }
        }
    }

    pub fn contains(&self, l: usize) -> bool {
        self.bits.get(l).copied().unwrap_or(false)
    }

    pub fn len(&self) -> usize {
        self.bits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_empty()
    }

    /// Number of admissible indices.
    pub fn count(&self) -> usize {
        self.count
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.bits
            .iter()
            .enumerate()
            .filter_map(|(l, &b)| b.then_some(l))
    }
}
