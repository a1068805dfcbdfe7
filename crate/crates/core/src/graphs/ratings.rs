use std::collections::HashMap;

use nalgebra::DMatrix;

use crate::error::{Error, Result};

/// A partially observed `m × n` matrix stored as `(row, col, value)` triplets.
#[derive(Debug, Clone, PartialEq)]
pub struct RatingMatrix {
    m: usize,
    n: usize,
    entries: Vec<(usize, usize, f64)>,
    index: HashMap<(usize, usize), usize>,
}

impl RatingMatrix {
    pub fn new(m: usize, n: usize) -> Self {
        Self {
            m,
            n,
            entries: Vec::new(),
            index: HashMap::new(),
        }
    }

    pub fn from_triplets(m: usize, n: usize, triplets: &[(usize, usize, f64)]) -> Result<Self> {
        let mut r = Self::new(m, n);
        for &(i, j, v) in triplets {
            r.insert(i, j, v)?;
        }
        Ok(r)
    }

    /// Every entry of a dense matrix becomes a known entry.
    pub fn from_dense(x: &DMatrix<f64>) -> Result<Self> {
        let mut r = Self::new(x.nrows(), x.ncols());
        for j in 0..x.ncols() {
            for i in 0..x.nrows() {
                r.insert(i, j, x[(i, j)])?;
            }
        }
        Ok(r)
    }

    pub fn insert(&mut self, row: usize, col: usize, value: f64) -> Result<()> {
        if row >= self.m || col >= self.n {
            return Err(Error::IndexOutOfRange {
                row,
                col,
                rows: self.m,
                cols: self.n,
            });
        }
        if !value.is_finite() {
            return Err(Error::NotANumber("rating value"));
        }
        if self.index.contains_key(&(row, col)) {
            return Err(Error::DuplicateEntry { row, col });
        }
        self.index.insert((row, col), self.entries.len());
        self.entries.push((row, col, value));
        Ok(())
    }

    pub fn rows(&self) -> usize {
        self.m
    }

    pub fn cols(&self) -> usize {
        self.n
    }

    pub fn entries(&self) -> &[(usize, usize, f64)] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn density(&self) -> f64 {
        if self.m * self.n == 0 {
            0.0
        } else {
            self.entries.len() as f64 / (self.m * self.n) as f64
        }
    }

    pub fn get(&self, row: usize, col: usize) -> Option<f64> {
        self.index.get(&(row, col)).map(|&k| self.entries[k].2)
    }

    pub fn contains(&self, row: usize, col: usize) -> bool {
        self.index.contains_key(&(row, col))
    }

    /// Copy containing only the listed positions (which must all be known).
    pub fn restrict(&self, positions: &[(usize, usize)]) -> Result<Self> {
        let mut out = Self::new(self.m, self.n);
        for &(i, j) in positions {
            let v = self.get(i, j).ok_or_else(|| {
                Error::InvalidArgument(format!("entry ({i}, {j}) is not observed"))
            })?;
            out.insert(i, j, v)?;
        }
        Ok(out)
    }

    /// Dense matrix with unknown entries set to zero.
    pub fn to_dense_zero_filled(&self) -> DMatrix<f64> {
        let mut x = DMatrix::zeros(self.m, self.n);
        for &(i, j, v) in &self.entries {
            x[(i, j)] = v;
        }
        x
    }

    /// Known positions, ordered by column-major linear index.
    pub fn positions(&self) -> Vec<(usize, usize)> {
        let mut p: Vec<(usize, usize)> = self.entries.iter().map(|&(i, j, _)| (i, j)).collect();
        p.sort_by_key(|&(i, j)| (j, i));
        p
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_duplicates_and_out_of_range() {
        let mut r = RatingMatrix::new(2, 2);
        r.insert(0, 1, 3.0).unwrap();
        assert!(matches!(
            r.insert(0, 1, 4.0),
            Err(Error::DuplicateEntry { .. })
        ));
        assert!(matches!(
            r.insert(2, 0, 1.0),
            Err(Error::IndexOutOfRange { .. })
        ));
        assert!(matches!(
            r.insert(1, 1, f64::NAN),
            Err(Error::NotANumber(_))
        ));
        assert_eq!(r.get(0, 1), Some(3.0));
        assert_eq!(r.density(), 0.25);
    }

    #[test]
    fn restrict_requires_known_entries() {
        let r = RatingMatrix::from_triplets(2, 2, &[(0, 0, 1.0), (1, 1, 2.0)]).unwrap();
        assert_eq!(r.restrict(&[(1, 1)]).unwrap().len(), 1);
        assert!(r.restrict(&[(0, 1)]).is_err());
    }
}
