//! Symmetric sparse matrices in compressed sparse row form.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::Path;

use nalgebra::DMatrix;

use crate::error::{Error, Result};

/// Absolute tolerance used when checking that `a[i,j] == a[j,i]`.
pub const SYMMETRY_TOL: f64 = 1e-12;

/// A symmetric matrix stored in CSR form with both triangles present.
///
/// Column indices within each row are strictly increasing, so there are no
/// duplicate `(row, col)` pairs.
#[derive(Debug, Clone, PartialEq)]
pub struct SparseSym {
    n: usize,
    row_offsets: Vec<usize>,
    col_indices: Vec<usize>,
    values: Vec<f64>,
}

impl SparseSym {
    /// Builds a matrix from full (both-triangle) triplets.
    ///
    /// Duplicate `(row, col)` pairs are rejected and symmetry is checked to
    /// [`SYMMETRY_TOL`].
    pub fn from_triplets(n: usize, triplets: &[(usize, usize, f64)]) -> Result<Self> {
        let mut rows: Vec<BTreeMap<usize, f64>> = vec![BTreeMap::new(); n];
        for &(i, j, v) in triplets {
            if i >= n || j >= n {
                return Err(Error::IndexOutOfRange {
                    row: i,
                    col: j,
                    rows: n,
                    cols: n,
                });
            }
            if !v.is_finite() {
                return Err(Error::NotANumber("sparse matrix entry"));
            }
            if rows[i].insert(j, v).is_some() {
                return Err(Error::DuplicateEntry { row: i, col: j });
            }
        }
        for (i, row) in rows.iter().enumerate() {
            for (&j, &v) in row {
                let mirror = rows[j].get(&i).copied().unwrap_or(0.0);
                let diff = (v - mirror).abs();
                if diff > SYMMETRY_TOL {
                    return Err(Error::NotSymmetric {
                        row: i,
                        col: j,
                        diff,
                    });
                }
            }
        }
        Ok(Self::from_rows(n, rows))
    }

    /// Builds a matrix from upper-triangle triplets (`i <= j`), mirroring
    /// every off-diagonal entry into the lower triangle.
    pub fn from_upper_triplets(n: usize, triplets: &[(usize, usize, f64)]) -> Result<Self> {
        let mut rows: Vec<BTreeMap<usize, f64>> = vec![BTreeMap::new(); n];
        for &(i, j, v) in triplets {
            if i >= n || j >= n {
                return Err(Error::IndexOutOfRange {
                    row: i,
                    col: j,
                    rows: n,
                    cols: n,
                });
            }
            if i > j {
                return Err(Error::InvalidArgument(format!(
                    "entry ({i}, {j}) is below the diagonal"
                )));
            }
            if !v.is_finite() {
                return Err(Error::NotANumber("sparse matrix entry"));
            }
            if rows[i].insert(j, v).is_some() {
                return Err(Error::DuplicateEntry { row: i, col: j });
            }
            if i != j {
                rows[j].insert(i, v);
            }
        }
        Ok(Self::from_rows(n, rows))
    }

    fn from_rows(n: usize, rows: Vec<BTreeMap<usize, f64>>) -> Self {
        let nnz = rows.iter().map(BTreeMap::len).sum();
        let mut row_offsets = Vec::with_capacity(n + 1);
        let mut col_indices = Vec::with_capacity(nnz);
        let mut values = Vec::with_capacity(nnz);
        row_offsets.push(0);
        for row in rows {
            for (j, v) in row {
                col_indices.push(j);
                values.push(v);
            }
            row_offsets.push(col_indices.len());
        }
        Self {
            n,
            row_offsets,
            col_indices,
            values,
        }
    }

    pub fn identity(n: usize) -> Self {
        Self {
            n,
            row_offsets: (0..=n).collect(),
            col_indices: (0..n).collect(),
            values: vec![1.0; n],
        }
    }

    pub fn zeros(n: usize) -> Self {
        Self {
            n,
            row_offsets: vec![0; n + 1],
            col_indices: Vec::new(),
            values: Vec::new(),
        }
    }

    pub fn from_diagonal(diag: &[f64]) -> Self {
        Self {
            n: diag.len(),
            row_offsets: (0..=diag.len()).collect(),
            col_indices: (0..diag.len()).collect(),
            values: diag.to_vec(),
        }
    }

    /// Converts a dense symmetric matrix, dropping exact zeros.
    pub fn from_dense(a: &DMatrix<f64>) -> Result<Self> {
        if a.nrows() != a.ncols() {
            return Err(Error::DimensionMismatch {
                expected: a.nrows(),
                got: a.ncols(),
            });
        }
        let n = a.nrows();
        let mut triplets = Vec::new();
        for i in 0..n {
            for j in 0..n {
                let v = a[(i, j)];
                if v != 0.0 {
                    triplets.push((i, j, v));
                }
            }
        }
        Self::from_triplets(n, &triplets)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn nnz(&self) -> usize {
        self.values.len()
    }

    pub fn row_offsets(&self) -> &[usize] {
        &self.row_offsets
    }

    pub fn col_indices(&self) -> &[usize] {
        &self.col_indices
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// Iterates `(col, value)` over the stored entries of row `i`.
    pub fn row(&self, i: usize) -> impl Iterator<Item = (usize, f64)> + '_ {
        let range = self.row_offsets[i]..self.row_offsets[i + 1];
        self.col_indices[range.clone()]
            .iter()
            .copied()
            .zip(self.values[range].iter().copied())
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        let range = self.row_offsets[i]..self.row_offsets[i + 1];
        match self.col_indices[range.clone()].binary_search(&j) {
            Ok(pos) => self.values[range.start + pos],
            Err(_) => 0.0,
        }
    }

    pub fn diagonal(&self) -> Vec<f64> {
        (0..self.n).map(|i| self.get(i, i)).collect()
    }

    /// Upper-triangle entries `(i, j, value)` with `i <= j`, row-major.
    pub fn upper_triplets(&self) -> Vec<(usize, usize, f64)> {
        let mut out = Vec::with_capacity(self.nnz() / 2 + self.n);
        for i in 0..self.n {
            out.extend(self.row(i).filter(|&(j, _)| j >= i).map(|(j, v)| (i, j, v)));
        }
        out
    }

    pub fn to_dense(&self) -> DMatrix<f64> {
        let mut a = DMatrix::zeros(self.n, self.n);
        for i in 0..self.n {
            for (j, v) in self.row(i) {
                a[(i, j)] = v;
            }
        }
        a
    }

    /// Returns `scale * self + diag(shift)`.
    pub fn scaled_plus_diagonal(&self, scale: f64, shift: &[f64]) -> Result<Self> {
        if shift.len() != self.n {
            return Err(Error::DimensionMismatch {
                expected: self.n,
                got: shift.len(),
            });
        }
        let mut rows: Vec<BTreeMap<usize, f64>> = vec![BTreeMap::new(); self.n];
        for (i, row) in rows.iter_mut().enumerate() {
            for (j, v) in self.row(i) {
                row.insert(j, scale * v);
            }
            if shift[i] != 0.0 {
                *row.entry(i).or_insert(0.0) += shift[i];
            }
        }
        Ok(Self::from_rows(self.n, rows))
    }

    /// `y = A x` with a fixed row-major accumulation order.
    pub fn spmv_into(&self, x: &[f64], y: &mut [f64]) -> Result<()> {
        if x.len() != self.n {
            return Err(Error::DimensionMismatch {
                expected: self.n,
                got: x.len(),
            });
        }
        if y.len() != self.n {
            return Err(Error::DimensionMismatch {
                expected: self.n,
                got: y.len(),
            });
        }
        self.spmv_unchecked(x, y);
        Ok(())
    }

    pub(crate) fn spmv_unchecked(&self, x: &[f64], y: &mut [f64]) {
        for (i, yi) in y.iter_mut().enumerate() {
            let mut acc = 0.0;
            for k in self.row_offsets[i]..self.row_offsets[i + 1] {
                acc += self.values[k] * x[self.col_indices[k]];
            }
            *yi = acc;
        }
    }

    /// Renders the upper triangle as an `i j value` edge list preceded by a
    /// `# n=<N>` header line.
    pub fn to_edge_list(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "# n={}", self.n);
        for (i, j, v) in self.upper_triplets() {
            let _ = writeln!(out, "{i} {j} {v}");
        }
        out
    }

    /// Parses the edge-list format written by [`SparseSym::to_edge_list`].
    ///
    /// Without a `# n=<N>` directive the dimension is one past the largest
    /// index seen. Lines starting with `#` are otherwise ignored.
    pub fn parse_edge_list(text: &str, origin: &Path) -> Result<Self> {
        let mut declared_n = None;
        let mut triplets = Vec::new();
        let parse_err = |line: usize, message: String| Error::Parse {
            path: origin.to_path_buf(),
            line,
            message,
        };
        for (lineno, raw) in text.lines().enumerate() {
            let lineno = lineno + 1;
            let line = raw.trim();
            if line.is_empty() {
                continue;
            }
            if let Some(comment) = line.strip_prefix('#') {
                if let Some(value) = comment.trim().strip_prefix("n=") {
                    let n = value
                        .trim()
                        .parse::<usize>()
                        .map_err(|e| parse_err(lineno, format!("bad dimension: {e}")))?;
                    declared_n = Some(n);
                }
                continue;
            }
            let fields: Vec<&str> = line.split_whitespace().collect();
            if fields.len() != 3 {
                return Err(parse_err(
                    lineno,
                    format!("expected `i j value`, found {} fields", fields.len()),
                ));
            }
            let i = fields[0]
                .parse::<usize>()
                .map_err(|e| parse_err(lineno, format!("bad row index: {e}")))?;
            let j = fields[1]
                .parse::<usize>()
                .map_err(|e| parse_err(lineno, format!("bad column index: {e}")))?;
            let v = fields[2]
                .parse::<f64>()
                .map_err(|e| parse_err(lineno, format!("bad value: {e}")))?;
            let (i, j) = if i <= j { (i, j) } else { (j, i) };
            triplets.push((i, j, v));
        }
        let inferred = triplets.iter().map(|&(_, j, _)| j + 1).max().unwrap_or(0);
        let n = declared_n.unwrap_or(inferred);
        if n < inferred {
            return Err(parse_err(
                0,
                format!("declared n={n} but index {} present", inferred - 1),
            ));
        }
        Self::from_upper_triplets(n, &triplets)
    }

    pub fn read_edge_list(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::parse_edge_list(&text, path)
    }

    pub fn write_edge_list(&self, path: &Path) -> Result<()> {
        std::fs::write(path, self.to_edge_list()).map_err(|e| Error::io(path, e))
    }
}

/// Returns `A x`.
pub fn spmv(a: &SparseSym, x: &[f64]) -> Result<Vec<f64>> {
    let mut y = vec![0.0; a.n()];
    a.spmv_into(x, &mut y)?;
    Ok(y)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn path3_laplacian() -> SparseSym {
        SparseSym::from_upper_triplets(
            3,
            &[
                (0, 0, 1.0),
                (0, 1, -1.0),
                (1, 1, 2.0),
                (1, 2, -1.0),
                (2, 2, 1.0),
            ],
        )
        .unwrap()
    }

    #[test]
    fn identity_spmv() {
        let y = spmv(&SparseSym::identity(3), &[1.0, 2.0, 3.0]).unwrap();
        assert_eq!(y, vec![1.0, 2.0, 3.0]);
    }

    #[test]
    fn laplacian_kills_constants() {
        let y = spmv(&path3_laplacian(), &[1.0; 3]).unwrap();
        assert!(y.iter().all(|v| *v == 0.0));
    }

    #[test]
    fn spmv_dimension_mismatch() {
        assert!(matches!(
            spmv(&SparseSym::identity(3), &[1.0, 2.0]),
            Err(Error::DimensionMismatch {
                expected: 3,
                got: 2
            })
        ));
    }

    #[test]
    fn rejects_asymmetric_and_duplicates() {
        assert!(matches!(
            SparseSym::from_triplets(2, &[(0, 1, 1.0), (1, 0, 2.0)]),
            Err(Error::NotSymmetric { .. })
        ));
        assert!(matches!(
            SparseSym::from_triplets(2, &[(0, 1, 1.0), (0, 1, 1.0), (1, 0, 1.0)]),
            Err(Error::DuplicateEntry { .. })
        ));
    }

    #[test]
    fn edge_list_keeps_isolated_trailing_nodes() {
        let a = SparseSym::from_upper_triplets(5, &[(0, 1, 0.5)]).unwrap();
        let text = a.to_edge_list();
        let b = SparseSym::parse_edge_list(&text, Path::new("mem")).unwrap();
        assert_eq!(a, b);
        assert_eq!(b.n(), 5);
    }

    #[test]
    fn edge_list_reports_line_numbers() {
        let err = SparseSym::parse_edge_list("0 1 1.0\n0 x 2\n", Path::new("g.txt")).unwrap_err();
        assert!(matches!(err, Error::Parse { line: 2, .. }));
    }

    #[test]
    fn scaled_plus_diagonal_adds_missing_diagonal() {
        let w = SparseSym::from_upper_triplets(2, &[(0, 1, 1.0)]).unwrap();
        let s = w.scaled_plus_diagonal(2.0, &[0.5, 0.0]).unwrap();
        assert_eq!(s.get(0, 0), 0.5);
        assert_eq!(s.get(0, 1), 2.0);
        assert_eq!(s.get(1, 1), 0.0);
    }
}
