use nalgebra::DMatrix;

use super::sparse::SparseSym;

/// A symmetric linear map applied matrix-free.
///
/// Implementations must be deterministic: the same input always produces
/// bit-identical output.
pub trait LinearOperator {
    fn dim(&self) -> usize;

    /// Writes `A x` into `y`. Both slices have length [`LinearOperator::dim`].
    fn apply_into(&self, x: &[f64], y: &mut [f64]);

    fn apply(&self, x: &[f64]) -> Vec<f64> {
        let mut y = vec![0.0; self.dim()];
        self.apply_into(x, &mut y);
        y
    }

    /// Diagonal of the operator, used by the Jacobi preconditioner.
    fn diagonal(&self) -> Option<Vec<f64>> {
        None
    }
}

impl LinearOperator for SparseSym {
    fn dim(&self) -> usize {
        self.n()
    }

    fn apply_into(&self, x: &[f64], y: &mut [f64]) {
        self.spmv_unchecked(x, y);
    }

    fn diagonal(&self) -> Option<Vec<f64>> {
        Some(SparseSym::diagonal(self))
    }
}

impl LinearOperator for DMatrix<f64> {
    fn dim(&self) -> usize {
        self.nrows()
    }

    fn apply_into(&self, x: &[f64], y: &mut [f64]) {
        let n = self.nrows();
        for (i, yi) in y.iter_mut().enumerate() {
            let mut acc = 0.0;
            for j in 0..n {
                acc += self[(i, j)] * x[j];
            }
            *yi = acc;
        }
    }

    fn diagonal(&self) -> Option<Vec<f64>> {
        Some((0..self.nrows()).map(|i| self[(i, i)]).collect())
    }
}

impl<T: LinearOperator + ?Sized> LinearOperator for &T {
    fn dim(&self) -> usize {
        (**self).dim()
    }

    fn apply_into(&self, x: &[f64], y: &mut [f64]) {
        (**self).apply_into(x, y)
    }

    fn diagonal(&self) -> Option<Vec<f64>> {
        (**self).diagonal()
    }
}

/// `scale * base + diag(shift)` without forming the sum.
///
/// Used for the per-block operators `q Ã_j + α L_r` of the split sampler and
/// for small rank-one shifted Laplacians.
#[derive(Debug, Clone)]
pub struct ShiftedOperator<'a> {
    pub base: &'a SparseSym,
    pub scale: f64,
    pub shift: Vec<f64>,
}

impl LinearOperator for ShiftedOperator<'_> {
    fn dim(&self) -> usize {
        self.base.n()
    }

    fn apply_into(&self, x: &[f64], y: &mut [f64]) {
        self.base.spmv_unchecked(x, y);
        for ((yi, xi), si) in y.iter_mut().zip(x).zip(&self.shift) {
            *yi = self.scale * *yi + si * xi;
        }
    }

    fn diagonal(&self) -> Option<Vec<f64>> {
        Some(
            self.base
                .diagonal()
                .iter()
                .zip(&self.shift)
                .map(|(d, s)| self.scale * d + s)
                .collect(),
        )
    }
}

pub(crate) fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub(crate) fn norm(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

/// `y += alpha * x`
pub(crate) fn axpy(alpha: f64, x: &[f64], y: &mut [f64]) {
    for (yi, xi) in y.iter_mut().zip(x) {
        *yi += alpha * xi;
    }
}

pub(crate) fn scale(alpha: f64, x: &mut [f64]) {
    for xi in x.iter_mut() {
        *xi *= alpha;
    }
}
