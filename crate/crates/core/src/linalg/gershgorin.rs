use serde::{Deserialize, Serialize};

use super::sparse::SparseSym;

/// The real interval `[center − radius, center + radius]` of one matrix row.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DiscBound {
    pub center: f64,
    pub radius: f64,
    pub left: f64,
    pub right: f64,
}

impl DiscBound {
    pub fn new(center: f64, radius: f64) -> Self {
        Self {
            center,
            radius,
            left: center - radius,
            right: center + radius,
        }
    }
}

/// One disc per row: center `a_ii`, radius `Σ_{j≠i} |a_ij|`.
pub fn gershgorin_bounds(a: &SparseSym) -> Vec<DiscBound> {
    (0..a.n())
        .map(|i| {
            let mut center = 0.0;
            let mut radius = 0.0;
            for (j, v) in a.row(i) {
                if j == i {
                    center = v;
                } else {
                    radius += v.abs();
                }
            }
            DiscBound::new(center, radius)
        })
        .collect()
}

/// Smallest left end over all discs: a lower bound on `λ_min`.
pub fn min_left_end(discs: &[DiscBound]) -> f64 {
    discs.iter().map(|d| d.left).fold(f64::INFINITY, f64::min)
}
