//! The intrinsic metric on partitions.
//!
//! The distance between two partitions is the smallest Frobenius distance
//! over all pairs of representatives. Because the norm is row-permutation
//! invariant it suffices to permute one side:
//! `delta(X, Y) = min_P ||X_c - P Y_c||`, and since
//! `||X - PY||^2 = ||X||^2 + ||Y||^2 - 2 sum_a <x_a, y_sigma(a)>`,
//! the minimizer is a maximum-profit assignment on row inner products.

use crate::assignment;
use crate::error::Result;
use crate::partition::{LabeledPartition, Partition, EQ_TOL};

/// An optimal row alignment of a source representative against a target.
#[derive(Debug, Clone)]
pub struct AlignmentResult {
    /// Frobenius distance between the target and `aligned`; for canonical
    /// targets this is the metric value.
    pub distance: f64,
    /// `permutation[i]` is the row of the source placed at row `i` of
    /// `aligned`; a bijection on `0..ell`. Ties are broken toward the
    /// lexicographically smallest sequence.
    pub permutation: Vec<usize>,
    /// The source with rows permuted into optimal position with the target.
    pub aligned: LabeledPartition,
}

/// Align `source` into optimal position with `target`:
/// minimizes `||target - P source||` over all row permutations `P`.
pub fn align_reps(target: &LabeledPartition, source: &LabeledPartition) -> Result<AlignmentResult> {
    target.check_dims(source)?;
    let ell = target.ell();
    let mut profit = Vec::with_capacity(ell * ell);
    for a in 0..ell {
        let ra = target.row(a);
        for b in 0..ell {
            profit.push(ra.iter().zip(source.row(b)).map(|(x, y)| x * y).sum());
        }
    }
    let permutation = assignment::lex_min_max_assignment(ell, &profit, EQ_TOL);
    let aligned = source.permute_rows(&permutation);
    let distance = target.diff_norm(&aligned);
    Ok(AlignmentResult {
        distance,
        permutation,
        aligned,
    })
}

/// The metric `delta(x, y)`: smallest Frobenius distance over all pairs of
/// representatives, realized by the returned alignment of `y`'s canonical
/// representative against `x`'s.
pub fn delta(x: &Partition, y: &Partition) -> Result<AlignmentResult> {
    align_reps(x.canonical(), y.canonical())
}

/// The optimal-position representative of `y` with respect to `x`'s
/// canonical representative, together with the metric value.
pub fn optimal_position(x: &Partition, y: &Partition) -> Result<AlignmentResult> {
    delta(x, y)
}

impl Partition {
    /// Metric distance to `other`.
    pub fn distance(&self, other: &Partition) -> Result<f64> {
        Ok(delta(self, other)?.distance)
    }
}
