//! Labeled partitions (column-stochastic membership matrices) and the
//! relabeling-invariant partitions they represent.
//!
//! A labeled partition assigns each of `m` data points a membership column
//! over at most `ell` clusters. Permuting the rows relabels the clusters
//! without changing the cluster structure, so an (unlabeled) [`Partition`] is
//! the orbit of a labeled partition under row permutations. We store orbits
//! through a canonical representative: the row-permuted matrix whose rows are
//! in non-decreasing lexicographic order.

use std::cmp::Ordering;

use crate::error::{Error, Result};

/// Absolute tolerance for equality of real-valued quantities.
pub const EQ_TOL: f64 = 1e-9;

/// An `ell x m` membership matrix with entries in `[0, 1]` whose columns sum
/// to one. Entry `(k, j)` is the degree of membership of data point `j` in
/// cluster `k`. Rows may be all zero (empty clusters are permitted).
#[derive(Debug, Clone, PartialEq)]
pub struct LabeledPartition {
    ell: usize,
    m: usize,
    /// Row-major entries.
    data: Vec<f64>,
    hard: bool,
}

impl LabeledPartition {
    /// Build from row-major entries, validating the membership contract.
    pub fn new(ell: usize, m: usize, mut data: Vec<f64>) -> Result<Self> {
        if ell == 0 || m == 0 {
            return Err(Error::InvalidMatrix(format!(
                "dimensions must be positive, got {ell}x{m}"
            )));
        }
        if data.len() != ell * m {
            return Err(Error::InvalidMatrix(format!(
                "expected {} entries for a {ell}x{m} matrix, got {}",
                ell * m,
                data.len()
            )));
        }
        for x in &mut data {
            if !(0.0..=1.0).contains(x) {
                return Err(Error::InvalidMatrix(format!("entry {x} outside [0, 1]")));
            }
            // Canonical zero so row sorting never distinguishes -0.0 from 0.0.
            if *x == 0.0 {
                *x = 0.0;
            }
        }
        for j in 0..m {
            let sum: f64 = (0..ell).map(|k| data[k * m + j]).sum();
            if (sum - 1.0).abs() > EQ_TOL {
                return Err(Error::InvalidMatrix(format!(
                    "column {j} sums to {sum}, expected 1"
                )));
            }
        }
        let hard = data.iter().all(|&x| x == 0.0 || x == 1.0);
        Ok(Self { ell, m, data, hard })
    }

    /// Build from a list of rows.
    pub fn from_rows(rows: Vec<Vec<f64>>) -> Result<Self> {
        let ell = rows.len();
        let m = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != m) {
            return Err(Error::InvalidMatrix("ragged rows".to_string()));
        }
        Self::new(ell, m, rows.into_iter().flatten().collect())
    }

    /// Build the hard partition in which point `j` belongs to cluster
    /// `labels[j]`.
    pub fn from_labels(ell: usize, labels: &[usize]) -> Result<Self> {
        let m = labels.len();
        if m == 0 {
            return Err(Error::InvalidMatrix("no labels given".to_string()));
        }
        let mut data = vec![0.0; ell * m];
        for (j, &k) in labels.iter().enumerate() {
            if k >= ell {
                return Err(Error::InvalidMatrix(format!(
                    "label {k} at point {j} exceeds cluster capacity {ell}"
                )));
            }
            data[k * m + j] = 1.0;
        }
        Self::new(ell, m, data)
    }

    pub fn ell(&self) -> usize {
        self.ell
    }

    pub fn m(&self) -> usize {
        self.m
    }

    /// True when every entry is exactly 0 or 1, i.e. every column is a
    /// standard basis vector.
    pub fn is_hard(&self) -> bool {
        self.hard
    }

    pub fn row(&self, k: usize) -> &[f64] {
        &self.data[k * self.m..(k + 1) * self.m]
    }

    pub fn entry(&self, k: usize, j: usize) -> f64 {
        self.data[k * self.m + j]
    }

    pub fn entries(&self) -> &[f64] {
        &self.data
    }

    /// The label vector of a hard partition: `labels()[j]` is the cluster
    /// holding point `j`. Returns `None` for soft partitions.
    pub fn labels(&self) -> Option<Vec<usize>> {
        if !self.hard {
            return None;
        }
        let mut labels = Vec::with_capacity(self.m);
        for j in 0..self.m {
            let k = (0..self.ell).find(|&k| self.entry(k, j) == 1.0)?;
            labels.push(k);
        }
        Some(labels)
    }

    /// Row-permuted copy: row `i` of the result is row `perm[i]` of `self`.
    pub fn permute_rows(&self, perm: &[usize]) -> Self {
        debug_assert_eq!(perm.len(), self.ell);
        let mut data = Vec::with_capacity(self.data.len());
        for &src in perm {
            data.extend_from_slice(self.row(src));
        }
        Self {
            ell: self.ell,
            m: self.m,
            data,
            hard: self.hard,
        }
    }

    /// Squared Frobenius norm.
    pub fn norm_sq(&self) -> f64 {
        self.data.iter().map(|x| x * x).sum()
    }

    /// Frobenius norm of the entrywise difference.
    pub fn diff_norm(&self, other: &Self) -> f64 {
        self.diff_norm_sq(other).sqrt()
    }

    pub fn diff_norm_sq(&self, other: &Self) -> f64 {
        debug_assert_eq!(self.data.len(), other.data.len());
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b) * (a - b))
            .sum()
    }

    /// Largest absolute entrywise difference.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    }

    /// Inner product of column `j` of `self` with column `j` of `other`.
    pub fn col_dot(&self, other: &Self, j: usize) -> f64 {
        (0..self.ell)
            .map(|k| self.entry(k, j) * other.entry(k, j))
            .sum()
    }

    /// Squared Euclidean distance between rows `a` and `b` of `self`.
    pub fn row_dist_sq(&self, a: usize, b: usize) -> f64 {
        self.row(a)
            .iter()
            .zip(self.row(b))
            .map(|(x, y)| (x - y) * (x - y))
            .sum()
    }

    pub fn same_dims(&self, other: &Self) -> bool {
        self.ell == other.ell && self.m == other.m
    }

    pub(crate) fn check_dims(&self, other: &Self) -> Result<()> {
        if self.same_dims(other) {
            Ok(())
        } else {
            Err(Error::DimensionMismatch {
                expected_ell: self.ell,
                expected_m: self.m,
                got_ell: other.ell,
                got_m: other.m,
            })
        }
    }

    /// Entrywise equality within `tol`.
    pub fn approx_eq(&self, other: &Self, tol: f64) -> bool {
        self.same_dims(other) && self.max_abs_diff(other) <= tol
    }
}

fn row_lex_cmp(a: &[f64], b: &[f64]) -> Ordering {
    for (x, y) in a.iter().zip(b) {
        match x.total_cmp(y) {
            Ordering::Equal => continue,
            other => return other,
        }
    }
    Ordering::Equal
}

/// A partition of `m` data points into at most `ell` clusters, i.e. the
/// equivalence class of all labeled partitions that relabel one another.
/// Stored through the canonical representative whose rows are sorted in
/// non-decreasing lexicographic order.
#[derive(Debug, Clone)]
pub struct Partition {
    canon: LabeledPartition,
}

impl Partition {
    /// The partition represented by `rep`. Any row permutation of `rep`
    /// produces the same `Partition`.
    pub fn from_rep(rep: LabeledPartition) -> Self {
        let mut order: Vec<usize> = (0..rep.ell).collect();
        order.sort_by(|&a, &b| row_lex_cmp(rep.row(a), rep.row(b)));
        Self {
            canon: rep.permute_rows(&order),
        }
    }

    pub fn from_labels(ell: usize, labels: &[usize]) -> Result<Self> {
        Ok(Self::from_rep(LabeledPartition::from_labels(ell, labels)?))
    }

    pub fn from_rows(rows: Vec<Vec<f64>>) -> Result<Self> {
        Ok(Self::from_rep(LabeledPartition::from_rows(rows)?))
    }

    pub fn canonical(&self) -> &LabeledPartition {
        &self.canon
    }

    pub fn into_canonical(self) -> LabeledPartition {
        self.canon
    }

    pub fn ell(&self) -> usize {
        self.canon.ell
    }

    pub fn m(&self) -> usize {
        self.canon.m
    }

    pub fn is_hard(&self) -> bool {
        self.canon.hard
    }

    pub fn same_dims(&self, other: &Self) -> bool {
        self.canon.same_dims(&other.canon)
    }

    /// Total order on canonical representatives (dimensions first, then
    /// row-major entries). Used for deterministic tie-breaking.
    pub fn canonical_cmp(&self, other: &Self) -> Ordering {
        (self.ell(), self.m())
            .cmp(&(other.ell(), other.m()))
            .then_with(|| row_lex_cmp(&self.canon.data, &other.canon.data))
    }

    /// Canonical representatives entrywise equal within `tol`.
    pub fn approx_eq(&self, other: &Self, tol: f64) -> bool {
        self.canon.approx_eq(&other.canon, tol)
    }
}

impl PartialEq for Partition {
    /// Hard partitions compare exactly; soft ones within [`EQ_TOL`].
    fn eq(&self, other: &Self) -> bool {
        if !self.same_dims(other) {
            return false;
        }
        if self.is_hard() && other.is_hard() {
            self.canon.data == other.canon.data
        } else {
            self.canon.approx_eq(&other.canon, EQ_TOL)
        }
    }
}
