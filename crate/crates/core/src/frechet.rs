//! Fréchet functions and mean partitions.
//!
//! The Fréchet function of a sample scores a candidate partition by the mean
//! squared metric distance to the sample elements; its minimizers are the
//! mean partitions. Any local minimum is the entrywise average of sample
//! representatives in optimal position with it, which both licenses the
//! fixed-point iteration in [`mean_heuristic`] and connects the mean set to
//! optimal multiple alignments: the projected means of all optimal multiple
//! alignments exhaust the mean partition set, which [`mean_exact`] and
//! [`mean_set`] enumerate for small instances.

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::align::{self, average_reps};
use crate::error::{Error, Result};
use crate::metric::align_reps;
use crate::partition::{LabeledPartition, Partition};

/// Tolerance for deduplicating mean partitions: means average `n` terms, so
/// their comparison tolerance is looser than plain arithmetic equality.
pub const MEAN_DEDUP_TOL: f64 = 1e-7;

/// Default iteration cap for the fixed-point mean search.
pub const DEFAULT_MAX_ITER: usize = 100;

/// Default convergence tolerance for the fixed-point mean search.
pub const DEFAULT_MEAN_TOL: f64 = 1e-9;

/// An ordered sample of partitions sharing one shape.
#[derive(Debug, Clone)]
pub struct Sample {
    elements: Vec<Partition>,
}

impl Sample {
    pub fn new(elements: Vec<Partition>) -> Result<Self> {
        let first = elements.first().ok_or(Error::EmptyInput("sample"))?;
        let (ell, m) = (first.ell(), first.m());
        for e in &elements {
            first.canonical().check_dims(e.canonical())?;
        }
        debug_assert!(ell >= 1 && m >= 1);
        Ok(Self { elements })
    }

    pub fn elements(&self) -> &[Partition] {
        &self.elements
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn ell(&self) -> usize {
        self.elements[0].ell()
    }

    pub fn m(&self) -> usize {
        self.elements[0].m()
    }

    pub fn is_hard(&self) -> bool {
        self.elements.iter().all(Partition::is_hard)
    }
}

/// Result of a mean-partition computation.
#[derive(Debug, Clone)]
pub struct MeanResult {
    pub mean: Partition,
    /// The concrete representative the computation converged on. For a
    /// converged heuristic run, re-aligning the sample to this matrix and
    /// averaging reproduces it within the convergence tolerance.
    pub representative: LabeledPartition,
    /// Fréchet function value at `mean`.
    pub frechet_value: f64,
    pub iterations: usize,
    pub converged: bool,
    /// Number of distinct mean partitions (exact mode only).
    pub minimizer_count: Option<usize>,
    /// Fréchet value at the start of each iteration; non-increasing.
    pub f_history: Vec<f64>,
}

/// Tuning for mean computations.
#[derive(Debug, Clone)]
pub struct MeanConfig {
    /// Enumeration budget for exact searches: `(ell!)^(n-1)` must not
    /// exceed it.
    pub budget: u64,
    /// Number of heuristic restarts; defaults to `min(n, 8)`.
    pub restarts: Option<usize>,
    pub max_iter: usize,
    pub tol: f64,
}

impl Default for MeanConfig {
    fn default() -> Self {
        Self {
            budget: align::DEFAULT_ENUM_BUDGET,
            restarts: None,
            max_iter: DEFAULT_MAX_ITER,
            tol: DEFAULT_MEAN_TOL,
        }
    }
}

/// The Fréchet function: `(1/n) sum_i delta(X_i, z)^2`.
pub fn frechet(sample: &Sample, z: &Partition) -> Result<f64> {
    frechet_rep(sample, z.canonical())
}

fn frechet_rep(sample: &Sample, z_rep: &LabeledPartition) -> Result<f64> {
    let mut total = 0.0;
    for x in sample.elements() {
        let d = align_reps(z_rep, x.canonical())?.distance;
        total += d * d;
    }
    Ok(total / sample.len() as f64)
}

/// Fixed-point iteration for a mean partition: alternately put every sample
/// element in optimal position with the current estimate and replace the
/// estimate by the entrywise average of the aligned representatives. The
/// Fréchet value is non-increasing across iterations; the run converges when
/// the average reproduces the current representative within `tol` entrywise,
/// at which point the estimate is a fixed point of the mean update. Failure
/// to converge within `max_iter` is reported, not an error.
pub fn mean_heuristic(
    sample: &Sample,
    init: &Partition,
    max_iter: usize,
    tol: f64,
) -> Result<MeanResult> {
    if max_iter == 0 {
        return Err(Error::InvalidArgument("max_iter must be at least 1".into()));
    }
    sample.elements()[0].canonical().check_dims(init.canonical())?;

    let n = sample.len() as f64;
    let mut cur = init.canonical().clone();
    let mut f_history = Vec::new();
    let mut iterations = 0;
    let mut converged = false;

    while iterations < max_iter {
        iterations += 1;
        let mut aligned = Vec::with_capacity(sample.len());
        let mut f_cur = 0.0;
        for x in sample.elements() {
            let r = align_reps(&cur, x.canonical())?;
            f_cur += r.distance * r.distance;
            aligned.push(r.aligned);
        }
        f_cur /= n;
        f_history.push(f_cur);

        let next = average_reps(&aligned);
        if cur.max_abs_diff(&next) <= tol {
            converged = true;
            break;
        }
        cur = next;
    }

    if !converged {
        // `cur` was updated after its value was recorded; score it.
        f_history.push(frechet_rep(sample, &cur)?);
    }
    let frechet_value = *f_history.last().expect("at least one iteration ran");
    Ok(MeanResult {
        mean: Partition::from_rep(cur.clone()),
        representative: cur,
        frechet_value,
        iterations,
        converged,
        minimizer_count: None,
        f_history,
    })
}

/// Index of the sample element with the smallest Fréchet value.
pub fn best_medoid(sample: &Sample) -> Result<usize> {
    let mut best = 0;
    let mut best_f = f64::INFINITY;
    for (i, z) in sample.elements().iter().enumerate() {
        let f = frechet(sample, z)?;
        if f < best_f {
            best_f = f;
            best = i;
        }
    }
    Ok(best)
}

/// Multi-restart heuristic mean: one run from the best medoid plus up to
/// `restarts - 1` runs from randomly chosen sample elements, returning the
/// result with the smallest Fréchet value. Deterministic given `seed`.
pub fn mean_multistart(sample: &Sample, seed: u64, cfg: &MeanConfig) -> Result<MeanResult> {
    let n = sample.len();
    let restarts = cfg.restarts.unwrap_or_else(|| n.min(8)).max(1);

    let mut init_indices = vec![best_medoid(sample)?];
    if restarts > 1 {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut others: Vec<usize> = (0..n).filter(|i| *i != init_indices[0]).collect();
        others.shuffle(&mut rng);
        init_indices.extend(others.into_iter().take(restarts - 1));
    }

    let mut best: Option<MeanResult> = None;
    for idx in init_indices {
        let run = mean_heuristic(sample, &sample.elements()[idx], cfg.max_iter, cfg.tol)?;
        let better = match &best {
            None => true,
            Some(b) => run.frechet_value < b.frechet_value,
        };
        if better {
            best = Some(run);
        }
    }
    Ok(best.expect("at least one restart ran"))
}

/// Exact mean partition by exhausting all multiple alignments: keep the
/// `f_n` minimizers, project each onto its entrywise mean, canonicalize and
/// deduplicate. Returns the lexicographically smallest mean along with the
/// number of distinct means found.
pub fn mean_exact(sample: &Sample, budget: u64) -> Result<MeanResult> {
    let enumeration = align::enumerate_alignments(sample, budget)?;
    let mean = enumeration.means[0].clone();
    let frechet_value = frechet(sample, &mean)?;
    Ok(MeanResult {
        representative: mean.canonical().clone(),
        mean,
        frechet_value,
        iterations: 0,
        converged: true,
        minimizer_count: Some(enumeration.means.len()),
        f_history: Vec::new(),
    })
}

/// The full mean partition set of a small sample: distinct projected means
/// of all optimal multiple alignments, in canonical order.
pub fn mean_set(sample: &Sample, budget: u64) -> Result<Vec<Partition>> {
    Ok(align::enumerate_alignments(sample, budget)?.means)
}
