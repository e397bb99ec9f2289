//! Multiple alignments of a sample and exhaustive optimal-alignment search.
//!
//! A multiple alignment picks one concrete representative per sample element.
//! Its cost is the average pairwise squared Frobenius distance
//! `f_n = (1/n^2) sum_i sum_j ||X_i - X_j||^2`. Because
//! `sum_i sum_j ||X_i - X_j||^2 = 2n sum_i ||X_i||^2 - 2 ||sum_i X_i||^2`
//! and row permutations preserve norms, minimizing `f_n` is the same as
//! maximizing the norm of the summed representatives, which the exhaustive
//! search exploits for incremental evaluation. `f_n` is invariant under one
//! common permutation applied to every representative, so the search fixes
//! the first representative to its canonical form.

use crate::assignment::{all_permutations, alignment_enumeration_count};
use crate::error::{Error, Result};
use crate::frechet::{Sample, MEAN_DEDUP_TOL};
use crate::metric::align_reps;
use crate::partition::{LabeledPartition, Partition, EQ_TOL};

/// Default cap on the number of multiple alignments an exhaustive search may
/// enumerate.
pub const DEFAULT_ENUM_BUDGET: u64 = 1_000_000;

/// One concrete representative per sample element.
#[derive(Debug, Clone)]
pub struct MultipleAlignment {
    reps: Vec<LabeledPartition>,
}

impl MultipleAlignment {
    /// Build from representatives of the elements of `sample`, verifying
    /// that `reps[i]` is a row permutation of sample element `i`.
    pub fn new(sample: &Sample, reps: Vec<LabeledPartition>) -> Result<Self> {
        if reps.len() != sample.len() {
            return Err(Error::InvalidArgument(format!(
                "expected {} representatives, got {}",
                sample.len(),
                reps.len()
            )));
        }
        for (i, rep) in reps.iter().enumerate() {
            sample.elements()[0].canonical().check_dims(rep)?;
            if Partition::from_rep(rep.clone()) != sample.elements()[i] {
                return Err(Error::InvalidArgument(format!(
                    "representative {i} does not represent sample element {i}"
                )));
            }
        }
        Ok(Self { reps })
    }

    pub(crate) fn from_reps_unchecked(reps: Vec<LabeledPartition>) -> Self {
        Self { reps }
    }

    pub fn reps(&self) -> &[LabeledPartition] {
        &self.reps
    }

    pub fn len(&self) -> usize {
        self.reps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.reps.is_empty()
    }

    /// The alignment cost `f_n`: average pairwise squared distance,
    /// diagonal terms included.
    pub fn cost(&self) -> f64 {
        let n = self.reps.len();
        let mut total = 0.0;
        for i in 0..n {
            for j in 0..n {
                total += self.reps[i].diff_norm_sq(&self.reps[j]);
            }
        }
        total / (n * n) as f64
    }

    /// Entrywise mean of the representatives.
    pub fn mean_rep(&self) -> LabeledPartition {
        average_reps(&self.reps)
    }
}

/// Entrywise average of representatives sharing one shape.
pub(crate) fn average_reps(reps: &[LabeledPartition]) -> LabeledPartition {
    let n = reps.len();
    let ell = reps[0].ell();
    let m = reps[0].m();
    let mut data = vec![0.0; ell * m];
    for rep in reps {
        for (acc, x) in data.iter_mut().zip(rep.entries()) {
            *acc += x;
        }
    }
    let inv = 1.0 / n as f64;
    for x in &mut data {
        // Clamp away roundoff so the result stays a valid membership matrix.
        *x = (*x * inv).clamp(0.0, 1.0);
    }
    LabeledPartition::new(ell, m, data).expect("average of valid representatives is valid")
}

/// Align every element of `sample` into optimal position with `z_rep`.
pub fn align_sample_to(sample: &Sample, z_rep: &LabeledPartition) -> Result<MultipleAlignment> {
    let reps = sample
        .elements()
        .iter()
        .map(|x| Ok(align_reps(z_rep, x.canonical())?.aligned))
        .collect::<Result<Vec<_>>>()?;
    Ok(MultipleAlignment::from_reps_unchecked(reps))
}

/// A multiple alignment achieving the global minimum of `f_n`, together with
/// that minimum. Ties are broken toward the lexicographically smallest tuple
/// of row permutations. Errors when `(ell!)^(n-1)` exceeds `budget`.
pub fn exact_optimal_alignment(
    sample: &Sample,
    budget: u64,
) -> Result<(MultipleAlignment, f64)> {
    let e = enumerate_alignments(sample, budget)?;
    Ok((e.best, e.min_cost))
}

/// Outcome of exhausting the alignment space of a sample.
pub(crate) struct AlignmentEnumeration {
    pub min_cost: f64,
    /// Lexicographically first minimizer.
    pub best: MultipleAlignment,
    /// Distinct projected means of all minimizers, in canonical order.
    pub means: Vec<Partition>,
}

pub(crate) fn enumerate_alignments(sample: &Sample, budget: u64) -> Result<AlignmentEnumeration> {
    let n = sample.len();
    let ell = sample.ell();
    let required = alignment_enumeration_count(ell, n).ok_or(Error::BudgetExceeded {
        required: u128::MAX,
        budget,
    })?;
    if required > budget as u128 {
        return Err(Error::BudgetExceeded { required, budget });
    }

    // Pass 1: exact minimum of f_n.
    let mut walker = Walker::new(sample);
    let mut min_cost = walker.cost();
    while walker.advance() {
        min_cost = min_cost.min(walker.cost());
    }

    // Pass 2: collect minimizers; the first one found is the lexicographic
    // tie-break winner, and each one contributes its projected mean.
    let mut walker = Walker::new(sample);
    let mut best: Option<MultipleAlignment> = None;
    let mut means: Vec<Partition> = Vec::new();
    loop {
        if walker.cost() <= min_cost + EQ_TOL {
            if best.is_none() {
                best = Some(MultipleAlignment::from_reps_unchecked(walker.reps.clone()));
            }
            let mean = Partition::from_rep(walker.mean_rep());
            let known = means
                .iter()
                .any(|m| m.distance(&mean).map(|d| d <= MEAN_DEDUP_TOL).unwrap_or(false));
            if !known {
                means.push(mean);
            }
        }
        if !walker.advance() {
            break;
        }
    }
    means.sort_by(Partition::canonical_cmp);
    Ok(AlignmentEnumeration {
        min_cost,
        best: best.expect("at least one alignment exists"),
        means,
    })
}

/// Odometer over tuples of row permutations with the first element pinned to
/// its canonical representative. Maintains the running sum of representatives
/// so each candidate costs O(ell * m) to evaluate.
struct Walker<'a> {
    canon: Vec<&'a LabeledPartition>,
    perms: Vec<Vec<usize>>,
    idx: Vec<usize>,
    reps: Vec<LabeledPartition>,
    sum: Vec<f64>,
    norms_total: f64,
    n: usize,
}

impl<'a> Walker<'a> {
    fn new(sample: &'a Sample) -> Self {
        let canon: Vec<&LabeledPartition> = sample.elements().iter().map(Partition::canonical).collect();
        let perms = all_permutations(sample.ell());
        let reps: Vec<LabeledPartition> = canon.iter().map(|&c| c.clone()).collect();
        let mut sum = vec![0.0; sample.ell() * sample.m()];
        for rep in &reps {
            for (acc, x) in sum.iter_mut().zip(rep.entries()) {
                *acc += x;
            }
        }
        let norms_total = reps.iter().map(LabeledPartition::norm_sq).sum();
        Walker {
            canon,
            perms,
            idx: vec![0; sample.len()],
            reps,
            sum,
            norms_total,
            n: sample.len(),
        }
    }

    fn set(&mut self, pos: usize, new_idx: usize) {
        for (acc, x) in self.sum.iter_mut().zip(self.reps[pos].entries()) {
            *acc -= x;
        }
        self.reps[pos] = self.canon[pos].permute_rows(&self.perms[new_idx]);
        for (acc, x) in self.sum.iter_mut().zip(self.reps[pos].entries()) {
            *acc += x;
        }
        self.idx[pos] = new_idx;
    }

    /// Advance to the next permutation tuple in lexicographic order
    /// (position 1 most significant); `false` once exhausted.
    fn advance(&mut self) -> bool {
        let mut pos = self.n;
        while pos > 1 {
            pos -= 1;
            if self.idx[pos] + 1 < self.perms.len() {
                self.set(pos, self.idx[pos] + 1);
                for p in pos + 1..self.n {
                    self.set(p, 0);
                }
                return true;
            }
        }
        false
    }

    /// `f_n` of the current tuple via the sum-of-norms identity.
    fn cost(&self) -> f64 {
        let n = self.n as f64;
        let sum_norm_sq: f64 = self.sum.iter().map(|x| x * x).sum();
        let cost = (2.0 / n) * self.norms_total - (2.0 / (n * n)) * sum_norm_sq;
        cost.max(0.0)
    }

    fn mean_rep(&self) -> LabeledPartition {
        average_reps(&self.reps)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn part(ell: usize, labels: &[usize]) -> Partition {
        Partition::from_labels(ell, labels).unwrap()
    }

    fn xy_sample() -> Sample {
        Sample::new(vec![part(2, &[0, 0, 1]), part(2, &[0, 1, 1])]).unwrap()
    }

    #[test]
    fn cost_of_identical_representatives_is_zero() {
        let x = part(2, &[0, 0, 1]);
        let sample = Sample::new(vec![x.clone(), x.clone(), x.clone()]).unwrap();
        let a = MultipleAlignment::new(&sample, vec![x.canonical().clone(); 3]).unwrap();
        assert_eq!(a.cost(), 0.0);
    }

    #[test]
    fn cost_of_the_two_element_example() {
        let sample = xy_sample();
        let [x, y] = [&sample.elements()[0], &sample.elements()[1]];
        // Identity-aligned: ||X - Y||^2 = 2, so f = (0 + 2 + 2 + 0) / 4 = 1.
        let id = MultipleAlignment::new(
            &sample,
            vec![x.canonical().clone(), y.canonical().clone()],
        )
        .unwrap();
        assert!((id.cost() - 1.0).abs() < 1e-12);
        // Swap-aligned second element: ||X - PY||^2 = 4, so f = 2.
        let swapped = MultipleAlignment::new(
            &sample,
            vec![x.canonical().clone(), y.canonical().permute_rows(&[1, 0])],
        )
        .unwrap();
        assert!((swapped.cost() - 2.0).abs() < 1e-12);
    }

    #[test]
    fn rejects_foreign_representatives() {
        let sample = xy_sample();
        let z = part(2, &[1, 1, 1]);
        let err = MultipleAlignment::new(
            &sample,
            vec![z.canonical().clone(), z.canonical().clone()],
        );
        assert!(err.is_err());
    }

    #[test]
    fn aligning_relabelings_to_the_source_recovers_it() {
        let z = part(3, &[0, 1, 2, 1]);
        let z_rep = z.canonical();
        let sample = Sample::new(vec![
            Partition::from_rep(z_rep.permute_rows(&[1, 2, 0])),
            Partition::from_rep(z_rep.permute_rows(&[2, 0, 1])),
            z.clone(),
        ])
        .unwrap();
        let aligned = align_sample_to(&sample, z_rep).unwrap();
        for rep in aligned.reps() {
            assert_eq!(rep, z_rep);
        }
        assert_eq!(aligned.cost(), 0.0);
    }

    #[test]
    fn align_sample_matches_pairwise_distances() {
        let sample = Sample::new(vec![
            part(3, &[0, 1, 2, 0]),
            part(3, &[0, 1, 1, 2]),
            part(3, &[2, 1, 0, 0]),
        ])
        .unwrap();
        let z = part(3, &[0, 1, 2, 2]);
        let aligned = align_sample_to(&sample, z.canonical()).unwrap();
        for (rep, x) in aligned.reps().iter().zip(sample.elements()) {
            let d = x.distance(&z).unwrap();
            assert!((rep.diff_norm(z.canonical()) - d).abs() < 1e-9);
        }
    }

    #[test]
    fn exact_search_on_identical_sample_costs_zero() {
        let x = part(2, &[0, 1, 1, 0]);
        let sample = Sample::new(vec![x.clone(), x.clone(), x.clone()]).unwrap();
        let (a, cost) = exact_optimal_alignment(&sample, DEFAULT_ENUM_BUDGET).unwrap();
        assert_eq!(cost, 0.0);
        for rep in a.reps() {
            assert_eq!(rep, x.canonical());
        }
    }

    #[test]
    fn exact_search_on_the_two_element_example() {
        let (a, cost) = exact_optimal_alignment(&xy_sample(), DEFAULT_ENUM_BUDGET).unwrap();
        assert!((cost - 1.0).abs() < 1e-12);
        // Identity alignment wins, so the representatives are the canonicals.
        let sample = xy_sample();
        assert_eq!(&a.reps()[0], sample.elements()[0].canonical());
        assert_eq!(&a.reps()[1], sample.elements()[1].canonical());
    }

    #[test]
    fn exact_search_matches_independent_enumeration() {
        let sample = Sample::new(vec![
            part(2, &[0, 1, 1, 0]),
            part(2, &[0, 0, 1, 1]),
            part(2, &[1, 0, 1, 0]),
            part(2, &[0, 1, 0, 0]),
        ])
        .unwrap();
        let (_, cost) = exact_optimal_alignment(&sample, DEFAULT_ENUM_BUDGET).unwrap();

        // Independent oracle: all 2^3 alignments via the direct double loop.
        let canon: Vec<_> = sample.elements().iter().map(Partition::canonical).collect();
        let swap = [1usize, 0];
        let mut best = f64::INFINITY;
        for mask in 0..8u32 {
            let reps: Vec<LabeledPartition> = (0..4)
                .map(|i| {
                    if i > 0 && mask & (1 << (i - 1)) != 0 {
                        canon[i].permute_rows(&swap)
                    } else {
                        canon[i].clone()
                    }
                })
                .collect();
            best = best.min(MultipleAlignment::from_reps_unchecked(reps).cost());
        }
        assert!((cost - best).abs() < 1e-9);
    }

    #[test]
    fn budget_is_enforced() {
        let sample = Sample::new(vec![part(4, &[0, 1, 2, 3]); 12]).unwrap();
        let err = exact_optimal_alignment(&sample, 1000);
        assert!(matches!(err, Err(Error::BudgetExceeded { .. })));
    }

    #[test]
    fn cost_is_invariant_under_a_common_permutation() {
        let sample = Sample::new(vec![part(3, &[0, 1, 2, 0]), part(3, &[1, 1, 2, 0])]).unwrap();
        let a = align_sample_to(&sample, sample.elements()[0].canonical()).unwrap();
        let relabeled = MultipleAlignment::from_reps_unchecked(
            a.reps().iter().map(|r| r.permute_rows(&[2, 0, 1])).collect(),
        );
        assert!((a.cost() - relabeled.cost()).abs() < 1e-12);
    }
}
