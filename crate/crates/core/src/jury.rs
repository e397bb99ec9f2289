//! Votes, majority votes via mean partitions, and the binomial closed form
//! for the probability of a correct majority.
//!
//! A representative votes correctly on a data point when its membership
//! column has inner product above 0.5 with the fixed ground-truth column.
//! The vote of a partition randomizes over its representatives in optimal
//! position with the ground truth; the majority vote of a sample is the vote
//! of a (randomly selected) mean partition. For hard ground truths the mean
//! column holds the relative frequencies with which the aligned sample
//! places the point in each cluster, so its vote is correct exactly when
//! some cluster holds a strict majority.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::assignment::enumerate_optimal_assignments;
use crate::error::{Error, Result};
use crate::frechet::{mean_multistart, mean_set, MeanConfig, Sample};
use crate::metric::align_reps;
use crate::partition::{LabeledPartition, Partition, EQ_TOL};

/// Cluster-capacity cap for full enumeration of optimal permutations. Above
/// the cap only the deterministic tie-broken optimal position is used and
/// outcomes carry the `reduced_fidelity` flag.
pub const DEFAULT_ELL_CAP: usize = 8;

/// A hard reference partition with an arbitrarily selected but fixed
/// representative. Votes are evaluated against the fixed representative, and
/// their distribution does not depend on which one was selected.
#[derive(Debug, Clone)]
pub struct GroundTruth {
    partition: Partition,
    fixed_rep: LabeledPartition,
}

impl GroundTruth {
    /// Fixes the canonical representative.
    pub fn new(partition: Partition) -> Result<Self> {
        if !partition.is_hard() {
            return Err(Error::HardPartitionRequired("ground truth"));
        }
        let fixed_rep = partition.canonical().clone();
        Ok(Self {
            partition,
            fixed_rep,
        })
    }

    /// Fixes the given representative.
    pub fn with_representative(rep: LabeledPartition) -> Result<Self> {
        if !rep.is_hard() {
            return Err(Error::HardPartitionRequired("ground truth"));
        }
        Ok(Self {
            partition: Partition::from_rep(rep.clone()),
            fixed_rep: rep,
        })
    }

    pub fn partition(&self) -> &Partition {
        &self.partition
    }

    pub fn fixed_rep(&self) -> &LabeledPartition {
        &self.fixed_rep
    }

    pub fn ell(&self) -> usize {
        self.fixed_rep.ell()
    }

    pub fn m(&self) -> usize {
        self.fixed_rep.m()
    }
}

/// Outcome of a single vote on one data point.
#[derive(Debug, Clone, PartialEq)]
pub struct VoteOutcome {
    pub point_index: usize,
    /// Inner product of the voting column with the ground-truth column.
    pub agreement: f64,
    /// True iff `agreement > 0.5`; an agreement of exactly 0.5 votes false.
    pub vote: bool,
    /// Set when the enumeration cap forced the single tie-broken optimal
    /// position instead of uniform selection among all of them.
    pub reduced_fidelity: bool,
}

/// Agreement of `rep` with the ground truth on point `j`: the inner product
/// of their `j`-th membership columns. For hard `rep` this is 1 when the
/// point occurs in the same cluster and 0 otherwise.
pub fn agreement(rep: &LabeledPartition, truth: &GroundTruth, j: usize) -> Result<f64> {
    truth.fixed_rep.check_dims(rep)?;
    if j >= rep.m() {
        return Err(Error::IndexOutOfRange {
            index: j,
            len: rep.m(),
        });
    }
    Ok(rep.col_dot(&truth.fixed_rep, j))
}

/// A representative of `x` in optimal position with the fixed ground-truth
/// representative, selected uniformly among all of them with `seed`. Falls
/// back to the single tie-broken optimal position above `ell_cap`.
fn select_optimal_rep(
    x: &Partition,
    truth: &GroundTruth,
    seed: u64,
    ell_cap: usize,
) -> Result<(LabeledPartition, bool)> {
    truth.fixed_rep.check_dims(x.canonical())?;
    let best = align_reps(&truth.fixed_rep, x.canonical())?;
    if x.ell() > ell_cap {
        return Ok((best.aligned, true));
    }
    let ell = x.ell();
    let mut profit = Vec::with_capacity(ell * ell);
    for a in 0..ell {
        let ra = truth.fixed_rep.row(a);
        for b in 0..ell {
            profit.push(ra.iter().zip(x.canonical().row(b)).map(|(s, t)| s * t).sum());
        }
    }
    let budget = crate::assignment::factorial(ell_cap)
        .and_then(|f| u64::try_from(f).ok())
        .unwrap_or(u64::MAX);
    let perms = match enumerate_optimal_assignments(ell, &profit, EQ_TOL, budget) {
        Ok(perms) => perms,
        Err(Error::BudgetExceeded { .. }) => {
            return Err(Error::EllTooLarge { ell, cap: ell_cap })
        }
        Err(e) => return Err(e),
    };
    let idx = if perms.len() > 1 {
        ChaCha8Rng::seed_from_u64(seed).gen_range(0..perms.len())
    } else {
        0
    };
    Ok((x.canonical().permute_rows(&perms[idx]), false))
}

/// The vote of partition `x` on point `j`: select (with `seed`) a
/// representative in optimal position with the ground truth uniformly among
/// all of them, then threshold its agreement at a strict 0.5.
pub fn vote(x: &Partition, truth: &GroundTruth, j: usize, seed: u64) -> Result<VoteOutcome> {
    vote_with_cap(x, truth, j, seed, DEFAULT_ELL_CAP)
}

pub fn vote_with_cap(
    x: &Partition,
    truth: &GroundTruth,
    j: usize,
    seed: u64,
    ell_cap: usize,
) -> Result<VoteOutcome> {
    if j >= x.m() {
        return Err(Error::IndexOutOfRange { index: j, len: x.m() });
    }
    let (rep, reduced_fidelity) = select_optimal_rep(x, truth, seed, ell_cap)?;
    let a = agreement(&rep, truth, j)?;
    Ok(VoteOutcome {
        point_index: j,
        agreement: a,
        vote: a > 0.5,
        reduced_fidelity,
    })
}

/// Votes of `x` on every data point, evaluated on one representative
/// selection (the representative is chosen once per partition, then votes on
/// each point).
pub fn vote_all_points(x: &Partition, truth: &GroundTruth, seed: u64) -> Result<Vec<VoteOutcome>> {
    vote_all_points_with_cap(x, truth, seed, DEFAULT_ELL_CAP)
}

pub fn vote_all_points_with_cap(
    x: &Partition,
    truth: &GroundTruth,
    seed: u64,
    ell_cap: usize,
) -> Result<Vec<VoteOutcome>> {
    let (rep, reduced_fidelity) = select_optimal_rep(x, truth, seed, ell_cap)?;
    (0..x.m())
        .map(|j| {
            let a = agreement(&rep, truth, j)?;
            Ok(VoteOutcome {
                point_index: j,
                agreement: a,
                vote: a > 0.5,
                reduced_fidelity,
            })
        })
        .collect()
}

/// The majority vote of a hard sample on point `j`: compute the mean
/// partition set (exactly when the enumeration budget allows, by
/// multi-restart heuristic otherwise), select one mean uniformly with the
/// seed, and return its vote.
pub fn majority_vote(sample: &Sample, truth: &GroundTruth, j: usize, seed: u64) -> Result<VoteOutcome> {
    majority_vote_with(sample, truth, j, seed, &MeanConfig::default())
}

pub fn majority_vote_with(
    sample: &Sample,
    truth: &GroundTruth,
    j: usize,
    seed: u64,
    cfg: &MeanConfig,
) -> Result<VoteOutcome> {
    if !sample.is_hard() {
        return Err(Error::HardPartitionRequired("majority vote sample"));
    }
    truth.fixed_rep.check_dims(sample.elements()[0].canonical())?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mean_seed: u64 = rng.gen();
    let vote_seed: u64 = rng.gen();

    let within_budget = crate::assignment::alignment_enumeration_count(sample.ell(), sample.len())
        .is_some_and(|c| c <= cfg.budget as u128);
    let means = if within_budget {
        mean_set(sample, cfg.budget)?
    } else {
        vec![mean_multistart(sample, mean_seed, cfg)?.mean]
    };
    let pick = if means.len() > 1 {
        rng.gen_range(0..means.len())
    } else {
        0
    };
    vote(&means[pick], truth, j, vote_seed)
}

/// Probability that a majority of `n` independent voters, each correct with
/// probability `p`, votes correctly:
/// `sum_{i=r}^{n} C(n,i) p^i (1-p)^{n-i}` with `r = floor(n/2) + 1`.
/// Evaluated directly for `n <= 500` and in the log domain beyond; the
/// symmetric case `p = 0.5` is evaluated exactly.
pub fn binomial_majority_prob(n: u64, p: f64) -> f64 {
    assert!(n >= 1, "at least one voter required");
    assert!((0.0..=1.0).contains(&p), "p must lie in [0, 1]");
    if p == 0.0 {
        return 0.0;
    }
    if p == 1.0 {
        return 1.0;
    }
    let r = n / 2 + 1;
    if p == 0.5 {
        // The fair binomial is symmetric: the tail above n/2 is exactly half
        // the mass off the central term.
        return if n % 2 == 1 {
            0.5
        } else {
            0.5 - 0.5 * (ln_choose(n, n / 2) - n as f64 * std::f64::consts::LN_2).exp()
        };
    }
    if n <= 500 {
        let q = 1.0 - p;
        let mut c = 1.0f64;
        for k in 1..=r {
            c = c * ((n - r + k) as f64) / (k as f64);
        }
        let mut sum = 0.0;
        for i in r..=n {
            if i > r {
                c = c * ((n - i + 1) as f64) / (i as f64);
            }
            sum += c * p.powi(i as i32) * q.powi((n - i) as i32);
        }
        sum.min(1.0)
    } else {
        let (lnp, lnq) = (p.ln(), (1.0 - p).ln());
        let mut lnc = ln_choose(n, r);
        let mut terms = Vec::with_capacity((n - r + 1) as usize);
        for i in r..=n {
            if i > r {
                lnc += (((n - i + 1) as f64) / (i as f64)).ln();
            }
            terms.push(lnc + i as f64 * lnp + (n - i) as f64 * lnq);
        }
        let max = terms.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        let sum: f64 = terms.iter().map(|t| (t - max).exp()).sum();
        (max + sum.ln()).exp().min(1.0)
    }
}

fn ln_choose(n: u64, k: u64) -> f64 {
    let mut acc = 0.0;
    for i in 1..=k {
        acc += ((n - k + i) as f64).ln() - (i as f64).ln();
    }
    acc
}

/// The limiting probability of a correct majority vote as the number of
/// voters grows: 1 above p = 0.5, 0 below, 0.5 at exactly 0.5.
pub fn condorcet_limit(p: f64) -> f64 {
    if p > 0.5 {
        1.0
    } else if p < 0.5 {
        0.0
    } else {
        0.5
    }
}
