//! Generative model for i.i.d. hard sample partitions around a ground truth
//! and Monte Carlo experiments for the majority-vote limits.
//!
//! Sampling starts from the ground-truth labels and flips each point
//! independently: point `j` keeps its true cluster with probability `p_j`,
//! otherwise it moves uniformly to one of the other `ell - 1` clusters. In
//! ball-rejection mode draws are resampled until they fall strictly inside
//! the asymmetry ball of the configured center, which enforces the
//! homogeneity assumption; rejection perturbs the marginal correctness
//! probability, so reports always measure the empirical marginal and build
//! the binomial reference curve from it, never from the nominal `p`.
//!
//! Trials run concurrently; each trial derives its generator from
//! `(seed, grid index, trial index)` so results do not depend on the
//! schedule.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::asymmetry::degree_of_asymmetry;
use crate::error::{Error, Result};
use crate::frechet::{mean_multistart, MeanConfig, Sample};
use crate::jury::{binomial_majority_prob, vote_all_points, GroundTruth};
use crate::metric::delta;
use crate::partition::Partition;

/// Default retry cap for ball-rejection sampling.
pub const DEFAULT_REJECTION_RETRIES: u32 = 10_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum HomogeneityMode {
    /// Clean per-point flip noise; the homogeneity assumption may fail.
    Unconstrained,
    /// Resample until the draw lies strictly inside the center's asymmetry
    /// ball, enforcing the homogeneity assumption.
    BallRejection,
}

/// Distribution of i.i.d. hard sample partitions around a ground truth.
#[derive(Debug, Clone)]
pub struct EnsembleModel {
    truth: GroundTruth,
    truth_labels: Vec<usize>,
    probs: Vec<f64>,
    mode: HomogeneityMode,
    center: Partition,
    ball_radius: f64,
    max_retries: u32,
}

impl EnsembleModel {
    /// Model with one correctness probability for every point.
    pub fn uniform(truth: GroundTruth, p: f64, mode: HomogeneityMode) -> Result<Self> {
        let m = truth.m();
        Self::per_point(truth, vec![p; m], mode)
    }

    /// Model with per-point correctness probabilities.
    pub fn per_point(truth: GroundTruth, probs: Vec<f64>, mode: HomogeneityMode) -> Result<Self> {
        if probs.len() != truth.m() {
            return Err(Error::InvalidArgument(format!(
                "expected {} probabilities, got {}",
                truth.m(),
                probs.len()
            )));
        }
        if probs.iter().any(|p| !(0.0..=1.0).contains(p)) {
            return Err(Error::InvalidArgument(
                "correctness probabilities must lie in [0, 1]".into(),
            ));
        }
        let truth_labels = truth
            .fixed_rep()
            .labels()
            .expect("ground truth is hard by construction");
        let center = truth.partition().clone();
        let model = Self {
            truth,
            truth_labels,
            probs,
            mode,
            ball_radius: degree_of_asymmetry(&center) / 4.0,
            center,
            max_retries: DEFAULT_REJECTION_RETRIES,
        };
        model.validate_center()?;
        Ok(model)
    }

    /// Replace the rejection ball's center (defaults to the truth).
    pub fn with_center(mut self, center: Partition) -> Result<Self> {
        self.ball_radius = degree_of_asymmetry(&center) / 4.0;
        self.center = center;
        self.validate_center()?;
        Ok(self)
    }

    pub fn with_max_retries(mut self, retries: u32) -> Self {
        self.max_retries = retries;
        self
    }

    fn validate_center(&self) -> Result<()> {
        if self.mode == HomogeneityMode::BallRejection && self.ball_radius <= 0.0 {
            return Err(Error::SymmetricCenter);
        }
        Ok(())
    }

    pub fn truth(&self) -> &GroundTruth {
        &self.truth
    }

    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    pub fn mode(&self) -> HomogeneityMode {
        self.mode
    }

    pub fn center(&self) -> &Partition {
        &self.center
    }

    /// Draw one hard partition. Each point keeps its true cluster with
    /// probability `p_j`, otherwise moves uniformly to another cluster; in
    /// ball-rejection mode draws are repeated until one falls strictly
    /// inside the center's asymmetry ball.
    pub fn sample_partition(&self, rng: &mut ChaCha8Rng) -> Result<Partition> {
        let ell = self.truth.ell();
        let mut labels = vec![0usize; self.truth_labels.len()];
        let attempts = match self.mode {
            HomogeneityMode::Unconstrained => 1,
            HomogeneityMode::BallRejection => self.max_retries,
        };
        for _ in 0..attempts {
            for (j, &t) in self.truth_labels.iter().enumerate() {
                labels[j] = if ell == 1 || rng.gen::<f64>() < self.probs[j] {
                    t
                } else {
                    let mut alt = rng.gen_range(0..ell - 1);
                    if alt >= t {
                        alt += 1;
                    }
                    alt
                };
            }
            let drawn = Partition::from_labels(ell, &labels)?;
            match self.mode {
                HomogeneityMode::Unconstrained => return Ok(drawn),
                HomogeneityMode::BallRejection => {
                    if delta(&drawn, &self.center)?.distance < self.ball_radius {
                        return Ok(drawn);
                    }
                }
            }
        }
        Err(Error::RejectionExhausted {
            retries: self.max_retries,
        })
    }
}

/// Per-trial measurements shared by the estimators.
struct TrialOutcome {
    /// Majority vote correct at each point.
    majority_correct: Vec<bool>,
    /// Number of the n sample partitions voting correctly at each point.
    marginal_correct: Vec<u32>,
    /// Majority vote correct at every point, i.e. the majority-hardened
    /// mean reproduces the truth exactly.
    recovered: bool,
    /// Mean partition inside the rejection ball (vacuously true otherwise).
    mean_in_ball: bool,
}

fn run_trial(
    model: &EnsembleModel,
    n: usize,
    cfg: &MeanConfig,
    rng: &mut ChaCha8Rng,
) -> Result<TrialOutcome> {
    let m = model.truth.m();
    let mut parts = Vec::with_capacity(n);
    for _ in 0..n {
        parts.push(model.sample_partition(rng)?);
    }

    let mut marginal_correct = vec![0u32; m];
    for p in &parts {
        let outcomes = vote_all_points(p, &model.truth, rng.gen())?;
        for (j, o) in outcomes.iter().enumerate() {
            marginal_correct[j] += o.vote as u32;
        }
    }

    let sample = Sample::new(parts)?;
    let mean = mean_multistart(&sample, rng.gen(), cfg)?;
    let outcomes = vote_all_points(&mean.mean, &model.truth, rng.gen())?;
    let majority_correct: Vec<bool> = outcomes.iter().map(|o| o.vote).collect();
    let recovered = majority_correct.iter().all(|&v| v);
    let mean_in_ball = match model.mode {
        HomogeneityMode::Unconstrained => true,
        HomogeneityMode::BallRejection => {
            delta(&mean.mean, &model.center)?.distance < model.ball_radius
        }
    };
    Ok(TrialOutcome {
        majority_correct,
        marginal_correct,
        recovered,
        mean_in_ball,
    })
}

fn trial_rng(seed: u64, grid_index: usize, trial: u32) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(((grid_index as u64) << 32) | trial as u64);
    rng
}

/// Monte Carlo estimate of the majority-vote correctness probability at one
/// point, along with the empirical per-partition marginal at that point.
#[derive(Debug, Clone, Serialize)]
pub struct VoteEstimate {
    pub n: usize,
    pub trials: u32,
    pub point: usize,
    /// Fraction of trials whose majority vote at the point was correct.
    pub estimate: f64,
    /// Fraction of all drawn partitions voting correctly at the point.
    pub marginal_p_hat: f64,
}

pub fn estimate_vote_probability(
    model: &EnsembleModel,
    n: usize,
    trials: u32,
    j: usize,
    seed: u64,
) -> Result<VoteEstimate> {
    estimate_vote_probability_with(model, n, trials, j, seed, &MeanConfig::default())
}

pub fn estimate_vote_probability_with(
    model: &EnsembleModel,
    n: usize,
    trials: u32,
    j: usize,
    seed: u64,
    cfg: &MeanConfig,
) -> Result<VoteEstimate> {
    if n == 0 || trials == 0 {
        return Err(Error::InvalidArgument("n and trials must be positive".into()));
    }
    if j >= model.truth.m() {
        return Err(Error::IndexOutOfRange {
            index: j,
            len: model.truth.m(),
        });
    }
    let outcomes: Vec<TrialOutcome> = (0..trials)
        .into_par_iter()
        .map(|t| run_trial(model, n, cfg, &mut trial_rng(seed, 0, t)))
        .collect::<Result<_>>()?;
    let correct = outcomes.iter().filter(|o| o.majority_correct[j]).count();
    let marginal: u64 = outcomes.iter().map(|o| o.marginal_correct[j] as u64).sum();
    Ok(VoteEstimate {
        n,
        trials,
        point: j,
        estimate: correct as f64 / trials as f64,
        marginal_p_hat: marginal as f64 / (trials as u64 * n as u64) as f64,
    })
}

/// Aggregated results for one sample size of a convergence experiment.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct GridReport {
    pub n: usize,
    /// Per-point fraction of trials with a correct majority vote.
    pub majority_correct_rate: Vec<f64>,
    /// Per-point binomial standard error of that rate.
    pub stderr: Vec<f64>,
    /// Per-point closed-form reference `binomial_majority_prob(n, p_hat)`.
    pub binomial_reference: Vec<f64>,
    /// Fraction of trials whose majority vote was correct at every point.
    pub recovery_rate: f64,
    pub recovery_stderr: f64,
    /// Trials whose mean partition left the rejection ball (expected 0).
    pub mean_in_ball_violations: u32,
}

/// Full convergence experiment across a grid of sample sizes.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ExperimentReport {
    pub n_grid: Vec<usize>,
    pub trials: u32,
    pub seed: u64,
    pub mode: HomogeneityMode,
    /// Nominal per-point correctness probabilities of the model.
    pub nominal_p: Vec<f64>,
    /// Even sample sizes bias ties toward voting false; flagged, not refused.
    pub even_n_in_grid: bool,
    /// Per-point empirical marginal over every drawn partition, after
    /// rejection. The binomial references derive from this, not from
    /// `nominal_p`.
    pub marginal_p_hat: Vec<f64>,
    pub per_n: Vec<GridReport>,
}

pub fn run_convergence_experiment(
    model: &EnsembleModel,
    n_grid: &[usize],
    trials: u32,
    seed: u64,
) -> Result<ExperimentReport> {
    run_convergence_experiment_with(model, n_grid, trials, seed, &MeanConfig::default())
}

pub fn run_convergence_experiment_with(
    model: &EnsembleModel,
    n_grid: &[usize],
    trials: u32,
    seed: u64,
    cfg: &MeanConfig,
) -> Result<ExperimentReport> {
    if n_grid.is_empty() {
        return Err(Error::EmptyInput("sample-size grid"));
    }
    if n_grid.contains(&0) || trials == 0 {
        return Err(Error::InvalidArgument(
            "sample sizes and trials must be positive".into(),
        ));
    }
    let m = model.truth.m();

    struct GridRaw {
        n: usize,
        majority_counts: Vec<u32>,
        recovered: u32,
        ball_violations: u32,
    }

    let mut raw = Vec::with_capacity(n_grid.len());
    let mut marginal_num = vec![0u64; m];
    let mut marginal_den: u64 = 0;
    for (gi, &n) in n_grid.iter().enumerate() {
        let outcomes: Vec<TrialOutcome> = (0..trials)
            .into_par_iter()
            .map(|t| run_trial(model, n, cfg, &mut trial_rng(seed, gi, t)))
            .collect::<Result<_>>()?;
        let mut majority_counts = vec![0u32; m];
        let mut recovered = 0u32;
        let mut ball_violations = 0u32;
        for o in &outcomes {
            for (j, &v) in o.majority_correct.iter().enumerate() {
                majority_counts[j] += v as u32;
            }
            for (j, &c) in o.marginal_correct.iter().enumerate() {
                marginal_num[j] += c as u64;
            }
            recovered += o.recovered as u32;
            ball_violations += !o.mean_in_ball as u32;
        }
        marginal_den += trials as u64 * n as u64;
        raw.push(GridRaw {
            n,
            majority_counts,
            recovered,
            ball_violations,
        });
    }

    let marginal_p_hat: Vec<f64> = marginal_num
        .iter()
        .map(|&c| c as f64 / marginal_den as f64)
        .collect();

    let stderr_of = |rate: f64| (rate * (1.0 - rate) / trials as f64).sqrt();
    let per_n = raw
        .into_iter()
        .map(|g| {
            let rates: Vec<f64> = g
                .majority_counts
                .iter()
                .map(|&c| c as f64 / trials as f64)
                .collect();
            GridReport {
                n: g.n,
                stderr: rates.iter().map(|&r| stderr_of(r)).collect(),
                binomial_reference: marginal_p_hat
                    .iter()
                    .map(|&p| binomial_majority_prob(g.n as u64, p))
                    .collect(),
                majority_correct_rate: rates,
                recovery_rate: g.recovered as f64 / trials as f64,
                recovery_stderr: stderr_of(g.recovered as f64 / trials as f64),
                mean_in_ball_violations: g.ball_violations,
            }
        })
        .collect();

    Ok(ExperimentReport {
        n_grid: n_grid.to_vec(),
        trials,
        seed,
        mode: model.mode,
        nominal_p: model.probs.clone(),
        even_n_in_grid: n_grid.iter().any(|n| n % 2 == 0),
        marginal_p_hat,
        per_n,
    })
}

/// Flat CSV projection of an experiment report for plotting:
/// one row per (sample size, point).
pub fn experiment_csv(report: &ExperimentReport) -> String {
    let mut out = String::from("n,point,rate,stderr,binomial_ref,recovery_rate\n");
    for g in &report.per_n {
        for j in 0..g.majority_correct_rate.len() {
            out.push_str(&format!(
                "{},{},{},{},{},{}\n",
                g.n,
                j,
                g.majority_correct_rate[j],
                g.stderr[j],
                g.binomial_reference[j],
                g.recovery_rate
            ));
        }
    }
    out
}

/// The balanced hard partition assigning contiguous blocks of points to
/// clusters; the default simulation ground truth.
pub fn balanced_truth(ell: usize, m: usize) -> Result<Partition> {
    if ell == 0 || m == 0 || ell > m {
        return Err(Error::InvalidArgument(format!(
            "balanced truth needs 1 <= ell <= m, got ell={ell}, m={m}"
        )));
    }
    let labels: Vec<usize> = (0..m).map(|j| j * ell / m).collect();
    Partition::from_labels(ell, &labels)
}

/// Uniform random hard partition (each point drawn uniformly over clusters).
pub fn random_hard_partition(ell: usize, m: usize, rng: &mut impl Rng) -> Partition {
    let labels: Vec<usize> = (0..m).map(|_| rng.gen_range(0..ell)).collect();
    Partition::from_labels(ell, &labels).expect("labels are in range")
}

/// Random soft partition with columns drawn uniformly and normalized.
pub fn random_soft_partition(ell: usize, m: usize, rng: &mut impl Rng) -> Partition {
    let mut data = vec![0.0; ell * m];
    for j in 0..m {
        let col: Vec<f64> = (0..ell).map(|_| rng.gen::<f64>() + 1e-12).collect();
        let sum: f64 = col.iter().sum();
        for (k, v) in col.iter().enumerate() {
            data[k * m + j] = v / sum;
        }
    }
    Partition::from_rep(
        crate::partition::LabeledPartition::new(ell, m, data).expect("columns normalized"),
    )
}
