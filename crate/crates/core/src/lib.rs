//! Consensus clustering via mean partitions.
//!
//! Partitions of a data set are membership matrices modulo cluster
//! relabeling; the space carries a metric obtained by optimally aligning
//! cluster labels (a linear assignment problem). On top of that geometry this
//! crate computes Fréchet mean partitions (heuristic fixed-point iteration
//! and exact enumeration for small instances), majority votes of cluster
//! ensembles through the mean partition, diversity and loss decompositions,
//! and seeded Monte Carlo experiments that track how the majority vote and
//! the mean partition behave as the ensemble grows.

pub mod align;
pub mod assignment;
pub mod asymmetry;
pub mod codec;
pub mod diversity;
pub mod error;
pub mod frechet;
pub mod jury;
pub mod metric;
pub mod partition;
pub mod sim;

pub use align::{align_sample_to, exact_optimal_alignment, MultipleAlignment, DEFAULT_ENUM_BUDGET};
pub use asymmetry::{degree_of_asymmetry, in_asymmetry_ball, in_dirichlet_domain, is_symmetric};
pub use diversity::{
    certify_homogeneous, diversity_report, loss, loss_decomposition, pairwise_diversity,
    variation, DiversityReport, Homogeneity, LossReport,
};
pub use error::{Error, Result};
pub use frechet::{
    best_medoid, frechet, mean_exact, mean_heuristic, mean_multistart, mean_set, MeanConfig,
    MeanResult, Sample,
};
pub use jury::{
    agreement, binomial_majority_prob, condorcet_limit, majority_vote, majority_vote_with, vote,
    vote_all_points, GroundTruth, VoteOutcome, DEFAULT_ELL_CAP,
};
pub use metric::{align_reps, delta, optimal_position, AlignmentResult};
pub use partition::{LabeledPartition, Partition, EQ_TOL};
pub use sim::{
    balanced_truth, estimate_vote_probability, experiment_csv, random_hard_partition,
    random_soft_partition, run_convergence_experiment, run_convergence_experiment_with,
    EnsembleModel, ExperimentReport, GridReport, HomogeneityMode, VoteEstimate,
    DEFAULT_REJECTION_RETRIES,
};
