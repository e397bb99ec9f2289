//! The five commands and their report shapes.

use std::path::{Path, PathBuf};

use meanpart_core::{
    align_sample_to, assignment, balanced_truth, degree_of_asymmetry, delta, diversity_report,
    experiment_csv, loss_decomposition, mean_exact, mean_multistart, mean_set,
    run_convergence_experiment_with, DiversityReport, EnsembleModel, ExperimentReport,
    GroundTruth, LossReport, MeanResult, Partition, Sample,
};
use serde::Serialize;

use crate::config::{ResolvedConfig, Settings};
use crate::error::{CliError, CliResult};
use crate::labels;

const VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Serialize)]
struct Report<T: Serialize> {
    artifact_version: &'static str,
    command: &'static str,
    config: ResolvedConfig,
    report: T,
}

fn emit<T: Serialize>(
    command: &'static str,
    config: ResolvedConfig,
    report: T,
    output: Option<&Path>,
) -> CliResult<()> {
    let full = Report {
        artifact_version: VERSION,
        command,
        config,
        report,
    };
    let mut json = serde_json::to_string_pretty(&full)?;
    json.push('\n');
    match output {
        Some(path) => std::fs::write(path, json)?,
        None => print!("{json}"),
    }
    Ok(())
}

fn require_input(s: &Settings) -> CliResult<PathBuf> {
    s.cfg
        .input
        .clone()
        .ok_or_else(|| CliError::invalid_config("--input is required for this command"))
}

/// The mean of a sample under the resolved mode: exact enumeration when
/// forced or affordable, multi-restart heuristic otherwise.
fn compute_mean(sample: &Sample, s: &Settings) -> CliResult<(MeanResult, &'static str)> {
    let cfg = s.mean_config();
    let within_budget = assignment::alignment_enumeration_count(sample.ell(), sample.len())
        .is_some_and(|c| c <= cfg.budget as u128);
    let mode = match s.cfg.exact {
        Some(true) => "exact",
        Some(false) => "heuristic",
        None => {
            if within_budget {
                "exact"
            } else {
                "heuristic"
            }
        }
    };
    let result = if mode == "exact" {
        mean_exact(sample, cfg.budget)?
    } else {
        mean_multistart(sample, s.seed, &cfg)?
    };
    Ok((result, mode))
}

#[derive(Serialize)]
struct ConsensusReport {
    mean: Partition,
    frechet_value: f64,
    iterations: usize,
    converged: bool,
    minimizer_count: Option<usize>,
    /// Largest entrywise change when the sample is re-aligned to the mean
    /// representative and re-averaged; a fixed point has residual ~ 0.
    fixed_point_residual: f64,
    f_history: Vec<f64>,
}

pub fn consensus(s: &Settings) -> CliResult<()> {
    let sample = labels::parse_labels(&require_input(s)?)?;
    let (result, mode) = compute_mean(&sample, s)?;
    let realigned = align_sample_to(&sample, &result.representative)?;
    let fixed_point_residual = result.representative.max_abs_diff(&realigned.mean_rep());
    emit(
        "consensus",
        s.resolved(mode),
        ConsensusReport {
            mean: result.mean,
            frechet_value: result.frechet_value,
            iterations: result.iterations,
            converged: result.converged,
            minimizer_count: result.minimizer_count,
            fixed_point_residual,
            f_history: result.f_history,
        },
        s.cfg.output.as_deref(),
    )
}

#[derive(Serialize)]
struct DistanceReport {
    /// Full metric distance matrix over the input clusterings.
    pairwise: Vec<Vec<f64>>,
    /// The single distance when the input holds exactly two clusterings.
    distance: Option<f64>,
}

#[allow(clippy::needless_range_loop)] // symmetric matrix fill
pub fn distance(s: &Settings) -> CliResult<()> {
    let sample = labels::parse_labels(&require_input(s)?)?;
    let n = sample.len();
    if n < 2 {
        return Err(CliError::invalid_config(
            "distance needs at least two clusterings",
        ));
    }
    let mut pairwise = vec![vec![0.0; n]; n];
    for i in 0..n {
        for j in i + 1..n {
            let d = delta(&sample.elements()[i], &sample.elements()[j])?.distance;
            pairwise[i][j] = d;
            pairwise[j][i] = d;
        }
    }
    let distance = (n == 2).then(|| pairwise[0][1]);
    emit(
        "distance",
        s.resolved("n/a"),
        DistanceReport { pairwise, distance },
        s.cfg.output.as_deref(),
    )
}

#[derive(Serialize)]
struct AsymmetryRow {
    index: usize,
    /// Degree of asymmetry; null for a single-cluster partition, which has
    /// no non-identity relabeling.
    alpha: Option<f64>,
    /// `alpha / 4`, the asymmetry-ball radius.
    ball_radius: Option<f64>,
    symmetric: bool,
}

pub fn asymmetry(s: &Settings) -> CliResult<()> {
    let sample = labels::parse_labels(&require_input(s)?)?;
    let rows: Vec<AsymmetryRow> = sample
        .elements()
        .iter()
        .enumerate()
        .map(|(index, p)| {
            let alpha = degree_of_asymmetry(p);
            AsymmetryRow {
                index,
                alpha: alpha.is_finite().then_some(alpha),
                ball_radius: alpha.is_finite().then_some(alpha / 4.0),
                symmetric: alpha == 0.0,
            }
        })
        .collect();
    emit("asymmetry", s.resolved("n/a"), rows, s.cfg.output.as_deref())
}

#[derive(Serialize)]
struct DiversityCommandReport {
    diversity: DiversityReport,
    mean: Partition,
    frechet_value: f64,
    /// Size of the enumerated mean set (exact mode only).
    mean_set_size: Option<usize>,
    /// Loss decomposition over the mean set; present when a truth is given.
    loss: Option<LossReport>,
}

pub fn diversity(s: &Settings) -> CliResult<()> {
    let sample = labels::parse_labels(&require_input(s)?)?;
    let truth = s
        .cfg
        .truth
        .as_deref()
        .map(labels::parse_truth)
        .transpose()?;
    let (result, mode) = compute_mean(&sample, s)?;
    let cfg = s.mean_config();

    let candidates: Vec<Partition> = truth
        .iter()
        .map(|t| t.partition().clone())
        .collect();
    let report = diversity_report(&sample, &result.mean, &candidates, &cfg)?;

    let loss = match &truth {
        Some(t) => {
            let means = if mode == "exact" {
                mean_set(&sample, cfg.budget)?
            } else {
                vec![result.mean.clone()]
            };
            Some(loss_decomposition(&means, t)?)
        }
        None => None,
    };
    emit(
        "diversity",
        s.resolved(mode),
        DiversityCommandReport {
            diversity: report,
            mean: result.mean,
            frechet_value: result.frechet_value,
            mean_set_size: result.minimizer_count,
            loss,
        },
        s.cfg.output.as_deref(),
    )
}

#[derive(Serialize)]
struct SimulateReport {
    experiment: ExperimentReport,
    csv_path: Option<PathBuf>,
}

pub fn simulate(s: &Settings) -> CliResult<()> {
    let mode = s.mode()?;
    let truth = match &s.cfg.truth {
        Some(path) => labels::parse_truth(path)?,
        None => {
            let ell = s.cfg.ell.unwrap_or(2);
            let m = s.cfg.m.unwrap_or(64);
            GroundTruth::new(balanced_truth(ell, m)?)?
        }
    };
    let m = truth.m();
    let probs = match &s.cfg.p {
        Some(spec) => spec.resolve(m)?,
        None => vec![0.95; m],
    };
    let model = EnsembleModel::per_point(truth, probs, mode)?.with_max_retries(s.max_retries);
    let experiment =
        run_convergence_experiment_with(&model, &s.n_grid, s.trials, s.seed, &s.mean_config())?;

    let csv_path = s.cfg.output.as_ref().map(|p| p.with_extension("csv"));
    if let Some(path) = &csv_path {
        std::fs::write(path, experiment_csv(&experiment))?;
    }
    emit(
        "simulate",
        s.resolved("heuristic"),
        SimulateReport {
            experiment,
            csv_path,
        },
        s.cfg.output.as_deref(),
    )
}
