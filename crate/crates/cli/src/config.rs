//! Run configuration: JSON config file keys overlaid by command-line flags,
//! with the fully resolved values embedded into every report.

use std::path::{Path, PathBuf};

use meanpart_core::{HomogeneityMode, MeanConfig, DEFAULT_ENUM_BUDGET, DEFAULT_REJECTION_RETRIES};
use serde::{Deserialize, Serialize};

use crate::error::{CliError, CliResult};

/// Environment variable overriding the default enumeration budget.
pub const BUDGET_ENV: &str = "MEANPART_BUDGET";

/// A correctness probability: one scalar broadcast over all points, or one
/// value per point.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ProbSpec {
    Scalar(f64),
    PerPoint(Vec<f64>),
}

impl ProbSpec {
    pub fn resolve(&self, m: usize) -> CliResult<Vec<f64>> {
        match self {
            ProbSpec::Scalar(p) => Ok(vec![*p; m]),
            ProbSpec::PerPoint(v) => {
                if v.len() != m {
                    return Err(CliError::invalid_config(format!(
                        "p vector has {} entries but m = {m}",
                        v.len()
                    )));
                }
                Ok(v.clone())
            }
        }
    }
}

/// Keys accepted in a `--config` JSON file. Command-line flags override.
#[derive(Debug, Clone, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct RunConfig {
    pub input: Option<PathBuf>,
    pub truth: Option<PathBuf>,
    pub output: Option<PathBuf>,
    pub seed: Option<u64>,
    /// Force exact (true) or heuristic (false) mean computation; unset
    /// resolves to exact-within-budget.
    pub exact: Option<bool>,
    /// `unconstrained` or `ball`.
    pub mode: Option<String>,
    pub ell: Option<usize>,
    pub m: Option<usize>,
    pub p: Option<ProbSpec>,
    pub n_grid: Option<Vec<usize>>,
    pub trials: Option<u32>,
    pub budget: Option<u64>,
    pub max_iter: Option<usize>,
    pub tol: Option<f64>,
    pub restarts: Option<usize>,
    pub max_retries: Option<u32>,
}

impl RunConfig {
    pub fn load(path: &Path) -> CliResult<Self> {
        let text = std::fs::read_to_string(path)?;
        serde_json::from_str(&text).map_err(|e| CliError::invalid_config(e.to_string()))
    }

    /// Overlay `other` (flag values) on top of `self` (file values).
    pub fn overlay(mut self, other: RunConfig) -> Self {
        macro_rules! take {
            ($($field:ident),*) => {
                $(if other.$field.is_some() { self.$field = other.$field; })*
            };
        }
        take!(
            input, truth, output, seed, exact, mode, ell, m, p, n_grid, trials, budget,
            max_iter, tol, restarts, max_retries
        );
        self
    }
}

/// Fully resolved settings, embedded into reports for provenance.
#[derive(Debug, Clone, Serialize)]
pub struct ResolvedConfig {
    pub input: Option<PathBuf>,
    pub truth: Option<PathBuf>,
    pub output: Option<PathBuf>,
    pub seed: u64,
    pub mean_mode: String,
    pub mode: String,
    pub ell: Option<usize>,
    pub m: Option<usize>,
    pub p: Option<ProbSpec>,
    pub n_grid: Vec<usize>,
    pub trials: u32,
    pub budget: u64,
    pub max_iter: usize,
    pub tol: f64,
    pub restarts: Option<usize>,
    pub max_retries: u32,
}

/// Defaults applied after file and flag merging.
pub struct Settings {
    pub cfg: RunConfig,
    pub seed: u64,
    pub budget: u64,
    pub max_iter: usize,
    pub tol: f64,
    pub restarts: Option<usize>,
    pub max_retries: u32,
    pub n_grid: Vec<usize>,
    pub trials: u32,
}

impl Settings {
    pub fn from_config(cfg: RunConfig) -> CliResult<Self> {
        let env_budget = match std::env::var(BUDGET_ENV) {
            Ok(v) => Some(v.parse::<u64>().map_err(|e| {
                CliError::invalid_config(format!("{BUDGET_ENV} must be an integer: {e}"))
            })?),
            Err(_) => None,
        };
        let budget = cfg.budget.or(env_budget).unwrap_or(DEFAULT_ENUM_BUDGET);
        let defaults = MeanConfig::default();
        let settings = Self {
            seed: cfg.seed.unwrap_or(0),
            budget,
            max_iter: cfg.max_iter.unwrap_or(defaults.max_iter),
            tol: cfg.tol.unwrap_or(defaults.tol),
            restarts: cfg.restarts,
            max_retries: cfg.max_retries.unwrap_or(DEFAULT_REJECTION_RETRIES),
            n_grid: cfg.n_grid.clone().unwrap_or_else(|| vec![1, 11, 51]),
            trials: cfg.trials.unwrap_or(500),
            cfg,
        };
        if settings.tol <= 0.0 || !settings.tol.is_finite() {
            return Err(CliError::invalid_config("tol must be a positive real"));
        }
        if settings.max_iter == 0 {
            return Err(CliError::invalid_config("max_iter must be at least 1"));
        }
        if settings.trials == 0 {
            return Err(CliError::invalid_config("trials must be at least 1"));
        }
        if settings.n_grid.is_empty() || settings.n_grid.contains(&0) {
            return Err(CliError::invalid_config("n_grid needs positive entries"));
        }
        Ok(settings)
    }

    pub fn mean_config(&self) -> MeanConfig {
        MeanConfig {
            budget: self.budget,
            restarts: self.restarts,
            max_iter: self.max_iter,
            tol: self.tol,
        }
    }

    pub fn mode(&self) -> CliResult<HomogeneityMode> {
        match self.cfg.mode.as_deref() {
            None | Some("unconstrained") => Ok(HomogeneityMode::Unconstrained),
            Some("ball") => Ok(HomogeneityMode::BallRejection),
            Some(other) => Err(CliError::invalid_config(format!(
                "mode must be `unconstrained` or `ball`, got `{other}`"
            ))),
        }
    }

    pub fn resolved(&self, mean_mode: &str) -> ResolvedConfig {
        ResolvedConfig {
            input: self.cfg.input.clone(),
            truth: self.cfg.truth.clone(),
            output: self.cfg.output.clone(),
            seed: self.seed,
            mean_mode: mean_mode.to_string(),
            mode: self
                .cfg
                .mode
                .clone()
                .unwrap_or_else(|| "unconstrained".to_string()),
            ell: self.cfg.ell,
            m: self.cfg.m,
            p: self.cfg.p.clone(),
            n_grid: self.n_grid.clone(),
            trials: self.trials,
            budget: self.budget,
            max_iter: self.max_iter,
            tol: self.tol,
            restarts: self.restarts,
            max_retries: self.max_retries,
        }
    }
}

/// Parse a comma-separated list of positive integers.
pub fn parse_usize_list(text: &str) -> CliResult<Vec<usize>> {
    text.split(',')
        .map(|f| {
            f.trim()
                .parse::<usize>()
                .map_err(|e| CliError::invalid_config(format!("bad list entry `{f}`: {e}")))
        })
        .collect()
}

/// Parse `--p`: a single float or a comma-separated per-point vector.
pub fn parse_prob_spec(text: &str) -> CliResult<ProbSpec> {
    if text.contains(',') {
        let v = text
            .split(',')
            .map(|f| {
                f.trim()
                    .parse::<f64>()
                    .map_err(|e| CliError::invalid_config(format!("bad probability `{f}`: {e}")))
            })
            .collect::<CliResult<Vec<f64>>>()?;
        Ok(ProbSpec::PerPoint(v))
    } else {
        Ok(ProbSpec::Scalar(text.trim().parse::<f64>().map_err(
            |e| CliError::invalid_config(format!("bad probability `{text}`: {e}")),
        )?))
    }
}
