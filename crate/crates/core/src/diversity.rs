//! Diversity measures, homogeneity certification, loss and its
//! estimation/approximation decomposition.
//!
//! Diversity is measured with the squared metric as dissimilarity: the
//! pairwise average `G(S) = (1/n^2) sum delta^2(X_i, X_j)` and the variation
//! `F(M) = (1/n) sum delta^2(X_i, M)` around a mean or medoid, with
//! `F(M) <= G(S)` always. Quality against a ground truth is the worst-case
//! loss over the mean partition set, which splits into the estimation error
//! (worst minus best) plus the approximation error (best).

use serde::Serialize;

use crate::asymmetry::degree_of_asymmetry;
use crate::error::{Error, Result};
use crate::frechet::{frechet, mean_exact, mean_multistart, MeanConfig, Sample};
use crate::jury::GroundTruth;
use crate::metric::delta;
use crate::partition::Partition;

/// Diversity of a sample together with its homogeneity certificate.
#[derive(Debug, Clone, Serialize)]
pub struct DiversityReport {
    /// Average pairwise squared distance `G(S)`.
    pub pairwise_g: f64,
    /// Variation `F(M)` around the supplied mean/medoid.
    pub variation_f: f64,
    pub homogeneous: bool,
    pub certifying_center: Option<Partition>,
    /// `alpha_Z / 4` of the certifying center.
    pub asymmetry_bound: Option<f64>,
}

/// Worst-case loss of a mean partition set and its decomposition.
#[derive(Debug, Clone, Serialize)]
pub struct LossReport {
    /// Largest loss over the set.
    pub worst: f64,
    /// Smallest loss over the set.
    pub best: f64,
    /// `worst - best`: spread caused by the ambiguity of the mean set.
    pub estimation: f64,
    /// `best`: how close the best attainable solution is.
    pub approximation: f64,
}

/// Result of searching for a certifying asymmetry-ball center.
#[derive(Debug, Clone)]
pub struct Homogeneity {
    pub homogeneous: bool,
    pub certifying_center: Option<Partition>,
    pub asymmetry_bound: Option<f64>,
}

/// Average pairwise squared distance, zero diagonal included.
pub fn pairwise_diversity(parts: &[Partition]) -> Result<f64> {
    let first = parts.first().ok_or(Error::EmptyInput("partition list"))?;
    let n = parts.len();
    let mut total = 0.0;
    for i in 0..n {
        first.canonical().check_dims(parts[i].canonical())?;
        for j in i + 1..n {
            let d = delta(&parts[i], &parts[j])?.distance;
            total += 2.0 * d * d;
        }
    }
    Ok(total / (n * n) as f64)
}

/// Variation of the sample around `m`: identical to the Fréchet function.
/// `m` is meant to be a mean or medoid, though the value is defined for any
/// partition.
pub fn variation(sample: &Sample, m: &Partition) -> Result<f64> {
    frechet(sample, m)
}

/// Search for a partition whose strict asymmetry ball contains every input:
/// first the supplied candidates, then a mean of the inputs (exact within
/// the budget, heuristic otherwise), then each input itself. This is a
/// sufficient-condition search; a negative result means "not certified",
/// not "not homogeneous".
pub fn certify_homogeneous(
    partitions: &[Partition],
    candidates: &[Partition],
    cfg: &MeanConfig,
) -> Result<Homogeneity> {
    let first = partitions.first().ok_or(Error::EmptyInput("partition list"))?;
    for p in partitions.iter().chain(candidates) {
        first.canonical().check_dims(p.canonical())?;
    }

    let sample = Sample::new(partitions.to_vec())?;
    let within_budget =
        crate::assignment::alignment_enumeration_count(sample.ell(), sample.len())
            .is_some_and(|c| c <= cfg.budget as u128);
    let mean = if within_budget {
        mean_exact(&sample, cfg.budget)?.mean
    } else {
        // Deterministic: the single restart starts from the best medoid.
        let deterministic = MeanConfig {
            restarts: Some(1),
            ..cfg.clone()
        };
        mean_multistart(&sample, 0, &deterministic)?.mean
    };

    let mut order: Vec<&Partition> = candidates.iter().collect();
    order.push(&mean);
    order.extend(partitions.iter());

    for center in order {
        let alpha = degree_of_asymmetry(center);
        if alpha <= 0.0 {
            continue;
        }
        let bound = alpha / 4.0;
        let mut all_inside = true;
        for p in partitions {
            if delta(p, center)?.distance >= bound {
                all_inside = false;
                break;
            }
        }
        if all_inside {
            return Ok(Homogeneity {
                homogeneous: true,
                certifying_center: Some(center.clone()),
                asymmetry_bound: Some(bound),
            });
        }
    }
    Ok(Homogeneity {
        homogeneous: false,
        certifying_center: None,
        asymmetry_bound: None,
    })
}

/// Loss of a prediction: its metric distance to the ground truth.
pub fn loss(x: &Partition, truth: &GroundTruth) -> Result<f64> {
    Ok(delta(x, truth.partition())?.distance)
}

/// Worst-case loss of a mean partition set, split into estimation error
/// (worst minus best) and approximation error (best).
pub fn loss_decomposition(mean_set: &[Partition], truth: &GroundTruth) -> Result<LossReport> {
    if mean_set.is_empty() {
        return Err(Error::EmptyInput("mean set"));
    }
    let mut worst = f64::NEG_INFINITY;
    let mut best = f64::INFINITY;
    for m in mean_set {
        let l = loss(m, truth)?;
        worst = worst.max(l);
        best = best.min(l);
    }
    Ok(LossReport {
        worst,
        best,
        estimation: worst - best,
        approximation: best,
    })
}

/// Assemble the full diversity report for a sample around `mean`.
pub fn diversity_report(
    sample: &Sample,
    mean: &Partition,
    candidates: &[Partition],
    cfg: &MeanConfig,
) -> Result<DiversityReport> {
    let pairwise_g = pairwise_diversity(sample.elements())?;
    let variation_f = variation(sample, mean)?;
    let cert = certify_homogeneous(sample.elements(), candidates, cfg)?;
    Ok(DiversityReport {
        pairwise_g,
        variation_f,
        homogeneous: cert.homogeneous,
        certifying_center: cert.certifying_center,
        asymmetry_bound: cert.asymmetry_bound,
    })
}
