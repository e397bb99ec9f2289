//! Degree of asymmetry, asymmetry balls and Dirichlet fundamental domains.
//!
//! The degree of asymmetry of a partition Z is the smallest Frobenius
//! distance between a representative and a nontrivially row-permuted copy of
//! itself. A permutation with cycle type (c_1, c_2, ...) moves each row in a
//! cycle of length >= 2, so its cost is at least `2 * d_min^2` where `d_min`
//! is the closest row pair; the transposition of that closest pair attains
//! exactly `2 * d_min^2`. Hence `alpha_Z = sqrt(2) * d_min`, and conjugation
//! invariance of the cost makes any single representative sufficient.

use crate::error::{Error, Result};
use crate::metric::{align_reps, delta};
use crate::partition::{LabeledPartition, Partition, EQ_TOL};

/// Degree of asymmetry `alpha_Z`: the minimum of `||Z - PZ||` over
/// non-identity permutations `P`. Zero exactly when two rows coincide.
/// A single-cluster partition has no non-identity permutation; its degree is
/// reported as infinity.
pub fn degree_of_asymmetry(z: &Partition) -> f64 {
    degree_of_asymmetry_rep(z.canonical())
}

pub fn degree_of_asymmetry_rep(z_rep: &LabeledPartition) -> f64 {
    let ell = z_rep.ell();
    if ell < 2 {
        return f64::INFINITY;
    }
    let mut min_sq = f64::INFINITY;
    for i in 0..ell {
        for j in i + 1..ell {
            min_sq = min_sq.min(z_rep.row_dist_sq(i, j));
        }
    }
    (2.0 * min_sq).sqrt()
}

/// True when `z` has two coinciding rows, i.e. `alpha_Z = 0`.
pub fn is_symmetric(z: &Partition) -> bool {
    degree_of_asymmetry(z) == 0.0
}

/// Membership of `x` in the asymmetry ball of `z`:
/// `delta(x, z) <= alpha_z / 4`, strictly when `strict` is set. The open
/// ball of a symmetric center is empty, which the strict comparison yields
/// on its own (`delta < 0` is impossible).
pub fn in_asymmetry_ball(x: &Partition, z: &Partition, strict: bool) -> Result<bool> {
    let d = delta(x, z)?.distance;
    let bound = degree_of_asymmetry(z) / 4.0;
    Ok(if strict { d < bound } else { d <= bound })
}

/// Membership of `rep` in the Dirichlet fundamental domain of `z_rep`:
/// `||rep - z_rep|| <= ||rep - P z_rep||` for every permutation `P`,
/// equivalently `||rep - z_rep||` already attains the metric value.
/// The center must represent an asymmetric partition.
pub fn in_dirichlet_domain(rep: &LabeledPartition, z_rep: &LabeledPartition) -> Result<bool> {
    rep.check_dims(z_rep)?;
    if degree_of_asymmetry_rep(z_rep) == 0.0 {
        return Err(Error::SymmetricCenter);
    }
    let best = align_reps(rep, z_rep)?.distance;
    Ok(rep.diff_norm(z_rep) <= best + EQ_TOL)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::assignment::all_permutations;

    fn part(ell: usize, labels: &[usize]) -> Partition {
        Partition::from_labels(ell, labels).unwrap()
    }

    /// Independent oracle: minimize over all non-identity permutations.
    fn brute_alpha(z: &Partition) -> f64 {
        let rep = z.canonical();
        all_permutations(z.ell())
            .into_iter()
            .skip(1)
            .map(|p| rep.diff_norm(&rep.permute_rows(&p)))
            .fold(f64::INFINITY, f64::min)
    }

    #[test]
    fn identical_uniform_rows_are_symmetric() {
        let z = Partition::from_rows(vec![vec![0.5, 0.5], vec![0.5, 0.5]]).unwrap();
        assert_eq!(degree_of_asymmetry(&z), 0.0);
        assert!(is_symmetric(&z));
    }

    #[test]
    fn two_cluster_example_sqrt_6() {
        let z = part(2, &[0, 0, 1]);
        assert!((degree_of_asymmetry(&z) - 6f64.sqrt()).abs() < 1e-12);
        assert!((brute_alpha(&z) - 6f64.sqrt()).abs() < 1e-12);
    }

    #[test]
    fn three_cluster_sizes_1_1_2() {
        // Smallest pair of cluster sizes sums to 2, so alpha = sqrt(2*2) = 2.
        let z = part(3, &[0, 1, 2, 2]);
        assert!((degree_of_asymmetry(&z) - 2.0).abs() < 1e-12);
        assert!((brute_alpha(&z) - 2.0).abs() < 1e-12);
    }

    #[test]
    fn closed_form_matches_brute_force_on_random_partitions() {
        let mut state = 99u64;
        let mut next = |bound: usize| {
            state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            ((state >> 33) as usize) % bound
        };
        for _ in 0..40 {
            let ell = 2 + next(4);
            let labels: Vec<usize> = (0..7).map(|_| next(ell)).collect();
            let z = part(ell, &labels);
            assert!((degree_of_asymmetry(&z) - brute_alpha(&z)).abs() < 1e-9);
        }
    }

    #[test]
    fn ball_membership() {
        // Balanced 2-cluster truth on 32 points: alpha = sqrt(2*32) = 8.
        let mut labels = vec![0usize; 32];
        for l in labels.iter_mut().skip(16) {
            *l = 1;
        }
        let z = part(2, &labels);
        assert!((degree_of_asymmetry(&z) - 8.0).abs() < 1e-12);

        assert!(in_asymmetry_ball(&z, &z, false).unwrap());
        assert!(in_asymmetry_ball(&z, &z, true).unwrap());

        // One flipped point: delta = sqrt(2) < 2 = 8/4, strictly inside.
        let mut one = labels.clone();
        one[0] = 1;
        let x = part(2, &one);
        assert!((delta(&x, &z).unwrap().distance - 2f64.sqrt()).abs() < 1e-12);
        assert!(in_asymmetry_ball(&x, &z, true).unwrap());

        // Two flipped points sit exactly on the boundary: delta = 2 = 8/4.
        let mut two = labels.clone();
        two[0] = 1;
        two[16] = 0;
        let x = part(2, &two);
        assert!((delta(&x, &z).unwrap().distance - 2.0).abs() < 1e-12);
        assert!(in_asymmetry_ball(&x, &z, false).unwrap());
        assert!(!in_asymmetry_ball(&x, &z, true).unwrap());
    }

    #[test]
    fn strict_ball_of_symmetric_center_is_empty() {
        let z = Partition::from_rows(vec![vec![0.5, 0.5], vec![0.5, 0.5]]).unwrap();
        let x = part(2, &[0, 1]);
        assert!(!in_asymmetry_ball(&x, &z, true).unwrap());
        assert!(!in_asymmetry_ball(&z, &z, true).unwrap());
        // The center itself still sits in the closed ball.
        assert!(in_asymmetry_ball(&z, &z, false).unwrap());
    }

    #[test]
    fn dirichlet_membership() {
        let z = part(3, &[0, 1, 2, 2]);
        let z_rep = z.canonical();
        assert!(in_dirichlet_domain(z_rep, z_rep).unwrap());

        // A nontrivially relabeled copy is outside the domain of the center.
        let moved = z_rep.permute_rows(&[1, 0, 2]);
        assert!(!in_dirichlet_domain(&moved, z_rep).unwrap());
    }

    #[test]
    fn dirichlet_matches_explicit_permutation_check() {
        let mut state = 3u64;
        let mut next = |bound: usize| {
            state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            ((state >> 33) as usize) % bound
        };
        for _ in 0..30 {
            let labels_x: Vec<usize> = (0..6).map(|_| next(3)).collect();
            let labels_z: Vec<usize> = (0..6).map(|_| next(3)).collect();
            let x = part(3, &labels_x);
            let z = part(3, &labels_z);
            if degree_of_asymmetry(&z) == 0.0 {
                continue;
            }
            let rep = x.canonical();
            let z_rep = z.canonical();
            let direct = rep.diff_norm(z_rep);
            let explicit = all_permutations(3)
                .into_iter()
                .map(|p| rep.diff_norm(&z_rep.permute_rows(&p)))
                .fold(f64::INFINITY, f64::min);
            assert_eq!(
                in_dirichlet_domain(rep, z_rep).unwrap(),
                direct <= explicit + EQ_TOL
            );
        }
    }

    #[test]
    fn symmetric_center_is_an_error_for_dirichlet() {
        let z = Partition::from_rows(vec![vec![0.5, 0.5], vec![0.5, 0.5]]).unwrap();
        let x = part(2, &[0, 1]);
        assert!(matches!(
            in_dirichlet_domain(x.canonical(), z.canonical()),
            Err(Error::SymmetricCenter)
        ));
    }
}
