//! Brute-force oracles kept independent of the library's assignment-based
//! code paths: everything here enumerates permutations explicitly.

use meanpart_core::assignment::all_permutations;
use meanpart_core::{LabeledPartition, Partition};

/// Metric by explicit minimization over all row permutations.
pub fn brute_delta(x: &Partition, y: &Partition) -> f64 {
    all_permutations(x.ell())
        .into_iter()
        .map(|p| x.canonical().diff_norm(&y.canonical().permute_rows(&p)))
        .fold(f64::INFINITY, f64::min)
}

/// Degree of asymmetry by explicit minimization over non-identity
/// permutations.
pub fn brute_alpha(z: &Partition) -> f64 {
    let rep = z.canonical();
    all_permutations(z.ell())
        .into_iter()
        .skip(1)
        .map(|p| rep.diff_norm(&rep.permute_rows(&p)))
        .fold(f64::INFINITY, f64::min)
}

/// Optimal multiple-alignment cost by explicit enumeration over all
/// permutation tuples with the first representative fixed, scoring each
/// tuple with the direct double loop.
pub fn brute_alignment_min(elements: &[Partition]) -> f64 {
    let perms = all_permutations(elements[0].ell());
    let canon: Vec<&LabeledPartition> = elements.iter().map(Partition::canonical).collect();
    let n = elements.len();
    let mut idx = vec![0usize; n];
    let mut best = f64::INFINITY;
    loop {
        let reps: Vec<LabeledPartition> = (0..n)
            .map(|i| canon[i].permute_rows(&perms[idx[i]]))
            .collect();
        let mut cost = 0.0;
        for a in &reps {
            for b in &reps {
                cost += a.diff_norm_sq(b);
            }
        }
        best = best.min(cost / (n * n) as f64);

        // Odometer over positions 1..n; position 0 stays fixed.
        let mut pos = n;
        let advanced = loop {
            if pos == 1 {
                break false;
            }
            pos -= 1;
            if idx[pos] + 1 < perms.len() {
                idx[pos] += 1;
                for p in idx.iter_mut().skip(pos + 1) {
                    *p = 0;
                }
                break true;
            }
            idx[pos] = 0;
        };
        if !advanced {
            return best;
        }
    }
}

/// Number of points on which two hard partitions disagree under a given
/// alignment of the second onto the first.
pub fn disagreement_count(x: &LabeledPartition, aligned_y: &LabeledPartition) -> usize {
    let lx = x.labels().expect("hard");
    let ly = aligned_y.labels().expect("hard");
    lx.iter().zip(&ly).filter(|(a, b)| a != b).count()
}
