//! Dense linear assignment over small square profit matrices.
//!
//! Row alignment between partitions reduces to a maximum-profit assignment
//! with profit `C[a][b] = <row a, row b>`. The solver is the O(n^3)
//! shortest-augmenting-path (Jonker-Volgenant style) algorithm; optimal
//! assignments are post-processed to the lexicographically smallest one so
//! that tie-breaking is deterministic.

use crate::error::{Error, Result};

/// Minimum-cost perfect assignment on an `n x n` row-major cost matrix.
/// Returns `(row_to_col, total_cost)`.
pub fn min_cost_assignment(n: usize, cost: &[f64]) -> (Vec<usize>, f64) {
    debug_assert_eq!(cost.len(), n * n);
    // Potentials u, v and column matching p with a sentinel column 0.
    let mut u = vec![0.0; n + 1];
    let mut v = vec![0.0; n + 1];
    let mut p = vec![0usize; n + 1]; // p[j] = row matched to column j (1-based, 0 = free)
    let mut way = vec![0usize; n + 1];
    for i in 1..=n {
        p[0] = i;
        let mut j0 = 0usize;
        let mut minv = vec![f64::INFINITY; n + 1];
        let mut used = vec![false; n + 1];
        loop {
            used[j0] = true;
            let i0 = p[j0];
            let mut delta = f64::INFINITY;
            let mut j1 = 0usize;
            for j in 1..=n {
                if !used[j] {
                    let cur = cost[(i0 - 1) * n + (j - 1)] - u[i0] - v[j];
                    if cur < minv[j] {
                        minv[j] = cur;
                        way[j] = j0;
                    }
                    if minv[j] < delta {
                        delta = minv[j];
                        j1 = j;
                    }
                }
            }
            for j in 0..=n {
                if used[j] {
                    u[p[j]] += delta;
                    v[j] -= delta;
                } else {
                    minv[j] -= delta;
                }
            }
            j0 = j1;
            if p[j0] == 0 {
                break;
            }
        }
        loop {
            let j1 = way[j0];
            p[j0] = p[j1];
            j0 = j1;
            if j0 == 0 {
                break;
            }
        }
    }
    let mut row_to_col = vec![0usize; n];
    for j in 1..=n {
        row_to_col[p[j] - 1] = j - 1;
    }
    let total = (0..n).map(|i| cost[i * n + row_to_col[i]]).sum();
    (row_to_col, total)
}

/// Value of the maximum-profit perfect assignment.
pub fn max_profit_value(n: usize, profit: &[f64]) -> f64 {
    if n == 0 {
        return 0.0;
    }
    let neg: Vec<f64> = profit.iter().map(|x| -x).collect();
    let (assign, _) = min_cost_assignment(n, &neg);
    (0..n).map(|i| profit[i * n + assign[i]]).sum()
}

/// The lexicographically smallest assignment `perm` (as a sequence
/// `perm[0], perm[1], ...`) whose profit is within `tol` of the maximum.
///
/// Fixes slots in order, each time taking the smallest column whose best
/// completion stays optimal. O(n^5) worst case, which is immaterial at the
/// cluster counts this crate works with.
pub fn lex_min_max_assignment(n: usize, profit: &[f64], tol: f64) -> Vec<usize> {
    let best = max_profit_value(n, profit);
    let mut used = vec![false; n];
    let mut perm = Vec::with_capacity(n);
    let mut prefix = 0.0;
    for slot in 0..n {
        let rest = n - slot - 1;
        let mut chosen = None;
        for cand in (0..n).filter(|&c| !used[c]) {
            let completion = if rest == 0 {
                0.0
            } else {
                let cols: Vec<usize> = (0..n).filter(|&c| !used[c] && c != cand).collect();
                let mut sub = Vec::with_capacity(rest * rest);
                for r in slot + 1..n {
                    for &c in &cols {
                        sub.push(profit[r * n + c]);
                    }
                }
                max_profit_value(rest, &sub)
            };
            if prefix + profit[slot * n + cand] + completion >= best - tol {
                chosen = Some(cand);
                break;
            }
        }
        let cand = chosen.expect("an optimal completion always exists");
        used[cand] = true;
        prefix += profit[slot * n + cand];
        perm.push(cand);
    }
    perm
}

/// All assignments whose profit is within `tol` of the maximum, in
/// lexicographic order. Errors when `n!` exceeds `budget`.
pub fn enumerate_optimal_assignments(
    n: usize,
    profit: &[f64],
    tol: f64,
    budget: u64,
) -> Result<Vec<Vec<usize>>> {
    let count = factorial(n).ok_or(Error::BudgetExceeded {
        required: u128::MAX,
        budget,
    })?;
    if count > budget as u128 {
        return Err(Error::BudgetExceeded {
            required: count,
            budget,
        });
    }
    let best = max_profit_value(n, profit);
    let mut perm: Vec<usize> = (0..n).collect();
    let mut out = Vec::new();
    loop {
        let total: f64 = (0..n).map(|i| profit[i * n + perm[i]]).sum();
        if total >= best - tol {
            out.push(perm.clone());
        }
        if !next_permutation(&mut perm) {
            break;
        }
    }
    Ok(out)
}

/// Advance `p` to the next permutation in lexicographic order; `false` once
/// the last permutation has been reached.
pub fn next_permutation(p: &mut [usize]) -> bool {
    if p.len() < 2 {
        return false;
    }
    let mut i = p.len() - 1;
    while i > 0 && p[i - 1] >= p[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = p.len() - 1;
    while p[j] <= p[i - 1] {
        j -= 1;
    }
    p.swap(i - 1, j);
    p[i..].reverse();
    true
}

/// All permutations of `0..n` in lexicographic order.
pub fn all_permutations(n: usize) -> Vec<Vec<usize>> {
    let mut perm: Vec<usize> = (0..n).collect();
    let mut out = Vec::new();
    loop {
        out.push(perm.clone());
        if !next_permutation(&mut perm) {
            break;
        }
    }
    out
}

pub fn factorial(n: usize) -> Option<u128> {
    let mut acc: u128 = 1;
    for k in 2..=n as u128 {
        acc = acc.checked_mul(k)?;
    }
    Some(acc)
}

/// Number of multiple alignments of an `n`-element sample with cluster
/// capacity `ell` once the first representative is fixed: `(ell!)^(n-1)`.
/// `None` on overflow.
pub fn alignment_enumeration_count(ell: usize, n: usize) -> Option<u128> {
    let f = factorial(ell)?;
    let mut acc: u128 = 1;
    for _ in 1..n {
        acc = acc.checked_mul(f)?;
    }
    Some(acc)
}
