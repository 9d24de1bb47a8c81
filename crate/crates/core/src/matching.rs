//! Minimum-weight perfect matching on square cost matrices, used to compare
//! eigenvalue multisets under the best permutation.

use crate::densemat::Complex;

/// Hungarian algorithm (shortest augmenting paths with potentials), O(n³).
///
/// `cost` is row-major `n`×`n`. Returns `assignment` with `assignment[i] = j`
/// meaning row `i` is matched to column `j`.
pub fn min_weight_matching(n: usize, cost: &[f64]) -> Vec<usize> {
    assert_eq!(cost.len(), n * n, "cost matrix must be n×n");
    if n == 0 {
        return Vec::new();
    }
    // 1-based potentials; column 0 is a sentinel.
    let mut u = vec![0.0; n + 1];
    let mut v = vec![0.0; n + 1];
    let mut owner = vec![0usize; n + 1];
    let mut way = vec![0usize; n + 1];

    for row in 1..=n {
        owner[0] = row;
        let mut j0 = 0;
        let mut minv = vec![f64::INFINITY; n + 1];
        let mut used = vec![false; n + 1];
        loop {
            used[j0] = true;
            let i0 = owner[j0];
            let mut delta = f64::INFINITY;
            let mut j1 = 0;
            for j in 1..=n {
                if used[j] {
                    continue;
                }
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
            if j1 == 0 {
                // Only reachable with NaN costs; fall back to first free column.
                j1 = (1..=n).find(|&j| !used[j]).expect("free column exists");
                delta = 0.0;
            }
            for j in 0..=n {
                if used[j] {
                    u[owner[j]] += delta;
                    v[j] -= delta;
                } else {
                    minv[j] -= delta;
                }
            }
            j0 = j1;
            if owner[j0] == 0 {
                break;
            }
        }
        loop {
            let j1 = way[j0];
            owner[j0] = owner[j1];
            j0 = j1;
            if j0 == 0 {
                break;
            }
        }
    }

    let mut assignment = vec![0; n];
    for j in 1..=n {
        assignment[owner[j] - 1] = j - 1;
    }
    assignment
}

/// Optimal pairing of two equal-size complex multisets under `|a − b|`.
/// Returns the permutation (`a[i]` ↔ `b[perm[i]]`) and the largest matched
/// distance.
pub fn match_multisets(a: &[Complex], b: &[Complex]) -> (Vec<usize>, f64) {
    assert_eq!(a.len(), b.len(), "multisets must have equal size");
    let n = a.len();
    let cost: Vec<f64> = a.iter().flat_map(|x| b.iter().map(move |y| (x - y).norm())).collect();
    let perm = min_weight_matching(n, &cost);
    let worst = perm.iter().enumerate().map(|(i, &j)| cost[i * n + j]).fold(0.0, f64::max);
    (perm, worst)
}
