//! Hungarian algorithm for square assignment problems.

use alloc::vec;
use alloc::vec::Vec;

/// Minimum-cost perfect matching on an `n x n` row-major cost matrix.
///
/// Returns `perm` with `perm[row] = column` and the total cost. Entries may be
/// `f64::INFINITY` to forbid an edge as long as some finite assignment exists.
pub fn solve(cost: &[f64], n: usize) -> (Vec<usize>, f64) {
    assert_eq!(cost.len(), n * n, "cost matrix must be n x n");
    if n == 0 {
        return (Vec::new(), 0.0);
    }
    let big = forbidden_weight(cost, n);
    let c = |i: usize, j: usize| {
        let v = cost[i * n + j];
        if v.is_finite() {
            v
        } else {
            big
        }
    };
    // potentials u (rows), v (columns); p[j] = row matched to column j, 1-based with 0 as sentinel
    let mut u = vec![0.0f64; n + 1];
    let mut v = vec![0.0f64; n + 1];
    let mut p = vec![0usize; n + 1];
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
                    let cur = c(i0 - 1, j - 1) - u[i0] - v[j];
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
    let mut perm = vec![0usize; n];
    for j in 1..=n {
        perm[p[j] - 1] = j - 1;
    }
    let total = (0..n).map(|i| cost[i * n + perm[i]]).sum();
    (perm, total)
}

fn forbidden_weight(cost: &[f64], n: usize) -> f64 {
    let m = cost.iter().filter(|x| x.is_finite()).fold(0.0f64, |a, x| a.max(libm::fabs(*x)));
    (m + 1.0) * (n as f64 + 1.0) * 4.0
}

/// Best assignment different from `excluded`.
///
/// Solves once; if the optimum is `excluded`, re-solves `n` times, each time
/// forbidding one edge of `excluded`, and keeps the cheapest result.
pub fn solve_excluding(cost: &[f64], n: usize, excluded: &[usize]) -> Option<(Vec<usize>, f64)> {
    if n < 2 {
        return None;
    }
    let (perm, total) = solve(cost, n);
    if perm != excluded {
        return Some((perm, total));
    }
    let mut best: Option<(Vec<usize>, f64)> = None;
    let mut c = cost.to_vec();
    for i in 0..n {
        let k = i * n + excluded[i];
        let saved = c[k];
        c[k] = f64::INFINITY;
        let (p, t) = solve(&c, n);
        c[k] = saved;
        if t.is_finite() && best.as_ref().map_or(true, |b| t < b.1) {
            best = Some((p, t));
        }
    }
    best
}
