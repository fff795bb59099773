//! Independent reference computations for the integration tests. Nothing in
//! here calls into the algorithms it is used to check.
#![allow(dead_code)]

use std::f64::consts::PI;

/// Maximum cut weight by enumerating every side assignment with vertex 0
/// fixed. `n <= 20`.
pub fn brute_force_maxcut(n: usize, edges: &[(usize, usize, f64)]) -> f64 {
    assert!(n <= 20, "brute force is exponential");
    if n < 2 {
        return 0.0;
    }
    let mut best = 0.0f64;
    for mask in 0u32..(1 << (n - 1)) {
        let side = |v: usize| v > 0 && (mask >> (v - 1)) & 1 == 1;
        let w: f64 = edges.iter().filter(|&&(u, v, _)| side(u) != side(v)).map(|e| e.2).sum();
        best = best.max(w);
    }
    best
}

/// Max-cut SDP value of the complete graph `K_n`: `n^2 / 4`.
pub fn sdp_complete(n: usize) -> f64 {
    (n * n) as f64 / 4.0
}

/// Max-cut SDP value of the cycle `C_n`: `n` when even, `n/2 (1 + cos(pi/n))`
/// when odd.
pub fn sdp_cycle(n: usize) -> f64 {
    if n.is_multiple_of(2) {
        n as f64
    } else {
        n as f64 / 2.0 * (1.0 + (PI / n as f64).cos())
    }
}

/// Expected GW cut of the two optimal SDP solutions of `K_n` (n even)
/// differs by `n^2/4 - C(n,2) arccos(-1/(n-1)) / pi`.
pub fn nonunique_gw_gap(n: usize) -> f64 {
    let nf = n as f64;
    nf * nf / 4.0 - nf * (nf - 1.0) / 2.0 * (-1.0 / (nf - 1.0)).acos() / PI
}

/// Fraction of points misassigned under the best label permutation, by
/// trying all `k!` permutations.
pub fn brute_force_cost(pred: &[usize], truth: &[usize], k: usize) -> f64 {
    assert_eq!(pred.len(), truth.len());
    let mut perm: Vec<usize> = (0..k).collect();
    let mut best = usize::MAX;
    loop {
        let wrong = pred.iter().zip(truth).filter(|&(&p, &t)| perm[p] != t).count();
        best = best.min(wrong);
        if !next_permutation(&mut perm) {
            break;
        }
    }
    best as f64 / pred.len() as f64
}

fn next_permutation(p: &mut [usize]) -> bool {
    let Some(i) = (1..p.len()).rev().find(|&i| p[i - 1] < p[i]) else {
        return false;
    };
    let j = (i..p.len()).rev().find(|&j| p[j] > p[i - 1]).expect("pivot exists");
    p.swap(i - 1, j);
    p[i..].reverse();
    true
}

/// Euclidean distance matrix.
pub fn distance_matrix(points: &[Vec<f64>]) -> Vec<Vec<f64>> {
    points
        .iter()
        .map(|a| points.iter().map(|b| a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum::<f64>().sqrt()).collect())
        .collect()
}

/// Smallest possible largest edge over all simple paths from `i` to `j` in
/// the complete graph with weights `d`, by depth-first enumeration.
pub fn all_paths_minmax(d: &[Vec<f64>], i: usize, j: usize) -> f64 {
    fn walk(d: &[Vec<f64>], at: usize, to: usize, seen: &mut Vec<bool>, worst: f64, best: &mut f64) {
        if at == to {
            *best = best.min(worst);
            return;
        }
        for next in 0..d.len() {
            if !seen[next] {
                seen[next] = true;
                walk(d, next, to, seen, worst.max(d[at][next]), best);
                seen[next] = false;
            }
        }
    }
    if i == j {
        return 0.0;
    }
    let mut seen = vec![false; d.len()];
    seen[i] = true;
    let mut best = f64::INFINITY;
    walk(d, i, j, &mut seen, 0.0, &mut best);
    best
}

/// Distance-threshold components: `x` and `y` together iff connected by
/// edges of length `<= thr`.
pub fn threshold_components(d: &[Vec<f64>], thr: f64) -> Vec<usize> {
    let n = d.len();
    let mut comp = vec![usize::MAX; n];
    for s in 0..n {
        if comp[s] != usize::MAX {
            continue;
        }
        comp[s] = s;
        let mut stack = vec![s];
        while let Some(u) = stack.pop() {
            for v in 0..n {
                if comp[v] == usize::MAX && d[u][v] <= thr {
                    comp[v] = s;
                    stack.push(v);
                }
            }
        }
    }
    comp
}

/// `max_{Q, x} n f(d(x,Q)) / sum_y f(d(y,Q))` over all center sets of size
/// `1..=k`, with `f` given directly as a function of `(z, z_max)`.
pub fn brute_force_zeta(d: &[Vec<f64>], k: usize, f: impl Fn(f64, f64) -> f64) -> f64 {
    let n = d.len();
    let mut best = 0.0f64;
    for mask in 1u32..(1 << n) {
        if mask.count_ones() as usize > k {
            continue;
        }
        let dist: Vec<f64> = (0..n)
            .map(|x| (0..n).filter(|&q| (mask >> q) & 1 == 1).map(|q| d[x][q]).fold(f64::INFINITY, f64::min))
            .collect();
        let z_max = dist.iter().copied().fold(0.0, f64::max);
        let w: Vec<f64> = dist.iter().map(|&z| f(z, z_max)).collect();
        let total: f64 = w.iter().sum();
        if total > 0.0 {
            let top = w.iter().copied().fold(0.0, f64::max);
            best = best.max(n as f64 * top / total);
        }
    }
    best
}

/// Number of ways `draws` labelled draws cover exactly `size` given items.
pub fn surjections(draws: u32, size: u32) -> f64 {
    // inclusion-exclusion: sum_j (-1)^j C(size, j) (size - j)^draws
    (0..=size)
        .map(|j| {
            let sign = if j % 2 == 0 { 1.0 } else { -1.0 };
            sign * binomial(size, j) * f64::from(size - j).powi(draws as i32)
        })
        .sum()
}

pub fn binomial(n: u32, k: u32) -> f64 {
    (0..k).fold(1.0, |acc, i| acc * f64::from(n - i) / f64::from(i + 1))
}

/// Probability that `draws` uniform draws with replacement from `n` items
/// hit exactly a given set of `size` items.
pub fn exact_support_probability(n: u32, draws: u32, size: u32) -> f64 {
    surjections(draws, size) / f64::from(n).powi(draws as i32)
}

/// Mean and standard error of the mean.
pub fn mean_se(xs: &[f64]) -> (f64, f64) {
    let n = xs.len() as f64;
    let mean = xs.iter().sum::<f64>() / n;
    if xs.len() < 2 {
        return (mean, 0.0);
    }
    let var = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0);
    (mean, (var / n).sqrt())
}
