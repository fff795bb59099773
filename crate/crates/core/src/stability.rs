//! Stability parameters: the seeding smoothness `zeta_{k,f}` and the
//! single-linkage separation `zeta_{k,SL}`.

use rand::seq::index;
use rand::Rng;

use crate::centers::SelectionFn;
use crate::error::{invalid, Result};
use crate::instance::ClusteringInstance;
use crate::oracle::DistanceOracle;
use crate::rng::RandomStream;
use crate::single_linkage::single_linkage;

#[derive(Debug, Clone, PartialEq)]
pub enum Witness {
    /// Maximizing center set `q` and point `x`.
    Centers { q: Vec<usize>, x: usize },
    /// Closest pair of clusters `(i, j)` and the widest cluster `t`.
    Clusters { i: usize, j: usize, t: usize },
}

#[derive(Debug, Clone, PartialEq)]
pub struct ZetaReport {
    pub value: f64,
    /// True when every candidate was enumerated.
    pub exact: bool,
    pub witness: Witness,
}

/// `max_{Q, x} n f(d(x, Q)) / sum_y f(d(y, Q))` over center sets of size
/// `1..=k`. Enumerates exactly when there are at most `budget` sets;
/// otherwise samples `budget` random sets and hill-climbs from the best by
/// single-element swaps, which gives a lower bound.
pub fn zeta_kf(
    x: &ClusteringInstance,
    k: usize,
    f: SelectionFn,
    budget: usize,
    stream: &mut RandomStream,
) -> Result<ZetaReport> {
    let n = x.n();
    if k == 0 {
        return Err(invalid("k must be >= 1"));
    }
    let k = k.min(n);
    let eval = Evaluator::new(x, f);
    let mut best: Option<(f64, Vec<usize>, usize)> = None;
    let consider = |q: &[usize], best: &mut Option<(f64, Vec<usize>, usize)>| {
        if let Some((v, arg)) = eval.ratio(q) {
            if best.as_ref().is_none_or(|b| v > b.0) {
                *best = Some((v, q.to_vec(), arg));
            }
        }
    };

    let exact = count_sets(n, k).is_some_and(|c| c <= budget as u128);
    if exact {
        for size in 1..=k {
            let mut q: Vec<usize> = (0..size).collect();
            loop {
                consider(&q, &mut best);
                if !next_combination(&mut q, n) {
                    break;
                }
            }
        }
    } else {
        for _ in 0..budget.max(1) {
            let size = stream.random_range(1..=k);
            let q = index::sample(stream, n, size).into_vec();
            consider(&q, &mut best);
        }
        // every sample may have covered all mass; singletons are zero only
        // when all points coincide
        if best.is_none() {
            for i in 0..n {
                consider(&[i], &mut best);
            }
        }
        // hill-climb from the best sample
        if let Some((mut val, mut q, mut arg)) = best.clone() {
            let mut improved = true;
            while improved {
                improved = false;
                for pos in 0..q.len() {
                    for cand in 0..n {
                        if q.contains(&cand) {
                            continue;
                        }
                        let old = std::mem::replace(&mut q[pos], cand);
                        match eval.ratio(&q) {
                            Some((v, a)) if v > val => {
                                val = v;
                                arg = a;
                                improved = true;
                            }
                            _ => q[pos] = old,
                        }
                    }
                }
            }
            best = Some((val, q, arg));
        }
    }

    let (value, q, x_arg) = best.ok_or_else(|| invalid("selection function is zero on every candidate set"))?;
    Ok(ZetaReport { value, exact, witness: Witness::Centers { q, x: x_arg } })
}

struct Evaluator {
    n: usize,
    d: Vec<f64>,
    r: f64,
    f: SelectionFn,
}

impl Evaluator {
    fn new(x: &ClusteringInstance, f: SelectionFn) -> Self {
        let n = x.n();
        let mut d = vec![0.0; n * n];
        for i in 0..n {
            for j in (i + 1)..n {
                let v = x.raw_distance(i, j);
                d[i * n + j] = v;
                d[j * n + i] = v;
            }
        }
        Self { n, d, r: x.diameter(), f }
    }

    /// Best ratio for center set `q` and its maximizing point, or `None`
    /// when every weight is zero.
    fn ratio(&self, q: &[usize]) -> Option<(f64, usize)> {
        let n = self.n;
        let dc: Vec<f64> = (0..n)
            .map(|y| q.iter().map(|&c| self.d[y * n + c]).fold(f64::INFINITY, f64::min))
            .collect();
        let w = self.f.weights(&dc, self.r);
        let total: f64 = w.iter().sum();
        if !(total > 0.0) {
            return None;
        }
        let mut arg = 0;
        for (i, &wi) in w.iter().enumerate() {
            if wi > w[arg] {
                arg = i;
            }
        }
        Some((n as f64 * w[arg] / total, arg))
    }
}

/// `sum_{j=1..k} C(n, j)`, or `None` on overflow.
fn count_sets(n: usize, k: usize) -> Option<u128> {
    let mut total: u128 = 0;
    let mut c: u128 = 1;
    for j in 1..=k {
        c = c.checked_mul((n - j + 1) as u128)? / j as u128;
        total = total.checked_add(c)?;
    }
    Some(total)
}

/// Advances `q` to the next increasing `|q|`-subset of `0..n`.
fn next_combination(q: &mut [usize], n: usize) -> bool {
    let k = q.len();
    for i in (0..k).rev() {
        if q[i] < n - k + i {
            q[i] += 1;
            for j in (i + 1)..k {
                q[j] = q[j - 1] + 1;
            }
            return true;
        }
    }
    false
}

/// `n / ceil((min_{i<j} d_B(C_i u C_j) - max_t d_B(C_t)) / max_t d_B(C_t))`
/// for the single-linkage `k`-clustering. A zero within-cluster bottleneck
/// gives the smallest positive float; a ceiling below 1 (which only happens
/// when the snapshot splits a round of equal merges) is raised to 1.
pub fn zeta_sl(oracle: &DistanceOracle, k: usize) -> Result<ZetaReport> {
    let n = oracle.n();
    if k < 2 || k > n {
        return Err(invalid(format!("k must be in 2..={n}, got {k}")));
    }
    let (c, trace) = single_linkage(oracle, k)?;
    let mm = trace.minmax();
    let clusters = c.clusters();

    let mut t_arg = 0;
    let mut within = vec![0.0; k];
    for (t, ct) in clusters.iter().enumerate() {
        within[t] = mm.bottleneck(ct)?;
        if within[t] > within[t_arg] {
            t_arg = t;
        }
    }
    let max_within = within[t_arg];

    let mut pair = (0, 1);
    let mut min_between = f64::INFINITY;
    for i in 0..k {
        for j in (i + 1)..k {
            let mut cross = 0.0f64;
            for &a in &clusters[i] {
                for &b in &clusters[j] {
                    cross = cross.max(mm.get(a, b)?);
                }
            }
            let union = cross.max(within[i]).max(within[j]);
            if union < min_between {
                min_between = union;
                pair = (i, j);
            }
        }
    }

    let value = if max_within == 0.0 {
        f64::MIN_POSITIVE
    } else {
        let steps = ((min_between - max_within) / max_within).ceil().max(1.0);
        n as f64 / steps
    };
    Ok(ZetaReport { value, exact: true, witness: Witness::Clusters { i: pair.0, j: pair.1, t: t_arg } })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn line(xs: &[f64]) -> ClusteringInstance {
        ClusteringInstance::from_scalars(xs).unwrap()
    }

    #[test]
    fn uniform_is_one() {
        let x = line(&[0.0, 3.0, 4.0, 9.0]);
        for k in 1..=3 {
            let z = zeta_kf(&x, k, SelectionFn::Uniform, 1000, &mut RandomStream::new(0, 0)).unwrap();
            assert_eq!(z.value, 1.0);
            assert!(z.exact);
        }
    }

    #[test]
    fn kmeanspp_two_points() {
        let x = line(&[0.0, 1.0]);
        let z = zeta_kf(&x, 1, SelectionFn::KMeansPP, 1000, &mut RandomStream::new(0, 0)).unwrap();
        assert_eq!(z.value, 2.0);
    }

    #[test]
    fn all_zero_is_an_error() {
        let x = line(&[2.0, 2.0]);
        assert!(zeta_kf(&x, 1, SelectionFn::KMeansPP, 1000, &mut RandomStream::new(0, 0)).is_err());
    }

    #[test]
    fn softmax_outlier_lower_bound() {
        let beta = 2.0;
        let mut xs = vec![0.0; 9];
        xs.push(1.0);
        let x = line(&xs);
        let z = zeta_kf(&x, 1, SelectionFn::softmax(beta).unwrap(), 1000, &mut RandomStream::new(0, 0)).unwrap();
        assert!(z.value >= beta.exp() / 2.0);
        assert!(z.value <= (2.0 * beta).exp());
    }

    #[test]
    fn monte_carlo_never_exceeds_exact() {
        let xs: Vec<f64> = (0..12).map(|i| f64::from(i * i % 7) + 0.1 * f64::from(i)).collect();
        let x = line(&xs);
        let f = SelectionFn::KMeansPP;
        let exact = zeta_kf(&x, 2, f, 1_000_000, &mut RandomStream::new(0, 0)).unwrap();
        let mc = zeta_kf(&x, 2, f, 5, &mut RandomStream::new(1, 0)).unwrap();
        assert!(exact.exact && !mc.exact);
        assert!(mc.value <= exact.value + 1e-12);
    }

    #[test]
    fn combinations_enumerate_all() {
        let mut q = vec![0, 1];
        let mut count = 1;
        while next_combination(&mut q, 5) {
            count += 1;
        }
        assert_eq!(count, 10);
        assert_eq!(count_sets(5, 2), Some(15));
    }

    #[test]
    fn zeta_sl_examples() {
        let x = line(&[0.0, 1.0, 2.0, 10.0, 11.0, 12.0]);
        let z = zeta_sl(&DistanceOracle::new(&x), 2).unwrap();
        assert_eq!(z.value, 6.0 / 7.0);
        let bridge = line(&[0.0, 0.0, 0.0, 1.0, 2.0, 2.0, 2.0, 3.5, 3.5, 3.5]);
        assert_eq!(zeta_sl(&DistanceOracle::new(&bridge), 2).unwrap().value, 10.0);
        let pairs = line(&[0.0, 0.0, 5.0, 5.0]);
        assert_eq!(zeta_sl(&DistanceOracle::new(&pairs), 2).unwrap().value, f64::MIN_POSITIVE);
        assert!(zeta_sl(&DistanceOracle::new(&pairs), 1).is_err());
    }
}
