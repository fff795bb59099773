//! Metered access to distances and ground-truth labels.
//!
//! Counters are atomic so a single oracle can be shared across concurrent
//! trials; per-trial accounting is done by giving each trial its own oracle
//! and summing afterwards.

use std::sync::atomic::{AtomicU64, Ordering};

use crate::error::{invalid, Error, Result};
use crate::instance::ClusteringInstance;

const EMPTY: u64 = u64::MAX;

/// Euclidean distance oracle over a [`ClusteringInstance`].
///
/// Without a cache every call counts as one query. With the cache enabled
/// each unordered pair is counted the first time it is evaluated.
#[derive(Debug)]
pub struct DistanceOracle<'a> {
    instance: &'a ClusteringInstance,
    cache: Option<Vec<AtomicU64>>,
    queries: AtomicU64,
}

impl<'a> DistanceOracle<'a> {
    pub fn new(instance: &'a ClusteringInstance) -> Self {
        Self { instance, cache: None, queries: AtomicU64::new(0) }
    }

    /// Oracle with a pairwise cache of n(n+1)/2 slots.
    pub fn with_cache(instance: &'a ClusteringInstance) -> Self {
        let n = instance.n();
        let cache = (0..n * (n + 1) / 2).map(|_| AtomicU64::new(EMPTY)).collect();
        Self { instance, cache: Some(cache), queries: AtomicU64::new(0) }
    }

    pub fn instance(&self) -> &'a ClusteringInstance {
        self.instance
    }

    pub fn n(&self) -> usize {
        self.instance.n()
    }

    pub fn distance(&self, i: usize, j: usize) -> Result<f64> {
        let n = self.n();
        for idx in [i, j] {
            if idx >= n {
                return Err(Error::IndexOutOfRange { index: idx, len: n });
            }
        }
        Ok(self.distance_unchecked(i, j))
    }

    /// Like [`distance`](Self::distance) for indices already known valid.
    pub(crate) fn distance_unchecked(&self, i: usize, j: usize) -> f64 {
        match &self.cache {
            None => {
                self.queries.fetch_add(1, Ordering::Relaxed);
                self.instance.raw_distance(i, j)
            }
            Some(cache) => {
                let (a, b) = if i <= j { (i, j) } else { (j, i) };
                let slot = &cache[b * (b + 1) / 2 + a];
                let bits = slot.load(Ordering::Relaxed);
                if bits != EMPTY {
                    return f64::from_bits(bits);
                }
                let d = self.instance.raw_distance(a, b);
                if slot
                    .compare_exchange(EMPTY, d.to_bits(), Ordering::Relaxed, Ordering::Relaxed)
                    .is_ok()
                {
                    self.queries.fetch_add(1, Ordering::Relaxed);
                }
                d
            }
        }
    }

    pub fn query_count(&self) -> u64 {
        self.queries.load(Ordering::Relaxed)
    }

    /// `min_c d(i, c)` over `centers`, or +inf when `centers` is empty.
    pub(crate) fn distance_to_set(&self, i: usize, centers: &[usize]) -> f64 {
        centers
            .iter()
            .map(|&c| self.distance_unchecked(i, c))
            .fold(f64::INFINITY, f64::min)
    }
}

/// Hidden ground-truth labels, revealed one metered query at a time.
#[derive(Debug)]
pub struct GroundTruthOracle {
    labels: Vec<usize>,
    k: usize,
    budget: Option<u64>,
    queries: AtomicU64,
}

impl GroundTruthOracle {
    pub fn new(labels: Vec<usize>, k: usize) -> Result<Self> {
        if k == 0 {
            return Err(invalid("ground truth needs k >= 1"));
        }
        if let Some(&bad) = labels.iter().find(|&&l| l >= k) {
            return Err(invalid(format!("ground-truth label {bad} not in 0..{k}")));
        }
        Ok(Self { labels, k, budget: None, queries: AtomicU64::new(0) })
    }

    /// Labels with `k` inferred as `max + 1`.
    pub fn from_labels(labels: Vec<usize>) -> Result<Self> {
        let k = labels.iter().copied().max().map_or(0, |m| m + 1);
        Self::new(labels, k)
    }

    pub fn with_budget(mut self, budget: u64) -> Self {
        self.budget = Some(budget);
        self
    }

    /// Fresh oracle over the same labels with a zeroed counter.
    pub fn fresh(&self) -> Self {
        Self { labels: self.labels.clone(), k: self.k, budget: self.budget, queries: AtomicU64::new(0) }
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn n(&self) -> usize {
        self.labels.len()
    }

    pub fn label(&self, i: usize) -> Result<usize> {
        if i >= self.labels.len() {
            return Err(Error::IndexOutOfRange { index: i, len: self.labels.len() });
        }
        match self.budget {
            None => {
                self.queries.fetch_add(1, Ordering::Relaxed);
            }
            Some(budget) => {
                self.queries
                    .fetch_update(Ordering::Relaxed, Ordering::Relaxed, |q| (q < budget).then_some(q + 1))
                    .map_err(|_| Error::BudgetExceeded { budget })?;
            }
        }
        Ok(self.labels[i])
    }

    pub fn query_count(&self) -> u64 {
        self.queries.load(Ordering::Relaxed)
    }

    /// Unmetered view of all labels, for writing instance files and for
    /// evaluation harnesses that sit outside the algorithms being measured.
    pub fn reveal(&self) -> &[usize] {
        &self.labels
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn distance_examples() {
        let x = ClusteringInstance::new(vec![vec![0.0, 0.0], vec![3.0, 4.0]]).unwrap();
        let d = DistanceOracle::new(&x);
        assert_eq!(d.distance(0, 0).unwrap(), 0.0);
        assert_eq!(d.distance(0, 1).unwrap(), 5.0);
        assert!(matches!(d.distance(0, 2), Err(Error::IndexOutOfRange { index: 2, len: 2 })));

        let line = ClusteringInstance::from_scalars(&[0.0, 1.0]).unwrap();
        assert_eq!(DistanceOracle::new(&line).distance(0, 1).unwrap(), 1.0);
    }

    #[test]
    fn cache_counts_each_pair_once() {
        let x = ClusteringInstance::from_scalars(&[0.0, 1.0, 5.0]).unwrap();
        let cached = DistanceOracle::with_cache(&x);
        let plain = DistanceOracle::new(&x);
        for _ in 0..3 {
            for (i, j) in [(0, 1), (1, 0), (2, 1)] {
                assert_eq!(cached.distance(i, j).unwrap(), plain.distance(i, j).unwrap());
            }
        }
        assert_eq!(cached.query_count(), 2);
        assert_eq!(plain.query_count(), 9);
    }

    #[test]
    fn ground_truth_lookup_and_counting() {
        let g = GroundTruthOracle::new(vec![0, 0, 1], 2).unwrap();
        assert_eq!(g.query_count(), 0);
        assert_eq!(g.label(2).unwrap(), 1);
        assert_eq!(g.label(0).unwrap(), 0);
        assert_eq!(g.query_count(), 2);
        assert!(g.label(3).is_err());
    }

    #[test]
    fn zero_budget_rejects_any_query() {
        let g = GroundTruthOracle::new(vec![0, 1], 2).unwrap().with_budget(0);
        assert!(matches!(g.label(0), Err(Error::BudgetExceeded { budget: 0 })));
        let g = GroundTruthOracle::new(vec![0, 1], 2).unwrap().with_budget(1);
        assert!(g.label(0).is_ok());
        assert!(g.label(1).is_err());
        assert_eq!(g.query_count(), 1);
    }
}
