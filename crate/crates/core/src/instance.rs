//! Point sets and clusterings.

use std::sync::OnceLock;

use crate::error::{invalid, Error, Result};

/// A finite point set in R^d.
#[derive(Debug, Clone)]
pub struct ClusteringInstance {
    points: Vec<Vec<f64>>,
    dim: usize,
    diameter: OnceLock<f64>,
}

impl ClusteringInstance {
    pub fn new(points: Vec<Vec<f64>>) -> Result<Self> {
        let first = points.first().ok_or_else(|| invalid("instance needs at least one point"))?;
        let dim = first.len();
        if dim == 0 {
            return Err(invalid("points must have dimension >= 1"));
        }
        for p in &points {
            if p.len() != dim {
                return Err(Error::DimensionMismatch { expected: dim, found: p.len() });
            }
            if p.iter().any(|c| !c.is_finite()) {
                return Err(invalid("point coordinates must be finite"));
            }
        }
        Ok(Self { points, dim, diameter: OnceLock::new() })
    }

    /// One-dimensional instance from scalar coordinates.
    pub fn from_scalars(xs: &[f64]) -> Result<Self> {
        Self::new(xs.iter().map(|&x| vec![x]).collect())
    }

    pub fn n(&self) -> usize {
        self.points.len()
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn point(&self, i: usize) -> &[f64] {
        &self.points[i]
    }

    pub fn points(&self) -> &[Vec<f64>] {
        &self.points
    }

    /// Euclidean distance without any query accounting. Algorithms should go
    /// through [`DistanceOracle`](crate::oracle::DistanceOracle) instead.
    pub fn raw_distance(&self, i: usize, j: usize) -> f64 {
        euclidean(&self.points[i], &self.points[j])
    }

    /// Maximum pairwise distance, computed once.
    pub fn diameter(&self) -> f64 {
        *self.diameter.get_or_init(|| {
            let n = self.n();
            let mut best = 0.0_f64;
            for i in 0..n {
                for j in (i + 1)..n {
                    best = best.max(self.raw_distance(i, j));
                }
            }
            best
        })
    }

    /// New instance holding the listed points (repeats allowed).
    pub fn select(&self, indices: &[usize]) -> Result<Self> {
        let mut pts = Vec::with_capacity(indices.len());
        for &i in indices {
            if i >= self.n() {
                return Err(Error::IndexOutOfRange { index: i, len: self.n() });
            }
            pts.push(self.points[i].clone());
        }
        Self::new(pts)
    }
}

pub(crate) fn euclidean(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum::<f64>().sqrt()
}

/// A k-clustering of a multiset of point indices.
///
/// `members[p]` is a point index of the backing instance and `labels[p]` its
/// cluster id in `0..k`. The same index may appear more than once when the
/// clustering was computed on a sample drawn with replacement.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Clustering {
    members: Vec<usize>,
    labels: Vec<usize>,
    k: usize,
}

impl Clustering {
    pub fn new(members: Vec<usize>, labels: Vec<usize>, k: usize) -> Result<Self> {
        if members.len() != labels.len() {
            return Err(Error::DimensionMismatch { expected: members.len(), found: labels.len() });
        }
        if k == 0 {
            return Err(invalid("k must be >= 1"));
        }
        if let Some(&bad) = labels.iter().find(|&&l| l >= k) {
            return Err(invalid(format!("cluster id {bad} not in 0..{k}")));
        }
        Ok(Self { members, labels, k })
    }

    /// Clustering over `0..labels.len()`.
    pub fn from_labels(labels: Vec<usize>, k: usize) -> Result<Self> {
        Self::new((0..labels.len()).collect(), labels, k)
    }

    pub fn members(&self) -> &[usize] {
        &self.members
    }

    pub fn labels(&self) -> &[usize] {
        &self.labels
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn cluster_sizes(&self) -> Vec<usize> {
        let mut sizes = vec![0; self.k];
        for &l in &self.labels {
            sizes[l] += 1;
        }
        sizes
    }

    /// Member indices grouped by cluster id.
    pub fn clusters(&self) -> Vec<Vec<usize>> {
        let mut out = vec![Vec::new(); self.k];
        for (&m, &l) in self.members.iter().zip(&self.labels) {
            out[l].push(m);
        }
        out
    }

    /// Restriction to the positions in `positions`.
    pub fn restrict(&self, positions: &[usize]) -> Result<Self> {
        let mut members = Vec::with_capacity(positions.len());
        let mut labels = Vec::with_capacity(positions.len());
        for &p in positions {
            if p >= self.len() {
                return Err(Error::IndexOutOfRange { index: p, len: self.len() });
            }
            members.push(self.members[p]);
            labels.push(self.labels[p]);
        }
        Self::new(members, labels, self.k)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_ragged_points() {
        let err = ClusteringInstance::new(vec![vec![0.0, 1.0], vec![2.0]]).unwrap_err();
        assert!(matches!(err, Error::DimensionMismatch { expected: 2, found: 1 }));
        assert!(ClusteringInstance::new(vec![]).is_err());
    }

    #[test]
    fn diameter_of_line() {
        let x = ClusteringInstance::from_scalars(&[0.0, 1.0, 10.0]).unwrap();
        assert_eq!(x.diameter(), 10.0);
        let single = ClusteringInstance::from_scalars(&[3.0]).unwrap();
        assert_eq!(single.diameter(), 0.0);
    }

    #[test]
    fn clustering_validates_labels() {
        assert!(Clustering::from_labels(vec![0, 2], 2).is_err());
        let c = Clustering::from_labels(vec![0, 1, 1], 3).unwrap();
        assert_eq!(c.cluster_sizes(), vec![1, 2, 0]);
        assert_eq!(c.clusters()[1], vec![1, 2]);
    }
}
