//! Center-based seeding (exact and MCMC-approximate), Voronoi assignment and
//! the permutation-minimized clustering cost.

use rand::seq::index;
use rand::Rng;

use crate::assignment::min_cost_assignment;
use crate::error::{invalid, Error, Result};
use crate::instance::Clustering;
use crate::oracle::{DistanceOracle, GroundTruthOracle};
use crate::rng::RandomStream;

/// Selection weight `f(z)` applied to a point's distance `z` from the
/// current centers.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SelectionFn {
    /// `z^2`
    KMeansPP,
    /// `exp(beta z / R)`, `R` the instance diameter
    Softmax { beta: f64 },
    /// indicator of the farthest point
    Gonzalez,
    /// constant 1
    Uniform,
}

impl SelectionFn {
    pub fn softmax(beta: f64) -> Result<Self> {
        if !(beta > 0.0 && beta.is_finite()) {
            return Err(invalid(format!("softmax beta must be positive, got {beta}")));
        }
        Ok(Self::Softmax { beta })
    }

    /// Parses `kmeanspp`, `softmax`, `gonzalez` or `uniform`; `beta` is used
    /// by softmax only.
    pub fn parse(name: &str, beta: f64) -> Result<Self> {
        match name {
            "kmeanspp" => Ok(Self::KMeansPP),
            "softmax" => Self::softmax(beta),
            "gonzalez" => Ok(Self::Gonzalez),
            "uniform" => Ok(Self::Uniform),
            other => Err(invalid(format!("unknown selection function '{other}'"))),
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Self::KMeansPP => "kmeanspp",
            Self::Softmax { .. } => "softmax",
            Self::Gonzalez => "gonzalez",
            Self::Uniform => "uniform",
        }
    }

    /// `f(z)` given the diameter `r` and the current largest distance `z_max`
    /// (the latter only matters for Gonzalez).
    pub fn eval(&self, z: f64, r: f64, z_max: f64) -> f64 {
        match *self {
            Self::KMeansPP => z * z,
            Self::Softmax { beta } => (beta * scaled(z, r)).exp(),
            Self::Gonzalez => f64::from(u8::from(z >= z_max)),
            Self::Uniform => 1.0,
        }
    }

    /// Weights proportional to `f` over `ds`. Softmax is shifted by the
    /// largest distance so it cannot overflow.
    pub fn weights(&self, ds: &[f64], r: f64) -> Vec<f64> {
        let z_max = ds.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        match *self {
            Self::Softmax { beta } => ds.iter().map(|&z| (beta * (scaled(z, r) - scaled(z_max, r))).exp()).collect(),
            _ => ds.iter().map(|&z| self.eval(z, r, z_max)).collect(),
        }
    }

    /// `f(d_y) / f(d_x)`, with `+inf` when only the denominator vanishes and
    /// 0 when both do.
    fn acceptance_ratio(&self, dx: f64, dy: f64, r: f64, z_max: f64) -> f64 {
        match *self {
            Self::Uniform => 1.0,
            Self::Softmax { beta } => (beta * (scaled(dy, r) - scaled(dx, r))).exp(),
            _ => {
                let (fx, fy) = (self.eval(dx, r, z_max), self.eval(dy, r, z_max));
                if fx > 0.0 {
                    fy / fx
                } else if fy > 0.0 {
                    f64::INFINITY
                } else {
                    0.0
                }
            }
        }
    }
}

fn scaled(z: f64, r: f64) -> f64 {
    if r > 0.0 { z / r } else { 0.0 }
}

/// Chosen centers in selection order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Centers(Vec<usize>);

impl Centers {
    pub fn new(indices: Vec<usize>) -> Result<Self> {
        if indices.is_empty() {
            return Err(invalid("need at least one center"));
        }
        Ok(Self(indices))
    }

    pub fn indices(&self) -> &[usize] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

fn check_k(k: usize, n: usize) -> Result<()> {
    if k == 0 || k > n {
        return Err(invalid(format!("k must be in 1..={n}, got {k}")));
    }
    Ok(())
}

/// Seeds `k` centers over the whole instance: the first uniformly, each next
/// one with probability proportional to `f(d(y, C))`. Gonzalez takes the
/// farthest point (lowest index on ties). Uses O(nk) distance queries.
pub fn generic_seeding(
    oracle: &DistanceOracle,
    k: usize,
    f: SelectionFn,
    stream: &mut RandomStream,
) -> Result<Centers> {
    let n = oracle.n();
    check_k(k, n)?;
    let r = oracle.instance().diameter();
    let mut centers = vec![stream.random_range(0..n)];
    let mut is_center = vec![false; n];
    is_center[centers[0]] = true;
    let mut d: Vec<f64> = (0..n).map(|x| oracle.distance_unchecked(x, centers[0])).collect();
    for _ in 1..k {
        let next = if f == SelectionFn::Gonzalez {
            let mut best = 0;
            for x in 1..n {
                if d[x] > d[best] {
                    best = x;
                }
            }
            best
        } else {
            let w = f.weights(&d, r);
            sample_proportional(&w, stream)
                .unwrap_or_else(|| uniform_outside(&is_center, stream))
        };
        centers.push(next);
        is_center[next] = true;
        for (x, dx) in d.iter_mut().enumerate() {
            *dx = dx.min(oracle.distance_unchecked(x, next));
        }
    }
    Centers::new(centers)
}

/// Index drawn with probability `w[i] / sum(w)`, or `None` if the weights
/// carry no mass.
fn sample_proportional(w: &[f64], stream: &mut RandomStream) -> Option<usize> {
    let total: f64 = w.iter().sum();
    if !(total > 0.0 && total.is_finite()) {
        return None;
    }
    let u = stream.random::<f64>() * total;
    let mut acc = 0.0;
    let mut last = None;
    for (i, &wi) in w.iter().enumerate() {
        if wi > 0.0 {
            acc += wi;
            last = Some(i);
            if u < acc {
                return Some(i);
            }
        }
    }
    last
}

fn uniform_outside(is_center: &[bool], stream: &mut RandomStream) -> usize {
    let free: Vec<usize> = (0..is_center.len()).filter(|&i| !is_center[i]).collect();
    if free.is_empty() {
        stream.random_range(0..is_center.len())
    } else {
        free[stream.random_range(0..free.len())]
    }
}

/// MCMC approximation of [`generic_seeding`] on a sample of `m * k` point
/// indices (drawn by the caller). Each center after the first is the end
/// state of an `m`-step independence chain walking the sample in order.
/// Uses O(m k^2) distance queries.
pub fn approx_seeding(
    oracle: &DistanceOracle,
    sample: &[usize],
    k: usize,
    m: usize,
    f: SelectionFn,
    stream: &mut RandomStream,
) -> Result<Centers> {
    if k == 0 || m == 0 {
        return Err(invalid("k and m must be positive"));
    }
    if sample.len() < m * k {
        return Err(invalid(format!("sample has {} points, need m*k = {}", sample.len(), m * k)));
    }
    if let Some(&bad) = sample.iter().find(|&&s| s >= oracle.n()) {
        return Err(Error::IndexOutOfRange { index: bad, len: oracle.n() });
    }
    let r = oracle.instance().diameter();
    let mut centers = vec![sample[stream.random_range(0..sample.len())]];
    // Gonzalez needs the farthest sample point from the current centers
    let mut far: Vec<f64> = if f == SelectionFn::Gonzalez {
        sample.iter().map(|&s| oracle.distance_unchecked(s, centers[0])).collect()
    } else {
        Vec::new()
    };
    let mut ell = 0;
    for _ in 1..k {
        let z_max = far.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        let mut x = sample[ell];
        let mut dx = oracle.distance_to_set(x, &centers);
        ell += 1;
        for _ in 1..m {
            let y = sample[ell];
            let dy = oracle.distance_to_set(y, &centers);
            ell += 1;
            let z: f64 = stream.random();
            if f.acceptance_ratio(dx, dy, r, z_max) > z {
                x = y;
                dx = dy;
            }
        }
        centers.push(x);
        for (fs, &s) in far.iter_mut().zip(sample) {
            *fs = fs.min(oracle.distance_unchecked(s, x));
        }
    }
    Centers::new(centers)
}

/// Assigns each of `points` to its nearest center (lowest center position on
/// ties). Cluster `j` is the cell of `centers[j]`.
pub fn voronoi_assign(oracle: &DistanceOracle, points: &[usize], centers: &Centers) -> Result<Clustering> {
    let n = oracle.n();
    for &i in points.iter().chain(centers.indices()) {
        if i >= n {
            return Err(Error::IndexOutOfRange { index: i, len: n });
        }
    }
    let labels = points
        .iter()
        .map(|&x| {
            let mut best = (f64::INFINITY, 0);
            for (j, &c) in centers.indices().iter().enumerate() {
                let d = oracle.distance_unchecked(x, c);
                if d < best.0 {
                    best = (d, j);
                }
            }
            best.1
        })
        .collect();
    Clustering::new(points.to_vec(), labels, centers.len())
}

/// Voronoi partition of the whole instance.
pub fn voronoi_partition(oracle: &DistanceOracle, centers: &Centers) -> Result<Clustering> {
    let all: Vec<usize> = (0..oracle.n()).collect();
    voronoi_assign(oracle, &all, centers)
}

/// `max_x min_c d(x, c)` over the whole instance.
pub fn k_centers_objective(oracle: &DistanceOracle, centers: &Centers) -> Result<f64> {
    if let Some(&bad) = centers.indices().iter().find(|&&c| c >= oracle.n()) {
        return Err(Error::IndexOutOfRange { index: bad, len: oracle.n() });
    }
    Ok((0..oracle.n())
        .map(|x| oracle.distance_to_set(x, centers.indices()))
        .fold(0.0, f64::max))
}

/// Fraction of mismatches between `predicted` and `truth` labels, minimized
/// over relabelings of the predicted clusters.
pub fn mismatch_rate(predicted: &[usize], truth: &[usize], k: usize) -> f64 {
    if predicted.is_empty() {
        return 0.0;
    }
    let mut agree = vec![vec![0.0; k]; k];
    for (&p, &t) in predicted.iter().zip(truth) {
        agree[p][t] += 1.0;
    }
    let neg: Vec<Vec<f64>> = agree.iter().map(|row| row.iter().map(|a| -a).collect()).collect();
    let (_, best) = min_cost_assignment(&neg);
    let n = predicted.len() as f64;
    (n + best) / n
}

/// Permutation-minimized misclassification rate of `c` against the oracle's
/// labels. Queries the oracle once per member.
pub fn clustering_cost(c: &Clustering, oracle: &GroundTruthOracle) -> Result<f64> {
    if c.k() != oracle.k() {
        return Err(invalid(format!("clustering has k = {}, oracle has k = {}", c.k(), oracle.k())));
    }
    let truth = c.members().iter().map(|&i| oracle.label(i)).collect::<Result<Vec<_>>>()?;
    Ok(mismatch_rate(c.labels(), &truth, c.k()))
}

/// Number of ground-truth queries used by [`estimate_cost_sampled`]:
/// `ceil(constant * k * eps^-2 * ln(1/delta))`.
pub fn cost_sample_size(k: usize, eps: f64, delta: f64, constant: f64) -> Result<usize> {
    if !(eps > 0.0 && eps < 1.0 && delta > 0.0 && delta < 1.0) {
        return Err(invalid("eps and delta must lie in (0, 1)"));
    }
    if !(constant > 0.0) {
        return Err(invalid("sample-size constant must be positive"));
    }
    Ok((constant * k as f64 * (1.0 / delta).ln() / (eps * eps)).ceil() as usize)
}

/// Estimates [`clustering_cost`] from a uniform sample of members drawn
/// without replacement (the sample size is [`cost_sample_size`] with
/// constant 1, capped at `|S|`).
pub fn estimate_cost_sampled(
    c: &Clustering,
    oracle: &GroundTruthOracle,
    eps: f64,
    delta: f64,
    stream: &mut RandomStream,
) -> Result<f64> {
    let ell = cost_sample_size(c.k(), eps, delta, 1.0)?.min(c.len());
    if ell == c.len() {
        return clustering_cost(c, oracle);
    }
    let positions = index::sample(stream, c.len(), ell).into_vec();
    clustering_cost(&c.restrict(&positions)?, oracle)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instance::ClusteringInstance;

    fn line(xs: &[f64]) -> ClusteringInstance {
        ClusteringInstance::from_scalars(xs).unwrap()
    }

    #[test]
    fn generic_k1_and_two_points() {
        let x = line(&[0.0, 1.0]);
        let o = DistanceOracle::new(&x);
        let mut s = RandomStream::new(5, 0);
        let mut seen = [0; 2];
        for _ in 0..200 {
            let c = generic_seeding(&o, 1, SelectionFn::KMeansPP, &mut s).unwrap();
            seen[c.indices()[0]] += 1;
            let c2 = generic_seeding(&o, 2, SelectionFn::KMeansPP, &mut s).unwrap();
            assert_ne!(c2.indices()[0], c2.indices()[1]);
        }
        assert!(seen[0] > 60 && seen[1] > 60);
    }

    #[test]
    fn gonzalez_takes_farthest() {
        let x = line(&[0.0, 1.0, 10.0]);
        let o = DistanceOracle::new(&x);
        for seed in 0..20 {
            let c = generic_seeding(&o, 2, SelectionFn::Gonzalez, &mut RandomStream::new(seed, 0)).unwrap();
            if c.indices()[0] == 0 {
                assert_eq!(c.indices()[1], 2);
            }
        }
    }

    #[test]
    fn generic_query_count_is_linear() {
        let x = line(&(0..50).map(f64::from).collect::<Vec<_>>());
        let o = DistanceOracle::new(&x);
        generic_seeding(&o, 4, SelectionFn::KMeansPP, &mut RandomStream::new(1, 0)).unwrap();
        assert_eq!(o.query_count(), 4 * 50);
    }

    #[test]
    fn approx_m1_uses_sample_prefix() {
        let x = line(&[0.0, 1.0, 2.0, 3.0, 4.0]);
        let o = DistanceOracle::new(&x);
        let sample = [4, 3, 2];
        let c = approx_seeding(&o, &sample, 3, 1, SelectionFn::KMeansPP, &mut RandomStream::new(0, 0)).unwrap();
        assert_eq!(&c.indices()[1..], &[4, 3]);
    }

    #[test]
    fn approx_uniform_accepts_every_proposal() {
        let x = line(&[0.0, 1.0, 2.0, 3.0, 4.0, 5.0]);
        let o = DistanceOracle::new(&x);
        let sample = [0, 1, 2, 3, 4, 5];
        let c = approx_seeding(&o, &sample, 2, 3, SelectionFn::Uniform, &mut RandomStream::new(9, 0)).unwrap();
        assert_eq!(c.indices()[1], 2);
    }

    #[test]
    fn approx_zero_weight_rules() {
        let f = SelectionFn::KMeansPP;
        assert_eq!(f.acceptance_ratio(0.0, 2.0, 1.0, 0.0), f64::INFINITY);
        assert_eq!(f.acceptance_ratio(0.0, 0.0, 1.0, 0.0), 0.0);
        let x = line(&[0.0, 0.0, 7.0]);
        let o = DistanceOracle::new(&x);
        // c1 is one of the zeros or 7; either way the chain ends on a point
        // with positive distance if one was proposed
        let c = approx_seeding(&o, &[0, 2, 1, 1], 2, 2, f, &mut RandomStream::new(2, 0)).unwrap();
        let c1 = c.indices()[0];
        if x.point(c1)[0] == 0.0 {
            assert_eq!(c.indices()[1], 2);
        }
    }

    #[test]
    fn approx_rejects_short_sample() {
        let x = line(&[0.0, 1.0]);
        let o = DistanceOracle::new(&x);
        assert!(approx_seeding(&o, &[0, 1, 0], 2, 2, SelectionFn::Uniform, &mut RandomStream::new(0, 0)).is_err());
    }

    #[test]
    fn approx_query_bound() {
        let x = line(&(0..100).map(f64::from).collect::<Vec<_>>());
        let o = DistanceOracle::new(&x);
        let (k, m) = (4, 10);
        let sample: Vec<usize> = (0..m * k).collect();
        approx_seeding(&o, &sample, k, m, SelectionFn::KMeansPP, &mut RandomStream::new(0, 0)).unwrap();
        assert!(o.query_count() as usize <= m * k * k);
    }

    #[test]
    fn voronoi_examples() {
        let x = line(&[0.0, 10.0, 5.0]);
        let o = DistanceOracle::new(&x);
        let c = voronoi_partition(&o, &Centers::new(vec![0, 1]).unwrap()).unwrap();
        assert_eq!(c.labels(), &[0, 1, 0]);
        let one = voronoi_partition(&o, &Centers::new(vec![1]).unwrap()).unwrap();
        assert!(one.labels().iter().all(|&l| l == 0));
    }

    #[test]
    fn k_centers_examples() {
        let x = line(&[0.0, 1.0, 10.0]);
        let o = DistanceOracle::new(&x);
        assert_eq!(k_centers_objective(&o, &Centers::new(vec![0, 1, 2]).unwrap()).unwrap(), 0.0);
        assert_eq!(k_centers_objective(&o, &Centers::new(vec![0]).unwrap()).unwrap(), 10.0);
        assert_eq!(k_centers_objective(&o, &Centers::new(vec![0, 2]).unwrap()).unwrap(), 1.0);
    }

    #[test]
    fn cost_examples() {
        let g = GroundTruthOracle::new(vec![0, 1, 0, 1], 2).unwrap();
        let same = Clustering::from_labels(vec![0, 1, 0, 1], 2).unwrap();
        assert_eq!(clustering_cost(&same, &g).unwrap(), 0.0);
        let swapped = Clustering::from_labels(vec![1, 0, 1, 0], 2).unwrap();
        assert_eq!(clustering_cost(&swapped, &g).unwrap(), 0.0);
        let c = Clustering::from_labels(vec![0, 0, 1, 1], 2).unwrap();
        assert_eq!(clustering_cost(&c, &g).unwrap(), 0.5);
        assert_eq!(g.query_count(), 12);
        let wrong_k = Clustering::from_labels(vec![0, 0, 1, 1], 3).unwrap();
        assert!(clustering_cost(&wrong_k, &g).is_err());
    }

    #[test]
    fn sampled_cost() {
        let g = GroundTruthOracle::new(vec![0, 0, 1, 1, 1], 2).unwrap();
        let c = Clustering::from_labels(vec![0, 1, 1, 1, 1], 2).unwrap();
        let mut s = RandomStream::new(0, 0);
        // budget exceeds |S|: exact
        assert_eq!(estimate_cost_sampled(&c, &g, 0.5, 0.5, &mut s).unwrap(), 0.2);
        let truth = Clustering::from_labels(vec![0, 0, 1, 1, 1], 2).unwrap();
        assert_eq!(estimate_cost_sampled(&truth, &g, 0.9, 0.9, &mut s).unwrap(), 0.0);
        assert_eq!(cost_sample_size(2, 0.05, 0.05, 1.0).unwrap(), 2397);
    }
}
