//! Synthetic clustering instances and random graph families.

use rand::seq::index;
use rand::Rng;
use rand_distr::{Distribution, Normal};

use crate::error::{invalid, Result};
use crate::instance::ClusteringInstance;
use crate::maxcut::Graph;
use crate::oracle::GroundTruthOracle;
use crate::rng::RandomStream;

/// Points together with their hidden labels.
#[derive(Debug, Clone)]
pub struct LabeledInstance {
    pub instance: ClusteringInstance,
    pub labels: Vec<usize>,
    pub k: usize,
}

impl LabeledInstance {
    fn new(points: Vec<Vec<f64>>, labels: Vec<usize>, k: usize) -> Result<Self> {
        Ok(Self { instance: ClusteringInstance::new(points)?, labels, k })
    }

    /// A fresh oracle over the labels, with a zeroed query counter.
    pub fn oracle(&self) -> GroundTruthOracle {
        GroundTruthOracle::new(self.labels.clone(), self.k).expect("generated labels are in range")
    }
}

/// Equal-weight mixture of `N((0,0), 0.5 I)` and `N((1,1), 0.5 I)`; the label
/// is the component.
pub fn gen_gaussian_mixture(n: usize, stream: &mut RandomStream) -> Result<LabeledInstance> {
    if n < 2 {
        return Err(invalid("gaussian mixture needs n >= 2"));
    }
    let noise = Normal::new(0.0, 0.5f64.sqrt()).expect("valid std");
    let mut points = Vec::with_capacity(n);
    let mut labels = Vec::with_capacity(n);
    for _ in 0..n {
        let c = usize::from(stream.random_bool(0.5));
        let mean = c as f64;
        points.push(vec![mean + noise.sample(stream), mean + noise.sample(stream)]);
        labels.push(c);
    }
    LabeledInstance::new(points, labels, 2)
}

/// Two concentric circles of radius 1 (label 0) and 0.2 (label 1), `n/2`
/// points each at uniform angles, with Gaussian noise of std 0.05 per
/// coordinate.
pub fn gen_noisy_circles(n: usize, stream: &mut RandomStream) -> Result<LabeledInstance> {
    if n < 2 || !n.is_multiple_of(2) {
        return Err(invalid(format!("noisy circles needs an even n >= 2, got {n}")));
    }
    let noise = Normal::new(0.0, 0.05).expect("valid std");
    let mut points = Vec::with_capacity(n);
    let mut labels = Vec::with_capacity(n);
    for (label, radius) in [(0, 1.0), (1, 0.2)] {
        for _ in 0..n / 2 {
            let theta = stream.random_range(0.0..std::f64::consts::TAU);
            points.push(vec![
                radius * theta.cos() + noise.sample(stream),
                radius * theta.sin() + noise.sample(stream),
            ]);
            labels.push(label);
        }
    }
    LabeledInstance::new(points, labels, 2)
}

/// On the line: `(n-1)/3` points at 0, one at `alpha`, `(n-1)/3` at
/// `2 alpha` and `(n-1)/3` at `2 alpha + beta`. The last group is cluster 1.
pub fn gen_bridge_instance(n: usize, alpha: f64, beta: f64) -> Result<LabeledInstance> {
    if n < 4 || n % 3 != 1 {
        return Err(invalid(format!("bridge instance needs n = 1 mod 3 and n >= 4, got {n}")));
    }
    if !(0.0 < alpha && alpha < beta && beta < 2.0 * alpha) {
        return Err(invalid("bridge instance needs 0 < alpha < beta < 2 alpha"));
    }
    let g = (n - 1) / 3;
    let mut xs = vec![0.0; g];
    xs.push(alpha);
    xs.extend(std::iter::repeat_n(2.0 * alpha, g));
    xs.extend(std::iter::repeat_n(2.0 * alpha + beta, g));
    let labels = (0..n).map(|i| usize::from(i > 2 * g)).collect();
    LabeledInstance::new(xs.into_iter().map(|x| vec![x]).collect(), labels, 2)
}

/// On the line: `(n-1)/2` points evenly spread over `[-alpha, alpha]`, as
/// many over `[3 - alpha, 3 + alpha]`, and one outlier at 6, which alone
/// forms cluster 1.
pub fn gen_outlier_instance(n: usize, alpha: f64) -> Result<LabeledInstance> {
    if n < 5 || n.is_multiple_of(2) {
        return Err(invalid(format!("outlier instance needs an odd n >= 5, got {n}")));
    }
    if !(0.0 < alpha && alpha < 0.5) {
        return Err(invalid("outlier instance needs 0 < alpha < 1/2"));
    }
    let h = (n - 1) / 2;
    let spread = |i: usize| -alpha + 2.0 * alpha * i as f64 / (h - 1) as f64;
    let mut xs: Vec<f64> = (0..h).map(spread).collect();
    xs.extend((0..h).map(|i| 3.0 + spread(i)));
    xs.push(6.0);
    let labels = (0..n).map(|i| usize::from(i == n - 1)).collect();
    LabeledInstance::new(xs.into_iter().map(|x| vec![x]).collect(), labels, 2)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum GraphFamily {
    ErdosRenyi { p: f64 },
    RandomGeometric { radius: f64 },
    /// Two cliques joined by `inter` random crossing edges.
    Barbell { inter: usize },
    BarabasiAlbert { m: usize },
    Complete,
    Cycle,
    Path,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GraphSpec {
    pub family: GraphFamily,
    pub n: usize,
}

impl GraphSpec {
    pub fn new(family: GraphFamily, n: usize) -> Result<Self> {
        let spec = Self { family, n };
        spec.validate()?;
        Ok(spec)
    }

    /// Builds a spec from a family name and a parameter lookup (`p`,
    /// `radius`, `inter`, `m`), with the experiment defaults when absent.
    pub fn parse(name: &str, n: usize, param: impl Fn(&str) -> Option<f64>) -> Result<Self> {
        let count = |key: &str, default: usize| -> Result<usize> {
            match param(key) {
                None => Ok(default),
                Some(v) if v >= 0.0 && v.fract() == 0.0 => Ok(v as usize),
                Some(v) => Err(invalid(format!("{key} must be a nonnegative integer, got {v}"))),
            }
        };
        let family = match name {
            "erdos_renyi" | "er" => GraphFamily::ErdosRenyi { p: param("p").unwrap_or(0.7) },
            "random_geometric" | "geometric" => GraphFamily::RandomGeometric { radius: param("radius").unwrap_or(0.9) },
            "barbell" => GraphFamily::Barbell { inter: count("inter", 5)? },
            "barabasi_albert" | "ba" => GraphFamily::BarabasiAlbert { m: count("m", 5)? },
            "complete" => GraphFamily::Complete,
            "cycle" => GraphFamily::Cycle,
            "path" => GraphFamily::Path,
            other => return Err(invalid(format!("unknown graph family '{other}'"))),
        };
        Self::new(family, n)
    }

    fn validate(&self) -> Result<()> {
        if self.n == 0 {
            return Err(invalid("graph needs n >= 1"));
        }
        match self.family {
            GraphFamily::ErdosRenyi { p } if !(0.0..=1.0).contains(&p) => Err(invalid(format!("p = {p} not in [0, 1]"))),
            GraphFamily::RandomGeometric { radius } if !(radius >= 0.0) => Err(invalid("radius must be >= 0")),
            GraphFamily::Barbell { inter } if inter > (self.n / 2) * self.n.div_ceil(2) => {
                Err(invalid(format!("barbell on {} vertices has fewer than {inter} crossing pairs", self.n)))
            }
            GraphFamily::BarabasiAlbert { m } if m == 0 || m > self.n => {
                Err(invalid(format!("barabasi-albert needs 1 <= m <= n, got m = {m}")))
            }
            GraphFamily::Cycle if self.n < 3 => Err(invalid("cycle needs n >= 3")),
            _ => Ok(()),
        }
    }
}

/// Samples a simple unit-weight graph from `spec`.
pub fn gen_graph(spec: &GraphSpec, stream: &mut RandomStream) -> Result<Graph> {
    spec.validate()?;
    let n = spec.n;
    let pairs = || (0..n).flat_map(move |i| ((i + 1)..n).map(move |j| (i, j)));
    match spec.family {
        GraphFamily::ErdosRenyi { p } => {
            let edges: Vec<_> = pairs().filter(|_| stream.random_bool(p)).collect();
            Graph::unweighted(n, edges)
        }
        GraphFamily::RandomGeometric { radius } => {
            let pts: Vec<(f64, f64)> = (0..n).map(|_| (stream.random::<f64>(), stream.random::<f64>())).collect();
            let close = |(i, j): &(usize, usize)| {
                let (dx, dy) = (pts[*i].0 - pts[*j].0, pts[*i].1 - pts[*j].1);
                (dx * dx + dy * dy).sqrt() <= radius
            };
            Graph::unweighted(n, pairs().filter(close).collect::<Vec<_>>())
        }
        GraphFamily::Barbell { inter } => {
            let a = n / 2;
            let b = n - a;
            let mut edges: Vec<_> = pairs().filter(|&(i, j)| (i < a) == (j < a)).collect();
            for c in index::sample(stream, a * b, inter) {
                edges.push((c / b, a + c % b));
            }
            Graph::unweighted(n, edges)
        }
        GraphFamily::BarabasiAlbert { m } => {
            let mut edges: Vec<(usize, usize)> = (0..m).flat_map(|i| ((i + 1)..m).map(move |j| (i, j))).collect();
            // each vertex appears once per incident edge
            let mut ends: Vec<usize> = edges.iter().flat_map(|&(i, j)| [i, j]).collect();
            for v in m..n {
                let mut targets: Vec<usize> = Vec::with_capacity(m);
                while targets.len() < m {
                    let t = if ends.is_empty() { stream.random_range(0..v) } else { ends[stream.random_range(0..ends.len())] };
                    if !targets.contains(&t) {
                        targets.push(t);
                    }
                }
                for t in targets {
                    edges.push((t, v));
                    ends.push(t);
                    ends.push(v);
                }
            }
            Graph::unweighted(n, edges)
        }
        GraphFamily::Complete => Ok(Graph::complete(n)),
        GraphFamily::Cycle => Graph::cycle(n),
        GraphFamily::Path => Ok(Graph::path(n)),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gaussian_mixture_shape() {
        let gm = gen_gaussian_mixture(500, &mut RandomStream::new(1, 0)).unwrap();
        assert_eq!(gm.instance.n(), 500);
        assert_eq!(gm.instance.dim(), 2);
        assert!(gm.labels.contains(&0) && gm.labels.contains(&1));
        assert!(gen_gaussian_mixture(1, &mut RandomStream::new(1, 0)).is_err());
        let a = gen_gaussian_mixture(2, &mut RandomStream::new(4, 2)).unwrap();
        let b = gen_gaussian_mixture(2, &mut RandomStream::new(4, 2)).unwrap();
        assert_eq!(a.instance.points(), b.instance.points());
    }

    #[test]
    fn gaussian_mixture_variance() {
        let gm = gen_gaussian_mixture(100_000, &mut RandomStream::new(2, 0)).unwrap();
        for dim in 0..2 {
            let (mut s, mut c) = ([0.0; 2], [0.0; 2]);
            for (p, &l) in gm.instance.points().iter().zip(&gm.labels) {
                s[l] += p[dim];
                c[l] += 1.0;
            }
            let mut ss = 0.0;
            for (p, &l) in gm.instance.points().iter().zip(&gm.labels) {
                ss += (p[dim] - s[l] / c[l]).powi(2);
            }
            let var = ss / (c[0] + c[1]);
            assert!((var - 0.5).abs() < 0.02, "{var}");
        }
    }

    #[test]
    fn circles_shape_and_radius() {
        let c = gen_noisy_circles(500, &mut RandomStream::new(3, 0)).unwrap();
        assert_eq!(c.labels.iter().filter(|&&l| l == 0).count(), 250);
        assert!(gen_noisy_circles(7, &mut RandomStream::new(3, 0)).is_err());
        assert_eq!(gen_noisy_circles(2, &mut RandomStream::new(3, 0)).unwrap().labels, vec![0, 1]);
        let big = gen_noisy_circles(10_000, &mut RandomStream::new(3, 1)).unwrap();
        let outer: Vec<f64> = big
            .instance
            .points()
            .iter()
            .zip(&big.labels)
            .filter(|(_, &l)| l == 0)
            .map(|(p, _)| p[0].hypot(p[1]))
            .collect();
        let mean = outer.iter().sum::<f64>() / outer.len() as f64;
        assert!((mean - 1.0).abs() < 0.01, "{mean}");
    }

    #[test]
    fn bridge_layout() {
        let b = gen_bridge_instance(10, 1.0, 1.5).unwrap();
        let xs: Vec<f64> = b.instance.points().iter().map(|p| p[0]).collect();
        assert_eq!(xs, vec![0.0, 0.0, 0.0, 1.0, 2.0, 2.0, 2.0, 3.5, 3.5, 3.5]);
        assert_eq!(b.labels, vec![0, 0, 0, 0, 0, 0, 0, 1, 1, 1]);
        assert!(gen_bridge_instance(11, 1.0, 1.5).is_err());
        assert!(gen_bridge_instance(10, 1.0, 2.5).is_err());
        assert!(gen_bridge_instance(10, 1.0, 0.5).is_err());
    }

    #[test]
    fn outlier_layout() {
        let o = gen_outlier_instance(11, 0.25).unwrap();
        let xs: Vec<f64> = o.instance.points().iter().map(|p| p[0]).collect();
        assert_eq!(xs.iter().filter(|&&x| x.abs() <= 0.25).count(), 5);
        assert_eq!(xs.iter().filter(|&&x| (x - 3.0).abs() <= 0.25).count(), 5);
        assert_eq!(xs[10], 6.0);
        assert!(gen_outlier_instance(10, 0.25).is_err());
        assert!(gen_outlier_instance(11, 0.5).is_err());
    }

    fn spec(f: GraphFamily, n: usize) -> GraphSpec {
        GraphSpec::new(f, n).unwrap()
    }

    #[test]
    fn graph_families() {
        let mut s = RandomStream::new(5, 0);
        assert_eq!(gen_graph(&spec(GraphFamily::Complete, 3), &mut s).unwrap().edge_count(), 3);
        assert_eq!(gen_graph(&spec(GraphFamily::ErdosRenyi { p: 1.0 }, 50), &mut s).unwrap().edge_count(), 1225);
        let bb = gen_graph(&spec(GraphFamily::Barbell { inter: 5 }, 50), &mut s).unwrap();
        assert_eq!(bb.edge_count(), 2 * 300 + 5);
        let ba = gen_graph(&spec(GraphFamily::BarabasiAlbert { m: 5 }, 50), &mut s).unwrap();
        assert_eq!(ba.edge_count(), 10 + 45 * 5);
        let geo = gen_graph(&spec(GraphFamily::RandomGeometric { radius: 2.0 }, 10), &mut s).unwrap();
        assert_eq!(geo.edge_count(), 45);
        assert!(GraphSpec::new(GraphFamily::Barbell { inter: 26 }, 10).is_err());
        assert!(GraphSpec::new(GraphFamily::ErdosRenyi { p: 1.5 }, 10).is_err());
        assert!(GraphSpec::parse("nope", 5, |_| None).is_err());
    }

    #[test]
    fn erdos_renyi_mean_edges() {
        let sp = spec(GraphFamily::ErdosRenyi { p: 0.7 }, 50);
        let total: usize = (0..100).map(|s| gen_graph(&sp, &mut RandomStream::new(s, 0)).unwrap().edge_count()).sum();
        let mean = total as f64 / 100.0;
        assert!((mean - 857.5).abs() < 40.0, "{mean}");
    }
}
