use nalgebra::DMatrix;
use rand_distr::{Distribution, StandardNormal};

use crate::error::{Error, Result};
use crate::rng::RandomStream;

use super::{factor_gram, Graph};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SdpOptions {
    /// Stop once the relative objective change over one sweep drops below this.
    pub tol: f64,
    pub max_sweeps: usize,
    /// Factor width; `None` picks `min(n, ceil(sqrt(2n)) + 1)`.
    pub rank: Option<usize>,
}

impl Default for SdpOptions {
    fn default() -> Self {
        Self { tol: 1e-7, max_sweeps: 10_000, rank: None }
    }
}

/// Low-rank point of the elliptope, `X = V V^T`, with a feasible dual
/// vector certifying how far it is from optimal.
#[derive(Debug, Clone)]
pub struct SdpSolution {
    n: usize,
    rank: usize,
    factor: Vec<f64>,
    primal_value: f64,
    dual_y: Vec<f64>,
    dual_value: f64,
    converged: bool,
    sweeps: usize,
}

impl SdpSolution {
    /// Wraps an externally supplied elliptope matrix.
    pub fn from_gram(g: &Graph, x: &DMatrix<f64>) -> Result<Self> {
        if x.nrows() != g.n() {
            return Err(Error::DimensionMismatch { expected: g.n(), found: x.nrows() });
        }
        let (factor, rank) = factor_gram(x)?;
        let mut sol = Self::certify(g, factor, rank);
        sol.converged = true;
        Ok(sol)
    }

    fn certify(g: &Graph, factor: Vec<f64>, rank: usize) -> Self {
        let n = g.n();
        let primal_value = objective(g, &factor, rank);
        let mut dual_y = vec![0.0; n];
        let mut h = vec![0.0; rank];
        let mut s = g.adjacency_matrix();
        for i in 0..n {
            field(g, &factor, rank, i, &mut h);
            let gi = norm(&h);
            dual_y[i] = 0.25 * (g.weighted_degree(i) + gi);
            s[(i, i)] += gi;
        }
        // diag(y) - L/4 = (diag(g) + A)/4; shift it up to PSD if needed
        let lmin = min_eigenvalue(s);
        let shift = (-lmin).max(0.0) / 4.0;
        for y in &mut dual_y {
            *y += shift;
        }
        let dual_value = dual_y.iter().sum();
        Self { n, rank, factor, primal_value, dual_y, dual_value, converged: false, sweeps: 0 }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    /// Row `i` of `V`.
    pub fn row(&self, i: usize) -> &[f64] {
        &self.factor[i * self.rank..(i + 1) * self.rank]
    }

    /// `X_ij = v_i . v_j`.
    pub fn entry(&self, i: usize, j: usize) -> f64 {
        dot(self.row(i), self.row(j))
    }

    pub fn gram(&self) -> DMatrix<f64> {
        DMatrix::from_fn(self.n, self.n, |i, j| self.entry(i, j))
    }

    pub fn primal_value(&self) -> f64 {
        self.primal_value
    }

    pub fn dual_y(&self) -> &[f64] {
        &self.dual_y
    }

    pub fn dual_value(&self) -> f64 {
        self.dual_value
    }

    pub fn gap(&self) -> f64 {
        self.dual_value - self.primal_value
    }

    pub fn converged(&self) -> bool {
        self.converged
    }

    pub fn sweeps(&self) -> usize {
        self.sweeps
    }

    /// Expected hyperplane-rounding cut weight, `sum w_ij arccos(X_ij) / pi`.
    pub fn expected_gw_value(&self, g: &Graph) -> f64 {
        g.edges()
            .iter()
            .map(|&(u, v, w)| w * self.entry(u, v).clamp(-1.0, 1.0).acos())
            .sum::<f64>()
            / std::f64::consts::PI
    }
}

/// Solves the max-cut SDP by block coordinate ascent over unit vectors
/// (each row moves to `-normalize(sum_j w_ij v_j)`), then attaches a dual
/// certificate.
pub fn sdp_solve(g: &Graph, opts: &SdpOptions, stream: &mut RandomStream) -> SdpSolution {
    let n = g.n();
    let rank = opts
        .rank
        .unwrap_or_else(|| n.min((2.0 * n as f64).sqrt().ceil() as usize + 1))
        .max(1);
    let mut v: Vec<f64> = (0..n * rank).map(|_| StandardNormal.sample(stream)).collect();
    for row in v.chunks_mut(rank) {
        let r = norm(row);
        if r > 0.0 {
            row.iter_mut().for_each(|x| *x /= r);
        } else {
            row[0] = 1.0;
        }
    }

    let mut h = vec![0.0; rank];
    let mut obj = objective(g, &v, rank);
    let mut converged = g.edge_count() == 0;
    let mut sweeps = 0;
    while !converged && sweeps < opts.max_sweeps {
        sweeps += 1;
        for i in 0..n {
            field(g, &v, rank, i, &mut h);
            let r = norm(&h);
            if r > 1e-300 {
                for (x, hk) in v[i * rank..(i + 1) * rank].iter_mut().zip(&h) {
                    *x = -hk / r;
                }
            }
        }
        let next = objective(g, &v, rank);
        converged = (next - obj).abs() <= opts.tol * next.abs().max(1.0);
        obj = next;
    }

    let mut sol = SdpSolution::certify(g, v, rank);
    sol.converged = converged;
    sol.sweeps = sweeps;
    sol
}

/// `1/2 sum w_ij (1 - v_i . v_j)`.
fn objective(g: &Graph, v: &[f64], rank: usize) -> f64 {
    g.edges()
        .iter()
        .map(|&(a, b, w)| 0.5 * w * (1.0 - dot(&v[a * rank..(a + 1) * rank], &v[b * rank..(b + 1) * rank])))
        .sum()
}

/// `h = sum_j w_ij v_j`.
fn field(g: &Graph, v: &[f64], rank: usize, i: usize, h: &mut [f64]) {
    h.iter_mut().for_each(|x| *x = 0.0);
    for &(j, w) in g.neighbors(i) {
        for (hk, vk) in h.iter_mut().zip(&v[j * rank..(j + 1) * rank]) {
            *hk += w * vk;
        }
    }
}

pub(crate) fn min_eigenvalue(m: DMatrix<f64>) -> f64 {
    if m.nrows() == 0 {
        return 0.0;
    }
    m.symmetric_eigenvalues().min()
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn norm(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn solve(g: &Graph, seed: u64) -> SdpSolution {
        sdp_solve(g, &SdpOptions::default(), &mut RandomStream::new(seed, 0))
    }

    #[test]
    fn known_optima() {
        let k2 = solve(&Graph::complete(2), 1);
        assert!((k2.primal_value() - 1.0).abs() < 1e-6);
        let k3 = solve(&Graph::complete(3), 2);
        assert!((k3.primal_value() - 2.25).abs() < 1e-4);
        let c5 = solve(&Graph::cycle(5).unwrap(), 3);
        let want = 2.5 * (1.0 - (4.0 * std::f64::consts::PI / 5.0).cos());
        assert!((c5.primal_value() - want).abs() < 1e-3);
        for s in [&k2, &k3, &c5] {
            assert!(s.converged());
            assert!(s.gap() >= -1e-6);
            assert!(s.gap() <= 1e-3 * s.primal_value().max(1.0), "gap {}", s.gap());
        }
    }

    #[test]
    fn rows_stay_unit_and_dual_is_feasible() {
        let g = Graph::unweighted(6, [(0, 1), (1, 2), (2, 3), (3, 4), (4, 5), (5, 0), (0, 3), (1, 4)]).unwrap();
        let s = solve(&g, 7);
        for i in 0..g.n() {
            assert!((norm(s.row(i)) - 1.0).abs() < 1e-8);
        }
        let lmin = super::super::dual_min_eigenvalue(&g, s.dual_y()).unwrap();
        assert!(lmin >= -1e-9, "{lmin}");
    }

    #[test]
    fn trivial_graphs() {
        for n in [1, 4] {
            let s = solve(&Graph::new(n, []).unwrap(), 0);
            assert_eq!(s.primal_value(), 0.0);
            assert_eq!(s.dual_value(), 0.0);
        }
    }

    #[test]
    fn reproducible() {
        let g = Graph::cycle(7).unwrap();
        let a = solve(&g, 11);
        let b = solve(&g, 11);
        assert_eq!(a.primal_value().to_bits(), b.primal_value().to_bits());
    }
}
