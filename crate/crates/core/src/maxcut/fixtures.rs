
use nalgebra::DMatrix;

use crate::error::{invalid, Error, Result};

use super::sdp::min_eigenvalue;
use super::Graph;

/// `K_n` with two optimal SDP solutions of different expected rounding
/// value: the equiangular `X` and the rank-one alternating `Y`.
#[derive(Debug, Clone)]
pub struct NonuniqueFixture {
    pub graph: Graph,
    pub x: DMatrix<f64>,
    pub y: DMatrix<f64>,
}

pub fn nonunique_fixtures(n: usize) -> Result<NonuniqueFixture> {
    if n < 2 || !n.is_multiple_of(2) {
        return Err(invalid(format!("fixture needs an even n >= 2, got {n}")));
    }
    let off = -1.0 / (n as f64 - 1.0);
    let x = DMatrix::from_fn(n, n, |i, j| if i == j { 1.0 } else { off });
    let sign = |i: usize| if i.is_multiple_of(2) { 1.0 } else { -1.0 };
    let y = DMatrix::from_fn(n, n, |i, j| sign(i) * sign(j));
    Ok(NonuniqueFixture { graph: Graph::complete(n), x, y })
}

/// Smallest eigenvalue of `diag(y) - L/4`; nonnegative iff `y` is dual feasible.
pub fn dual_min_eigenvalue(g: &Graph, y: &[f64]) -> Result<f64> {
    if y.len() != g.n() {
        return Err(Error::DimensionMismatch { expected: g.n(), found: y.len() });
    }
    let mut m = g.laplacian() * -0.25;
    for (i, yi) in y.iter().enumerate() {
        m[(i, i)] += yi;
    }
    Ok(min_eigenvalue(m))
}

/// Restricts a dual-feasible `y_star` for `g` to a feasible dual for `g[subset]`
/// by removing a quarter of each vertex's weight to dropped vertices. Output
/// follows the order of `subset`.
pub fn trim_dual(g: &Graph, y_star: &[f64], subset: &[usize]) -> Result<Vec<f64>> {
    let lmin = dual_min_eigenvalue(g, y_star)?;
    let scale = y_star.iter().fold(1.0f64, |m, y| m.max(y.abs()));
    if lmin < -1e-7 * scale {
        return Err(Error::InfeasibleDual { min_eigenvalue: lmin });
    }
    let mut keep = vec![false; g.n()];
    for &i in subset {
        if i >= g.n() {
            return Err(Error::IndexOutOfRange { index: i, len: g.n() });
        }
        if std::mem::replace(&mut keep[i], true) {
            return Err(invalid(format!("vertex {i} repeated in subset")));
        }
    }
    Ok(subset
        .iter()
        .map(|&i| {
            let dropped: f64 = g.neighbors(i).iter().filter(|(k, _)| !keep[*k]).map(|(_, w)| w).sum();
            y_star[i] - 0.25 * dropped
        })
        .collect())
}


#[cfg(test)]
mod tests {
    use super::*;
    use crate::maxcut::{gw_expected_value, SdpSolution};

    fn quarter_laplacian_dot(g: &Graph, x: &DMatrix<f64>) -> f64 {
        0.25 * g.laplacian().component_mul(x).sum()
    }

    #[test]
    fn n4_both_optimal() {
        let f = nonunique_fixtures(4).unwrap();
        assert!((quarter_laplacian_dot(&f.graph, &f.x) - 4.0).abs() < 1e-9);
        assert!((quarter_laplacian_dot(&f.graph, &f.y) - 4.0).abs() < 1e-9);
        assert!(dual_min_eigenvalue(&f.graph, &[1.0; 4]).unwrap() >= -1e-12);
    }

    #[test]
    fn n20_expected_gap() {
        let f = nonunique_fixtures(20).unwrap();
        let gap = gw_expected_value(&f.graph, &f.y).unwrap() - gw_expected_value(&f.graph, &f.x).unwrap();
        let want = 100.0 - 190.0 / std::f64::consts::PI * (-1.0f64 / 19.0).acos();
        assert!((gap - want).abs() < 1e-9);
        assert!((gap - 1.82).abs() < 0.01);
        for m in [&f.x, &f.y] {
            let s = SdpSolution::from_gram(&f.graph, m).unwrap();
            assert!((s.primal_value() - 100.0).abs() < 1e-9);
            assert!((s.dual_value() - 100.0).abs() < 1e-6);
        }
    }

    #[test]
    fn rejects_odd() {
        assert!(nonunique_fixtures(5).is_err());
        assert!(nonunique_fixtures(0).is_err());
    }

    #[test]
    fn trim_examples() {
        let k3 = Graph::complete(3);
        let y = [0.75; 3];
        assert_eq!(trim_dual(&k3, &y, &[0, 1, 2]).unwrap(), y.to_vec());
        let t = trim_dual(&k3, &y, &[0, 1]).unwrap();
        assert_eq!(t, vec![0.5, 0.5]);
        let sub = k3.induced_subgraph(&[0, 1]).unwrap().graph;
        assert!(dual_min_eigenvalue(&sub, &t).unwrap() >= -1e-12);
    }

    #[test]
    fn trim_rejects_infeasible() {
        let k3 = Graph::complete(3);
        assert!(matches!(trim_dual(&k3, &[0.1; 3], &[0]), Err(Error::InfeasibleDual { .. })));
    }
}
