use nalgebra::DMatrix;
use rand_distr::{Distribution, StandardNormal};

use crate::error::{invalid, Error, Result};
use crate::rng::RandomStream;

use super::{Cut, Graph, SdpSolution};

/// Random-hyperplane rounding: `z_i = sign(v_i . u)` for a Gaussian `u`,
/// with zero products sent to +1.
pub fn gw_round(sol: &SdpSolution, stream: &mut RandomStream) -> Cut {
    let u: Vec<f64> = (0..sol.rank()).map(|_| StandardNormal.sample(stream)).collect();
    let z = (0..sol.n())
        .map(|i| {
            let p: f64 = sol.row(i).iter().zip(&u).map(|(a, b)| a * b).sum();
            if p < 0.0 { -1 } else { 1 }
        })
        .collect();
    Cut::new(z).expect("entries are +-1")
}

/// `sum_{(i,j) in E} w_ij arccos(X_ij) / pi`.
pub fn gw_expected_value(g: &Graph, x: &DMatrix<f64>) -> Result<f64> {
    check_elliptope(x, g.n())?;
    let mut total = 0.0;
    for &(u, v, w) in g.edges() {
        let xij = x[(u, v)];
        if xij.abs() > 1.0 + 1e-9 {
            return Err(invalid(format!("entry X[{u},{v}] = {xij} outside [-1, 1]")));
        }
        total += w * xij.clamp(-1.0, 1.0).acos();
    }
    Ok(total / std::f64::consts::PI)
}

fn check_elliptope(x: &DMatrix<f64>, n: usize) -> Result<()> {
    if x.nrows() != n || x.ncols() != n {
        return Err(Error::DimensionMismatch { expected: n, found: x.nrows().max(x.ncols()) });
    }
    for i in 0..n {
        if (x[(i, i)] - 1.0).abs() > 1e-6 {
            return Err(invalid(format!("diagonal entry {i} is {}, expected 1", x[(i, i)])));
        }
        for j in 0..i {
            if (x[(i, j)] - x[(j, i)]).abs() > 1e-9 {
                return Err(invalid("matrix is not symmetric"));
            }
        }
    }
    Ok(())
}

/// Factors an elliptope matrix as `V V^T` by symmetric eigendecomposition.
/// Slightly negative eigenvalues (above -1e-8) are clamped to zero; rows are
/// renormalized to unit length. Returns the row-major factor and its width.
pub fn factor_gram(x: &DMatrix<f64>) -> Result<(Vec<f64>, usize)> {
    let n = x.nrows();
    check_elliptope(x, n)?;
    if n == 0 {
        return Ok((Vec::new(), 1));
    }
    let eig = x.clone().symmetric_eigen();
    let lmin = eig.eigenvalues.min();
    if lmin < -1e-8 {
        return Err(invalid(format!("matrix is not PSD (eigenvalue {lmin:.3e})")));
    }
    let keep: Vec<usize> = (0..n).filter(|&c| eig.eigenvalues[c] > 1e-12).collect();
    let rank = keep.len().max(1);
    let mut v = vec![0.0; n * rank];
    for (col, &c) in keep.iter().enumerate() {
        let s = eig.eigenvalues[c].sqrt();
        for i in 0..n {
            v[i * rank + col] = s * eig.eigenvectors[(i, c)];
        }
    }
    for row in v.chunks_mut(rank) {
        let r = row.iter().map(|a| a * a).sum::<f64>().sqrt();
        if r == 0.0 {
            return Err(invalid("matrix has a zero row after factoring"));
        }
        row.iter_mut().for_each(|a| *a /= r);
    }
    Ok((v, rank))
}
