use crate::error::{invalid, Error, Result};

use super::Graph;

/// Side assignment per vertex: +1, -1, or 0 for "not yet placed".
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Cut(Vec<i8>);

impl Cut {
    pub fn new(z: Vec<i8>) -> Result<Self> {
        if let Some(bad) = z.iter().find(|&&s| !(-1..=1).contains(&s)) {
            return Err(invalid(format!("cut entries must be -1, 0 or +1, got {bad}")));
        }
        Ok(Self(z))
    }

    pub fn unassigned(n: usize) -> Self {
        Self(vec![0; n])
    }

    pub fn sides(&self) -> &[i8] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn is_complete(&self) -> bool {
        self.0.iter().all(|&s| s != 0)
    }

    pub(crate) fn set(&mut self, v: usize, side: i8) {
        self.0[v] = side;
    }
}

fn weight_unchecked(g: &Graph, z: &Cut) -> f64 {
    g.edges()
        .iter()
        .map(|&(u, v, w)| 0.5 * w * (1.0 - f64::from(z.0[u] * z.0[v])))
        .sum()
}

/// `w(z; G) = 1/2 sum w_ij (1 - z_i z_j)` for a complete cut.
pub fn cut_weight(g: &Graph, z: &Cut) -> Result<f64> {
    if z.len() != g.n() {
        return Err(Error::DimensionMismatch { expected: g.n(), found: z.len() });
    }
    if !z.is_complete() {
        return Err(invalid("cut has unassigned vertices; use partial_cut_weight"));
    }
    Ok(weight_unchecked(g, z))
}

/// Same formula with unassigned vertices allowed (`z_i z_j = 0` on any edge
/// touching one).
pub fn partial_cut_weight(g: &Graph, z: &Cut) -> Result<f64> {
    if z.len() != g.n() {
        return Err(Error::DimensionMismatch { expected: g.n(), found: z.len() });
    }
    Ok(weight_unchecked(g, z))
}

/// Cut weight divided by n^2; zero for the empty graph.
pub fn cut_density(g: &Graph, z: &Cut) -> Result<f64> {
    let w = cut_weight(g, z)?;
    let n = g.n() as f64;
    Ok(if g.n() == 0 { 0.0 } else { w / (n * n) })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_examples() {
        let k2 = Graph::complete(2);
        assert_eq!(cut_weight(&k2, &Cut::new(vec![1, -1]).unwrap()).unwrap(), 1.0);
        assert_eq!(cut_weight(&k2, &Cut::new(vec![1, 1]).unwrap()).unwrap(), 0.0);
        let k4 = Graph::complete(4);
        assert_eq!(cut_weight(&k4, &Cut::new(vec![1, -1, 1, -1]).unwrap()).unwrap(), 4.0);
        assert_eq!(cut_density(&k4, &Cut::new(vec![1, -1, 1, -1]).unwrap()).unwrap(), 0.25);
    }

    #[test]
    fn errors_and_partial_mode() {
        let k2 = Graph::complete(2);
        assert!(cut_weight(&k2, &Cut::new(vec![1]).unwrap()).is_err());
        assert!(cut_weight(&k2, &Cut::new(vec![1, 0]).unwrap()).is_err());
        assert!(Cut::new(vec![2]).is_err());
        assert_eq!(partial_cut_weight(&k2, &Cut::new(vec![1, 0]).unwrap()).unwrap(), 0.5);
    }
}
