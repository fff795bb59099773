use rand::seq::index;
use rand::Rng;

use crate::error::{invalid, Result};
use crate::maxcut::{Graph, InducedSubgraph};
use crate::rng::RandomStream;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SubsampleSpec {
    /// `m` uniform draws, repeats allowed.
    PointsWithReplacement { m: usize },
    /// `m` distinct indices.
    PointsWithoutReplacement { m: usize },
    /// Each index kept independently with probability `t / n`.
    VerticesBernoulli { t: f64 },
    /// `t` distinct indices.
    VerticesUniform { t: usize },
}

/// Draws indices from `0..n` per `spec`. Without-replacement and Bernoulli
/// draws come back sorted.
pub fn subsample_indices(n: usize, spec: SubsampleSpec, stream: &mut RandomStream) -> Result<Vec<usize>> {
    match spec {
        SubsampleSpec::PointsWithReplacement { m } => {
            if n == 0 && m > 0 {
                return Err(invalid("cannot draw from an empty set"));
            }
            Ok((0..m).map(|_| stream.random_range(0..n)).collect())
        }
        SubsampleSpec::PointsWithoutReplacement { m: size } | SubsampleSpec::VerticesUniform { t: size } => {
            if size > n {
                return Err(invalid(format!("cannot draw {size} distinct items from {n}")));
            }
            let mut v = index::sample(stream, n, size).into_vec();
            v.sort_unstable();
            Ok(v)
        }
        SubsampleSpec::VerticesBernoulli { t } => {
            let rate = if n == 0 { 0.0 } else { t / n as f64 };
            if !(0.0..=1.0).contains(&rate) {
                return Err(invalid(format!("Bernoulli rate t/n = {rate} not in [0, 1]")));
            }
            Ok((0..n).filter(|_| stream.random_bool(rate)).collect())
        }
    }
}

/// Vertex-induced subgraph on a subsample; point (with-replacement) modes are
/// rejected.
pub fn subsample_graph(g: &Graph, spec: SubsampleSpec, stream: &mut RandomStream) -> Result<InducedSubgraph> {
    if matches!(spec, SubsampleSpec::PointsWithReplacement { .. }) {
        return Err(invalid("vertex subsamples cannot repeat vertices"));
    }
    g.induced_subgraph(&subsample_indices(g.n(), spec, stream)?)
}
