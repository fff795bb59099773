use rand::seq::SliceRandom;

use crate::error::{invalid, Result};
use crate::rng::RandomStream;

use super::{Cut, Graph};

/// Greedy max-cut: visit vertices in a uniformly random order and put each
/// on the side that cuts more weight to its already-placed neighbours.
pub fn greedy(g: &Graph, stream: &mut RandomStream) -> Cut {
    let mut order: Vec<usize> = (0..g.n()).collect();
    order.shuffle(stream);
    greedy_with_order(g, &order).expect("a shuffled identity is a permutation")
}

/// Greedy with a fixed visiting order. Ties (including the first vertex) go
/// to +1.
pub fn greedy_with_order(g: &Graph, order: &[usize]) -> Result<Cut> {
    let n = g.n();
    let mut seen = vec![false; n];
    if order.len() != n || order.iter().any(|&v| v >= n || std::mem::replace(&mut seen[v], true)) {
        return Err(invalid("order must be a permutation of the vertices"));
    }
    let mut z = Cut::unassigned(n);
    for &v in order {
        // weight to placed neighbours on each side
        let (mut plus, mut minus) = (0.0, 0.0);
        for &(u, w) in g.neighbors(v) {
            match z.sides()[u] {
                1 => plus += w,
                -1 => minus += w,
                _ => {}
            }
        }
        z.set(v, if minus >= plus { 1 } else { -1 });
    }
    Ok(z)
}
