//! Max-cut: cuts, the greedy heuristic, a low-rank solver for the
//! Goemans-Williamson SDP relaxation with a dual certificate, hyperplane
//! rounding and the supporting dual/fixture constructions.

mod cut;
mod fixtures;
mod graph;
mod greedy;
mod gw;
mod sdp;

pub use cut::{cut_density, cut_weight, partial_cut_weight, Cut};
pub use fixtures::{dual_min_eigenvalue, nonunique_fixtures, trim_dual, NonuniqueFixture};
pub use graph::{Graph, InducedSubgraph};
pub use greedy::{greedy, greedy_with_order};
pub use gw::{factor_gram, gw_expected_value, gw_round};
pub use sdp::{sdp_solve, SdpOptions, SdpSolution};

/// Goemans-Williamson approximation ratio used in the bounds.
pub const GW_RATIO: f64 = 0.878;
