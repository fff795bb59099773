use std::time::Instant;

use rayon::prelude::*;

use crate::error::{invalid, Result};
use crate::maxcut::{sdp_solve, Graph, SdpOptions, SdpSolution, GW_RATIO};
use crate::rng::RandomStream;

use super::{mean_stderr, subsample_graph, EstimateReport, SubsampleSpec, TrialRecord};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EpsilonSdp {
    pub value: f64,
    /// False when `sdp(G)` was replaced by its upper bound `W`.
    pub exact: bool,
}

/// Additive error `(n - t) / (n^2 t) * (sdp(G) - W/2)`; without `sdp(G)` the
/// computable overestimate `(n - t) / (n^2 t) * W/2` is returned.
pub fn epsilon_sdp(g: &Graph, t: f64, sdp_g: Option<f64>) -> Result<EpsilonSdp> {
    let n = g.n() as f64;
    if !(t > 0.0 && t <= n) {
        return Err(invalid(format!("t must lie in (0, {n}], got {t}")));
    }
    let c = (n - t) / (n * n * t);
    let half = g.total_weight() / 2.0;
    Ok(match sdp_g {
        Some(s) => EpsilonSdp { value: c * (s - half), exact: true },
        None => EpsilonSdp { value: c * half, exact: false },
    })
}

/// How subgraph SDP values are scaled into densities.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Normalization {
    /// Divide by `t^2`, the squared expected size.
    #[default]
    Expected,
    /// Divide by the squared realized size of each draw.
    Realized,
}

/// SDP solve on one Bernoulli draw.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SubgraphSdp {
    pub size: usize,
    pub primal: f64,
    pub dual: f64,
    pub wall_time_s: f64,
}

/// Solves the SDP on `trials` Bernoulli(`t/n`) induced subgraphs. Draws with
/// fewer than two vertices count as 0.
pub fn subgraph_sdp_values(
    g: &Graph,
    t: f64,
    trials: usize,
    opts: &SdpOptions,
    stream: &RandomStream,
) -> Result<Vec<SubgraphSdp>> {
    (0..trials)
        .into_par_iter()
        .map(|i| {
            let mut s = stream.derive(i as u64);
            let start = Instant::now();
            let sub = subsample_graph(g, SubsampleSpec::VerticesBernoulli { t }, &mut s)?;
            let size = sub.graph.n();
            let (primal, dual) = if size < 2 {
                (0.0, 0.0)
            } else {
                let sol = sdp_solve(&sub.graph, opts, &mut s);
                (sol.primal_value(), sol.dual_value())
            };
            Ok(SubgraphSdp { size, primal, dual, wall_time_s: start.elapsed().as_secs_f64() })
        })
        .collect()
}

/// Bracket for the full-graph GW cut density from subgraph SDP values:
/// `[0.878 E/t^2 - 0.878 eps, E/t^2]`. The point estimate is `E/t^2`.
pub fn estimate_gw_interval(
    g: &Graph,
    t: f64,
    trials: usize,
    sdp_g: Option<f64>,
    norm: Normalization,
    opts: &SdpOptions,
    stream: &RandomStream,
) -> Result<EstimateReport> {
    if trials == 0 {
        return Err(invalid("need at least one trial"));
    }
    let eps = epsilon_sdp(g, t, sdp_g)?;
    let runs = subgraph_sdp_values(g, t, trials, opts, stream)?;
    let records = runs
        .iter()
        .map(|r| {
            let scale = match norm {
                Normalization::Expected => t * t,
                Normalization::Realized => (r.size * r.size).max(1) as f64,
            };
            TrialRecord { value: r.primal / scale, wall_time_s: r.wall_time_s, ..TrialRecord::new(0.0) }
        })
        .collect();
    let mut report = EstimateReport::from_records(records);
    let hi = report.point_estimate;
    report.interval = Some((GW_RATIO * hi - GW_RATIO * eps.value, hi));
    Ok(report)
}

/// Both sides of the expected-value bound on subgraph SDP densities, plus
/// the high-probability radius for a single draw.
#[derive(Debug, Clone, PartialEq)]
pub struct SdpConvergence {
    pub t: f64,
    pub sdp_full: f64,
    /// Mean subgraph SDP value (estimate of `E[sdp(G[S_t])]`).
    pub mean_sdp: f64,
    pub mean_sdp_stderr: f64,
    /// `|E/t^2 - sdp(G)/n^2|`
    pub lhs: f64,
    pub lhs_stderr: f64,
    /// `(n - t)/(n^2 t) * (sdp(G) - W/2)`
    pub rhs: f64,
    /// Certified solver error on the normalized quantities (duality gaps).
    pub solver_slack: f64,
    pub radius: f64,
    /// Fraction of single draws whose deviation exceeded `radius`.
    pub radius_exceeded: f64,
    pub violated: bool,
    pub report: EstimateReport,
}

/// Measures the expected-value bound at expected size `t` over `trials`
/// Bernoulli draws. `violated` is set when `lhs > rhs + 3 stderr + slack`.
pub fn check_sdp_convergence(
    g: &Graph,
    t: f64,
    trials: usize,
    delta: f64,
    full: Option<&SdpSolution>,
    opts: &SdpOptions,
    stream: &RandomStream,
) -> Result<SdpConvergence> {
    if !(delta > 0.0 && delta < 1.0) {
        return Err(invalid("delta must lie in (0, 1)"));
    }
    let n = g.n() as f64;
    let owned;
    let full = match full {
        Some(s) => s,
        None => {
            owned = sdp_solve(g, opts, &mut stream.derive(u64::MAX));
            &owned
        }
    };
    let sdp_full = full.primal_value();
    let rhs = epsilon_sdp(g, t, Some(sdp_full))?.value;
    let runs = subgraph_sdp_values(g, t, trials, opts, stream)?;
    let primals: Vec<f64> = runs.iter().map(|r| r.primal).collect();
    let (mean_sdp, mean_sdp_stderr) = mean_stderr(&primals);
    let (mean_gap, _) = mean_stderr(&runs.iter().map(|r| r.dual - r.primal).collect::<Vec<_>>());
    let target = sdp_full / (n * n);
    let lhs = (mean_sdp / (t * t) - target).abs();
    let lhs_stderr = mean_sdp_stderr / (t * t);
    let solver_slack = full.gap().max(0.0) / (n * n) + mean_gap.max(0.0) / (t * t);

    let log_term = (2.0 / delta).ln().sqrt();
    let spread = if g.is_unweighted() { (n.powi(3) / t.powi(4)).sqrt() * log_term } else { g.total_weight() / (t * t) * log_term };
    let radius = (n - t) / (n * n * t) * (sdp_full - g.edge_count() as f64 / 2.0) + spread;
    let exceeded = primals.iter().filter(|&&p| (p / (t * t) - target).abs() > radius).count();

    let records = runs
        .iter()
        .map(|r| TrialRecord { value: r.primal, wall_time_s: r.wall_time_s, ..TrialRecord::new(0.0) })
        .collect();
    Ok(SdpConvergence {
        t,
        sdp_full,
        mean_sdp,
        mean_sdp_stderr,
        lhs,
        lhs_stderr,
        rhs,
        solver_slack,
        radius,
        radius_exceeded: if trials == 0 { 0.0 } else { exceeded as f64 / trials as f64 },
        violated: lhs > rhs + 3.0 * lhs_stderr + solver_slack,
        report: EstimateReport::from_records(records),
    })
}
