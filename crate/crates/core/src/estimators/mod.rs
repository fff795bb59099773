//! Subsampling and the subsample-based performance estimators.

mod accuracy;
mod adaptive;
mod greedy;
mod sdp_bounds;
mod subsample;

use std::time::Instant;

use rayon::prelude::*;

use crate::error::{invalid, Result};
use crate::rng::RandomStream;

pub use accuracy::{estimate_clustering_accuracy, full_run_accuracy, AccuracyOptions, ClusterAlgo};
pub use adaptive::{adaptive_maxcut, adaptive_select, AdaptiveResult, AdaptiveStep, MaxCutAlgo, Ranking};
pub use greedy::estimate_greedy_density;
pub use sdp_bounds::{
    check_sdp_convergence, epsilon_sdp, estimate_gw_interval, subgraph_sdp_values, EpsilonSdp, Normalization,
    SdpConvergence,
};
pub use subsample::{subsample_graph, subsample_indices, SubsampleSpec};

/// Outcome of one trial.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TrialRecord {
    pub value: f64,
    pub distance_queries: u64,
    pub ground_truth_queries: u64,
    pub wall_time_s: f64,
}

impl TrialRecord {
    pub fn new(value: f64) -> Self {
        Self { value, distance_queries: 0, ground_truth_queries: 0, wall_time_s: 0.0 }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct EstimateReport {
    pub point_estimate: f64,
    pub interval: Option<(f64, f64)>,
    pub trials: usize,
    pub stderr: f64,
    pub distance_queries: u64,
    pub ground_truth_queries: u64,
    pub wall_time_s: f64,
    pub records: Vec<TrialRecord>,
}

impl EstimateReport {
    /// Mean and standard error of the trial values, with summed counters.
    pub fn from_records(records: Vec<TrialRecord>) -> Self {
        let values: Vec<f64> = records.iter().map(|r| r.value).collect();
        let (mean, stderr) = mean_stderr(&values);
        Self {
            point_estimate: mean,
            interval: None,
            trials: records.len(),
            stderr,
            distance_queries: records.iter().map(|r| r.distance_queries).sum(),
            ground_truth_queries: records.iter().map(|r| r.ground_truth_queries).sum(),
            wall_time_s: records.iter().map(|r| r.wall_time_s).sum(),
            records,
        }
    }

    pub fn values(&self) -> Vec<f64> {
        self.records.iter().map(|r| r.value).collect()
    }
}

/// Sample mean and standard error of the mean (0 for fewer than two values).
pub fn mean_stderr(values: &[f64]) -> (f64, f64) {
    let t = values.len();
    if t == 0 {
        return (0.0, 0.0);
    }
    let mean = values.iter().sum::<f64>() / t as f64;
    if t < 2 {
        return (mean, 0.0);
    }
    let var = values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (t - 1) as f64;
    (mean, (var / t as f64).sqrt())
}

/// Runs `trials` independent trials in parallel, trial `i` on
/// `stream.derive(i)`; results come back in trial order and each record's
/// wall time is filled in.
pub fn run_trials<F>(trials: usize, stream: &RandomStream, f: F) -> Result<Vec<TrialRecord>>
where
    F: Fn(usize, &mut RandomStream) -> Result<TrialRecord> + Sync,
{
    (0..trials)
        .into_par_iter()
        .map(|i| {
            let mut s = stream.derive(i as u64);
            let start = Instant::now();
            let mut rec = f(i, &mut s)?;
            rec.wall_time_s = start.elapsed().as_secs_f64();
            Ok(rec)
        })
        .collect()
}

/// Index of the row with the largest sum; ties go to the lowest index.
pub fn erm_select(values: &[Vec<f64>]) -> Result<usize> {
    let first = values.first().ok_or_else(|| invalid("no algorithms to select from"))?;
    if values.iter().any(|row| row.len() != first.len()) {
        return Err(invalid("value matrix is ragged"));
    }
    let mut best = (0, f64::NEG_INFINITY);
    for (i, row) in values.iter().enumerate() {
        let s: f64 = row.iter().sum();
        if s > best.1 {
            best = (i, s);
        }
    }
    Ok(best.0)
}
