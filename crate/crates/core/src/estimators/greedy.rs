use crate::error::{invalid, Result};
use crate::maxcut::{cut_weight, greedy, Graph};
use crate::rng::RandomStream;

use super::{run_trials, subsample_graph, EstimateReport, SubsampleSpec, TrialRecord};

/// Mean greedy cut density `w / t^2` on `t`-vertex uniform subsamples, with
/// a fresh visiting order per trial.
pub fn estimate_greedy_density(g: &Graph, t: usize, trials: usize, stream: &RandomStream) -> Result<EstimateReport> {
    if t == 0 || t > g.n() {
        return Err(invalid(format!("t must be in 1..={}, got {t}", g.n())));
    }
    let records = run_trials(trials, stream, |_, s| {
        let sub = subsample_graph(g, SubsampleSpec::VerticesUniform { t }, s)?;
        let z = greedy(&sub.graph, s);
        Ok(TrialRecord::new(cut_weight(&sub.graph, &z)? / (t * t) as f64))
    })?;
    Ok(EstimateReport::from_records(records))
}
