use crate::centers::{
    approx_seeding, clustering_cost, cost_sample_size, generic_seeding, voronoi_assign, voronoi_partition, SelectionFn,
};
use crate::datagen::LabeledInstance;
use crate::error::{invalid, Result};
use crate::instance::Clustering;
use crate::oracle::DistanceOracle;
use crate::single_linkage::{single_linkage, single_linkage_on};
use crate::rng::RandomStream;

use super::{run_trials, subsample_indices, EstimateReport, SubsampleSpec, TrialRecord};

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ClusterAlgo {
    SingleLinkage,
    Seeding(SelectionFn),
}

impl ClusterAlgo {
    /// `sl`, or any selection-function name (`beta` is used by softmax).
    pub fn parse(name: &str, beta: f64) -> Result<Self> {
        match name {
            "sl" | "single_linkage" => Ok(Self::SingleLinkage),
            other => SelectionFn::parse(other, beta).map(Self::Seeding),
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Self::SingleLinkage => "sl",
            Self::Seeding(f) => f.name(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct AccuracyOptions {
    /// `(eps, delta)`: score seeding proxies on a fresh sample of the size
    /// [`cost_sample_size`] gives, instead of on the seeding sample.
    pub eval_budget: Option<(f64, f64)>,
    pub cache_distances: bool,
}

fn distance_oracle<'a>(data: &'a LabeledInstance, opts: &AccuracyOptions) -> DistanceOracle<'a> {
    if opts.cache_distances {
        DistanceOracle::with_cache(&data.instance)
    } else {
        DistanceOracle::new(&data.instance)
    }
}

fn record(accuracy_of: Clustering, o: &DistanceOracle, data: &LabeledInstance) -> Result<TrialRecord> {
    let gt = data.oracle();
    let cost = clustering_cost(&accuracy_of, &gt)?;
    Ok(TrialRecord {
        value: 1.0 - cost,
        distance_queries: o.query_count(),
        ground_truth_queries: gt.query_count(),
        wall_time_s: 0.0,
    })
}

/// Accuracy of the subsample proxy: single linkage on `m` points drawn
/// without replacement, or approximate seeding with chain length `m` on
/// `m k` points drawn with replacement. Each trial is scored against the
/// ground truth on the points it saw.
pub fn estimate_clustering_accuracy(
    data: &LabeledInstance,
    algo: ClusterAlgo,
    k: usize,
    m: usize,
    trials: usize,
    opts: &AccuracyOptions,
    stream: &RandomStream,
) -> Result<EstimateReport> {
    let n = data.instance.n();
    if k == 0 || m == 0 {
        return Err(invalid("k and m must be positive"));
    }
    if algo == ClusterAlgo::SingleLinkage && (m > n || m < k) {
        return Err(invalid(format!("single-linkage subsample needs k <= m <= n, got m = {m}")));
    }
    let records = run_trials(trials, stream, |_, s| {
        let o = distance_oracle(data, opts);
        let clustering = match algo {
            ClusterAlgo::SingleLinkage => {
                let points = subsample_indices(n, SubsampleSpec::PointsWithoutReplacement { m }, s)?;
                single_linkage_on(&o, &points, k)?.0
            }
            ClusterAlgo::Seeding(f) => {
                let sample = subsample_indices(n, SubsampleSpec::PointsWithReplacement { m: m * k }, s)?;
                let centers = approx_seeding(&o, &sample, k, m, f, s)?;
                match opts.eval_budget {
                    Some((eps, delta)) => {
                        let ell = cost_sample_size(k, eps, delta, 1.0)?.min(n);
                        let fresh = subsample_indices(n, SubsampleSpec::PointsWithoutReplacement { m: ell }, s)?;
                        voronoi_assign(&o, &fresh, &centers)?
                    }
                    None => voronoi_assign(&o, &sample, &centers)?,
                }
            }
        };
        record(clustering, &o, data)
    })?;
    Ok(EstimateReport::from_records(records))
}

/// Accuracy of the algorithm run on the whole instance, scored on every
/// point.
pub fn full_run_accuracy(
    data: &LabeledInstance,
    algo: ClusterAlgo,
    k: usize,
    trials: usize,
    opts: &AccuracyOptions,
    stream: &RandomStream,
) -> Result<EstimateReport> {
    let records = run_trials(trials, stream, |_, s| {
        let o = distance_oracle(data, opts);
        let clustering = match algo {
            ClusterAlgo::SingleLinkage => single_linkage(&o, k)?.0,
            ClusterAlgo::Seeding(f) => voronoi_partition(&o, &generic_seeding(&o, k, f, s)?)?,
        };
        record(clustering, &o, data)
    })?;
    Ok(EstimateReport::from_records(records))
}
