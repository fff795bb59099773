use std::time::Instant;

use rayon::prelude::*;

use crate::error::{invalid, Result};
use crate::maxcut::{cut_weight, greedy, gw_round, sdp_solve, Cut, Graph, SdpOptions};
use crate::rng::RandomStream;

use super::{mean_stderr, subsample_graph, SubsampleSpec};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Ranking {
    Best(usize),
    /// The top two candidates are within one standard error of each other.
    Tie,
}

#[derive(Debug, Clone, PartialEq)]
pub struct AdaptiveStep {
    pub size: usize,
    /// `values[trial][candidate]`
    pub values: Vec<Vec<f64>>,
    /// `times[trial][candidate]`, seconds
    pub times: Vec<Vec<f64>>,
    pub means: Vec<f64>,
    pub stderrs: Vec<f64>,
    pub ranking: Ranking,
}

#[derive(Debug, Clone, PartialEq)]
pub struct AdaptiveResult {
    pub selected: Ranking,
    pub stable: bool,
    /// First size of the window over which the ranking held.
    pub stabilized_at: Option<usize>,
    pub steps: Vec<AdaptiveStep>,
}

/// Ranks candidates on paired trials: the leader wins unless its mean lead
/// over the runner-up is at most one standard error of the paired
/// differences.
fn rank(values: &[Vec<f64>], candidates: usize) -> (Vec<f64>, Vec<f64>, Ranking) {
    let column = |c: usize| values.iter().map(|row| row[c]).collect::<Vec<_>>();
    let (means, stderrs): (Vec<f64>, Vec<f64>) = (0..candidates).map(|c| mean_stderr(&column(c))).unzip();
    let mut order: Vec<usize> = (0..candidates).collect();
    order.sort_by(|&a, &b| means[b].total_cmp(&means[a]).then(a.cmp(&b)));
    let (top, second) = (order[0], order[1]);
    let diffs: Vec<f64> = values.iter().map(|row| row[top] - row[second]).collect();
    let (lead, se) = mean_stderr(&diffs);
    let ranking = if lead <= se { Ranking::Tie } else { Ranking::Best(top) };
    (means, stderrs, ranking)
}

/// Evaluates all candidates at increasing subsample sizes and stops once the
/// same candidate has won `window` consecutive sizes. `eval(size, stream)`
/// runs every candidate on one shared subsample and returns
/// `(value, seconds)` per candidate. If the schedule runs out, a schedule of
/// nothing but ties is reported as a stable tie; anything else returns the
/// last ranking flagged unstable.
pub fn adaptive_select<F>(
    candidates: usize,
    sizes: &[usize],
    trials: usize,
    window: usize,
    stream: &RandomStream,
    eval: F,
) -> Result<AdaptiveResult>
where
    F: Fn(usize, &mut RandomStream) -> Result<Vec<(f64, f64)>> + Sync,
{
    if candidates < 2 {
        return Err(invalid("adaptive selection needs at least two candidates"));
    }
    if sizes.is_empty() || trials == 0 || window == 0 {
        return Err(invalid("need a nonempty schedule, trials >= 1 and window >= 1"));
    }
    let mut steps: Vec<AdaptiveStep> = Vec::new();
    let mut run_start = 0;
    for (si, &size) in sizes.iter().enumerate() {
        let level = stream.derive(si as u64);
        let rows: Vec<Vec<(f64, f64)>> = (0..trials)
            .into_par_iter()
            .map(|i| {
                let row = eval(size, &mut level.derive(i as u64))?;
                if row.len() != candidates {
                    return Err(invalid("evaluator returned the wrong number of candidates"));
                }
                Ok(row)
            })
            .collect::<Result<_>>()?;
        let values: Vec<Vec<f64>> = rows.iter().map(|r| r.iter().map(|p| p.0).collect()).collect();
        let times = rows.iter().map(|r| r.iter().map(|p| p.1).collect()).collect();
        let (means, stderrs, ranking) = rank(&values, candidates);
        if si > 0 && steps[si - 1].ranking != ranking {
            run_start = si;
        }
        steps.push(AdaptiveStep { size, values, times, means, stderrs, ranking });
        if matches!(ranking, Ranking::Best(_)) && si + 1 - run_start >= window {
            return Ok(AdaptiveResult {
                selected: ranking,
                stable: true,
                stabilized_at: Some(sizes[run_start]),
                steps,
            });
        }
    }
    let all_tie = steps.iter().all(|s| s.ranking == Ranking::Tie);
    let last = steps.last().expect("schedule is nonempty").ranking;
    Ok(AdaptiveResult {
        selected: last,
        stable: all_tie,
        stabilized_at: all_tie.then(|| sizes[0]),
        steps,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MaxCutAlgo {
    /// SDP solve plus one hyperplane rounding.
    Gw,
    Greedy,
}

impl MaxCutAlgo {
    pub fn parse(name: &str) -> Result<Self> {
        match name {
            "gw" => Ok(Self::Gw),
            "greedy" => Ok(Self::Greedy),
            other => Err(invalid(format!("unknown max-cut algorithm '{other}'"))),
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Self::Gw => "gw",
            Self::Greedy => "greedy",
        }
    }

    pub fn run(&self, g: &Graph, opts: &SdpOptions, stream: &mut RandomStream) -> Cut {
        match self {
            Self::Gw => gw_round(&sdp_solve(g, opts, stream), stream),
            Self::Greedy => greedy(g, stream),
        }
    }
}

/// [`adaptive_select`] for max-cut algorithms scored by cut density on
/// uniform vertex subsamples of each size.
pub fn adaptive_maxcut(
    g: &Graph,
    algos: &[MaxCutAlgo],
    sizes: &[usize],
    trials: usize,
    window: usize,
    opts: &SdpOptions,
    stream: &RandomStream,
) -> Result<AdaptiveResult> {
    if let Some(&bad) = sizes.iter().find(|&&s| s == 0 || s > g.n()) {
        return Err(invalid(format!("subsample size {bad} not in 1..={}", g.n())));
    }
    adaptive_select(algos.len(), sizes, trials, window, stream, |size, s| {
        let sub = subsample_graph(g, SubsampleSpec::VerticesUniform { t: size }, s)?;
        algos
            .iter()
            .map(|a| {
                let start = Instant::now();
                let z = a.run(&sub.graph, opts, s);
                let secs = start.elapsed().as_secs_f64();
                Ok((cut_weight(&sub.graph, &z)? / (size * size) as f64, secs))
            })
            .collect()
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identical_candidates_tie_stably() {
        let r = adaptive_select(2, &[2, 4, 8], 5, 2, &RandomStream::new(0, 0), |size, _| {
            Ok(vec![(size as f64, 0.0), (size as f64, 0.0)])
        })
        .unwrap();
        assert_eq!(r.selected, Ranking::Tie);
        assert!(r.stable);
        assert_eq!(r.stabilized_at, Some(2));
    }

    #[test]
    fn clear_winner_stops_early() {
        let r = adaptive_select(2, &[2, 4, 8, 16], 5, 2, &RandomStream::new(0, 0), |_, s| {
            let noise: f64 = rand::Rng::random(s);
            Ok(vec![(noise, 0.0), (noise + 1.0, 0.0)])
        })
        .unwrap();
        assert_eq!(r.selected, Ranking::Best(1));
        assert_eq!(r.stabilized_at, Some(2));
        assert_eq!(r.steps.len(), 2);
    }

    #[test]
    fn flip_flop_is_unstable() {
        let r = adaptive_select(2, &[1, 2, 3, 4], 3, 2, &RandomStream::new(0, 0), |size, _| {
            let a = (size % 2) as f64;
            Ok(vec![(a, 0.0), (1.0 - a, 0.0)])
        })
        .unwrap();
        assert!(!r.stable);
        assert_eq!(r.selected, Ranking::Best(1));
    }

    #[test]
    fn rejects_bad_input() {
        let g = Graph::complete(4);
        let opts = SdpOptions::default();
        let s = RandomStream::new(0, 0);
        assert!(adaptive_maxcut(&g, &[MaxCutAlgo::Gw], &[2], 1, 1, &opts, &s).is_err());
        assert!(adaptive_maxcut(&g, &[MaxCutAlgo::Gw, MaxCutAlgo::Greedy], &[5], 1, 1, &opts, &s).is_err());
    }
}
