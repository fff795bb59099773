//! Experiment configuration and the CSV-emitting runner behind the CLI.

use std::collections::BTreeMap;
use std::fs::File;
use std::io::{BufReader, Write};
use std::path::PathBuf;
use std::str::FromStr;

use crate::datagen::{
    gen_bridge_instance, gen_gaussian_mixture, gen_graph, gen_noisy_circles, gen_outlier_instance, GraphSpec,
    LabeledInstance,
};
use crate::error::{invalid, Error, Result};
use crate::estimators::{
    adaptive_maxcut, check_sdp_convergence, erm_select, estimate_clustering_accuracy, estimate_gw_interval,
    full_run_accuracy, run_trials, subsample_graph, AccuracyOptions, ClusterAlgo, EstimateReport, MaxCutAlgo,
    Normalization, Ranking, SubsampleSpec, TrialRecord,
};
use crate::io::{read_graph, read_points, write_graph, write_points};
use crate::maxcut::{cut_weight, sdp_solve, Graph, SdpOptions};
use crate::rng::RandomStream;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Task {
    Gen,
    Cluster,
    Maxcut,
    Sdp,
    Adaptive,
    Select,
}

impl Task {
    pub fn name(&self) -> &'static str {
        match self {
            Self::Gen => "gen",
            Self::Cluster => "cluster",
            Self::Maxcut => "maxcut",
            Self::Sdp => "sdp",
            Self::Adaptive => "adaptive",
            Self::Select => "select",
        }
    }
}

const POINT_FAMILIES: [&str; 4] = ["gm", "circles", "bridge", "outlier"];

/// Where the instance comes from.
#[derive(Debug, Clone, PartialEq)]
pub enum Source {
    Generator { family: String, n: usize },
    PointsFile(PathBuf),
    GraphFile(PathBuf),
    None,
}

/// Fully resolved settings for one run.
#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub task: Task,
    pub source: Source,
    pub algorithms: Vec<String>,
    /// Subsample sizes (m for clustering, vertex counts for graphs).
    pub sizes: Vec<usize>,
    /// Subsample sizes as fractions of n, used when `sizes` is empty.
    pub fractions: Vec<f64>,
    pub trials: usize,
    pub seed: u64,
    pub out: Option<PathBuf>,
    /// Cluster count; defaults to the instance's label count.
    pub k: Option<usize>,
    pub beta: f64,
    pub window: usize,
    pub sdp: SdpOptions,
    pub delta: f64,
    pub eval_budget: Option<(f64, f64)>,
    pub realized_normalization: bool,
    pub include_full: bool,
    pub values: Option<PathBuf>,
    /// Generator parameters (`p`, `radius`, `inter`, `m`, `alpha`, `beta`).
    pub params: BTreeMap<String, f64>,
}

/// Reads `key = value` lines, keeping top-level keys and those under
/// `[task]`. `#` starts a comment.
pub fn parse_config(text: &str, task: Task) -> Result<BTreeMap<String, String>> {
    let mut out = BTreeMap::new();
    let mut section: Option<String> = None;
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        if let Some(name) = line.strip_prefix('[').and_then(|l| l.strip_suffix(']')) {
            section = Some(name.trim().to_string());
            continue;
        }
        let (key, value) = line
            .split_once('=')
            .ok_or_else(|| Error::Parse(format!("config line {}: expected key = value", i + 1)))?;
        if section.as_deref().is_none_or(|s| s == task.name()) {
            out.insert(key.trim().to_string(), value.trim().to_string());
        }
    }
    Ok(out)
}

fn get<T: FromStr>(s: &BTreeMap<String, String>, key: &str) -> Result<Option<T>> {
    s.get(key)
        .map(|v| v.parse::<T>().map_err(|_| invalid(format!("cannot parse {key} = {v:?}"))))
        .transpose()
}

fn list<T: FromStr>(s: &BTreeMap<String, String>, key: &str) -> Result<Vec<T>> {
    match s.get(key) {
        None => Ok(Vec::new()),
        Some(v) => v
            .split(',')
            .map(str::trim)
            .filter(|x| !x.is_empty())
            .map(|x| x.parse::<T>().map_err(|_| invalid(format!("cannot parse {key} entry {x:?}"))))
            .collect(),
    }
}

impl ExperimentConfig {
    /// Builds a config from merged settings. Keys not naming a setting are
    /// generator parameters and must be numeric.
    pub fn from_settings(task: Task, s: &BTreeMap<String, String>) -> Result<Self> {
        const KNOWN: [&str; 22] = [
            "family", "n", "points", "graph", "algorithms", "sizes", "fractions", "trials", "seed", "out", "k",
            "softmax_beta", "window", "tol", "max_sweeps", "delta", "eval_eps", "eval_delta", "normalization",
            "full", "values", "jobs",
        ];
        let mut params = BTreeMap::new();
        for (key, v) in s {
            if !KNOWN.contains(&key.as_str()) {
                let x = v.parse::<f64>().map_err(|_| invalid(format!("unknown setting or non-numeric parameter {key} = {v:?}")))?;
                params.insert(key.clone(), x);
            }
        }
        let source = match (s.get("family"), s.get("points"), s.get("graph")) {
            (Some(f), None, None) => Source::Generator {
                family: f.clone(),
                n: get(s, "n")?.ok_or_else(|| invalid("generator needs n"))?,
            },
            (None, Some(p), None) => Source::PointsFile(p.into()),
            (None, None, Some(g)) => Source::GraphFile(g.into()),
            (None, None, None) => Source::None,
            _ => return Err(invalid("give exactly one of family, points, graph")),
        };
        let eval_budget = match (get::<f64>(s, "eval_eps")?, get::<f64>(s, "eval_delta")?) {
            (Some(e), Some(d)) => Some((e, d)),
            (None, None) => None,
            _ => return Err(invalid("eval_eps and eval_delta go together")),
        };
        let realized_normalization = match s.get("normalization").map(String::as_str) {
            None | Some("expected") => false,
            Some("realized") => true,
            Some(other) => return Err(invalid(format!("normalization must be expected or realized, got {other}"))),
        };
        let default_algos: &[&str] = match task {
            Task::Cluster => &["sl", "kmeanspp", "softmax"],
            _ => &["gw", "greedy"],
        };
        let mut algorithms: Vec<String> = list(s, "algorithms")?;
        if algorithms.is_empty() {
            algorithms = default_algos.iter().map(|a| a.to_string()).collect();
        }
        let cfg = Self {
            task,
            source,
            algorithms,
            sizes: list(s, "sizes")?,
            fractions: list(s, "fractions")?,
            trials: get(s, "trials")?.unwrap_or(10),
            seed: get(s, "seed")?.unwrap_or(0),
            out: s.get("out").map(PathBuf::from),
            k: get(s, "k")?,
            beta: get(s, "softmax_beta")?.unwrap_or(1.0),
            window: get(s, "window")?.unwrap_or(2),
            sdp: SdpOptions {
                tol: get(s, "tol")?.unwrap_or(1e-7),
                max_sweeps: get(s, "max_sweeps")?.unwrap_or(10_000),
                rank: None,
            },
            delta: get(s, "delta")?.unwrap_or(0.05),
            eval_budget,
            realized_normalization,
            include_full: get(s, "full")?.unwrap_or(true),
            values: s.get("values").map(PathBuf::from),
            params,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    fn validate(&self) -> Result<()> {
        let files = [
            match &self.source {
                Source::PointsFile(p) | Source::GraphFile(p) => Some(p),
                _ => None,
            },
            self.values.as_ref(),
        ];
        if let Some(missing) = files.into_iter().flatten().find(|p| !p.is_file()) {
            return Err(invalid(format!("file not found: {}", missing.display())));
        }
        if let Some(&f) = self.fractions.iter().find(|&&f| !(f > 0.0 && f <= 1.0)) {
            return Err(invalid(format!("fraction {f} not in (0, 1]")));
        }
        if self.sdp.tol <= 0.0 {
            return Err(invalid("tol must be positive"));
        }
        match self.task {
            Task::Cluster => {
                for a in &self.algorithms {
                    ClusterAlgo::parse(a, self.beta)?;
                }
            }
            Task::Maxcut | Task::Adaptive => {
                for a in &self.algorithms {
                    MaxCutAlgo::parse(a)?;
                }
            }
            Task::Select if self.values.is_none() => return Err(invalid("select needs values")),
            _ => {}
        }
        if matches!(self.task, Task::Gen | Task::Cluster | Task::Maxcut | Task::Sdp | Task::Adaptive)
            && self.source == Source::None
        {
            return Err(invalid("no instance given (family, points or graph)"));
        }
        Ok(())
    }

    fn param(&self, key: &str) -> Option<f64> {
        self.params.get(key).copied()
    }

    fn stream(&self, index: u64) -> RandomStream {
        RandomStream::new(self.seed, 0).derive(index)
    }

    fn labeled(&self) -> Result<LabeledInstance> {
        match &self.source {
            Source::Generator { family, n } => {
                let mut s = self.stream(0);
                match family.as_str() {
                    "gm" => gen_gaussian_mixture(*n, &mut s),
                    "circles" => gen_noisy_circles(*n, &mut s),
                    "bridge" => gen_bridge_instance(*n, self.param("alpha").unwrap_or(1.0), self.param("beta").unwrap_or(1.5)),
                    "outlier" => gen_outlier_instance(*n, self.param("alpha").unwrap_or(0.25)),
                    other => Err(invalid(format!("'{other}' is not a point family"))),
                }
            }
            Source::PointsFile(path) => {
                let pf = read_points(BufReader::new(File::open(path)?))?;
                let labels = pf.labels.ok_or_else(|| invalid("points file has no label column"))?;
                let k = labels.iter().max().map_or(1, |m| m + 1);
                Ok(LabeledInstance { instance: pf.instance, labels, k })
            }
            _ => Err(invalid("task needs a point instance")),
        }
    }

    fn graph(&self) -> Result<Graph> {
        match &self.source {
            Source::Generator { family, n } => {
                let spec = GraphSpec::parse(family, *n, |k| self.param(k))?;
                gen_graph(&spec, &mut self.stream(0))
            }
            Source::GraphFile(path) => read_graph(BufReader::new(File::open(path)?), None),
            _ => Err(invalid("task needs a graph")),
        }
    }

    fn resolved_sizes(&self, n: usize) -> Vec<usize> {
        if !self.sizes.is_empty() {
            return self.sizes.clone();
        }
        self.fractions.iter().map(|f| ((f * n as f64).round() as usize).max(1)).collect()
    }
}

/// One CSV row.
#[derive(Debug, Clone, PartialEq)]
pub struct Row {
    pub trial: Option<usize>,
    pub size: usize,
    pub algorithm: String,
    pub metric: String,
    pub value: f64,
    pub queries_distance: u64,
    pub queries_ground_truth: u64,
    pub wall_time_s: f64,
    pub unstable: Option<bool>,
}

impl Row {
    fn aggregate(size: usize, algorithm: &str, metric: &str, value: f64) -> Self {
        Self {
            trial: None,
            size,
            algorithm: algorithm.into(),
            metric: metric.into(),
            value,
            queries_distance: 0,
            queries_ground_truth: 0,
            wall_time_s: 0.0,
            unstable: None,
        }
    }

    fn from_trial(trial: usize, size: usize, algorithm: &str, metric: &str, r: &TrialRecord) -> Self {
        Self {
            trial: Some(trial),
            size,
            algorithm: algorithm.into(),
            metric: metric.into(),
            value: r.value,
            queries_distance: r.distance_queries,
            queries_ground_truth: r.ground_truth_queries,
            wall_time_s: r.wall_time_s,
            unstable: None,
        }
    }
}

fn rows_from(report: &EstimateReport, size: usize, algorithm: &str, metric: &str) -> Vec<Row> {
    report.records.iter().enumerate().map(|(i, r)| Row::from_trial(i, size, algorithm, metric, r)).collect()
}

/// Formats with 9 significant digits, trailing zeros dropped.
pub fn format_sig(x: f64) -> String {
    if !x.is_finite() {
        return x.to_string();
    }
    if x == 0.0 {
        return "0".into();
    }
    let exp = x.abs().log10().floor() as i32;
    let trim = |s: String| {
        if s.contains('.') {
            s.trim_end_matches('0').trim_end_matches('.').to_string()
        } else {
            s
        }
    };
    if (-5..9).contains(&exp) {
        trim(format!("{:.*}", (8 - exp).max(0) as usize, x))
    } else {
        let s = format!("{x:.8e}");
        let (mant, e) = s.split_once('e').expect("scientific format");
        format!("{}e{e}", trim(mant.to_string()))
    }
}

pub const CSV_HEADER: [&str; 8] =
    ["trial", "size", "algorithm", "metric", "value", "queries_distance", "queries_ground_truth", "wall_time_s"];

/// Writes rows as CSV; the `unstable` column appears when `with_unstable`.
pub fn write_rows<W: Write>(w: W, rows: &[Row], with_unstable: bool) -> Result<()> {
    let mut wtr = csv::Writer::from_writer(w);
    let mut header: Vec<&str> = CSV_HEADER.to_vec();
    if with_unstable {
        header.push("unstable");
    }
    wtr.write_record(&header)?;
    for r in rows {
        let mut rec = vec![
            r.trial.map_or(String::new(), |t| t.to_string()),
            r.size.to_string(),
            r.algorithm.clone(),
            r.metric.clone(),
            format_sig(r.value),
            r.queries_distance.to_string(),
            r.queries_ground_truth.to_string(),
            format_sig(r.wall_time_s),
        ];
        if with_unstable {
            rec.push(r.unstable.unwrap_or(false).to_string());
        }
        wtr.write_record(&rec)?;
    }
    wtr.flush()?;
    Ok(())
}

/// What a run produced besides its output file.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct RunOutcome {
    /// Human-readable summary lines (for stderr).
    pub summary: Vec<String>,
}

/// Runs the configured task and writes its output to `out`.
pub fn run_experiment<W: Write>(cfg: &ExperimentConfig, mut out: W) -> Result<RunOutcome> {
    let mut outcome = RunOutcome::default();
    match cfg.task {
        Task::Gen => run_gen(cfg, out)?,
        Task::Cluster => write_rows(out, &cluster_rows(cfg)?, false)?,
        Task::Maxcut => write_rows(out, &maxcut_rows(cfg)?, false)?,
        Task::Sdp => {
            let g = cfg.graph()?;
            let full = sdp_solve(&g, &cfg.sdp, &mut cfg.stream(1));
            let line = format!(
                "primal={} dual={} gap={} converged={} sweeps={}",
                format_sig(full.primal_value()),
                format_sig(full.dual_value()),
                format_sig(full.gap()),
                full.converged(),
                full.sweeps()
            );
            let sizes = cfg.resolved_sizes(g.n());
            if sizes.is_empty() {
                writeln!(out, "{}", line.replace(' ', "\n"))?;
            } else {
                write_rows(out, &sdp_rows(cfg, &g, &full, &sizes)?, false)?;
                outcome.summary.push(line);
            }
        }
        Task::Adaptive => {
            let (rows, line) = adaptive_rows(cfg)?;
            outcome.summary.push(line);
            write_rows(out, &rows, true)?;
        }
        Task::Select => {
            let path = cfg.values.as_ref().expect("validated");
            let text = std::fs::read_to_string(path)?;
            let mut matrix = Vec::new();
            for line in text.lines().map(str::trim).filter(|l| !l.is_empty() && !l.starts_with('#')) {
                let row = line
                    .split([',', ' ', '\t'])
                    .filter(|x| !x.is_empty())
                    .map(|x| x.parse::<f64>().map_err(|_| Error::Parse(format!("bad value {x:?}"))))
                    .collect::<Result<Vec<_>>>()?;
                matrix.push(row);
            }
            let best = erm_select(&matrix)?;
            writeln!(out, "selected={best}")?;
        }
    }
    Ok(outcome)
}

fn run_gen<W: Write>(cfg: &ExperimentConfig, out: W) -> Result<()> {
    if let Source::Generator { family, .. } = &cfg.source {
        if POINT_FAMILIES.contains(&family.as_str()) {
            let data = cfg.labeled()?;
            return write_points(out, &data.instance, Some(&data.labels));
        }
    }
    write_graph(out, &cfg.graph()?)
}

fn cluster_rows(cfg: &ExperimentConfig) -> Result<Vec<Row>> {
    let data = cfg.labeled()?;
    let n = data.instance.n();
    let k = cfg.k.unwrap_or(data.k);
    let opts = AccuracyOptions { eval_budget: cfg.eval_budget, cache_distances: false };
    let mut sizes = cfg.resolved_sizes(n);
    if let Some(m) = zeta_sample_size(cfg, k)? {
        sizes.push(m);
    }
    if let Some(&m) = sizes.iter().find(|&&m| m == 0 || m > n) {
        return Err(invalid(format!("subsample size {m} not in 1..={n}")));
    }
    let mut rows = Vec::new();
    for (ai, name) in cfg.algorithms.iter().enumerate() {
        let algo = ClusterAlgo::parse(name, cfg.beta)?;
        let base = 1 + ((ai as u64) << 32);
        for (si, &m) in sizes.iter().enumerate() {
            let rep = estimate_clustering_accuracy(&data, algo, k, m, cfg.trials, &opts, &cfg.stream(base + 1 + si as u64))?;
            rows.extend(rows_from(&rep, m, name, "accuracy"));
        }
        if cfg.include_full {
            let rep = full_run_accuracy(&data, algo, k, cfg.trials, &opts, &cfg.stream(base))?;
            rows.extend(rows_from(&rep, n, name, "full_accuracy"));
        }
    }
    Ok(rows)
}

/// `m = ceil(c * zeta * ln(k / eps))` when the `zeta` and `eps` parameters
/// are set; `c` is `m_constant` (default 1).
fn zeta_sample_size(cfg: &ExperimentConfig, k: usize) -> Result<Option<usize>> {
    let (Some(zeta), Some(eps)) = (cfg.param("zeta"), cfg.param("eps")) else {
        return Ok(None);
    };
    let c = cfg.param("m_constant").unwrap_or(1.0);
    if !(zeta > 0.0 && eps > 0.0 && c > 0.0) {
        return Err(invalid("zeta, eps and m_constant must be positive"));
    }
    let m = (c * zeta * (k as f64 / eps).ln()).ceil();
    Ok(Some((m as usize).max(1)))
}

fn maxcut_rows(cfg: &ExperimentConfig) -> Result<Vec<Row>> {
    let g = cfg.graph()?;
    let n = g.n();
    let mut sizes = cfg.resolved_sizes(n);
    if sizes.is_empty() {
        sizes.push(n);
    }
    let mut rows = Vec::new();
    for (ai, name) in cfg.algorithms.iter().enumerate() {
        let algo = MaxCutAlgo::parse(name)?;
        for (si, &t) in sizes.iter().enumerate() {
            if t == 0 || t > n {
                return Err(invalid(format!("subsample size {t} not in 1..={n}")));
            }
            let stream = cfg.stream(1 + ((ai as u64) << 32) + si as u64);
            let records = run_trials(cfg.trials, &stream, |_, s| {
                let sub = subsample_graph(&g, SubsampleSpec::VerticesUniform { t }, s)?;
                let z = algo.run(&sub.graph, &cfg.sdp, s);
                Ok(TrialRecord::new(cut_weight(&sub.graph, &z)? / (t * t) as f64))
            })?;
            rows.extend(rows_from(&EstimateReport::from_records(records), t, name, "density"));
        }
    }
    Ok(rows)
}

fn sdp_rows(cfg: &ExperimentConfig, g: &Graph, full: &crate::maxcut::SdpSolution, sizes: &[usize]) -> Result<Vec<Row>> {
    let n = g.n() as f64;
    let norm = if cfg.realized_normalization { Normalization::Realized } else { Normalization::Expected };
    let mut rows = vec![Row::aggregate(g.n(), "sdp", "full_density", full.primal_value() / (n * n))];
    if cfg.trials == 0 {
        return Ok(rows);
    }
    for (si, &t) in sizes.iter().enumerate() {
        let tf = t as f64;
        let stream = cfg.stream(2 + si as u64);
        let conv = check_sdp_convergence(g, tf, cfg.trials, cfg.delta, Some(full), &cfg.sdp, &stream)?;
        for (i, r) in conv.report.records.iter().enumerate() {
            let scaled = TrialRecord { value: r.value / (tf * tf), ..*r };
            rows.push(Row::from_trial(i, t, "sdp", "subgraph_density", &scaled));
        }
        let interval = estimate_gw_interval(g, tf, cfg.trials, None, norm, &cfg.sdp, &stream)?;
        let (lo, hi) = interval.interval.expect("interval is always set");
        for (metric, v) in [
            ("lhs", conv.lhs),
            ("lhs_stderr", conv.lhs_stderr),
            ("rhs", conv.rhs),
            ("solver_slack", conv.solver_slack),
            ("radius", conv.radius),
            ("interval_lo", lo),
            ("interval_hi", hi),
            ("violated", f64::from(u8::from(conv.violated))),
        ] {
            rows.push(Row::aggregate(t, "sdp", metric, v));
        }
    }
    Ok(rows)
}

fn adaptive_rows(cfg: &ExperimentConfig) -> Result<(Vec<Row>, String)> {
    let g = cfg.graph()?;
    let algos = cfg.algorithms.iter().map(|a| MaxCutAlgo::parse(a)).collect::<Result<Vec<_>>>()?;
    let mut sizes = cfg.resolved_sizes(g.n());
    if sizes.is_empty() {
        sizes = std::iter::successors(Some(2usize), |s| Some(s * 2)).take_while(|&s| s <= g.n()).collect();
    }
    let res = adaptive_maxcut(&g, &algos, &sizes, cfg.trials.max(1), cfg.window, &cfg.sdp, &cfg.stream(1))?;
    let unstable = !res.stable;
    let mut rows = Vec::new();
    if cfg.trials > 0 {
        for step in &res.steps {
            for (trial, (vals, times)) in step.values.iter().zip(&step.times).enumerate() {
                for (ai, a) in algos.iter().enumerate() {
                    let rec = TrialRecord { value: vals[ai], wall_time_s: times[ai], ..TrialRecord::new(0.0) };
                    let mut row = Row::from_trial(trial, step.size, a.name(), "density", &rec);
                    row.unstable = Some(unstable);
                    rows.push(row);
                }
            }
        }
    }
    let selected = match res.selected {
        Ranking::Best(i) => algos[i].name().to_string(),
        Ranking::Tie => "both".to_string(),
    };
    let at = res.stabilized_at.map_or("none".to_string(), |s| s.to_string());
    Ok((rows, format!("selected={selected} stable={} stabilized_at={at}", res.stable)))
}
