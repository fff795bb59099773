use std::collections::BTreeMap;
use std::fmt::Display;
use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use sizegen::experiment::{parse_config, run_experiment, ExperimentConfig, Task};

#[derive(Parser)]
#[command(name = "sizegen", version, about = "Estimate and select clustering and max-cut algorithms from subsamples")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a point set (gm, circles, bridge, outlier) or a graph.
    Gen {
        family: String,
        #[arg(long)]
        n: usize,
        #[command(flatten)]
        common: Common,
    },
    /// Subsample accuracy of clustering algorithms.
    Cluster {
        #[command(flatten)]
        source: SourceArgs,
        #[command(flatten)]
        schedule: Schedule,
        #[arg(long)]
        k: Option<usize>,
        #[arg(long)]
        softmax_beta: Option<f64>,
        #[arg(long)]
        eval_eps: Option<f64>,
        #[arg(long)]
        eval_delta: Option<f64>,
        /// Also emit full-instance accuracy rows.
        #[arg(long)]
        full: Option<bool>,
        #[command(flatten)]
        common: Common,
    },
    /// Subsample cut density of max-cut algorithms.
    Maxcut {
        #[command(flatten)]
        source: SourceArgs,
        #[command(flatten)]
        schedule: Schedule,
        #[command(flatten)]
        solver: Solver,
        #[command(flatten)]
        common: Common,
    },
    /// Solve the max-cut SDP, optionally with subgraph bounds.
    Sdp {
        #[command(flatten)]
        source: SourceArgs,
        #[command(flatten)]
        schedule: Schedule,
        #[command(flatten)]
        solver: Solver,
        #[arg(long)]
        delta: Option<f64>,
        /// expected or realized
        #[arg(long)]
        normalization: Option<String>,
        #[command(flatten)]
        common: Common,
    },
    /// Pick between max-cut algorithms on growing subsamples.
    Adaptive {
        #[command(flatten)]
        source: SourceArgs,
        #[command(flatten)]
        schedule: Schedule,
        #[command(flatten)]
        solver: Solver,
        #[arg(long)]
        window: Option<usize>,
        #[command(flatten)]
        common: Common,
    },
    /// Pick the best column of a trials-by-candidates value matrix.
    Select {
        #[arg(long)]
        values: Option<PathBuf>,
        #[command(flatten)]
        common: Common,
    },
}

#[derive(Args)]
struct Common {
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    trials: Option<usize>,
    #[arg(long)]
    jobs: Option<usize>,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    config: Option<PathBuf>,
    /// Extra setting as key=value; repeatable.
    #[arg(long = "param", value_parser = parse_kv)]
    params: Vec<(String, String)>,
}

#[derive(Args)]
struct SourceArgs {
    /// Generator family.
    #[arg(long)]
    family: Option<String>,
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    points: Option<PathBuf>,
    #[arg(long)]
    graph: Option<PathBuf>,
}

#[derive(Args)]
struct Schedule {
    /// Comma-separated algorithm names.
    #[arg(long)]
    algorithms: Option<String>,
    /// Comma-separated subsample sizes.
    #[arg(long)]
    sizes: Option<String>,
    /// Comma-separated fractions of n, used when no sizes are given.
    #[arg(long)]
    fractions: Option<String>,
}

#[derive(Args)]
struct Solver {
    #[arg(long)]
    tol: Option<f64>,
    #[arg(long)]
    max_sweeps: Option<usize>,
}

fn parse_kv(s: &str) -> Result<(String, String), String> {
    s.split_once('=')
        .map(|(k, v)| (k.trim().to_string(), v.trim().to_string()))
        .filter(|(k, _)| !k.is_empty())
        .ok_or_else(|| format!("expected key=value, got {s:?}"))
}

#[derive(Default)]
struct Flags(BTreeMap<String, String>);

impl Flags {
    fn set<T: Display>(&mut self, key: &str, v: &Option<T>) {
        if let Some(v) = v {
            self.0.insert(key.to_string(), v.to_string());
        }
    }

    fn path(&mut self, key: &str, v: &Option<PathBuf>) {
        self.set(key, &v.as_ref().map(|p| p.display()));
    }

    fn source(&mut self, s: &SourceArgs) {
        self.set("family", &s.family);
        self.set("n", &s.n);
        self.path("points", &s.points);
        self.path("graph", &s.graph);
    }

    fn schedule(&mut self, s: &Schedule) {
        self.set("algorithms", &s.algorithms);
        self.set("sizes", &s.sizes);
        self.set("fractions", &s.fractions);
    }

    fn solver(&mut self, s: &Solver) {
        self.set("tol", &s.tol);
        self.set("max_sweeps", &s.max_sweeps);
    }
}

fn flags(cmd: &Command) -> (Task, &Common, Flags) {
    let mut f = Flags::default();
    let (task, common) = match cmd {
        Command::Gen { family, n, common } => {
            f.set("family", &Some(family));
            f.set("n", &Some(n));
            (Task::Gen, common)
        }
        Command::Cluster { source, schedule, k, softmax_beta, eval_eps, eval_delta, full, common } => {
            f.source(source);
            f.schedule(schedule);
            f.set("k", k);
            f.set("softmax_beta", softmax_beta);
            f.set("eval_eps", eval_eps);
            f.set("eval_delta", eval_delta);
            f.set("full", full);
            (Task::Cluster, common)
        }
        Command::Maxcut { source, schedule, solver, common } => {
            f.source(source);
            f.schedule(schedule);
            f.solver(solver);
            (Task::Maxcut, common)
        }
        Command::Sdp { source, schedule, solver, delta, normalization, common } => {
            f.source(source);
            f.schedule(schedule);
            f.solver(solver);
            f.set("delta", delta);
            f.set("normalization", normalization);
            (Task::Sdp, common)
        }
        Command::Adaptive { source, schedule, solver, window, common } => {
            f.source(source);
            f.schedule(schedule);
            f.solver(solver);
            f.set("window", window);
            (Task::Adaptive, common)
        }
        Command::Select { values, common } => {
            f.path("values", values);
            (Task::Select, common)
        }
    };
    f.set("seed", &common.seed);
    f.set("trials", &common.trials);
    f.set("jobs", &common.jobs);
    f.path("out", &common.out);
    (task, common, f)
}

enum Failure {
    Usage(sizegen::Error),
    Runtime(sizegen::Error),
}

impl From<sizegen::Error> for Failure {
    fn from(e: sizegen::Error) -> Self {
        Self::Runtime(e)
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Self::Runtime(e.into())
    }
}

fn run(cli: Cli) -> Result<(), Failure> {
    let (task, common, cli_flags) = flags(&cli.command);
    let mut settings = match &common.config {
        Some(path) => std::fs::read_to_string(path)
            .map_err(sizegen::Error::from)
            .and_then(|text| parse_config(&text, task))
            .map_err(Failure::Usage)?,
        None => BTreeMap::new(),
    };
    settings.extend(cli_flags.0);
    settings.extend(common.params.iter().cloned());

    let cfg = ExperimentConfig::from_settings(task, &settings).map_err(Failure::Usage)?;
    if let Some(jobs) = settings.get("jobs") {
        let jobs: usize = jobs
            .parse()
            .map_err(|_| Failure::Usage(sizegen::Error::InvalidParameter(format!("bad jobs {jobs:?}"))))?;
        rayon::ThreadPoolBuilder::new()
            .num_threads(jobs)
            .build_global()
            .map_err(|e| sizegen::Error::InvalidParameter(e.to_string()))?;
    }

    let outcome = match &cfg.out {
        Some(path) => {
            let mut w = BufWriter::new(File::create(path)?);
            let o = run_experiment(&cfg, &mut w)?;
            w.flush()?;
            o
        }
        None => {
            let stdout = io::stdout();
            let mut w = stdout.lock();
            run_experiment(&cfg, &mut w)?
        }
    };
    for line in outcome.summary {
        eprintln!("{line}");
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Usage(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
        Err(Failure::Runtime(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
