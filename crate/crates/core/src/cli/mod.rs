//! `lints-lab` command line: argument parsing, config resolution and
//! dispatch to the experiment and verification runners.
//!
//! Settings resolve as flags, then the `--config` JSON file, then the
//! built-in defaults of each study.

mod output;

use std::path::PathBuf;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use serde_json::json;

pub use output::{
    boxplot_table, example1_table, example2_table, fmt_num, series_table, verify_table, write_csv, write_summary,
    CsvTable, ResultEntry, RunSummary,
};

use crate::error::{LabError, Result};
use crate::experiments::{
    run_example1_with, run_example2, run_policy_compare, Example1Variant, Example2Mode, ExperimentConfig,
    ExperimentKind, Policy,
};
use crate::rng::SPLIT_DESCRIPTION;
use crate::theory::{run_suite_scaled, Suite, VerificationReport};

/// Largest grid values run without a warning.
const DESK_DIM: usize = 1024;

#[derive(Debug, Parser)]
#[command(name = "lints-lab", version, about = "Linear Thompson Sampling simulation lab")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Noise-reduction example: boxplots of 1/p over d.
    Example1(Example1Args),
    /// Mean-shift example: 1/p over d at fixed mu, and over mu at fixed d.
    Example2(Example2Args),
    /// TS-Bayes, TS-Freq and TS-Improved on random uniform-cube arm sets.
    Compare(CompareArgs),
    /// Monte-Carlo and closed-form checks of the lemmas.
    Verify(VerifyArgs),
    /// Everything above with default settings.
    All(CommonArgs),
}

#[derive(Debug, Clone, Args)]
pub struct CommonArgs {
    #[arg(long)]
    pub seed: Option<u64>,
    /// Worker threads (default: available parallelism).
    #[arg(long)]
    pub threads: Option<usize>,
    #[arg(long, default_value = "out")]
    pub out: PathBuf,
    /// JSON file with `ExperimentConfig` fields.
    #[arg(long)]
    pub config: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct Example1Args {
    #[arg(long, value_delimiter = ',')]
    pub dims: Option<Vec<usize>>,
    #[arg(long)]
    pub reps: Option<usize>,
    /// Reward noise scale; `--tau 1` gives the unbiased σ = τ diagnostic.
    #[arg(long, default_value_t = 0.0)]
    pub tau: f64,
    #[command(flatten)]
    pub common: CommonArgs,
}

#[derive(Debug, Clone, Args)]
pub struct Example2Args {
    /// Grid of the d sweep.
    #[arg(long, value_delimiter = ',')]
    pub dims: Option<Vec<usize>>,
    /// Grid of the mu sweep.
    #[arg(long, value_delimiter = ',')]
    pub mus: Option<Vec<f64>>,
    /// Fixed d of the mu sweep.
    #[arg(long)]
    pub d: Option<usize>,
    /// Fixed mu of the d sweep.
    #[arg(long)]
    pub mu: Option<f64>,
    #[arg(long)]
    pub reps: Option<usize>,
    #[command(flatten)]
    pub common: CommonArgs,
}

#[derive(Debug, Clone, Args)]
pub struct CompareArgs {
    #[arg(long)]
    pub d: Option<usize>,
    #[arg(long)]
    pub arms: Option<usize>,
    #[arg(long)]
    pub horizon: Option<usize>,
    #[arg(long)]
    pub reps: Option<usize>,
    #[arg(long, value_delimiter = ',')]
    pub policies: Option<Vec<Policy>>,
    #[command(flatten)]
    pub common: CommonArgs,
}

#[derive(Debug, Clone, Args)]
pub struct VerifyArgs {
    #[arg(long, default_value = "all")]
    pub suite: Suite,
    /// Multiplies every sample count; 1 is full size.
    #[arg(long, default_value_t = 1.0)]
    pub scale: f64,
    #[command(flatten)]
    pub common: CommonArgs,
}

/// Parses `argv` (without the program name) and runs the command.
/// Returns 0 on success, 1 on a failed check or runtime error, 2 on a
/// usage error.
pub fn dispatch<I, S>(argv: I) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let args = std::iter::once(std::ffi::OsString::from("lints-lab")).chain(argv.into_iter().map(Into::into));
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    match run(cli.command) {
        Ok(true) => 0,
        Ok(false) => 1,
        Err(LabError::InvalidParam(msg)) => {
            eprintln!("error: {msg}");
            eprintln!("run `lints-lab <COMMAND> --help` for the flag list");
            2
        }
        Err(e) => {
            eprintln!("error: {e}");
            1
        }
    }
}

/// Runs a parsed command; `Ok(false)` when a verification failed.
pub fn run(command: Command) -> Result<bool> {
    let common = match &command {
        Command::Example1(a) => &a.common,
        Command::Example2(a) => &a.common,
        Command::Compare(a) => &a.common,
        Command::Verify(a) => &a.common,
        Command::All(c) => c,
    }
    .clone();
    let threads = common
        .threads
        .unwrap_or_else(|| std::thread::available_parallelism().map_or(1, |n| n.get()));
    if threads == 0 {
        return Err(LabError::InvalidParam("threads must be >= 1".into()));
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .map_err(|e| LabError::InvalidParam(format!("cannot start thread pool: {e}")))?;
    pool.install(|| {
        let mut run = Run::start(&common, threads);
        let ok = match command {
            Command::Example1(a) => {
                let cfg = resolve_example1(&a)?;
                example1(&cfg, a.tau, &mut run)?;
                true
            }
            Command::Example2(a) => {
                let (vary_d, vary_mu) = resolve_example2(&a)?;
                example2(&vary_d, &vary_mu, &mut run)?;
                true
            }
            Command::Compare(a) => {
                let cfg = resolve_compare(&a)?;
                compare(&cfg, &mut run)?;
                true
            }
            Command::Verify(a) => {
                let seed = resolve_seed(&common)?;
                verify(a.suite, a.scale, seed, &mut run)?
            }
            Command::All(c) => {
                let e1 = resolve_example1(&Example1Args {
                    dims: None,
                    reps: None,
                    tau: 0.0,
                    common: c.clone(),
                })?;
                example1(&e1, 0.0, &mut run)?;
                let (vd, vm) = resolve_example2(&Example2Args {
                    dims: None,
                    mus: None,
                    d: None,
                    mu: None,
                    reps: None,
                    common: c.clone(),
                })?;
                example2(&vd, &vm, &mut run)?;
                let cmp = resolve_compare(&CompareArgs {
                    d: None,
                    arms: None,
                    horizon: None,
                    reps: None,
                    policies: None,
                    common: c.clone(),
                })?;
                compare(&cmp, &mut run)?;
                verify(Suite::All, 1.0, resolve_seed(&c)?, &mut run)?
            }
        };
        run.finish()?;
        Ok(ok)
    })
}

fn load_config(path: &Option<PathBuf>, kind: ExperimentKind) -> Result<ExperimentConfig> {
    let defaults = ExperimentConfig::for_kind(kind);
    let Some(path) = path else {
        return Ok(defaults);
    };
    let text = std::fs::read_to_string(path).map_err(|e| LabError::io(path, e))?;
    // overlay the file on the defaults of this study
    let mut base = serde_json::to_value(&defaults)?;
    let file: serde_json::Value =
        serde_json::from_str(&text).map_err(|e| LabError::InvalidParam(format!("{}: {e}", path.display())))?;
    let serde_json::Value::Object(fields) = file else {
        return Err(LabError::InvalidParam(format!(
            "{}: expected a JSON object",
            path.display()
        )));
    };
    for (k, v) in fields {
        base[k] = v;
    }
    let mut cfg: ExperimentConfig =
        serde_json::from_value(base).map_err(|e| LabError::InvalidParam(format!("{}: {e}", path.display())))?;
    cfg.kind = kind;
    Ok(cfg)
}

fn apply_common(cfg: &mut ExperimentConfig, common: &CommonArgs) {
    if let Some(s) = common.seed {
        cfg.base_seed = s;
    }
    cfg.out_dir = common.out.clone();
}

fn resolve_seed(common: &CommonArgs) -> Result<u64> {
    Ok(common
        .seed
        .unwrap_or(load_config(&common.config, ExperimentKind::Example1)?.base_seed))
}

fn resolve_example1(a: &Example1Args) -> Result<ExperimentConfig> {
    let mut cfg = load_config(&a.common.config, ExperimentKind::Example1)?;
    apply_common(&mut cfg, &a.common);
    if let Some(d) = &a.dims {
        cfg.dims = d.clone();
    }
    if let Some(r) = a.reps {
        cfg.reps = r;
    }
    if !(a.tau >= 0.0) || !a.tau.is_finite() {
        return Err(LabError::InvalidParam("tau must be >= 0".into()));
    }
    cfg.validate()?;
    Ok(cfg)
}

fn resolve_example2(a: &Example2Args) -> Result<(ExperimentConfig, ExperimentConfig)> {
    let mut out = Vec::new();
    for kind in [ExperimentKind::Example2VaryD, ExperimentKind::Example2VaryMu] {
        let mut cfg = load_config(&a.common.config, kind)?;
        apply_common(&mut cfg, &a.common);
        if let Some(v) = &a.dims {
            cfg.dims = v.clone();
        }
        if let Some(v) = &a.mus {
            cfg.mus = v.clone();
        }
        if let Some(v) = a.d {
            cfg.d = v;
        }
        if let Some(v) = a.mu {
            cfg.mu = v;
        }
        if let Some(v) = a.reps {
            cfg.reps = v;
        }
        if !cfg.mu.is_finite() {
            return Err(LabError::InvalidParam("mu must be finite".into()));
        }
        cfg.validate()?;
        out.push(cfg);
    }
    let vary_mu = out.pop().expect("two configs");
    Ok((out.pop().expect("two configs"), vary_mu))
}

fn resolve_compare(a: &CompareArgs) -> Result<ExperimentConfig> {
    let mut cfg = load_config(&a.common.config, ExperimentKind::PolicyCompare)?;
    apply_common(&mut cfg, &a.common);
    if let Some(v) = a.d {
        cfg.d = v;
    }
    if let Some(v) = a.arms {
        cfg.arms = v;
    }
    if let Some(v) = a.horizon {
        cfg.horizon = v;
    }
    if let Some(v) = a.reps {
        cfg.reps = v;
    }
    if let Some(v) = &a.policies {
        cfg.policies = v.clone();
    }
    cfg.validate()?;
    Ok(cfg)
}

/// Bookkeeping of one invocation, flushed to `summary.json`.
struct Run {
    out: PathBuf,
    started: Instant,
    started_at: String,
    threads: usize,
    commands: Vec<String>,
    flags: serde_json::Map<String, serde_json::Value>,
    seed: Option<u64>,
    results: Vec<ResultEntry>,
    files: Vec<String>,
    notes: Vec<String>,
}

impl Run {
    fn start(common: &CommonArgs, threads: usize) -> Self {
        let mut flags = serde_json::Map::new();
        flags.insert("threads".into(), json!(threads));
        flags.insert("out".into(), json!(common.out));
        flags.insert("config".into(), json!(common.config));
        Self {
            out: common.out.clone(),
            started: Instant::now(),
            started_at: chrono::Utc::now().to_rfc3339_opts(chrono::SecondsFormat::Secs, true),
            threads,
            commands: Vec::new(),
            flags,
            seed: common.seed,
            results: Vec::new(),
            files: Vec::new(),
            notes: Vec::new(),
        }
    }

    fn record(&mut self, command: &str, flags: serde_json::Value, seed: u64) {
        self.commands.push(command.to_string());
        self.flags.insert(command.to_string(), flags);
        self.seed.get_or_insert(seed);
    }

    fn write(&mut self, name: &str, table: &CsvTable) -> Result<()> {
        write_csv(table, &self.out.join(name))?;
        self.files.push(name.to_string());
        Ok(())
    }

    fn finish(self) -> Result<()> {
        let summary = RunSummary {
            command: self.commands.join("+"),
            flags: serde_json::Value::Object(self.flags),
            seed: self.seed.unwrap_or_default(),
            started_at: self.started_at,
            duration_s: self.started.elapsed().as_secs_f64(),
            results: self.results,
            seed_split: SPLIT_DESCRIPTION.to_string(),
            threads: self.threads,
            files: self.files,
            notes: self.notes,
        };
        std::fs::create_dir_all(&self.out).map_err(|e| LabError::io(&self.out, e))?;
        write_summary(&summary, &self.out.join("summary.json"))
    }
}

fn warn_large(dims: impl IntoIterator<Item = usize>, what: &str) {
    if let Some(d) = dims.into_iter().filter(|&d| d > DESK_DIM).max() {
        eprintln!("warning: {what} = {d} is above the desk-scale limit {DESK_DIM}; this may take a long time");
    }
}

fn example1(cfg: &ExperimentConfig, tau: f64, run: &mut Run) -> Result<()> {
    warn_large(cfg.dims.iter().copied(), "d");
    let variant = Example1Variant {
        prior_sigma: 1.0,
        noise_tau: tau,
    };
    let res = run_example1_with(&cfg.dims, cfg.reps, cfg.base_seed, variant)?;
    run.write("example1.csv", &example1_table(&res))?;
    run.write(
        "example1_boxplot.csv",
        &boxplot_table("dim", &res.summary, |d| d.to_string()),
    )?;
    run.record(
        "example1",
        json!({"dims": cfg.dims, "reps": cfg.reps, "seed": cfg.base_seed, "sigma": 1.0, "tau": tau, "lambda": 1.0, "iota": 1.0}),
        cfg.base_seed,
    );
    Ok(())
}

fn example2(vary_d: &ExperimentConfig, vary_mu: &ExperimentConfig, run: &mut Run) -> Result<()> {
    warn_large(vary_d.dims.iter().copied().chain([vary_mu.d]), "d");
    let grid: Vec<f64> = vary_d.dims.iter().map(|&d| d as f64).collect();
    let a = run_example2(
        Example2Mode::VaryD { mu: vary_d.mu },
        &grid,
        vary_d.reps,
        vary_d.base_seed,
    )?;
    let b = run_example2(
        Example2Mode::VaryMu { d: vary_mu.d },
        &vary_mu.mus,
        vary_mu.reps,
        vary_mu.base_seed,
    )?;
    run.write("example2_vary_d.csv", &boxplot_table("dim", &a.summary, fmt_num))?;
    run.write("example2_vary_mu.csv", &boxplot_table("mu", &b.summary, fmt_num))?;
    let mut reps = example2_table(&a);
    reps.rows.extend(example2_table(&b).rows);
    run.write("example2_reps.csv", &reps)?;
    run.record(
        "example2",
        json!({"dims": vary_d.dims, "mu": vary_d.mu, "mus": vary_mu.mus, "d": vary_mu.d,
               "reps": vary_d.reps, "seed": vary_d.base_seed, "noise": 1.0}),
        vary_d.base_seed,
    );
    run.notes
        .push(format!("example2 mu sweep runs at d = {} (desk scale)", vary_mu.d));
    Ok(())
}

fn compare(cfg: &ExperimentConfig, run: &mut Run) -> Result<()> {
    warn_large([cfg.d], "d");
    let table = run_policy_compare(cfg, cfg.base_seed)?;
    run.write("compare.csv", &series_table(&table))?;
    run.record(
        "compare",
        json!({"d": cfg.d, "arms": cfg.arms, "horizon": cfg.horizon, "reps": cfg.reps,
               "policies": cfg.policies, "seed": cfg.base_seed, "prior_variance": 10.0, "psi_cap": 2.0}),
        cfg.base_seed,
    );
    run.notes
        .push("compare: policies share theta* and the arm-set stream within a replication".into());
    Ok(())
}

fn verify(suite: Suite, scale: f64, seed: u64, run: &mut Run) -> Result<bool> {
    let reports: Vec<VerificationReport> = run_suite_scaled(suite, seed, scale)?;
    for r in &reports {
        println!("{}", r.line());
    }
    run.write("verify.csv", &verify_table(&reports))?;
    run.record("verify", json!({"suite": suite, "scale": scale, "seed": seed}), seed);
    run.results.extend(reports.iter().map(ResultEntry::from));
    Ok(reports.iter().all(|r| r.pass))
}
