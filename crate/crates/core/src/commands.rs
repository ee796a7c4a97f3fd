//! The `spc` command line: argument definitions and the four subcommands.
//!
//! Each subcommand writes its files and prints a short report to `out`.

use std::io::Write;
use std::path::PathBuf;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::csvio;
use crate::document::{PathDocument, SelectionBlock};
use crate::error::{Result, SpcError};
use crate::evaluation::{adjusted_rand_index, ari_c, ari_n, label_noise_assignment, s_n};
use crate::scheduler::{run_path, PathConfig, DEFAULT_NOISE_CUTOFF};
use crate::selection::{SelectionRule, DEFAULT_RATIO_THRESHOLD};
use crate::simgen::{generate, ScenarioSpec};

/// Environment variable that, when set, replaces `--seed`.
pub const SEED_ENV: &str = "SPC_SEED";

#[derive(Debug, Parser)]
#[command(name = "spc", version, about = "Solution path clustering")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Generate a synthetic data set with known clusters and noise.
    Simulate(SimulateArgs),
    /// Compute a solution path for a CSV data file.
    Cluster(ClusterArgs),
    /// Pick one solution from a path document and write its assignment.
    Select(SelectArgs),
    /// Score an assignment against ground truth.
    Eval(EvalArgs),
}

#[derive(Debug, Args)]
pub struct SimulateArgs {
    /// Preset: 1 separated, 2 overlapping, 3 separated + noise, 4 overlapping + noise.
    #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u8).range(1..=4))]
    pub scenario: u8,
    /// Use the high-dimensional preset (100 points in 200 dimensions).
    #[arg(long)]
    pub high_dim: bool,
    /// Number of clustered points.
    #[arg(long)]
    pub n: Option<usize>,
    #[arg(long)]
    pub p: Option<usize>,
    #[arg(long)]
    pub k: Option<usize>,
    /// Number of uniform noise points.
    #[arg(long)]
    pub noise: Option<usize>,
    #[arg(long)]
    pub overlap: bool,
    #[arg(long)]
    pub correlated: bool,
    /// Within-cluster standard deviation.
    #[arg(long)]
    pub sd: Option<f64>,
    /// Random seed; the SPC_SEED environment variable takes precedence.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value = ".")]
    pub out_dir: PathBuf,
    /// Write a header row to data.csv.
    #[arg(long)]
    pub header: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum RuleArg {
    /// Keep the solution the last significant likelihood jump leads to.
    After,
    /// Keep the solution the last significant jump starts from.
    Before,
}

impl From<RuleArg> for SelectionRule {
    fn from(r: RuleArg) -> Self {
        match r {
            RuleArg::After => SelectionRule::AfterLastJump,
            RuleArg::Before => SelectionRule::BeforeLastJump,
        }
    }
}

#[derive(Debug, Args)]
pub struct ClusterArgs {
    /// CSV file, one object per row.
    pub data: PathBuf,
    /// Share of nearest-neighbour pairs allowed to merge first, in (0, 1).
    #[arg(long)]
    pub omega: f64,
    /// Reference quantile level, below omega [default: 0.9 * omega].
    #[arg(long)]
    pub tau: Option<f64>,
    #[arg(long, default_value_t = 0.5)]
    pub phi: f64,
    #[arg(long, default_value_t = 0.9)]
    pub alpha: f64,
    /// λ grid size [default: min(20, p), at least 2].
    #[arg(long)]
    pub grid_size: Option<usize>,
    /// Clusters of this size or smaller count as noise.
    #[arg(long, default_value_t = DEFAULT_NOISE_CUTOFF)]
    pub cutoff: usize,
    /// Let objects split off their cluster after each solution.
    #[arg(long)]
    pub allow_splits: bool,
    /// Fit the raw columns instead of standardized ones.
    #[arg(long)]
    pub no_standardize: bool,
    /// Selection threshold stored in the document.
    #[arg(long, default_value_t = DEFAULT_RATIO_THRESHOLD)]
    pub a: f64,
    #[arg(long, value_enum, default_value_t = RuleArg::After)]
    pub rule: RuleArg,
    #[arg(long, default_value = "path.json")]
    pub out: PathBuf,
    /// Store the elapsed time in the document (makes output non-reproducible).
    #[arg(long)]
    pub record_timings: bool,
}

#[derive(Debug, Args)]
pub struct SelectArgs {
    /// Path document written by `spc cluster`.
    pub path: PathBuf,
    #[arg(long, default_value_t = DEFAULT_RATIO_THRESHOLD)]
    pub a: f64,
    #[arg(long, value_enum, default_value_t = RuleArg::After)]
    pub rule: RuleArg,
    /// Noise cutoff [default: the one stored in the document].
    #[arg(long)]
    pub cutoff: Option<usize>,
    #[arg(long, default_value = "assignment.csv")]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct EvalArgs {
    /// assignment.csv from `spc select`.
    pub assignment: PathBuf,
    /// truth.csv from `spc simulate`.
    pub truth: PathBuf,
}

/// Dispatches a parsed command line.
pub fn run(cli: Cli, out: &mut dyn Write) -> Result<()> {
    match cli.command {
        Command::Simulate(a) => cmd_simulate(&a, out),
        Command::Cluster(a) => cmd_cluster(&a, out),
        Command::Select(a) => cmd_select(&a, out),
        Command::Eval(a) => cmd_eval(&a, out),
    }
}

fn effective_seed(flag: u64) -> Result<u64> {
    match std::env::var(SEED_ENV) {
        Ok(v) => v
            .trim()
            .parse()
            .map_err(|_| SpcError::InvalidParameter(format!("{SEED_ENV}='{v}' is not a seed"))),
        Err(_) => Ok(flag),
    }
}

pub fn cmd_simulate(args: &SimulateArgs, out: &mut dyn Write) -> Result<()> {
    let mut spec = ScenarioSpec::preset(args.scenario, args.high_dim, effective_seed(args.seed)?)?;
    if let Some(n) = args.n {
        spec.n_clustered = n;
    }
    if let Some(p) = args.p {
        spec.p = p;
    }
    if let Some(k) = args.k {
        spec.k = k;
    }
    if let Some(noise) = args.noise {
        spec.noise_count = noise;
    }
    if let Some(sd) = args.sd {
        spec.cluster_sd = sd;
    }
    spec.overlap |= args.overlap;
    spec.correlated |= args.correlated;
    let generated = generate(&spec)?;
    std::fs::create_dir_all(&args.out_dir)?;
    let data_path = args.out_dir.join("data.csv");
    let truth_path = args.out_dir.join("truth.csv");
    csvio::write_data(std::fs::File::create(&data_path)?, &generated.data, args.header)?;
    csvio::write_labels(std::fs::File::create(&truth_path)?, &generated.truth, "label")?;
    writeln!(
        out,
        "wrote {} objects ({} noise) in {} dimensions to {} and {}",
        generated.data.n(),
        spec.noise_count,
        spec.p,
        data_path.display(),
        truth_path.display()
    )?;
    Ok(())
}

pub fn cmd_cluster(args: &ClusterArgs, out: &mut dyn Write) -> Result<()> {
    let raw = csvio::read_data_file(&args.data)?;
    let mut config = PathConfig::new(args.omega);
    if let Some(tau) = args.tau {
        config.tau = tau;
    }
    config.phi = args.phi;
    config.alpha = args.alpha;
    config.grid_size = args.grid_size;
    config.noise_cutoff = args.cutoff;
    config.allow_splits = args.allow_splits;
    config.validate()?;

    let standardize = !args.no_standardize;
    let fitted = if standardize { raw.standardized() } else { raw.clone() };
    let start = Instant::now();
    let path = run_path(&fitted, &config)?;
    let elapsed = start.elapsed().as_secs_f64();

    let mut doc = PathDocument::from_path(&path, &raw, &fitted, standardize);
    if args.record_timings {
        doc.metadata.elapsed_seconds = Some(elapsed);
    }
    let rule = SelectionRule::from(args.rule);
    // A path that jumps straight to one cluster has nothing to choose from.
    match doc.select(args.a, rule) {
        Ok(result) => doc.selection = Some(SelectionBlock::new(args.a, rule, result)),
        Err(SpcError::TooFewSolutions(_)) => {}
        Err(e) => return Err(e),
    }
    doc.write_file(&args.out)?;

    writeln!(out, "{:>5} {:>8} {:>8} {:>12} {:>10} {:>5}", "index", "k_total", "k_clust", "lambda", "delta", "iter")?;
    for (i, s) in doc.solutions.iter().enumerate() {
        writeln!(
            out,
            "{i:>5} {:>8} {:>8} {:>12.4} {:>10.6} {:>5}",
            s.k_total, s.k_clust, s.lambda, s.delta, s.iterations
        )?;
    }
    if let Some(sel) = &doc.selection {
        writeln!(out, "selected solution {} (k_total = {})", sel.chosen_index, sel.k_star)?;
    }
    writeln!(out, "wrote {}", args.out.display())?;
    Ok(())
}

pub fn cmd_select(args: &SelectArgs, out: &mut dyn Write) -> Result<()> {
    let doc = PathDocument::read_file(&args.path)?;
    let result = doc.select(args.a, args.rule.into())?;
    let chosen = &doc.solutions[result.solution_index];
    let cutoff = args.cutoff.unwrap_or(doc.metadata.config.noise_cutoff);
    let (labels, k_clust) = label_noise_assignment(&chosen.assignment, cutoff);
    csvio::write_assignment(std::fs::File::create(&args.out)?, &chosen.assignment, &labels)?;
    writeln!(out, "solution={}", result.solution_index)?;
    writeln!(out, "k_total={}", chosen.k_total)?;
    writeln!(out, "k_clust={k_clust}")?;
    writeln!(out, "noise={}", labels.noise_count())?;
    writeln!(out, "lambda={}", chosen.lambda)?;
    writeln!(out, "delta={}", chosen.delta)?;
    writeln!(out, "log_likelihood={}", chosen.log_likelihood)?;
    writeln!(out, "wrote {}", args.out.display())?;
    Ok(())
}

pub fn cmd_eval(args: &EvalArgs, out: &mut dyn Write) -> Result<()> {
    let estimated = csvio::read_labels_file(&args.assignment)?;
    let truth = csvio::read_labels_file(&args.truth)?;
    if estimated.len() != truth.len() {
        return Err(SpcError::DimensionMismatch {
            expected: truth.len(),
            got: estimated.len(),
        });
    }
    let c = ari_c(&estimated, &truth)?;
    writeln!(out, "ari={}", adjusted_rand_index(&estimated, &truth)?)?;
    match c {
        Some(v) => writeln!(out, "ari_c={v}")?,
        None => writeln!(out, "ari_c=NA")?,
    }
    writeln!(out, "ari_n={}", ari_n(&estimated, &truth)?)?;
    writeln!(out, "s_n={}", s_n(&estimated, &truth)?)?;
    writeln!(out, "k_clust={}", estimated.cluster_count())?;
    Ok(())
}
