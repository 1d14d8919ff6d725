//! `bbm-lab`: reproducible experiment runner. One subcommand per experiment
//! kind; every run writes its data files, a manifest (master seed, member
//! seeds, config hash, tool version), and a human-readable summary.
//!
//! Exit codes: 0 pass, 1 tolerance failure, 2 configuration error.

mod config;
mod run;

use clap::{Args, Parser, Subcommand};
use config::{ExperimentConfig, ExperimentKind, OutputFormat};
use serde::Serialize;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

#[derive(Parser)]
#[command(name = "bbm-lab", version, about = "Numerical laboratory for the periodic BBM equation with rough random data")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct RunArgs {
    /// JSON configuration file; defaults are used when omitted.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Master seed override.
    #[arg(long)]
    seed: Option<u64>,
    /// Output directory for data, manifest, and summary.
    #[arg(long, default_value = "out")]
    out: PathBuf,
    /// Worker threads (0 = library default). Thread count does not change
    /// the numbers: reductions are order-fixed.
    #[arg(long, default_value_t = 0)]
    threads: usize,
    #[arg(long, value_enum, default_value_t = OutputFormat::Csv)]
    format: OutputFormat,
}

#[derive(Subcommand)]
enum Command {
    /// Marching-scheme checks: energy drift, reversal, convergence order.
    SolverValidate(RunArgs),
    /// Growth rate of the zero-mode constant of the squared free evolution.
    CkDivergence(RunArgs),
    /// Sobolev threshold scan of the random data.
    RegularityScan(RunArgs),
    /// Cauchy/mollifier-independence ladder for the quadratic object.
    NzConvergence(RunArgs),
    /// Variance growth of the quadratic object below the quarter threshold.
    Sharpness(RunArgs),
    /// Modified-energy trace and its exact growth ledger.
    GwpEnergyTrace(RunArgs),
    /// Two-bump norm-inflation experiment.
    Inflation(RunArgs),
    /// Exponential tails and pathwise moment-to-seminorm domination.
    Tails(RunArgs),
    /// Moment tables, chaos growth, quartic space-time bound.
    ChaosMoments(RunArgs),
    /// Print regime diagnostics for a configuration without running it.
    Validate {
        #[arg(long)]
        config: PathBuf,
    },
}

impl Command {
    fn kind(&self) -> Option<ExperimentKind> {
        match self {
            Command::SolverValidate(_) => Some(ExperimentKind::SolverValidate),
            Command::CkDivergence(_) => Some(ExperimentKind::CkDivergence),
            Command::RegularityScan(_) => Some(ExperimentKind::RegularityScan),
            Command::NzConvergence(_) => Some(ExperimentKind::NzConvergence),
            Command::Sharpness(_) => Some(ExperimentKind::Sharpness),
            Command::GwpEnergyTrace(_) => Some(ExperimentKind::GwpEnergyTrace),
            Command::Inflation(_) => Some(ExperimentKind::Inflation),
            Command::Tails(_) => Some(ExperimentKind::Tails),
            Command::ChaosMoments(_) => Some(ExperimentKind::ChaosMoments),
            Command::Validate { .. } => None,
        }
    }

    fn args(&self) -> Option<&RunArgs> {
        match self {
            Command::SolverValidate(a)
            | Command::CkDivergence(a)
            | Command::RegularityScan(a)
            | Command::NzConvergence(a)
            | Command::Sharpness(a)
            | Command::GwpEnergyTrace(a)
            | Command::Inflation(a)
            | Command::Tails(a)
            | Command::ChaosMoments(a) => Some(a),
            Command::Validate { .. } => None,
        }
    }
}

#[derive(Serialize)]
struct Manifest<'a> {
    experiment: &'a str,
    tool_version: &'a str,
    master_seed: u64,
    member_seed_rule: &'a str,
    members_used: usize,
    /// First members, enough to respawn or extend the ensemble.
    member_seeds: Vec<u64>,
    config_hash: String,
    artifacts: Vec<String>,
    pass: bool,
}

fn load_config(kind: ExperimentKind, args: &RunArgs) -> Result<ExperimentConfig, String> {
    let mut cfg = match &args.config {
        None => ExperimentConfig::defaults_for(kind),
        Some(path) => {
            let text = std::fs::read_to_string(path)
                .map_err(|e| format!("cannot read config {}: {e}", path.display()))?;
            let cfg: ExperimentConfig =
                serde_json::from_str(&text).map_err(|e| format!("config schema error: {e}"))?;
            if cfg.experiment != kind {
                return Err(format!(
                    "config is for experiment '{}' but the subcommand is '{}'",
                    cfg.experiment.name(),
                    kind.name()
                ));
            }
            cfg
        }
    };
    if let Some(seed) = args.seed {
        cfg.seed = seed;
    }
    Ok(cfg)
}

fn write_outputs(
    out_dir: &Path,
    cfg: &ExperimentConfig,
    outcome: &run::Outcome,
) -> anyhow::Result<()> {
    std::fs::create_dir_all(out_dir)?;
    for artifact in &outcome.artifacts {
        std::fs::write(out_dir.join(&artifact.filename), &artifact.contents)?;
    }
    let manifest = Manifest {
        experiment: cfg.experiment.name(),
        tool_version: env!("CARGO_PKG_VERSION"),
        master_seed: cfg.seed,
        member_seed_rule: "splitmix64(master, member_index)",
        members_used: outcome.members_used,
        member_seeds: (0..outcome.members_used.min(64) as u64)
            .map(|i| bbm_lab::random::derive_member_seed(cfg.seed, i))
            .collect(),
        config_hash: cfg.hash(),
        artifacts: outcome.artifacts.iter().map(|a| a.filename.clone()).collect(),
        pass: outcome.pass(),
    };
    std::fs::write(
        out_dir.join("manifest.json"),
        serde_json::to_string_pretty(&manifest)?,
    )?;
    std::fs::write(out_dir.join("config.json"), cfg.to_canonical_json())?;
    std::fs::write(out_dir.join("summary.txt"), summary_text(cfg, outcome))?;
    Ok(())
}

fn summary_text(cfg: &ExperimentConfig, outcome: &run::Outcome) -> String {
    let mut text = format!(
        "experiment: {}\nclaim under test: {}\nmaster seed: {}\n\n",
        cfg.experiment.name(),
        outcome.claim,
        cfg.seed
    );
    for check in &outcome.checks {
        text.push_str(&format!(
            "[{}] {}  ({})\n",
            if check.pass { "pass" } else { "FAIL" },
            check.name,
            check.detail
        ));
    }
    text.push_str(&format!(
        "\noverall: {}\n",
        if outcome.pass() { "PASS" } else { "FAIL" }
    ));
    text
}

fn main() -> ExitCode {
    let cli = Cli::parse();

    if let Command::Validate { config } = &cli.command {
        let text = match std::fs::read_to_string(config) {
            Ok(t) => t,
            Err(e) => {
                eprintln!("cannot read config {}: {e}", config.display());
                return ExitCode::from(2);
            }
        };
        let cfg: ExperimentConfig = match serde_json::from_str(&text) {
            Ok(c) => c,
            Err(e) => {
                eprintln!("config schema error: {e}");
                return ExitCode::from(2);
            }
        };
        println!("experiment: {}", cfg.experiment.name());
        for note in run::validate(&cfg) {
            println!("  {note}");
        }
        return ExitCode::SUCCESS;
    }

    let kind = cli.command.kind().expect("run commands carry a kind");
    let args = cli.command.args().expect("run commands carry args").clone();
    let cfg = match load_config(kind, &args) {
        Ok(c) => c,
        Err(msg) => {
            eprintln!("{msg}");
            return ExitCode::from(2);
        }
    };

    let execute = || run::execute(&cfg, args.format);
    let outcome = if args.threads > 0 {
        let pool = match rayon::ThreadPoolBuilder::new().num_threads(args.threads).build() {
            Ok(p) => p,
            Err(e) => {
                eprintln!("cannot build worker pool: {e}");
                return ExitCode::from(2);
            }
        };
        pool.install(execute)
    } else {
        execute()
    };

    let outcome = match outcome {
        Ok(o) => o,
        Err(e) => {
            eprintln!("experiment failed: {e:#}");
            return ExitCode::from(1);
        }
    };
    if let Err(e) = write_outputs(&args.out, &cfg, &outcome) {
        eprintln!("cannot write outputs: {e:#}");
        return ExitCode::from(1);
    }
    print!("{}", summary_text(&cfg, &outcome));
    println!("outputs in {}", args.out.display());
    if outcome.pass() {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}
