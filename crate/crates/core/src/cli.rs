//! Command-line front end.
//!
//! Exit codes: 0 success, 1 configuration error, 2 runtime error,
//! 3 bound violation under `--strict`.

use std::ffi::OsString;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

use crate::environment::{EnvSpec, Environment};
use crate::error::{Error, Result};
use crate::experiment::{
    cmd_gen_log, cmd_replay, cmd_simulate, cmd_verify_bounds, ExperimentConfig, PolicyEntry,
    ReplaySection,
};
use crate::runner::Mode;

pub const EXIT_OK: i32 = 0;
pub const EXIT_CONFIG: i32 = 1;
pub const EXIT_RUNTIME: i32 = 2;
pub const EXIT_VIOLATION: i32 = 3;

#[derive(Debug, Parser)]
#[command(name = "batched-bandits", version, about = "Batched bandit simulations and regret-bound checks")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Sweep batch sizes and modes, writing summary.csv, runs.csv and trace.csv.
    Simulate(Common),
    /// Check the online/batched/short regret ordering, writing bounds.csv and bounds.txt.
    VerifyBounds {
        #[command(flatten)]
        common: Common,
        /// Exit with code 3 if any inequality is violated.
        #[arg(long)]
        strict: bool,
    },
    /// Replay policies over a logged file, writing replay.csv.
    Replay {
        #[command(flatten)]
        common: Common,
        /// Logged events to replay.
        #[arg(long)]
        log: Option<PathBuf>,
        /// Policy whose conversion rate at the smallest batch size normalizes the others.
        #[arg(long)]
        baseline: Option<String>,
        /// Number of arms in the log (inferred from the propensities if omitted).
        #[arg(long)]
        arms: Option<usize>,
    },
    /// Generate a uniformly logged synthetic file.
    GenLog {
        /// Environment to log from.
        #[arg(long, default_value = "campaign")]
        env: String,
        /// Number of events.
        #[arg(long, default_value_t = 100_000)]
        size: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Output file.
        #[arg(long, default_value = "log.csv")]
        out: PathBuf,
    },
}

#[derive(Debug, Clone, Default, Args)]
pub struct Common {
    /// TOML configuration file.
    #[arg(long)]
    pub config: Option<PathBuf>,
    #[arg(long)]
    pub seed: Option<u64>,
    /// Output directory.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Environment (preset or inline spec); repeatable.
    #[arg(long = "env")]
    pub envs: Vec<String>,
    /// Policy (`kind` or `kind:key=value,...`); repeatable.
    #[arg(long = "policy")]
    pub policies: Vec<String>,
    /// Comma-separated batch sizes.
    #[arg(long, value_delimiter = ',')]
    pub batch_sizes: Vec<usize>,
    #[arg(long)]
    pub replicates: Option<usize>,
    #[arg(long)]
    pub horizon: Option<usize>,
    /// Comma-separated modes (online, batched, short).
    #[arg(long, value_delimiter = ',')]
    pub modes: Vec<Mode>,
}

impl Common {
    /// Load the configuration file, if any, and apply flag overrides.
    pub fn config(&self) -> Result<ExperimentConfig> {
        let mut cfg = match &self.config {
            Some(path) => ExperimentConfig::load(path)?,
            None => ExperimentConfig::default(),
        };
        if self.seed.is_some() {
            cfg.seed = self.seed;
        }
        if self.out.is_some() {
            cfg.out = self.out.clone();
        }
        if !self.envs.is_empty() {
            cfg.envs = Some(self.envs.iter().map(|e| EnvSpec::Inline(e.clone())).collect());
        }
        if !self.policies.is_empty() {
            cfg.policies = Some(
                self.policies
                    .iter()
                    .map(|p| PolicyEntry::Inline(p.clone()))
                    .collect(),
            );
        }
        if !self.batch_sizes.is_empty() {
            cfg.batch_sizes = Some(self.batch_sizes.clone());
        }
        if self.replicates.is_some() {
            cfg.replicates = self.replicates;
        }
        if self.horizon.is_some() {
            cfg.horizon = self.horizon;
        }
        if !self.modes.is_empty() {
            cfg.modes = Some(self.modes.clone());
        }
        Ok(cfg)
    }
}

pub fn exit_code(err: &Error) -> i32 {
    match err {
        Error::Config(_)
        | Error::UnknownPolicy(_)
        | Error::InvalidHyperparameter(_)
        | Error::InvalidEnvironment(_)
        | Error::InvalidGrid(_) => EXIT_CONFIG,
        _ => EXIT_RUNTIME,
    }
}

/// Parse `args` (including the program name) and run; returns the exit code.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_CONFIG } else { EXIT_OK };
        }
    };
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            match &e {
                Error::Config(problems) => {
                    eprintln!("configuration error:");
                    for p in problems {
                        eprintln!("  {p}");
                    }
                }
                other => eprintln!("error: {other}"),
            }
            exit_code(&e)
        }
    }
}

pub fn run(cli: Cli) -> Result<i32> {
    match cli.command {
        Command::Simulate(common) => {
            let exp = common.config()?.resolve()?;
            let out = cmd_simulate(&exp)?;
            for (env, policy, result) in &out.cells {
                println!("{env} / {policy}");
                for s in &result.summaries {
                    println!(
                        "  {:<8} b={:<5} regret {:.3} ± {:.3}",
                        s.mode,
                        s.batch_size,
                        s.regret.mean,
                        s.regret.ci_hi - s.regret.mean
                    );
                }
            }
            print_files(&out.files);
            Ok(EXIT_OK)
        }
        Command::VerifyBounds { common, strict } => {
            let exp = common.config()?.resolve()?;
            let out = cmd_verify_bounds(&exp)?;
            for r in &out.reports {
                println!(
                    "{} / {} b={}: left {}, right {}",
                    r.env, r.policy, r.batch_size, r.left.verdict, r.right.verdict
                );
            }
            print_files(&out.files);
            if strict && out.any_violation() {
                eprintln!("bound violated");
                return Ok(EXIT_VIOLATION);
            }
            Ok(EXIT_OK)
        }
        Command::Replay {
            common,
            log,
            baseline,
            arms,
        } => {
            let mut cfg = common.config()?;
            let mut section = cfg.replay.take().unwrap_or_default();
            if !common.policies.is_empty() {
                section.policies = cfg.policies.take();
            }
            if !common.batch_sizes.is_empty() {
                section.batch_sizes = cfg.batch_sizes.take();
            }
            if common.replicates.is_some() {
                section.replicates = cfg.replicates.take();
            }
            if baseline.is_some() {
                section.baseline = baseline;
            }
            if arms.is_some() {
                section.arms = arms;
            }
            cfg.replay = Some(ReplaySection { log: log.or(section.log.clone()), ..section });
            // the simulation fields are unused here; keep them from failing validation
            cfg.policies = None;
            cfg.batch_sizes = None;
            cfg.replicates = None;
            let exp = cfg.resolve()?;
            let out = cmd_replay(&exp, None)?;
            for r in &out.rows {
                println!(
                    "{:<24} b={:<6} CR {:.4} (matched {:.0}/{}){}",
                    r.policy,
                    r.batch_size,
                    r.conversion.mean,
                    r.matched.mean,
                    r.total,
                    r.relative.map(|v| format!(" relative {v:.4}")).unwrap_or_default()
                );
            }
            print_files(&out.files);
            Ok(EXIT_OK)
        }
        Command::GenLog {
            env,
            size,
            seed,
            out,
        } => {
            let env: Environment = env
                .parse::<EnvSpec>()
                .and_then(|s| s.build())
                .map_err(|e| Error::Config(vec![format!("env: {e}")]))?;
            if size == 0 {
                return Err(Error::Config(vec!["size: must be at least 1".into()]));
            }
            let res = cmd_gen_log(&env, size, seed, &out)?;
            println!("size {}", res.size);
            println!("arms {}", res.arms);
            println!("dim {}", res.dim);
            for (a, n) in res.frequencies.iter().enumerate() {
                println!("arm {a}: {n} ({:.4})", *n as f64 / res.size as f64);
            }
            print_files(std::slice::from_ref(&res.path));
            Ok(EXIT_OK)
        }
    }
}

fn print_files(files: &[PathBuf]) {
    for f in files {
        println!("wrote {}", f.display());
    }
}
