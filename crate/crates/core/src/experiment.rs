//! Configuration-driven experiments and their CSV outputs.
//!
//! A configuration file is TOML:
//!
//! ```toml
//! envs = ["env1", "env3", "bernoulli:0.6,0.4"]
//! policies = ["ts", "ucb1", { kind = "egreedy", epsilon = 0.05 }]
//! horizon = 5000
//! batch_sizes = [1, 2, 4, 8, 16, 32, 64, 128, 256]
//! replicates = 500
//! seed = 42
//! modes = ["online", "batched", "short"]
//! out = "results"
//!
//! [replay]
//! log = "log.csv"
//! policies = ["lints", "linucb"]
//! batch_sizes = [1, 10, 100]
//! replicates = 20
//! baseline = "lints"
//! ```
//!
//! Every field is optional; command-line flags override file values.

use std::fmt::Write as _;
use std::fs;
use std::io::Write as _;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::analysis::{verify_theorem_with, BoundReport, BoundOptions};
use crate::environment::{EnvSpec, Environment};
use crate::error::{Error, Result};
use crate::grid::BatchGrid;
use crate::policy::{policy_init, PolicySpec, PolicyState};
use crate::replay::{generate_synthetic_log, load_log, replay_evaluate, write_log, LoggedEvent};
use crate::runner::{derive_seed, Mode};
use crate::stats::Summary;
use crate::sweep::{run_sweep, SweepConfig, SweepResult};

pub const DEFAULT_HORIZON: usize = 5000;
pub const DEFAULT_BATCH_SIZES: [usize; 9] = [1, 2, 4, 8, 16, 32, 64, 128, 256];
pub const DEFAULT_REPLICATES: usize = 500;
pub const DEFAULT_REPLAY_REPLICATES: usize = 20;
pub const DEFAULT_OUT: &str = "results";

/// Points kept per regret trace in `trace.csv`.
const TRACE_POINTS: usize = 100;

pub const SUMMARY_HEADER: &str = "env,policy,mode,batch_size,replicates,mean_regret,std,ci95_lo,ci95_hi";
pub const RUNS_HEADER: &str = "env,policy,mode,batch_size,replicate,seed,horizon,final_regret,total_reward";
pub const TRACE_HEADER: &str = "env,policy,mode,batch_size,t,mean_regret,std_err";
pub const BOUNDS_HEADER: &str = "env,policy,n,b,M,reg_online,reg_batch,b_reg_short,\
ci_online_lo,ci_online_hi,ci_batch_lo,ci_batch_hi,ci_short_lo,ci_short_hi,\
verdict_left,verdict_right,slack_left,slack_right";
pub const REPLAY_HEADER: &str =
    "policy,batch_size,replicates,total,matched_mean,cr_mean,cr_std,ci95_lo,ci95_hi,relative_cr";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum PolicyEntry {
    Inline(String),
    Table(PolicySpec),
}

impl PolicyEntry {
    pub fn resolve(&self) -> Result<PolicySpec> {
        match self {
            PolicyEntry::Inline(s) => s.parse(),
            PolicyEntry::Table(spec) => Ok(spec.clone()),
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ReplaySection {
    pub log: Option<PathBuf>,
    pub arms: Option<usize>,
    pub policies: Option<Vec<PolicyEntry>>,
    pub batch_sizes: Option<Vec<usize>>,
    pub replicates: Option<usize>,
    pub baseline: Option<String>,
}

/// Raw configuration as read from a file, before validation.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub envs: Option<Vec<EnvSpec>>,
    pub policies: Option<Vec<PolicyEntry>>,
    pub horizon: Option<usize>,
    pub batch_sizes: Option<Vec<usize>>,
    pub replicates: Option<usize>,
    pub seed: Option<u64>,
    pub modes: Option<Vec<Mode>>,
    pub out: Option<PathBuf>,
    pub replay: Option<ReplaySection>,
}

impl ExperimentConfig {
    pub fn from_toml(text: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| Error::Config(vec![e.to_string()]))
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::from_toml(&text).map_err(|e| match e {
            Error::Config(msgs) => Error::Config(
                msgs.into_iter()
                    .map(|m| format!("{}: {m}", path.display()))
                    .collect(),
            ),
            other => other,
        })
    }

    /// Validate every field, reporting all problems at once.
    pub fn resolve(&self) -> Result<Experiment> {
        let mut problems = Vec::new();

        let horizon = self.horizon.unwrap_or(DEFAULT_HORIZON);
        if horizon == 0 {
            problems.push("horizon: must be at least 1".to_string());
        }
        let batch_sizes = self
            .batch_sizes
            .clone()
            .unwrap_or_else(|| DEFAULT_BATCH_SIZES.to_vec());
        if batch_sizes.is_empty() {
            problems.push("batch_sizes: must list at least one batch size".to_string());
        }
        for &b in &batch_sizes {
            if b == 0 || b > horizon {
                problems.push(format!(
                    "batch_sizes: {b} must lie in 1..={horizon} (the horizon)"
                ));
            }
        }
        let replicates = self.replicates.unwrap_or(DEFAULT_REPLICATES);
        if replicates == 0 {
            problems.push("replicates: must be at least 1".to_string());
        }
        let modes = self.modes.clone().unwrap_or_else(|| Mode::ALL.to_vec());
        if modes.is_empty() {
            problems.push("modes: must list at least one mode".to_string());
        }

        let env_specs = self
            .envs
            .clone()
            .unwrap_or_else(|| vec![EnvSpec::Inline("env1".into())]);
        if env_specs.is_empty() {
            problems.push("envs: must list at least one environment".to_string());
        }
        let mut envs = Vec::new();
        for spec in &env_specs {
            match spec.build() {
                Ok(env) => envs.push(env),
                Err(e) => problems.push(format!("envs: `{spec}`: {e}")),
            }
        }

        let entries = self
            .policies
            .clone()
            .unwrap_or_else(|| vec![PolicyEntry::Inline("ts".into())]);
        if entries.is_empty() {
            problems.push("policies: must list at least one policy".to_string());
        }
        let mut policies = Vec::new();
        for entry in &entries {
            match entry.resolve() {
                Ok(spec) => {
                    for env in &envs {
                        if let Err(e) = instantiate(&spec, env) {
                            problems.push(format!(
                                "policies: `{}` on env `{}`: {e}",
                                spec.label(),
                                env.name()
                            ));
                        }
                    }
                    policies.push(spec);
                }
                Err(e) => problems.push(format!("policies: {e}")),
            }
        }

        let replay = match &self.replay {
            Some(section) => Some(resolve_replay(section, &mut problems)),
            None => None,
        };

        if !problems.is_empty() {
            return Err(Error::Config(problems));
        }
        Ok(Experiment {
            envs,
            policies,
            horizon,
            batch_sizes,
            replicates,
            seed: self.seed.unwrap_or(0),
            modes,
            out: self.out.clone().unwrap_or_else(|| PathBuf::from(DEFAULT_OUT)),
            replay,
        })
    }
}

fn resolve_replay(section: &ReplaySection, problems: &mut Vec<String>) -> ReplayPlan {
    let mut policies = Vec::new();
    let entries = section.policies.clone().unwrap_or_else(|| {
        vec![
            PolicyEntry::Inline("lints".into()),
            PolicyEntry::Inline("linucb".into()),
        ]
    });
    if entries.is_empty() {
        problems.push("replay.policies: must list at least one policy".to_string());
    }
    for entry in &entries {
        match entry.resolve() {
            Ok(spec) => policies.push(spec),
            Err(e) => problems.push(format!("replay.policies: {e}")),
        }
    }
    let batch_sizes = section.batch_sizes.clone().unwrap_or_else(|| vec![1, 10, 100]);
    if batch_sizes.is_empty() || batch_sizes.contains(&0) {
        problems.push("replay.batch_sizes: must list batch sizes of at least 1".to_string());
    }
    let replicates = section.replicates.unwrap_or(DEFAULT_REPLAY_REPLICATES);
    if replicates == 0 {
        problems.push("replay.replicates: must be at least 1".to_string());
    }
    if section.arms == Some(0) {
        problems.push("replay.arms: must be at least 1".to_string());
    }
    if let Some(base) = &section.baseline {
        if !policies.iter().any(|p| &p.label() == base) {
            problems.push(format!(
                "replay.baseline: `{base}` is not one of the replayed policies"
            ));
        }
    }
    ReplayPlan {
        log: section.log.clone(),
        arms: section.arms,
        policies,
        batch_sizes,
        replicates,
        baseline: section.baseline.clone(),
    }
}

/// Fill in the context dimension and build the initial policy state for `env`.
pub fn instantiate(spec: &PolicySpec, env: &Environment) -> Result<PolicyState> {
    let mut spec = spec.clone();
    if spec.kind.is_contextual() {
        let d = env.context_dim().ok_or(Error::ContextRequired(spec.kind.as_str()))?;
        spec.dim.get_or_insert(d);
    }
    policy_init(&spec, env.num_arms())
}

#[derive(Debug, Clone, PartialEq)]
pub struct ReplayPlan {
    pub log: Option<PathBuf>,
    pub arms: Option<usize>,
    pub policies: Vec<PolicySpec>,
    pub batch_sizes: Vec<usize>,
    pub replicates: usize,
    pub baseline: Option<String>,
}

/// A validated experiment.
#[derive(Debug, Clone, PartialEq)]
pub struct Experiment {
    pub envs: Vec<Environment>,
    pub policies: Vec<PolicySpec>,
    pub horizon: usize,
    pub batch_sizes: Vec<usize>,
    pub replicates: usize,
    pub seed: u64,
    pub modes: Vec<Mode>,
    pub out: PathBuf,
    pub replay: Option<ReplayPlan>,
}

/// Master seed of the `(env, policy)` cell of an experiment.
pub fn cell_seed(master: u64, env_index: usize, policy_index: usize) -> u64 {
    derive_seed(master, &[env_index as u64, policy_index as u64])
}

/// Write through a temporary file and rename into place.
pub fn write_atomic(path: &Path, contents: &str) -> Result<()> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    }
    let tmp = path.with_extension(format!(
        "{}.tmp",
        path.extension().and_then(|e| e.to_str()).unwrap_or("")
    ));
    let mut f = fs::File::create(&tmp).map_err(|e| Error::io(&tmp, e))?;
    f.write_all(contents.as_bytes()).map_err(|e| Error::io(&tmp, e))?;
    f.sync_all().map_err(|e| Error::io(&tmp, e))?;
    fs::rename(&tmp, path).map_err(|e| Error::io(path, e))
}

/// Result of `simulate`: one sweep per `(env, policy)` cell.
#[derive(Debug, Clone)]
pub struct SimulationOutput {
    pub cells: Vec<(String, String, SweepResult)>,
    pub files: Vec<PathBuf>,
}

pub fn cmd_simulate(exp: &Experiment) -> Result<SimulationOutput> {
    let mut cells = Vec::new();
    for (ei, env) in exp.envs.iter().enumerate() {
        for (pi, spec) in exp.policies.iter().enumerate() {
            let config = SweepConfig {
                env: env.clone(),
                policy: instantiate(spec, env)?,
                horizon: exp.horizon,
                batch_sizes: exp.batch_sizes.clone(),
                replicates: exp.replicates,
                master_seed: cell_seed(exp.seed, ei, pi),
                modes: exp.modes.clone(),
            };
            cells.push((env.name().to_string(), spec.label(), run_sweep(&config)?));
        }
    }

    let mut summary = format!("{SUMMARY_HEADER}\n");
    let mut runs = format!("{RUNS_HEADER}\n");
    let mut trace = format!("{TRACE_HEADER}\n");
    for (env, policy, result) in &cells {
        // summary rows grouped by mode, then batch size
        for &mode in &exp.modes {
            for s in result.summaries.iter().filter(|s| s.mode == mode) {
                let r = &s.regret;
                let _ = writeln!(
                    summary,
                    "{env},{policy},{mode},{},{},{},{},{},{}",
                    s.batch_size, r.count, r.mean, r.std, r.ci_lo, r.ci_hi
                );
            }
        }
        for rec in &result.records {
            let _ = writeln!(
                runs,
                "{env},{policy},{},{},{},{},{},{},{}",
                rec.mode,
                rec.batch_size,
                rec.replicate,
                rec.seed,
                rec.horizon,
                rec.final_regret,
                rec.total_reward
            );
        }
        for t in &result.traces {
            let n = t.mean.len();
            let stride = n.div_ceil(TRACE_POINTS).max(1);
            let mut points: Vec<usize> = (stride - 1..n).step_by(stride).collect();
            if points.last() != Some(&(n - 1)) {
                points.push(n - 1);
            }
            for i in points {
                let _ = writeln!(
                    trace,
                    "{env},{policy},{},{},{},{},{}",
                    t.mode,
                    t.batch_size,
                    i + 1,
                    t.mean[i],
                    t.std_err[i]
                );
            }
        }
    }
    let files = vec![
        exp.out.join("summary.csv"),
        exp.out.join("runs.csv"),
        exp.out.join("trace.csv"),
    ];
    write_atomic(&files[0], &summary)?;
    write_atomic(&files[1], &runs)?;
    write_atomic(&files[2], &trace)?;
    Ok(SimulationOutput { cells, files })
}

#[derive(Debug, Clone)]
pub struct BoundsOutput {
    pub reports: Vec<BoundReport>,
    pub files: Vec<PathBuf>,
}

impl BoundsOutput {
    pub fn any_violation(&self) -> bool {
        self.reports.iter().any(BoundReport::any_violation)
    }
}

/// Replicate seeds used by `verify-bounds` for one `(env, policy, b)` cell.
pub fn bound_seeds(
    master: u64,
    env_index: usize,
    policy_index: usize,
    replicates: usize,
) -> Vec<crate::runner::RunSeed> {
    crate::analysis::replicate_seeds(cell_seed(master, env_index, policy_index), replicates)
}

pub fn cmd_verify_bounds(exp: &Experiment) -> Result<BoundsOutput> {
    let sizes: Vec<usize> = exp.batch_sizes.iter().copied().filter(|&b| b >= 2).collect();
    let mut problems = Vec::new();
    if sizes.is_empty() {
        problems.push("batch_sizes: verify-bounds needs at least one batch size of 2 or more".into());
    }
    if exp.replicates < 2 {
        problems.push("replicates: verify-bounds needs at least 2 replicates".into());
    }
    if !problems.is_empty() {
        return Err(Error::Config(problems));
    }

    let mut reports = Vec::new();
    for (ei, env) in exp.envs.iter().enumerate() {
        for (pi, spec) in exp.policies.iter().enumerate() {
            let policy = instantiate(spec, env)?;
            let seeds = bound_seeds(exp.seed, ei, pi, exp.replicates);
            for &b in &sizes {
                let grid = BatchGrid::new(exp.horizon, b)?;
                let mut report =
                    verify_theorem_with(&policy, env, &grid, &seeds, BoundOptions::default())?;
                report.policy = spec.label();
                reports.push(report);
            }
        }
    }

    let mut csv = format!("{BOUNDS_HEADER}\n");
    let mut text = String::new();
    for r in &reports {
        let _ = writeln!(
            csv,
            "{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{}",
            r.env,
            r.policy,
            r.horizon,
            r.batch_size,
            r.batches,
            r.online.mean,
            r.batched.mean,
            r.short.mean,
            r.online.ci_lo,
            r.online.ci_hi,
            r.batched.ci_lo,
            r.batched.ci_hi,
            r.short.ci_lo,
            r.short.ci_hi,
            r.left.verdict,
            r.right.verdict,
            r.left.difference.mean,
            r.right.difference.mean
        );
        let _ = writeln!(text, "{r}\n");
    }
    let files = vec![exp.out.join("bounds.csv"), exp.out.join("bounds.txt")];
    write_atomic(&files[0], &csv)?;
    write_atomic(&files[1], &text)?;
    Ok(BoundsOutput { reports, files })
}

/// One `(policy, batch size)` row of a replay comparison.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ReplayRow {
    pub policy: String,
    pub batch_size: usize,
    pub total: usize,
    pub matched: Summary,
    pub conversion: Summary,
    pub relative: Option<f64>,
}

#[derive(Debug, Clone)]
pub struct ReplayOutput {
    pub rows: Vec<ReplayRow>,
    pub files: Vec<PathBuf>,
}

/// Infer the arm count of a uniformly logged file from its first propensity.
pub fn infer_arms(path: &Path) -> Result<usize> {
    let mut reader = csv::Reader::from_path(path).map_err(|e| match e.into_kind() {
        csv::ErrorKind::Io(io) => Error::io(path, io),
        other => Error::InvalidLog(format!("{other:?}")),
    })?;
    let first = reader
        .records()
        .next()
        .ok_or_else(|| Error::InvalidLog(format!("{} has no events", path.display())))??;
    let p: f64 = first
        .get(3)
        .and_then(|v| v.trim().parse().ok())
        .filter(|p: &f64| *p > 0.0 && *p <= 1.0)
        .ok_or_else(|| Error::LogParse {
            path: path.to_path_buf(),
            line: 2,
            message: "cannot infer the arm count from the propensity column".into(),
        })?;
    Ok((1.0 / p).round() as usize)
}

pub fn cmd_replay(exp: &Experiment, log_path: Option<&Path>) -> Result<ReplayOutput> {
    let plan = exp.replay.clone().unwrap_or_else(|| {
        let mut problems = Vec::new();
        resolve_replay(&ReplaySection::default(), &mut problems)
    });
    let path = log_path
        .map(Path::to_path_buf)
        .or_else(|| plan.log.clone())
        .ok_or_else(|| Error::Config(vec!["replay.log: no log file given".into()]))?;
    let arms = match plan.arms {
        Some(k) => k,
        None => infer_arms(&path)?,
    };
    let log = load_log(&path, arms)?;
    let rows = replay_rows(&plan, &log, arms, exp.seed)?;

    let mut csv = format!("{REPLAY_HEADER}\n");
    for r in &rows {
        let _ = writeln!(
            csv,
            "{},{},{},{},{},{},{},{},{},{}",
            r.policy,
            r.batch_size,
            r.conversion.count,
            r.total,
            r.matched.mean,
            r.conversion.mean,
            r.conversion.std,
            r.conversion.ci_lo,
            r.conversion.ci_hi,
            r.relative.map(|v| v.to_string()).unwrap_or_default()
        );
    }
    let files = vec![exp.out.join("replay.csv")];
    write_atomic(&files[0], &csv)?;
    Ok(ReplayOutput { rows, files })
}

/// Replay every `(policy, batch size)` of `plan` over `log`.
pub fn replay_rows(plan: &ReplayPlan, log: &[LoggedEvent], arms: usize, seed: u64) -> Result<Vec<ReplayRow>> {
    let d = log[0].context.as_ref().map(Vec::len);
    let mut rows = Vec::new();
    for (pi, spec) in plan.policies.iter().enumerate() {
        let mut spec = spec.clone();
        if spec.kind.is_contextual() {
            let d = d.ok_or(Error::ContextRequired(spec.kind.as_str()))?;
            spec.dim.get_or_insert(d);
        }
        let policy = policy_init(&spec, arms)?;
        for (bi, &b) in plan.batch_sizes.iter().enumerate() {
            let mut matched = Vec::with_capacity(plan.replicates);
            let mut rates = Vec::with_capacity(plan.replicates);
            for rep in 0..plan.replicates {
                let s = derive_seed(seed, &[pi as u64, bi as u64, rep as u64]);
                let res = replay_evaluate(&policy, log, b, s)?;
                matched.push(res.matched_count as f64);
                rates.push(res.conversion_rate.ok_or_else(|| {
                    Error::InvalidLog(format!(
                        "policy `{}` with b = {b} matched no logged events",
                        spec.label()
                    ))
                })?);
            }
            rows.push(ReplayRow {
                policy: spec.label(),
                batch_size: b,
                total: log.len(),
                matched: Summary::from_samples(&matched),
                conversion: Summary::from_samples(&rates),
                relative: None,
            });
        }
    }
    if let Some(base) = &plan.baseline {
        let smallest = plan.batch_sizes.iter().copied().min().unwrap_or(1);
        let reference = rows
            .iter()
            .find(|r| &r.policy == base && r.batch_size == smallest)
            .map(|r| r.conversion.mean)
            .ok_or_else(|| Error::Config(vec![format!("replay.baseline: `{base}` not replayed")]))?;
        for r in &mut rows {
            r.relative = Some(if r.policy == *base && r.batch_size == smallest {
                1.0
            } else {
                r.conversion.mean / reference
            });
        }
    }
    Ok(rows)
}

#[derive(Debug, Clone)]
pub struct GenLogOutput {
    pub path: PathBuf,
    pub size: usize,
    pub arms: usize,
    pub dim: usize,
    pub frequencies: Vec<usize>,
}

pub fn cmd_gen_log(env: &Environment, size: usize, seed: u64, path: &Path) -> Result<GenLogOutput> {
    let events = generate_synthetic_log(env, size, seed)?;
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    }
    let tmp = path.with_extension("csv.tmp");
    write_log(&tmp, &events)?;
    fs::rename(&tmp, path).map_err(|e| Error::io(path, e))?;
    let mut frequencies = vec![0; env.num_arms()];
    for e in &events {
        frequencies[e.action] += 1;
    }
    Ok(GenLogOutput {
        path: path.to_path_buf(),
        size,
        arms: env.num_arms(),
        dim: env.context_dim().unwrap_or(0),
        frequencies,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_resolve() {
        let exp = ExperimentConfig::default().resolve().unwrap();
        assert_eq!(exp.horizon, DEFAULT_HORIZON);
        assert_eq!(exp.batch_sizes, DEFAULT_BATCH_SIZES.to_vec());
        assert_eq!(exp.replicates, 500);
        assert_eq!(exp.envs[0].means(), &[0.7, 0.5]);
    }

    #[test]
    fn parses_full_file() {
        let cfg = ExperimentConfig::from_toml(
            r#"
            envs = ["env2", { family = "gaussian", means = [0.0, 1.0], sd = 1.0 }]
            policies = ["ucb1", { kind = "egreedy", epsilon = 0.05 }]
            horizon = 200
            batch_sizes = [1, 8]
            replicates = 3
            seed = 9
            modes = ["online", "short"]
            out = "x"
            [replay]
            policies = ["fixed:arm=1"]
            baseline = "fixed:arm=1"
            "#,
        )
        .unwrap();
        let exp = cfg.resolve().unwrap();
        assert_eq!(exp.envs.len(), 2);
        assert_eq!(exp.policies[1].epsilon, Some(0.05));
        assert_eq!(exp.modes, vec![Mode::Online, Mode::Short]);
        assert_eq!(exp.replay.unwrap().batch_sizes, vec![1, 10, 100]);
    }

    #[test]
    fn reports_every_bad_field() {
        let cfg = ExperimentConfig::from_toml(
            r#"
            envs = ["env7"]
            policies = ["softmax"]
            horizon = 10
            batch_sizes = [0, 20]
            replicates = 0
            modes = []
            "#,
        )
        .unwrap();
        match cfg.resolve().unwrap_err() {
            Error::Config(p) => {
                for field in ["envs", "policies", "batch_sizes: 0", "batch_sizes: 20", "replicates", "modes"] {
                    assert!(p.iter().any(|m| m.starts_with(field)), "missing {field}: {p:?}");
                }
            }
            other => panic!("unexpected {other}"),
        }
    }

    #[test]
    fn unknown_keys_are_rejected() {
        assert!(ExperimentConfig::from_toml("horizn = 5").is_err());
        assert!(ExperimentConfig::from_toml("modes = [\"sideways\"]").is_err());
    }

    #[test]
    fn contextual_policy_needs_contextual_env() {
        let cfg = ExperimentConfig {
            policies: Some(vec![PolicyEntry::Inline("linucb".into())]),
            ..Default::default()
        };
        assert!(cfg.resolve().is_err());
        let cfg = ExperimentConfig {
            envs: Some(vec![EnvSpec::Inline("campaign".into())]),
            ..cfg
        };
        assert!(cfg.resolve().is_ok());
    }
}
