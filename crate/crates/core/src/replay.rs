//! Offline evaluation of a policy on uniformly logged bandit feedback with
//! the replay (rejection) method.
//!
//! Events are streamed in order. The policy picks an action for each event;
//! when it matches the logged action the event is accepted and its reward
//! counts towards the conversion rate. Accepted events are handed back to
//! the policy in batches of `b`, so `b = 1` is online replay.
//!
//! Logs are CSV with header `step,action,reward,propensity[,x1..xd]`.

use std::fs::File;
use std::io::Write;
use std::path::Path;

use rand::{Rng, SeedableRng};
use serde::Serialize;

use crate::environment::Environment;
use crate::error::{Error, Result};
use crate::policy::PolicyState;
use crate::runner::SimRng;

/// Allowed deviation of a propensity from `1/K` for a log to count as uniform.
pub const UNIFORM_PROPENSITY_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq)]
pub struct LoggedEvent {
    pub step: u64,
    pub context: Option<Vec<f64>>,
    pub action: usize,
    pub reward: f64,
    pub propensity: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ReplayResult {
    pub batch_size: usize,
    pub matched_count: usize,
    pub total_count: usize,
    pub successes: f64,
    /// `None` when no event was accepted.
    pub conversion_rate: Option<f64>,
    /// Conversion rate of each batch of accepted events (the last may be partial).
    pub batch_rates: Vec<f64>,
}

impl ReplayResult {
    pub fn acceptance_rate(&self) -> f64 {
        self.matched_count as f64 / self.total_count as f64
    }
}

/// Draw `size` uniformly logged events from `env`.
pub fn generate_synthetic_log(env: &Environment, size: usize, seed: u64) -> Result<Vec<LoggedEvent>> {
    if size == 0 {
        return Err(Error::InvalidLog("log size must be at least 1".into()));
    }
    let mut rng = SimRng::seed_from_u64(seed);
    let k = env.num_arms();
    let propensity = 1.0 / k as f64;
    (0..size as u64)
        .map(|step| {
            let context = env.draw_context(&mut rng);
            let action = rng.random_range(0..k);
            let reward = env.sample_reward_in_context(action, context.as_deref(), &mut rng)?;
            Ok(LoggedEvent {
                step,
                context,
                action,
                reward,
                propensity,
            })
        })
        .collect()
}

/// Write events as CSV. All events must share one context dimension.
pub fn write_log(path: &Path, events: &[LoggedEvent]) -> Result<()> {
    let d = events
        .first()
        .and_then(|e| e.context.as_ref())
        .map_or(0, Vec::len);
    let file = File::create(path).map_err(|e| Error::io(path, e))?;
    let mut w = csv::Writer::from_writer(std::io::BufWriter::new(file));
    let mut header = vec!["step".to_string(), "action".into(), "reward".into(), "propensity".into()];
    header.extend((1..=d).map(|i| format!("x{i}")));
    w.write_record(&header)?;
    let mut row = Vec::with_capacity(4 + d);
    for e in events {
        let ctx = e.context.as_deref().unwrap_or(&[]);
        if ctx.len() != d {
            return Err(Error::DimensionMismatch {
                expected: d,
                actual: ctx.len(),
            });
        }
        row.clear();
        row.push(e.step.to_string());
        row.push(e.action.to_string());
        row.push(e.reward.to_string());
        row.push(e.propensity.to_string());
        row.extend(ctx.iter().map(|x| x.to_string()));
        w.write_record(&row)?;
    }
    let mut inner = w
        .into_inner()
        .map_err(|e| Error::io(path, std::io::Error::other(e.to_string())))?;
    inner.flush().map_err(|e| Error::io(path, e))
}

/// Read and validate a log whose actions index `arms` arms.
pub fn load_log(path: &Path, arms: usize) -> Result<Vec<LoggedEvent>> {
    let file = File::open(path).map_err(|e| Error::io(path, e))?;
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(true)
        .flexible(true)
        .from_reader(std::io::BufReader::new(file));
    let parse_err = |line: u64, message: String| Error::LogParse {
        path: path.to_path_buf(),
        line,
        message,
    };

    let header = reader.headers()?.clone();
    if header.is_empty() || header.iter().all(|h| h.trim().is_empty()) {
        return Err(Error::InvalidLog(format!("{} is empty", path.display())));
    }
    let fixed = ["step", "action", "reward", "propensity"];
    if header.len() < 4 || header.iter().take(4).ne(fixed.iter().copied()) {
        return Err(parse_err(1, format!(
            "header must start with step,action,reward,propensity, got `{}`",
            header.iter().collect::<Vec<_>>().join(",")
        )));
    }
    let d = header.len() - 4;
    for (i, name) in header.iter().skip(4).enumerate() {
        if name != format!("x{}", i + 1) {
            return Err(parse_err(1, format!("context column {} must be named x{}, got `{name}`", i + 1, i + 1)));
        }
    }

    let mut events = Vec::new();
    for record in reader.records() {
        let record = record?;
        let line = record.position().map_or(0, |p| p.line());
        if record.len() != 4 + d {
            return Err(parse_err(line, format!(
                "expected {} fields (d = {d}), found {}",
                4 + d,
                record.len()
            )));
        }
        let field = |i: usize| record[i].trim();
        let number = |i: usize, name: &str| -> Result<f64> {
            let v: f64 = field(i)
                .parse()
                .map_err(|_| parse_err(line, format!("{name} `{}` is not a number", field(i))))?;
            if v.is_finite() {
                Ok(v)
            } else {
                Err(parse_err(line, format!("{name} must be finite")))
            }
        };
        let step = field(0)
            .parse::<u64>()
            .map_err(|_| parse_err(line, format!("step `{}` is not an ordinal", field(0))))?;
        let action = field(1)
            .parse::<usize>()
            .map_err(|_| parse_err(line, format!("action `{}` is not an arm index", field(1))))?;
        if action >= arms {
            return Err(parse_err(line, format!("action {action} out of range for {arms} arms")));
        }
        let reward = number(2, "reward")?;
        let propensity = number(3, "propensity")?;
        if !(propensity > 0.0 && propensity <= 1.0) {
            return Err(parse_err(line, format!("propensity {propensity} outside (0, 1]")));
        }
        let context = if d == 0 {
            None
        } else {
            Some((0..d).map(|i| number(4 + i, &format!("x{}", i + 1))).collect::<Result<Vec<_>>>()?)
        };
        events.push(LoggedEvent {
            step,
            context,
            action,
            reward,
            propensity,
        });
    }
    if events.is_empty() {
        return Err(Error::InvalidLog(format!("{} has no events", path.display())));
    }
    Ok(events)
}

/// Replay `policy` over `log`, updating it every `batch_size` accepted events.
pub fn replay_evaluate(
    policy: &PolicyState,
    log: &[LoggedEvent],
    batch_size: usize,
    seed: u64,
) -> Result<ReplayResult> {
    if batch_size == 0 {
        return Err(Error::InvalidGrid("batch size must be at least 1".into()));
    }
    let k = policy.num_arms();
    let uniform = 1.0 / k as f64;
    for e in log {
        if e.action >= k {
            return Err(Error::ArmOutOfRange { arm: e.action, arms: k });
        }
        if (e.propensity - uniform).abs() > UNIFORM_PROPENSITY_TOLERANCE {
            return Err(Error::InvalidLog(format!(
                "event {} has propensity {} but replay needs uniform logging (1/{k})",
                e.step, e.propensity
            )));
        }
    }

    let mut state = policy.clone();
    let mut rng = SimRng::seed_from_u64(seed);
    let mut pending: Vec<&LoggedEvent> = Vec::with_capacity(batch_size);
    let mut matched = 0;
    let mut successes = 0.0;
    let mut batch_rates = Vec::new();
    let contextual = policy.is_contextual();
    fn ctx(e: &LoggedEvent, contextual: bool) -> Option<&[f64]> {
        if contextual {
            e.context.as_deref()
        } else {
            None
        }
    }

    for e in log {
        let rule = state.decide(ctx(e, contextual), &mut rng)?;
        if rule.sample(&mut rng) != e.action {
            continue;
        }
        matched += 1;
        successes += e.reward;
        pending.push(e);
        if pending.len() == batch_size {
            batch_rates.push(pending.iter().map(|e| e.reward).sum::<f64>() / batch_size as f64);
            for p in pending.drain(..) {
                state.update(p.action, p.reward, ctx(p, contextual))?;
            }
        }
    }
    if !pending.is_empty() {
        batch_rates.push(pending.iter().map(|e| e.reward).sum::<f64>() / pending.len() as f64);
    }

    Ok(ReplayResult {
        batch_size,
        matched_count: matched,
        total_count: log.len(),
        successes,
        conversion_rate: (matched > 0).then(|| successes / matched as f64),
        batch_rates,
    })
}
