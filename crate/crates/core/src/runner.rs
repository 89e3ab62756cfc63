//! Execution engines for the online policy `π`, its batch specification
//! `π^b`, and the short policy `π′`.
//!
//! All three modes share one loop so that the random streams are consumed in
//! the same order: per timestep, the environment stream draws the context
//! (if any) and then the reward, while the policy stream feeds `decide` and
//! the action draw. With `b = 1` the three modes therefore produce identical
//! trajectories.

use std::fmt;
use std::str::FromStr;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::environment::Environment;
use crate::error::{Error, Result};
use crate::grid::{BatchGrid, History};
use crate::policy::PolicyState;
use crate::rule::DecisionRule;

pub type SimRng = ChaCha8Rng;

const ENV_STREAM: u64 = 0;
const POLICY_STREAM: u64 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Online,
    Batched,
    Short,
}

impl Mode {
    pub const ALL: [Mode; 3] = [Mode::Online, Mode::Batched, Mode::Short];

    pub fn as_str(self) -> &'static str {
        match self {
            Mode::Online => "online",
            Mode::Batched => "batched",
            Mode::Short => "short",
        }
    }

    pub(crate) fn index(self) -> u64 {
        match self {
            Mode::Online => 0,
            Mode::Batched => 1,
            Mode::Short => 2,
        }
    }
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.pad(self.as_str())
    }
}

impl FromStr for Mode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "online" => Ok(Mode::Online),
            "batched" | "batch" => Ok(Mode::Batched),
            "short" => Ok(Mode::Short),
            other => Err(Error::Config(vec![format!(
                "unknown mode `{other}` (expected online, batched or short)"
            )])),
        }
    }
}

/// Seed of one run; split into independent environment and policy streams.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct RunSeed(pub u64);

impl RunSeed {
    pub fn env_rng(self) -> SimRng {
        let mut rng = SimRng::seed_from_u64(self.0);
        rng.set_stream(ENV_STREAM);
        rng
    }

    pub fn policy_rng(self) -> SimRng {
        let mut rng = SimRng::seed_from_u64(self.0);
        rng.set_stream(POLICY_STREAM);
        rng
    }
}

/// Mix a master seed with coordinates (batch index, replicate, ...) into a run seed.
pub fn derive_seed(master: u64, parts: &[u64]) -> u64 {
    parts
        .iter()
        .fold(splitmix64(master), |acc, &p| splitmix64(acc ^ splitmix64(p)))
}

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Full record of one simulated run.
#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    pub grid: BatchGrid,
    pub mode: Mode,
    pub seed: RunSeed,
    pub actions: Vec<usize>,
    pub rewards: Vec<f64>,
    /// Rule in force at each step. For the short policy this is the frozen
    /// rule of the batch.
    pub rules: Vec<DecisionRule>,
    /// Cumulative `Σ_{s≤t} (μ* − μ_{A_s})`.
    pub pseudo_regret: Vec<f64>,
}

impl Trajectory {
    pub fn len(&self) -> usize {
        self.actions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.actions.is_empty()
    }

    pub fn final_regret(&self) -> f64 {
        self.pseudo_regret.last().copied().unwrap_or(0.0)
    }

    pub fn total_reward(&self) -> f64 {
        self.rewards.iter().sum()
    }

    /// Per-batch count of rewards actually handed to the policy, per arm.
    ///
    /// The online and batched policies receive every reward; the short policy
    /// only the first of each batch.
    pub fn received_counts(&self, arms: usize) -> Vec<Vec<u32>> {
        let b = self.grid.batch_size();
        (0..self.grid.num_batches())
            .map(|j| {
                let mut counts = vec![0u32; arms];
                let range = self.grid.batch(j);
                match self.mode {
                    Mode::Short => counts[self.actions[range.start]] += 1,
                    _ => self.actions[range].iter().for_each(|&a| counts[a] += 1),
                }
                debug_assert_eq!(
                    counts.iter().sum::<u32>() as usize,
                    if self.mode == Mode::Short { 1 } else { b }
                );
                counts
            })
            .collect()
    }
}

/// Run `π`: every reward is consumed immediately.
pub fn run_online(
    policy: &PolicyState,
    env: &Environment,
    horizon: usize,
    seed: RunSeed,
) -> Result<Trajectory> {
    if horizon == 0 {
        return Err(Error::InvalidGrid("horizon must be at least 1".into()));
    }
    run_observed(Mode::Online, policy, env, &BatchGrid::online(horizon)?, seed, |_, _| {})
}

/// Run `π^b`: the policy state is frozen inside each batch and the batch's
/// rewards are applied in timestep order when it ends.
pub fn run_batched(
    policy: &PolicyState,
    env: &Environment,
    grid: &BatchGrid,
    seed: RunSeed,
) -> Result<Trajectory> {
    run_observed(Mode::Batched, policy, env, grid, seed, |_, _| {})
}

/// Run `π′`: the first action of each batch is repeated `b` times and only
/// its reward is consumed when the batch ends.
pub fn run_short(
    policy: &PolicyState,
    env: &Environment,
    grid: &BatchGrid,
    seed: RunSeed,
) -> Result<Trajectory> {
    run_observed(Mode::Short, policy, env, grid, seed, |_, _| {})
}

pub fn run_mode(
    mode: Mode,
    policy: &PolicyState,
    env: &Environment,
    grid: &BatchGrid,
    seed: RunSeed,
) -> Result<Trajectory> {
    run_observed(mode, policy, env, grid, seed, |_, _| {})
}

/// Run `mode` on a copy of `policy`, calling `observer(j, state)` once the
/// state has absorbed batch `j` (0-based). For the online mode the grid only
/// marks observation points.
pub fn run_observed<F>(
    mode: Mode,
    policy: &PolicyState,
    env: &Environment,
    grid: &BatchGrid,
    seed: RunSeed,
    mut observer: F,
) -> Result<Trajectory>
where
    F: FnMut(usize, &PolicyState),
{
    if policy.num_arms() != env.num_arms() {
        return Err(Error::DimensionMismatch {
            expected: env.num_arms(),
            actual: policy.num_arms(),
        });
    }
    if policy.is_contextual() && !env.is_contextual() {
        return Err(Error::ContextRequired(policy.kind().as_str()));
    }
    let contexts_for_policy = policy.is_contextual();

    let n = grid.horizon();
    let mut state = policy.clone();
    let mut env_rng = seed.env_rng();
    let mut policy_rng = seed.policy_rng();

    let mut actions = Vec::with_capacity(n);
    let mut rewards = Vec::with_capacity(n);
    let mut rules = Vec::with_capacity(n);
    let mut pseudo_regret = Vec::with_capacity(n);
    let mut history = History::with_capacity(if mode == Mode::Batched {
        grid.batch_size()
    } else {
        0
    });
    let mut regret = 0.0;
    // Short policy: frozen rule and action of the current batch, plus its first reward.
    let mut repeated: Option<(DecisionRule, usize)> = None;
    let mut first_feedback: Option<(usize, f64, Option<Vec<f64>>)> = None;

    for t in 0..n {
        let context = env.draw_context(&mut env_rng);
        let policy_context = if contexts_for_policy {
            context.as_deref()
        } else {
            None
        };

        let (rule, action) = match (&repeated, mode) {
            (Some((rule, action)), Mode::Short) => (rule.clone(), *action),
            _ => {
                let rule = state.decide(policy_context, &mut policy_rng)?;
                let action = rule.sample(&mut policy_rng);
                (rule, action)
            }
        };
        let reward = env.sample_reward_in_context(action, context.as_deref(), &mut env_rng)?;
        regret += env.best_mean_in_context(context.as_deref())?
            - env.mean_in_context(action, context.as_deref())?;

        let stored_context = if contexts_for_policy { context } else { None };
        match mode {
            Mode::Online => state.update(action, reward, stored_context.as_deref())?,
            Mode::Batched => history.record(action, reward, stored_context),
            Mode::Short => {
                if repeated.is_none() {
                    repeated = Some((rule.clone(), action));
                    first_feedback = Some((action, reward, stored_context));
                }
            }
        }

        actions.push(action);
        rewards.push(reward);
        rules.push(rule);
        pseudo_regret.push(regret);

        if grid.is_batch_end(t) {
            match mode {
                Mode::Online => {}
                Mode::Batched => {
                    for i in history.release() {
                        state.update(i.action, i.reward, i.context.as_deref())?;
                    }
                }
                Mode::Short => {
                    repeated = None;
                    if let Some((a, r, x)) = first_feedback.take() {
                        state.update(a, r, x.as_deref())?;
                    }
                }
            }
            observer(grid.batch_of(t), &state);
        }
    }

    Ok(Trajectory {
        grid: *grid,
        mode,
        seed,
        actions,
        rewards,
        rules,
        pseudo_regret,
    })
}
