//! Regret estimates, average-rule checks, assumption audits and the
//! sandwich-bound verifier `R_n(π) < R_n(π^b) ≤ b·R_M(π)`.
//!
//! Every Monte Carlo routine derives one seed per replicate and runs the
//! online, batched and short modes on that same seed, so mode comparisons are
//! paired (common random numbers). Verdicts use paired differences: a strict
//! inequality holds when the mean difference exceeds two standard errors,
//! and any inequality is violated only when the difference is negative
//! beyond two standard errors.

use std::fmt;

use rayon::prelude::*;
use serde::Serialize;

use crate::environment::Environment;
use crate::error::{Error, Result};
use crate::grid::BatchGrid;
use crate::policy::PolicyState;
use crate::rule::{compare_rules, expected_reward, DecisionRule, RuleOrdering};
use crate::runner::{derive_seed, run_mode, run_observed, run_online, Mode, RunSeed, Trajectory};
use crate::stats::{compensated_sum, Summary, VERDICT_STD_ERRS};

/// `Σ_t (μ* − μ_{A_t})` recomputed from the action list.
///
/// Contextual trajectories carry context-dependent gaps that cannot be
/// recovered from actions alone; their recorded cumulative value is returned.
pub fn pseudo_regret(traj: &Trajectory, env: &Environment) -> Result<f64> {
    if let Some(rule) = traj.rules.first() {
        if rule.num_arms() != env.num_arms() {
            return Err(Error::DimensionMismatch {
                expected: env.num_arms(),
                actual: rule.num_arms(),
            });
        }
    }
    if env.is_contextual() {
        return Ok(traj.final_regret());
    }
    let gaps = env.gaps();
    traj.actions.iter().try_fold(0.0, |acc, &a| {
        env.check_arm(a)?;
        Ok(acc + gaps[a])
    })
}

/// Elementwise mean of decision rules.
pub fn average_decision_rule(rules: &[DecisionRule]) -> Result<DecisionRule> {
    let first = rules
        .first()
        .ok_or_else(|| Error::InvalidRule("cannot average an empty list of rules".into()))?;
    let arms = first.num_arms();
    if let Some(bad) = rules.iter().find(|r| r.num_arms() != arms) {
        return Err(Error::DimensionMismatch {
            expected: arms,
            actual: bad.num_arms(),
        });
    }
    let count = rules.len() as f64;
    let probs = (0..arms)
        .map(|a| compensated_sum(rules.iter().map(|r| r.prob(a))) / count)
        .collect();
    Ok(DecisionRule::from_raw(probs))
}

/// Expected regret `t·μ* − Σ_{s≤t} Σ_a μ_a π_s(a)` of a rule sequence, per prefix.
pub fn expected_regret_curve(rules: &[DecisionRule], env: &Environment) -> Result<Vec<f64>> {
    let mut acc = 0.0;
    rules
        .iter()
        .enumerate()
        .map(|(t, r)| {
            acc += expected_reward(r, env)?;
            Ok((t + 1) as f64 * env.best_mean() - acc)
        })
        .collect()
}

/// Outcome of checking the average-rule orderings on one rule sequence.
#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct LemmaReport {
    pub steps: usize,
    /// Averages that leave the simplex.
    pub simplex_violations: usize,
    /// Pairs `n1 < n2` checked for `π̄_{n2} > π̄_{n1}`.
    pub part1_pairs: usize,
    pub part1_violations: usize,
    /// Steps `t ≥ 2` checked for `π_t > π̄_t` (at `t = 1` the two coincide).
    pub part2_checked: usize,
    pub part2_violations: usize,
}

impl LemmaReport {
    pub fn holds(&self) -> bool {
        self.simplex_violations == 0 && self.part1_violations == 0 && self.part2_violations == 0
    }
}

pub fn check_lemma(rules: &[DecisionRule], env: &Environment) -> Result<LemmaReport> {
    let mut report = LemmaReport {
        steps: rules.len(),
        ..LemmaReport::default()
    };
    let averages = (1..=rules.len())
        .map(|t| average_decision_rule(&rules[..t]))
        .collect::<Result<Vec<_>>>()?;
    report.simplex_violations = averages.iter().filter(|r| !r.is_valid()).count();
    for n2 in 1..averages.len() {
        for n1 in 0..n2 {
            report.part1_pairs += 1;
            if compare_rules(&averages[n2], &averages[n1], env)? != RuleOrdering::Better {
                report.part1_violations += 1;
            }
        }
    }
    for t in 1..rules.len() {
        report.part2_checked += 1;
        if compare_rules(&rules[t], &averages[t], env)? != RuleOrdering::Better {
            report.part2_violations += 1;
        }
    }
    Ok(report)
}

/// Replicate-mean cumulative pseudo-regret per timestep.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RegretTrace {
    pub mode: Mode,
    pub batch_size: usize,
    pub replicates: usize,
    pub mean: Vec<f64>,
    pub std_err: Vec<f64>,
}

/// Running per-timestep sums; merged in a fixed order to stay deterministic.
#[derive(Debug, Clone)]
pub(crate) struct TraceAccumulator {
    count: usize,
    sum: Vec<f64>,
    sum_sq: Vec<f64>,
}

impl TraceAccumulator {
    pub(crate) fn new(len: usize) -> Self {
        Self {
            count: 0,
            sum: vec![0.0; len],
            sum_sq: vec![0.0; len],
        }
    }

    pub(crate) fn add(&mut self, cumulative: &[f64]) {
        self.count += 1;
        for ((s, q), &v) in self.sum.iter_mut().zip(&mut self.sum_sq).zip(cumulative) {
            *s += v;
            *q += v * v;
        }
    }

    pub(crate) fn merge(&mut self, other: &TraceAccumulator) {
        self.count += other.count;
        for (s, o) in self.sum.iter_mut().zip(&other.sum) {
            *s += o;
        }
        for (s, o) in self.sum_sq.iter_mut().zip(&other.sum_sq) {
            *s += o;
        }
    }

    pub(crate) fn finish(self, mode: Mode, batch_size: usize) -> RegretTrace {
        let r = self.count as f64;
        let mean: Vec<f64> = self.sum.iter().map(|s| s / r).collect();
        let std_err = self
            .sum
            .iter()
            .zip(&self.sum_sq)
            .map(|(s, q)| {
                if self.count < 2 {
                    return 0.0;
                }
                let var = ((q - s * s / r) / (r - 1.0)).max(0.0);
                (var / r).sqrt()
            })
            .collect();
        RegretTrace {
            mode,
            batch_size,
            replicates: self.count,
            mean,
            std_err,
        }
    }
}

impl RegretTrace {
    pub fn from_trajectories(trajectories: &[Trajectory]) -> Result<Self> {
        let first = trajectories
            .first()
            .ok_or_else(|| Error::InvalidAnalysis("no trajectories to aggregate".into()))?;
        let mut acc = TraceAccumulator::new(first.len());
        for t in trajectories {
            if t.len() != first.len() || t.mode != first.mode || t.grid != first.grid {
                return Err(Error::InvalidAnalysis(
                    "trajectories differ in mode or grid".into(),
                ));
            }
            acc.add(&t.pseudo_regret);
        }
        Ok(acc.finish(first.mode, first.grid.batch_size()))
    }

    pub fn final_mean(&self) -> f64 {
        self.mean.last().copied().unwrap_or(0.0)
    }
}

/// Verdict on one inequality between replicate-averaged quantities.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Verdict {
    Holds,
    HoldsWithinCi,
    Violated,
    /// Every paired difference is exactly zero.
    DegenerateEqual,
}

impl Verdict {
    pub fn as_str(self) -> &'static str {
        match self {
            Verdict::Holds => "holds",
            Verdict::HoldsWithinCi => "holds-within-CI",
            Verdict::Violated => "violated",
            Verdict::DegenerateEqual => "degenerate-equal",
        }
    }

    pub fn is_violated(self) -> bool {
        self == Verdict::Violated
    }

    /// Verdict on `upper − lower > 0` from paired differences.
    pub fn strict(diffs: &[f64]) -> (Summary, Verdict) {
        Self::judge(diffs, true)
    }

    /// Verdict on `upper − lower ≥ 0` from paired differences.
    pub fn non_strict(diffs: &[f64]) -> (Summary, Verdict) {
        Self::judge(diffs, false)
    }

    fn judge(diffs: &[f64], strict: bool) -> (Summary, Verdict) {
        let s = Summary::from_samples(diffs);
        let margin = VERDICT_STD_ERRS * s.std_err;
        let verdict = if diffs.iter().all(|&d| d == 0.0) {
            Verdict::DegenerateEqual
        } else if (strict && s.mean > margin) || (!strict && s.mean >= 0.0) {
            Verdict::Holds
        } else if s.mean >= -margin {
            Verdict::HoldsWithinCi
        } else {
            Verdict::Violated
        };
        (s, verdict)
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.pad(self.as_str())
    }
}

/// Per-replicate seeds shared by all modes of that replicate.
pub fn replicate_seeds(master: u64, replicates: usize) -> Vec<RunSeed> {
    (0..replicates as u64)
        .map(|r| RunSeed(derive_seed(master, &[r])))
        .collect()
}

/// Audit of "improvement over time": `R_{n1}/n1 > R_{n2}/n2` for `n1 < n2`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ImprovementReport {
    pub replicates: usize,
    pub checkpoints: Vec<usize>,
    /// Regret rate `R̂_t / t` per checkpoint.
    pub rates: Vec<Summary>,
    pub pairs: usize,
    /// Checkpoint pairs `(n1, n2)` without a significant decrease in rate.
    pub violations: Vec<(usize, usize)>,
    pub conforming_fraction: f64,
}

/// Roughly geometric checkpoints in `1..=n`.
pub fn improvement_checkpoints(n: usize) -> Vec<usize> {
    const POINTS: usize = 16;
    let mut points: Vec<usize> = (0..POINTS)
        .map(|k| (n as f64).powf(k as f64 / (POINTS - 1) as f64).round() as usize)
        .map(|t| t.clamp(1, n))
        .collect();
    points.dedup();
    points
}

pub fn check_improvement(
    policy: &PolicyState,
    env: &Environment,
    horizon: usize,
    replicates: usize,
    seed: u64,
) -> Result<ImprovementReport> {
    if replicates < 2 {
        return Err(Error::InvalidAnalysis("need at least 2 replicates".into()));
    }
    let checkpoints = improvement_checkpoints(horizon);
    let regrets = replicate_seeds(seed, replicates)
        .into_par_iter()
        .map(|s| {
            let traj = run_online(policy, env, horizon, s)?;
            Ok(checkpoints.iter().map(|&t| traj.pseudo_regret[t - 1]).collect())
        })
        .collect::<Result<Vec<Vec<f64>>>>()?;
    Ok(improvement_from_regrets(&checkpoints, &regrets))
}

/// Same audit computed from stored online trajectories.
pub fn improvement_from_trajectories(
    trajectories: &[Trajectory],
    checkpoints: &[usize],
) -> ImprovementReport {
    let regrets: Vec<Vec<f64>> = trajectories
        .iter()
        .map(|t| checkpoints.iter().map(|&c| t.pseudo_regret[c - 1]).collect())
        .collect();
    improvement_from_regrets(checkpoints, &regrets)
}

/// `regrets[replicate][k]` is the cumulative regret at `checkpoints[k]`.
pub fn improvement_from_regrets(checkpoints: &[usize], regrets: &[Vec<f64>]) -> ImprovementReport {
    let rate = |r: usize, k: usize| regrets[r][k] / checkpoints[k] as f64;
    let rates = (0..checkpoints.len())
        .map(|k| {
            let v: Vec<f64> = (0..regrets.len()).map(|r| rate(r, k)).collect();
            Summary::from_samples(&v)
        })
        .collect();
    let mut pairs = 0;
    let mut violations = Vec::new();
    for k2 in 1..checkpoints.len() {
        for k1 in 0..k2 {
            pairs += 1;
            let diffs: Vec<f64> = (0..regrets.len()).map(|r| rate(r, k1) - rate(r, k2)).collect();
            let (_, verdict) = Verdict::strict(&diffs);
            if verdict != Verdict::Holds {
                violations.push((checkpoints[k1], checkpoints[k2]));
            }
        }
    }
    let conforming_fraction = if pairs == 0 {
        1.0
    } else {
        (pairs - violations.len()) as f64 / pairs as f64
    };
    ImprovementReport {
        replicates: regrets.len(),
        checkpoints: checkpoints.to_vec(),
        rates,
        pairs,
        violations,
        conforming_fraction,
    }
}

/// Variances of the best arms at one batch boundary, per mode.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VarianceBoundary {
    /// 0-based batch whose rewards have just been absorbed.
    pub batch: usize,
    /// One entry per best arm, in the order of [`VarianceReport::best_arms`].
    pub online: Vec<f64>,
    pub batched: Vec<f64>,
    pub short: Vec<f64>,
    /// Ordering holds on the lowest-index best arm.
    pub holds_lowest: bool,
    /// Ordering holds on every best arm.
    pub holds_all: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VarianceReport {
    pub replicates: usize,
    pub batch_size: usize,
    pub best_arms: Vec<usize>,
    pub boundaries: Vec<VarianceBoundary>,
    pub fraction_lowest: f64,
    pub fraction_all: f64,
    /// Variances are the frequentist proxy, not posterior variances.
    pub proxy: bool,
}

/// Audit of `σ²(π) ≤ σ²(π^b) ≤ σ²(π′)` on the best arms at every batch boundary.
pub fn check_variance_contraction(
    policy: &PolicyState,
    env: &Environment,
    grid: &BatchGrid,
    replicates: usize,
    seed: u64,
) -> Result<VarianceReport> {
    if replicates < 1 {
        return Err(Error::InvalidAnalysis("need at least 1 replicate".into()));
    }
    let best = env.best_arms();
    let m = grid.num_batches();
    // per replicate: [mode][batch][best arm]
    let samples = replicate_seeds(seed, replicates)
        .into_par_iter()
        .map(|s| {
            Mode::ALL
                .iter()
                .map(|&mode| {
                    let mut per_batch = Vec::with_capacity(m);
                    run_observed(mode, policy, env, grid, s, |_, state| {
                        let v = state.posterior_variance();
                        per_batch.push(best.iter().map(|&a| v.get(a)).collect::<Vec<f64>>());
                    })?;
                    Ok(per_batch)
                })
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Vec<_>>>()?;

    let column = |mode: usize, j: usize, k: usize| -> Vec<f64> {
        samples.iter().map(|rep| rep[mode][j][k]).collect()
    };
    let not_greater = |lower: &[f64], upper: &[f64]| {
        let diffs: Vec<f64> = upper.iter().zip(lower).map(|(u, l)| u - l).collect();
        !Verdict::non_strict(&diffs).1.is_violated()
    };
    let mut boundaries = Vec::with_capacity(m);
    for j in 0..m {
        let mut b = VarianceBoundary {
            batch: j,
            online: Vec::new(),
            batched: Vec::new(),
            short: Vec::new(),
            holds_lowest: true,
            holds_all: true,
        };
        for k in 0..best.len() {
            let (on, ba, sh) = (column(0, j, k), column(1, j, k), column(2, j, k));
            b.online.push(Summary::from_samples(&on).mean);
            b.batched.push(Summary::from_samples(&ba).mean);
            b.short.push(Summary::from_samples(&sh).mean);
            let holds = not_greater(&on, &ba) && not_greater(&ba, &sh);
            if k == 0 {
                b.holds_lowest = holds;
            }
            b.holds_all &= holds;
        }
        boundaries.push(b);
    }
    let frac = |f: fn(&VarianceBoundary) -> bool| {
        boundaries.iter().filter(|b| f(b)).count() as f64 / m as f64
    };
    Ok(VarianceReport {
        replicates,
        batch_size: grid.batch_size(),
        fraction_lowest: frac(|b| b.holds_lowest),
        fraction_all: frac(|b| b.holds_all),
        best_arms: best,
        boundaries,
        proxy: !policy.has_bayesian_variance(),
    })
}

/// Cumulative received-reward counts of the best arm through one batch.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PullCountBoundary {
    pub batch: usize,
    pub online: Summary,
    pub batched: Summary,
    pub short: Summary,
    /// `E[T(π)] > E[T(π^b)]`.
    pub left: Verdict,
    /// `E[T(π^b)] ≥ E[T(π′)]`.
    pub right: Verdict,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PullCountReport {
    pub replicates: usize,
    pub batch_size: usize,
    pub best_arm: usize,
    pub boundaries: Vec<PullCountBoundary>,
    /// Fraction of boundaries where neither inequality is violated.
    pub conforming_fraction: f64,
    /// Total rewards received by the short policy in every replicate (equals `M`).
    pub short_received: Vec<u64>,
}

/// Per-batch received counts of one run: `counts[batch][arm]`.
pub type ReceivedCounts = Vec<Vec<u32>>;

pub fn pull_count_ordering(
    online: &[Trajectory],
    batched: &[Trajectory],
    short: &[Trajectory],
    env: &Environment,
) -> Result<PullCountReport> {
    let check = |ts: &[Trajectory], mode: Mode| -> Result<()> {
        match ts.iter().find(|t| t.mode != mode) {
            Some(t) => Err(Error::InvalidAnalysis(format!(
                "expected {mode} trajectories, found {}",
                t.mode
            ))),
            None => Ok(()),
        }
    };
    check(online, Mode::Online)?;
    check(batched, Mode::Batched)?;
    check(short, Mode::Short)?;
    let grids: Vec<BatchGrid> = batched.iter().chain(short).map(|t| t.grid).collect();
    let grid = *grids
        .first()
        .ok_or_else(|| Error::InvalidAnalysis("no trajectories".into()))?;
    if grids.iter().any(|g| *g != grid) || online.iter().any(|t| t.len() != grid.horizon()) {
        return Err(Error::InvalidAnalysis("runs differ in horizon or batch size".into()));
    }
    let k = env.num_arms();
    let counts = |ts: &[Trajectory], per_batch: bool| -> Vec<ReceivedCounts> {
        ts.iter()
            .map(|t| {
                if per_batch {
                    t.received_counts(k)
                } else {
                    // online runs are recorded on a b = 1 grid; regroup them
                    Trajectory {
                        grid,
                        ..t.clone()
                    }
                    .received_counts(k)
                }
            })
            .collect()
    };
    pull_count_ordering_from_counts(
        &counts(online, false),
        &counts(batched, true),
        &counts(short, true),
        env,
        grid.batch_size(),
    )
}

pub fn pull_count_ordering_from_counts(
    online: &[ReceivedCounts],
    batched: &[ReceivedCounts],
    short: &[ReceivedCounts],
    env: &Environment,
    batch_size: usize,
) -> Result<PullCountReport> {
    let reps = online.len();
    if reps == 0 || batched.len() != reps || short.len() != reps {
        return Err(Error::InvalidAnalysis(
            "need the same positive number of runs per mode".into(),
        ));
    }
    let m = online[0].len();
    if [online, batched, short]
        .iter()
        .any(|set| set.iter().any(|c| c.len() != m))
    {
        return Err(Error::InvalidAnalysis("runs differ in batch count".into()));
    }
    let best = env.best_arm();
    let cumulative = |set: &[ReceivedCounts]| -> Vec<Vec<f64>> {
        set.iter()
            .map(|c| {
                let mut acc = 0.0;
                c.iter()
                    .map(|batch| {
                        acc += batch[best] as f64;
                        acc
                    })
                    .collect()
            })
            .collect()
    };
    let (on, ba, sh) = (cumulative(online), cumulative(batched), cumulative(short));
    let col = |set: &[Vec<f64>], j: usize| -> Vec<f64> { set.iter().map(|r| r[j]).collect() };
    let diff = |a: &[f64], b: &[f64]| -> Vec<f64> { a.iter().zip(b).map(|(x, y)| x - y).collect() };
    let boundaries: Vec<PullCountBoundary> = (0..m)
        .map(|j| {
            let (o, b, s) = (col(&on, j), col(&ba, j), col(&sh, j));
            PullCountBoundary {
                batch: j,
                online: Summary::from_samples(&o),
                batched: Summary::from_samples(&b),
                short: Summary::from_samples(&s),
                left: Verdict::strict(&diff(&o, &b)).1,
                right: Verdict::non_strict(&diff(&b, &s)).1,
            }
        })
        .collect();
    let conforming = boundaries
        .iter()
        .filter(|b| !b.left.is_violated() && !b.right.is_violated())
        .count();
    Ok(PullCountReport {
        replicates: reps,
        batch_size,
        best_arm: best,
        conforming_fraction: conforming as f64 / m as f64,
        short_received: short
            .iter()
            .map(|c| c.iter().flatten().map(|&x| x as u64).sum())
            .collect(),
        boundaries,
    })
}

/// Run matched online/batched/short replicates and audit received counts.
pub fn audit_pull_counts(
    policy: &PolicyState,
    env: &Environment,
    grid: &BatchGrid,
    replicates: usize,
    seed: u64,
) -> Result<PullCountReport> {
    let k = env.num_arms();
    let runs = replicate_seeds(seed, replicates)
        .into_par_iter()
        .map(|s| {
            Mode::ALL
                .iter()
                .map(|&mode| Ok(run_mode(mode, policy, env, grid, s)?.received_counts(k)))
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    let pick = |i: usize| -> Vec<ReceivedCounts> { runs.iter().map(|r| r[i].clone()).collect() };
    pull_count_ordering_from_counts(&pick(0), &pick(1), &pick(2), env, grid.batch_size())
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct BoundOptions {
    /// Also estimate `b·R_M(π)` as the summed regret of `b` independent
    /// online agents over horizon `M`.
    pub independent_agents: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct InequalityCheck {
    /// Paired difference `larger side − smaller side`.
    pub difference: Summary,
    pub verdict: Verdict,
}

/// Replicate estimates of `R_n(π)`, `R_n(π^b)` and `b·R_M(π)` with verdicts.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BoundReport {
    pub env: String,
    pub policy: String,
    pub horizon: usize,
    pub batch_size: usize,
    pub batches: usize,
    pub replicates: usize,
    pub online: Summary,
    pub batched: Summary,
    /// Regret of the short policy over the full horizon, estimating `b·R_M(π)`.
    pub short: Summary,
    /// `R_n(π) < R_n(π^b)`.
    pub left: InequalityCheck,
    /// `R_n(π^b) ≤ b·R_M(π)`.
    pub right: InequalityCheck,
    /// `b·R_M(π) > R_n(π)`, implied by improvement over time.
    pub upper_exceeds_online: InequalityCheck,
    pub independent_agents: Option<Summary>,
}

impl BoundReport {
    pub fn any_violation(&self) -> bool {
        self.left.verdict.is_violated() || self.right.verdict.is_violated()
    }
}

pub fn verify_theorem(
    policy: &PolicyState,
    env: &Environment,
    horizon: usize,
    batch_size: usize,
    replicates: usize,
    seed: u64,
) -> Result<BoundReport> {
    if batch_size < 2 {
        return Err(Error::InvalidAnalysis(format!(
            "the sandwich bound is stated for b > 1, got b = {batch_size}"
        )));
    }
    let grid = BatchGrid::new(horizon, batch_size)?;
    verify_theorem_with(
        policy,
        env,
        &grid,
        &replicate_seeds(seed, replicates),
        BoundOptions::default(),
    )
}

/// Sandwich-bound verification on explicit replicate seeds.
pub fn verify_theorem_with(
    policy: &PolicyState,
    env: &Environment,
    grid: &BatchGrid,
    seeds: &[RunSeed],
    options: BoundOptions,
) -> Result<BoundReport> {
    if grid.batch_size() < 2 {
        return Err(Error::InvalidAnalysis(format!(
            "the sandwich bound is stated for b > 1, got b = {}",
            grid.batch_size()
        )));
    }
    if seeds.len() < 2 {
        return Err(Error::InvalidAnalysis(format!(
            "need at least 2 replicates for a confidence interval, got {}",
            seeds.len()
        )));
    }
    let b = grid.batch_size();
    let m = grid.num_batches();
    let per_rep = seeds
        .par_iter()
        .map(|&s| {
            let online = run_mode(Mode::Online, policy, env, grid, s)?.final_regret();
            let batched = run_mode(Mode::Batched, policy, env, grid, s)?.final_regret();
            let short = run_mode(Mode::Short, policy, env, grid, s)?.final_regret();
            let agents = if options.independent_agents {
                let mut total = 0.0;
                for i in 0..b as u64 {
                    let agent = RunSeed(derive_seed(s.0, &[u64::MAX, i]));
                    total += run_online(policy, env, m, agent)?.final_regret();
                }
                Some(total)
            } else {
                None
            };
            Ok((online, batched, short, agents))
        })
        .collect::<Result<Vec<_>>>()?;

    let online: Vec<f64> = per_rep.iter().map(|r| r.0).collect();
    let batched: Vec<f64> = per_rep.iter().map(|r| r.1).collect();
    let short: Vec<f64> = per_rep.iter().map(|r| r.2).collect();
    let check = |upper: &[f64], lower: &[f64], strict: bool| {
        let diffs: Vec<f64> = upper.iter().zip(lower).map(|(u, l)| u - l).collect();
        let (difference, verdict) = if strict {
            Verdict::strict(&diffs)
        } else {
            Verdict::non_strict(&diffs)
        };
        InequalityCheck {
            difference,
            verdict,
        }
    };
    let independent_agents = options.independent_agents.then(|| {
        let v: Vec<f64> = per_rep.iter().filter_map(|r| r.3).collect();
        Summary::from_samples(&v)
    });
    Ok(BoundReport {
        env: env.name().to_string(),
        policy: policy.kind().to_string(),
        horizon: grid.horizon(),
        batch_size: b,
        batches: m,
        replicates: seeds.len(),
        online: Summary::from_samples(&online),
        batched: Summary::from_samples(&batched),
        short: Summary::from_samples(&short),
        left: check(&batched, &online, true),
        right: check(&short, &batched, false),
        upper_exceeds_online: check(&short, &online, true),
        independent_agents,
    })
}

impl fmt::Display for BoundReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let est = |s: &Summary| format!("{:10.3}  [{:.3}, {:.3}]", s.mean, s.ci_lo, s.ci_hi);
        writeln!(
            f,
            "sandwich bound  env={}  policy={}  n={}  b={}  M={}  replicates={}",
            self.env, self.policy, self.horizon, self.batch_size, self.batches, self.replicates
        )?;
        writeln!(f, "  R_n(online)       {}", est(&self.online))?;
        writeln!(f, "  R_n(batched)      {}", est(&self.batched))?;
        writeln!(f, "  b*R_M (short)     {}", est(&self.short))?;
        if let Some(agents) = &self.independent_agents {
            writeln!(f, "  b*R_M (b agents)  {}", est(agents))?;
        }
        let line = |name: &str, c: &InequalityCheck| {
            format!(
                "  {name:<26} {:<16} slack {:.3} ± {:.3}",
                c.verdict.as_str(),
                c.difference.mean,
                c.difference.std_err
            )
        };
        writeln!(f, "{}", line("R_n(online) < R_n(batched)", &self.left))?;
        writeln!(f, "{}", line("R_n(batched) <= b*R_M", &self.right))?;
        write!(f, "{}", line("b*R_M > R_n(online)", &self.upper_exceeds_online))
    }
}
