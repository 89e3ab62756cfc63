//! Seed-parallel batch-size sweeps.
//!
//! Each `(batch size, replicate, mode)` run gets its own seed derived from the
//! master seed, runs as an independent task, and is reduced to a
//! [`RunRecord`] plus its contribution to the per-timestep regret trace.
//! Replicates are grouped into fixed-size chunks that are summed sequentially
//! and merged in chunk order, so results do not depend on scheduling.

use rayon::prelude::*;
use serde::Serialize;

use crate::analysis::{RegretTrace, TraceAccumulator};
use crate::environment::Environment;
use crate::error::{Error, Result};
use crate::grid::BatchGrid;
use crate::policy::PolicyState;
use crate::runner::{derive_seed, run_mode, Mode, RunSeed};
use crate::stats::Summary;

const CHUNK: usize = 16;

#[derive(Debug, Clone)]
pub struct SweepConfig {
    pub env: Environment,
    pub policy: PolicyState,
    pub horizon: usize,
    pub batch_sizes: Vec<usize>,
    pub replicates: usize,
    pub master_seed: u64,
    pub modes: Vec<Mode>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunRecord {
    pub mode: Mode,
    pub batch_size: usize,
    pub replicate: usize,
    pub seed: u64,
    pub horizon: usize,
    pub final_regret: f64,
    pub total_reward: f64,
}

/// Final-regret summary of one `(mode, batch size)` cell.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CellSummary {
    pub mode: Mode,
    pub batch_size: usize,
    pub horizon: usize,
    pub regret: Summary,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepResult {
    /// Ordered by batch size (config order), then mode (config order), then replicate.
    pub records: Vec<RunRecord>,
    pub traces: Vec<RegretTrace>,
    pub summaries: Vec<CellSummary>,
}

impl SweepResult {
    pub fn summary(&self, mode: Mode, batch_size: usize) -> Option<&CellSummary> {
        self.summaries
            .iter()
            .find(|s| s.mode == mode && s.batch_size == batch_size)
    }
}

/// Seed of run `(batch index, replicate, mode)` under `master`.
pub fn sweep_seed(master: u64, batch_index: usize, replicate: usize, mode: Mode) -> RunSeed {
    RunSeed(derive_seed(
        master,
        &[batch_index as u64, replicate as u64, mode.index()],
    ))
}

impl SweepConfig {
    pub fn validate(&self) -> Result<()> {
        let mut problems = Vec::new();
        if self.replicates == 0 {
            problems.push("replicates must be at least 1".to_string());
        }
        if self.batch_sizes.is_empty() {
            problems.push("batch_sizes must not be empty".to_string());
        }
        for &b in &self.batch_sizes {
            if b == 0 || b > self.horizon {
                problems.push(format!(
                    "batch size {b} must lie in 1..={} (the horizon)",
                    self.horizon
                ));
            }
        }
        if self.modes.is_empty() {
            problems.push("modes must not be empty".to_string());
        }
        if self.policy.num_arms() != self.env.num_arms() {
            problems.push(format!(
                "policy has {} arms but the environment has {}",
                self.policy.num_arms(),
                self.env.num_arms()
            ));
        }
        if problems.is_empty() {
            Ok(())
        } else {
            Err(Error::Config(problems))
        }
    }
}

pub fn run_sweep(config: &SweepConfig) -> Result<SweepResult> {
    config.validate()?;
    let mut records = Vec::new();
    let mut traces = Vec::new();
    let mut summaries = Vec::new();
    for (bi, &b) in config.batch_sizes.iter().enumerate() {
        let grid = BatchGrid::new(config.horizon, b)?;
        for &mode in &config.modes {
            let chunks: Vec<(usize, usize)> = (0..config.replicates)
                .step_by(CHUNK)
                .map(|start| (start, (start + CHUNK).min(config.replicates)))
                .collect();
            let partials = chunks
                .into_par_iter()
                .map(|(start, end)| {
                    let mut acc = TraceAccumulator::new(grid.horizon());
                    let mut recs = Vec::with_capacity(end - start);
                    for r in start..end {
                        let seed = sweep_seed(config.master_seed, bi, r, mode);
                        let traj = run_mode(mode, &config.policy, &config.env, &grid, seed)?;
                        acc.add(&traj.pseudo_regret);
                        recs.push(RunRecord {
                            mode,
                            batch_size: b,
                            replicate: r,
                            seed: seed.0,
                            horizon: grid.horizon(),
                            final_regret: traj.final_regret(),
                            total_reward: traj.total_reward(),
                        });
                    }
                    Ok((acc, recs))
                })
                .collect::<Result<Vec<_>>>()?;
            let mut acc = TraceAccumulator::new(grid.horizon());
            let mut cell = Vec::with_capacity(config.replicates);
            for (part, recs) in partials {
                acc.merge(&part);
                cell.extend(recs);
            }
            let finals: Vec<f64> = cell.iter().map(|r| r.final_regret).collect();
            summaries.push(CellSummary {
                mode,
                batch_size: b,
                horizon: grid.horizon(),
                regret: Summary::from_samples(&finals),
            });
            traces.push(acc.finish(mode, b));
            records.extend(cell);
        }
    }
    Ok(SweepResult {
        records,
        traces,
        summaries,
    })
}
