//! Regret against batch size on every preset, in the style of a batch-size sweep.
//!
//! `cargo run --release --example batch_sweep -- 200` sets the replicate count.

use batched_bandits::experiment::instantiate;
use batched_bandits::stats::{coefficient_of_variation, spearman};
use batched_bandits::sweep::{run_sweep, SweepConfig};
use batched_bandits::{Environment, Mode, PolicySpec};

fn main() -> batched_bandits::Result<()> {
    let replicates: usize = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(100);
    let sizes = vec![1, 2, 4, 8, 16, 32, 64, 128, 256];
    let xs: Vec<f64> = sizes.iter().map(|&b| b as f64).collect();

    for name in ["env1", "env2", "env3", "env4", "env5", "env6"] {
        let env = Environment::preset(name)?;
        for policy in ["ts", "ucb1"] {
            let spec: PolicySpec = policy.parse()?;
            let result = run_sweep(&SweepConfig {
                policy: instantiate(&spec, &env)?,
                env: env.clone(),
                horizon: 5000,
                batch_sizes: sizes.clone(),
                replicates,
                master_seed: 2024,
                modes: vec![Mode::Batched],
            })?;
            let means: Vec<f64> = result.summaries.iter().map(|s| s.regret.mean).collect();
            println!(
                "{name} {policy:<5} regret {:>7.1?}  rho {:.2}  cv {:.3}  inflation {:.2}",
                means,
                spearman(&xs, &means),
                coefficient_of_variation(&means),
                means[means.len() - 1] / means[0]
            );
        }
    }
    Ok(())
}
