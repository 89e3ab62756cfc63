//! Online regret below batched regret below the short-policy benchmark.

use batched_bandits::analysis::{verify_theorem_with, replicate_seeds, BoundOptions};
use batched_bandits::experiment::instantiate;
use batched_bandits::{BatchGrid, Environment, PolicySpec};

fn main() -> batched_bandits::Result<()> {
    let env = Environment::preset("env2")?;
    let seeds = replicate_seeds(5, 200);
    for policy in ["ts", "ucb1"] {
        let state = instantiate(&policy.parse::<PolicySpec>()?, &env)?;
        for b in [4, 16, 64] {
            let grid = BatchGrid::new(2048, b)?;
            let opts = BoundOptions {
                independent_agents: b == 16,
            };
            let report = verify_theorem_with(&state, &env, &grid, &seeds, opts)?;
            println!("{report}\n");
        }
    }
    Ok(())
}
