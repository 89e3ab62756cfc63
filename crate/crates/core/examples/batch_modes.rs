//! The three execution modes on one seed: online, batched and short.

use batched_bandits::runner::run_mode;
use batched_bandits::{policy_init, BatchGrid, Environment, Mode, PolicySpec, RunSeed};

fn main() -> batched_bandits::Result<()> {
    let env = Environment::preset("env3")?;
    let policy = policy_init(&"ts".parse::<PolicySpec>()?, 2)?;
    let seed = RunSeed(11);

    for b in [1, 8] {
        let grid = BatchGrid::new(64, b)?;
        println!("b = {b}, M = {}", grid.num_batches());
        for mode in Mode::ALL {
            let traj = run_mode(mode, &policy, &env, &grid, seed)?;
            let actions: String = traj.actions.iter().map(|a| char::from(b'0' + *a as u8)).collect();
            println!("  {mode:<8} {actions}  regret {:.2}", traj.final_regret());
        }
    }

    // a deterministic policy keeps one rule per batch; TS redraws from the frozen posterior
    let ucb = policy_init(&"ucb1".parse::<PolicySpec>()?, 2)?;
    let grid = BatchGrid::new(40, 10)?;
    let traj = run_mode(Mode::Batched, &ucb, &env, &grid, seed)?;
    for j in 0..grid.num_batches() {
        let r = grid.batch(j);
        let first = &traj.rules[r.start];
        assert!(traj.rules[r.clone()].iter().all(|x| x == first));
        println!("ucb1 batch {j}: rule {:.3?}", first.probs());
    }
    Ok(())
}
