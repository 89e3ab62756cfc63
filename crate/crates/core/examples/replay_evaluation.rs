//! Offline evaluation of contextual policies on a synthetic uniformly logged file.

use batched_bandits::experiment::{replay_rows, ReplayPlan};
use batched_bandits::replay::{generate_synthetic_log, load_log, replay_evaluate, write_log};
use batched_bandits::{policy_init, Environment, PolicySpec};

fn main() -> batched_bandits::Result<()> {
    let env = Environment::preset("campaign")?;
    let dir = std::env::temp_dir().join("batched-bandits-replay");
    let path = dir.join("log.csv");
    std::fs::create_dir_all(&dir).map_err(|e| batched_bandits::Error::io(&dir, e))?;
    write_log(&path, &generate_synthetic_log(&env, 50_000, 9)?)?;
    let log = load_log(&path, env.num_arms())?;
    println!("{} events from {}", log.len(), path.display());

    for a in 0..env.num_arms() {
        let fixed = policy_init(&PolicySpec::fixed(a), env.num_arms())?;
        let res = replay_evaluate(&fixed, &log, 1, 0)?;
        println!(
            "always arm {a}: CR {:.4} (true mean {:.4}), acceptance {:.3}",
            res.conversion_rate.unwrap(),
            env.means()[a],
            res.acceptance_rate()
        );
    }

    let plan = ReplayPlan {
        log: None,
        arms: None,
        policies: vec!["lints".parse()?, "linucb".parse()?, "ts".parse()?],
        batch_sizes: vec![1, 10, 100, 1000],
        replicates: 3,
        baseline: Some("ts".into()),
    };
    for row in replay_rows(&plan, &log, env.num_arms(), 1)? {
        println!(
            "{:<8} b = {:<5} CR {:.4}  relative to ts {:.3}",
            row.policy,
            row.batch_size,
            row.conversion.mean,
            row.relative.unwrap()
        );
    }
    Ok(())
}
