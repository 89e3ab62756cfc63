//! Diagnostics for the policy-side assumptions: improvement over time,
//! variance ordering across modes, and best-arm pull counts.

use batched_bandits::analysis::{audit_pull_counts, check_improvement, check_variance_contraction};
use batched_bandits::experiment::instantiate;
use batched_bandits::{BatchGrid, Environment, PolicySpec};

fn main() -> batched_bandits::Result<()> {
    let env = Environment::preset("env1")?;
    for policy in ["ts", "ucb1", "egreedy"] {
        let state = instantiate(&policy.parse::<PolicySpec>()?, &env)?;
        let improvement = check_improvement(&state, &env, 2000, 200, 1)?;
        let grid = BatchGrid::new(1024, 16)?;
        let variance = check_variance_contraction(&state, &env, &grid, 200, 2)?;
        let pulls = audit_pull_counts(&state, &env, &grid, 200, 3)?;
        println!("{policy}");
        println!(
            "  improvement: {:.2} of {} checkpoint pairs decrease significantly",
            improvement.conforming_fraction, improvement.pairs
        );
        println!(
            "  variance ordering on best arm: {:.2} of boundaries{}",
            variance.fraction_lowest,
            if variance.proxy { " (frequentist proxy)" } else { "" }
        );
        println!(
            "  pull-count ordering: {:.2} of boundaries; short run receives {} rewards",
            pulls.conforming_fraction, pulls.short_received[0]
        );
        let last = pulls.boundaries.last().unwrap();
        println!(
            "  best-arm rewards received by the end: online {:.1}, batched {:.1}, short {:.1}",
            last.online.mean, last.batched.mean, last.short.mean
        );
    }
    Ok(())
}
