//! Average decision rules and the orderings they inherit from an improving sequence.

use batched_bandits::analysis::{average_decision_rule, check_lemma};
use batched_bandits::{expected_reward, DecisionRule, Environment};

fn main() -> batched_bandits::Result<()> {
    let env = Environment::preset("env4")?;
    let best = env.best_arm();
    // each rule moves weight towards the best arm, so every step improves
    let rules: Vec<DecisionRule> = (0..12)
        .map(|t| {
            let w = t as f64 / 12.0;
            let mut p = vec![(1.0 - w) / 4.0; 4];
            p[best] += w;
            DecisionRule::new(p)
        })
        .collect::<Result<_, _>>()?;
    for t in [1, 4, 12] {
        let avg = average_decision_rule(&rules[..t])?;
        println!(
            "t = {t:>2}: rule value {:.4}, average value {:.4}",
            expected_reward(&rules[t - 1], &env)?,
            expected_reward(&avg, &env)?
        );
    }
    let report = check_lemma(&rules, &env)?;
    println!("{report:?}\nholds: {}", report.holds());

    let mut shuffled = rules.clone();
    shuffled.reverse();
    let report = check_lemma(&shuffled, &env)?;
    println!("reversed sequence holds: {}", report.holds());
    Ok(())
}
