//! Policies: decision rules, updates and variance estimates.

use batched_bandits::{policy_init, Environment, PolicySpec, RunSeed};

fn main() -> batched_bandits::Result<()> {
    let env = Environment::preset("env4")?;
    let mut env_rng = RunSeed(3).env_rng();
    let mut rng = RunSeed(3).policy_rng();

    for spec in ["ts", "ucb1", "egreedy:epsilon=0.2", "uniform", "fixed:arm=2"] {
        let spec: PolicySpec = spec.parse()?;
        let mut state = policy_init(&spec, env.num_arms())?;
        for _ in 0..200 {
            let rule = state.decide(None, &mut rng)?;
            let arm = rule.sample(&mut rng);
            let reward = env.sample_reward(arm, &mut env_rng)?;
            state.update(arm, reward, None)?;
        }
        let rule = state.decide(None, &mut rng)?;
        println!("{:<22} counts {:?}", spec.label(), state.counts());
        println!("{:<22} rule   {:.3?}", "", rule.probs());
        println!("{:<22} var    {:.5?}", "", state.posterior_variance().values());
    }

    let campaign = Environment::preset("campaign")?;
    let spec = PolicySpec::new(batched_bandits::PolicyKind::Linucb).with_dim(4);
    let mut lin = policy_init(&spec, campaign.num_arms())?;
    for _ in 0..500 {
        let x = campaign.draw_context(&mut env_rng).unwrap();
        let arm = lin.decide(Some(&x), &mut rng)?.sample(&mut rng);
        let r = campaign.sample_reward_in_context(arm, Some(&x), &mut env_rng)?;
        lin.update(arm, r, Some(&x))?;
    }
    let ridge = lin.ridge().unwrap();
    for a in 0..campaign.num_arms() {
        println!("linucb arm {a} estimate {:.3?}", ridge.estimate(a)?.as_slice());
    }
    Ok(())
}
