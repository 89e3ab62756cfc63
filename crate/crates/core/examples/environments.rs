//! Building environments: presets, inline specs and the contextual campaign model.

use batched_bandits::{make_environment, Environment, RunSeed};
use rand::Rng;

fn main() -> batched_bandits::Result<()> {
    for name in ["env1", "env2", "env3", "env4", "env5", "env6"] {
        let env = Environment::preset(name)?;
        println!(
            "{name}: means {:?}, best arm {}, gaps {:?}",
            env.means(),
            env.best_arm(),
            env.gaps()
        );
    }

    let gauss = make_environment("gaussian:0.5:1.0,1.5,0.2")?;
    let mut rng = RunSeed(1).env_rng();
    let draws: Vec<f64> = (0..5).map(|_| gauss.sample_reward(1, &mut rng).unwrap()).collect();
    println!("\n{}: five draws from arm 1 {draws:.3?}", gauss.name());

    let campaign = make_environment("campaign")?;
    let x = campaign.draw_context(&mut rng).unwrap();
    println!("\ncampaign: K = {}, d = {:?}", campaign.num_arms(), campaign.context_dim());
    println!("context {x:.3?}");
    for a in 0..campaign.num_arms() {
        println!(
            "  arm {a}: mean in context {:.3}, marginal mean {:.3}",
            campaign.mean_in_context(a, Some(&x))?,
            campaign.means()[a]
        );
    }
    let coin: f64 = rng.random();
    println!("a uniform draw from the same stream: {coin:.4}");
    Ok(())
}
