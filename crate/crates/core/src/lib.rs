pub mod analysis;
pub mod cli;
pub mod environment;
pub mod error;
pub mod experiment;
pub mod grid;
pub mod policy;
pub mod replay;
pub mod rule;
pub mod runner;
pub mod stats;
pub mod sweep;

pub use environment::{make_environment, EnvSpec, Environment};
pub use error::{Error, Result};
pub use grid::{BatchGrid, History, Interaction};
pub use policy::{policy_init, PolicyKind, PolicySpec, PolicyState, VarianceVector};
pub use rule::{compare_rules, expected_reward, DecisionRule, RuleOrdering};
pub use runner::{run_batched, run_online, run_short, Mode, RunSeed, Trajectory};
