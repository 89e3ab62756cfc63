use std::cmp::Ordering;

use rand::Rng;

use crate::environment::Environment;
use crate::error::{Error, Result};

/// Absolute tolerance on the simplex sum and on strict expected-reward comparisons.
pub const SIMPLEX_TOLERANCE: f64 = 1e-12;

/// A probability distribution over arms.
#[derive(Debug, Clone, PartialEq)]
pub struct DecisionRule {
    probs: Vec<f64>,
}

impl DecisionRule {
    pub fn new(probs: Vec<f64>) -> Result<Self> {
        if probs.is_empty() {
            return Err(Error::InvalidRule("empty probability vector".into()));
        }
        if let Some(p) = probs.iter().find(|p| !p.is_finite() || **p < 0.0) {
            return Err(Error::InvalidRule(format!("entry {p} is not a probability")));
        }
        let sum: f64 = probs.iter().sum();
        if (sum - 1.0).abs() > SIMPLEX_TOLERANCE {
            return Err(Error::InvalidRule(format!("entries sum to {sum}, not 1")));
        }
        Ok(Self { probs })
    }

    pub fn point_mass(arms: usize, arm: usize) -> Self {
        assert!(arm < arms, "arm {arm} out of range for {arms} arms");
        let mut probs = vec![0.0; arms];
        probs[arm] = 1.0;
        Self { probs }
    }

    pub fn uniform(arms: usize) -> Self {
        assert!(arms > 0);
        Self {
            probs: vec![1.0 / arms as f64; arms],
        }
    }

    /// `weight · uniform + (1 − weight) · point_mass(arm)`.
    pub fn mix_uniform(arms: usize, arm: usize, weight: f64) -> Self {
        let mut probs = vec![weight / arms as f64; arms];
        probs[arm] += 1.0 - weight;
        Self { probs }
    }

    pub(crate) fn from_raw(probs: Vec<f64>) -> Self {
        Self { probs }
    }

    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    pub fn num_arms(&self) -> usize {
        self.probs.len()
    }

    pub fn prob(&self, arm: usize) -> f64 {
        self.probs[arm]
    }

    /// The arm carrying all mass, if this is a deterministic rule.
    pub fn as_point_mass(&self) -> Option<usize> {
        self.probs.iter().position(|&p| p == 1.0)
    }

    pub fn is_valid(&self) -> bool {
        self.probs.iter().all(|p| p.is_finite() && *p >= 0.0)
            && (self.probs.iter().sum::<f64>() - 1.0).abs() <= SIMPLEX_TOLERANCE
    }

    /// Draw an arm. Point masses consume no randomness.
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> usize {
        if let Some(arm) = self.as_point_mass() {
            return arm;
        }
        let u: f64 = rng.random();
        let mut acc = 0.0;
        for (arm, p) in self.probs.iter().enumerate() {
            acc += p;
            if u < acc {
                return arm;
            }
        }
        // u landed in the rounding slack above the last cumulative sum
        self.probs.iter().rposition(|&p| p > 0.0).unwrap_or(0)
    }
}

/// `Σ_a μ_a · rule(a)`.
pub fn expected_reward(rule: &DecisionRule, env: &Environment) -> Result<f64> {
    if rule.num_arms() != env.num_arms() {
        return Err(Error::DimensionMismatch {
            expected: env.num_arms(),
            actual: rule.num_arms(),
        });
    }
    Ok(rule
        .probs
        .iter()
        .zip(env.means())
        .map(|(p, m)| p * m)
        .sum())
}

/// Outcome of comparing two decision rules by expected reward.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RuleOrdering {
    Better,
    /// Not worse and not better: expected rewards agree within tolerance.
    Equivalent,
    Worse,
}

impl RuleOrdering {
    pub fn is_better(self) -> bool {
        self == RuleOrdering::Better
    }

    pub fn is_not_worse(self) -> bool {
        self != RuleOrdering::Worse
    }
}

impl From<RuleOrdering> for Ordering {
    fn from(o: RuleOrdering) -> Self {
        match o {
            RuleOrdering::Better => Ordering::Greater,
            RuleOrdering::Equivalent => Ordering::Equal,
            RuleOrdering::Worse => Ordering::Less,
        }
    }
}

pub fn compare_rules(
    first: &DecisionRule,
    second: &DecisionRule,
    env: &Environment,
) -> Result<RuleOrdering> {
    let a = expected_reward(first, env)?;
    let b = expected_reward(second, env)?;
    Ok(compare_values(a, b))
}

pub(crate) fn compare_values(a: f64, b: f64) -> RuleOrdering {
    if a - b > SIMPLEX_TOLERANCE {
        RuleOrdering::Better
    } else if b - a > SIMPLEX_TOLERANCE {
        RuleOrdering::Worse
    } else {
        RuleOrdering::Equivalent
    }
}
