//! Candidate policies behind one decision-rule interface.
//!
//! Every policy keeps per-arm pull counts and reward sums; the kind-specific
//! statistics (Beta posteriors, ridge design matrices) live in [`Model`].
//! A [`PolicyState`] is an owned value: cloning it forks an independent
//! learner, which is how the runners start the online, batched and short
//! variants from a common initial state.

use std::fmt;
use std::str::FromStr;

use nalgebra::{DMatrix, DVector};
use rand::Rng;
use rand_distr::{Beta, Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rule::DecisionRule;

/// Variance reported for arms a frequentist policy has never pulled.
pub const UNPULLED_VARIANCE: f64 = 1.0e6;

/// Pseudo sum of squares added to empirical variances (one observation at the
/// largest Bernoulli variance), keeping the proxy strictly positive.
pub const VARIANCE_PRIOR: f64 = 0.25;

pub const DEFAULT_LINUCB_ALPHA: f64 = 1.0;
pub const DEFAULT_RIDGE_LAMBDA: f64 = 1.0;
pub const DEFAULT_LINTS_SCALE: f64 = 1.0;
pub const DEFAULT_EPSILON: f64 = 0.1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PolicyKind {
    #[serde(alias = "thompson")]
    Ts,
    #[serde(alias = "ucb")]
    Ucb1,
    #[serde(alias = "epsilon-greedy")]
    Egreedy,
    Lints,
    Linucb,
    Uniform,
    Fixed,
}

impl PolicyKind {
    pub const ALL: [PolicyKind; 7] = [
        PolicyKind::Ts,
        PolicyKind::Ucb1,
        PolicyKind::Egreedy,
        PolicyKind::Lints,
        PolicyKind::Linucb,
        PolicyKind::Uniform,
        PolicyKind::Fixed,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            PolicyKind::Ts => "ts",
            PolicyKind::Ucb1 => "ucb1",
            PolicyKind::Egreedy => "egreedy",
            PolicyKind::Lints => "lints",
            PolicyKind::Linucb => "linucb",
            PolicyKind::Uniform => "uniform",
            PolicyKind::Fixed => "fixed",
        }
    }

    pub fn is_contextual(self) -> bool {
        matches!(self, PolicyKind::Lints | PolicyKind::Linucb)
    }

    /// Whether `decide` consumes randomness.
    pub fn is_randomized(self) -> bool {
        matches!(
            self,
            PolicyKind::Ts | PolicyKind::Lints | PolicyKind::Egreedy | PolicyKind::Uniform
        )
    }
}

impl fmt::Display for PolicyKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.pad(self.as_str())
    }
}

impl FromStr for PolicyKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "ts" | "thompson" => Ok(PolicyKind::Ts),
            "ucb1" | "ucb" => Ok(PolicyKind::Ucb1),
            "egreedy" | "epsilon-greedy" => Ok(PolicyKind::Egreedy),
            "lints" => Ok(PolicyKind::Lints),
            "linucb" => Ok(PolicyKind::Linucb),
            "uniform" => Ok(PolicyKind::Uniform),
            "fixed" => Ok(PolicyKind::Fixed),
            other => Err(Error::UnknownPolicy(other.to_string())),
        }
    }
}

/// Policy kind plus hyperparameters, as read from configuration.
///
/// Inline form: `kind[:key=value,...]`, e.g. `egreedy:epsilon=0.05` or
/// `linucb:alpha=0.5,lambda=2`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PolicySpec {
    pub kind: PolicyKind,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub epsilon: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub alpha: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lambda: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub scale: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub arm: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dim: Option<usize>,
}

impl PolicySpec {
    pub fn new(kind: PolicyKind) -> Self {
        Self {
            kind,
            name: None,
            epsilon: None,
            alpha: None,
            lambda: None,
            scale: None,
            arm: None,
            dim: None,
        }
    }

    pub fn fixed(arm: usize) -> Self {
        Self {
            arm: Some(arm),
            ..Self::new(PolicyKind::Fixed)
        }
    }

    pub fn epsilon_greedy(epsilon: f64) -> Self {
        Self {
            epsilon: Some(epsilon),
            ..Self::new(PolicyKind::Egreedy)
        }
    }

    pub fn with_dim(mut self, dim: usize) -> Self {
        self.dim = Some(dim);
        self
    }

    pub fn label(&self) -> String {
        if let Some(name) = &self.name {
            return name.clone();
        }
        match (self.kind, self.epsilon, self.arm) {
            (PolicyKind::Egreedy, Some(e), _) => format!("egreedy:epsilon={e}"),
            (PolicyKind::Fixed, _, Some(a)) => format!("fixed:arm={a}"),
            (kind, _, _) => kind.to_string(),
        }
    }
}

impl FromStr for PolicySpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let (kind, params) = match s.split_once(':') {
            Some((k, p)) => (k, Some(p)),
            None => (s, None),
        };
        let mut spec = PolicySpec::new(kind.parse()?);
        for pair in params.into_iter().flat_map(|p| p.split(',')) {
            let (key, value) = pair.split_once('=').ok_or_else(|| {
                Error::InvalidHyperparameter(format!("expected key=value, got `{pair}`"))
            })?;
            let bad = || Error::InvalidHyperparameter(format!("`{value}` is not valid for {key}"));
            let number = || value.trim().parse::<f64>().map_err(|_| bad());
            let count = || value.trim().parse::<usize>().map_err(|_| bad());
            match key.trim() {
                "epsilon" => spec.epsilon = Some(number()?),
                "alpha" => spec.alpha = Some(number()?),
                "lambda" => spec.lambda = Some(number()?),
                "scale" => spec.scale = Some(number()?),
                "arm" => spec.arm = Some(count()?),
                "dim" => spec.dim = Some(count()?),
                "name" => spec.name = Some(value.trim().to_string()),
                other => {
                    return Err(Error::InvalidHyperparameter(format!(
                        "unknown hyperparameter `{other}`"
                    )))
                }
            }
        }
        Ok(spec)
    }
}

/// Per-arm conditional variances of the estimated means.
#[derive(Debug, Clone, PartialEq)]
pub struct VarianceVector(pub Vec<f64>);

impl VarianceVector {
    pub fn values(&self) -> &[f64] {
        &self.0
    }

    pub fn get(&self, arm: usize) -> f64 {
        self.0[arm]
    }
}

/// Ridge-regularized per-arm linear model (disjoint LinUCB/LinTS).
#[derive(Debug, Clone, PartialEq)]
pub struct RidgeArms {
    design: Vec<DMatrix<f64>>,
    response: Vec<DVector<f64>>,
}

impl RidgeArms {
    fn new(arms: usize, dim: usize, lambda: f64) -> Self {
        Self {
            design: vec![DMatrix::identity(dim, dim) * lambda; arms],
            response: vec![DVector::zeros(dim); arms],
        }
    }

    pub fn dim(&self) -> usize {
        self.response[0].len()
    }

    pub fn design(&self, arm: usize) -> &DMatrix<f64> {
        &self.design[arm]
    }

    pub fn response(&self, arm: usize) -> &DVector<f64> {
        &self.response[arm]
    }

    fn cholesky(&self, arm: usize) -> Result<nalgebra::Cholesky<f64, nalgebra::Dyn>> {
        self.design[arm]
            .clone()
            .cholesky()
            .ok_or(Error::NonFinite)
    }

    /// Ridge estimate `A⁻¹ b`.
    pub fn estimate(&self, arm: usize) -> Result<DVector<f64>> {
        Ok(self.cholesky(arm)?.solve(&self.response[arm]))
    }

    fn update(&mut self, arm: usize, x: &[f64], reward: f64) {
        let x = DVector::from_column_slice(x);
        self.design[arm].ger(1.0, &x, &x, 1.0);
        self.response[arm].axpy(reward, &x, 1.0);
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Model {
    Thompson { alpha: Vec<f64>, beta: Vec<f64> },
    Ucb1,
    EpsilonGreedy { epsilon: f64 },
    LinUcb { alpha: f64, ridge: RidgeArms },
    LinTs { scale: f64, ridge: RidgeArms },
    Uniform,
    Fixed { arm: usize },
}

/// Owned learner state: sufficient statistics plus the kind-specific model.
#[derive(Debug, Clone, PartialEq)]
pub struct PolicyState {
    kind: PolicyKind,
    counts: Vec<u64>,
    sums: Vec<f64>,
    sum_squares: Vec<f64>,
    consumed: u64,
    model: Model,
}

/// Build a fresh policy state for `arms` arms.
pub fn policy_init(spec: &PolicySpec, arms: usize) -> Result<PolicyState> {
    if arms == 0 {
        return Err(Error::InvalidHyperparameter("policy needs at least one arm".into()));
    }
    let positive = |name: &str, v: f64| {
        if v.is_finite() && v > 0.0 {
            Ok(v)
        } else {
            Err(Error::InvalidHyperparameter(format!("{name} must be positive, got {v}")))
        }
    };
    let dim = || match spec.dim {
        Some(d) if d > 0 => Ok(d),
        Some(_) => Err(Error::InvalidHyperparameter("dim must be at least 1".into())),
        None => Err(Error::InvalidHyperparameter(format!(
            "{} needs the context dimension `dim`",
            spec.kind
        ))),
    };
    let model = match spec.kind {
        PolicyKind::Ts => Model::Thompson {
            alpha: vec![1.0; arms],
            beta: vec![1.0; arms],
        },
        PolicyKind::Ucb1 => Model::Ucb1,
        PolicyKind::Egreedy => {
            let epsilon = spec.epsilon.unwrap_or(DEFAULT_EPSILON);
            if !(0.0..=1.0).contains(&epsilon) {
                return Err(Error::InvalidHyperparameter(format!(
                    "epsilon must lie in [0, 1], got {epsilon}"
                )));
            }
            Model::EpsilonGreedy { epsilon }
        }
        PolicyKind::Linucb => {
            let alpha = spec.alpha.unwrap_or(DEFAULT_LINUCB_ALPHA);
            if !alpha.is_finite() || alpha < 0.0 {
                return Err(Error::InvalidHyperparameter(format!(
                    "alpha must be non-negative, got {alpha}"
                )));
            }
            let lambda = positive("lambda", spec.lambda.unwrap_or(DEFAULT_RIDGE_LAMBDA))?;
            Model::LinUcb {
                alpha,
                ridge: RidgeArms::new(arms, dim()?, lambda),
            }
        }
        PolicyKind::Lints => {
            let scale = positive("scale", spec.scale.unwrap_or(DEFAULT_LINTS_SCALE))?;
            let lambda = positive("lambda", spec.lambda.unwrap_or(DEFAULT_RIDGE_LAMBDA))?;
            Model::LinTs {
                scale,
                ridge: RidgeArms::new(arms, dim()?, lambda),
            }
        }
        PolicyKind::Uniform => Model::Uniform,
        PolicyKind::Fixed => {
            let arm = spec.arm.ok_or_else(|| {
                Error::InvalidHyperparameter("fixed policy needs `arm`".into())
            })?;
            if arm >= arms {
                return Err(Error::ArmOutOfRange { arm, arms });
            }
            Model::Fixed { arm }
        }
    };
    Ok(PolicyState {
        kind: spec.kind,
        counts: vec![0; arms],
        sums: vec![0.0; arms],
        sum_squares: vec![0.0; arms],
        consumed: 0,
        model,
    })
}

impl PolicyState {
    pub fn kind(&self) -> PolicyKind {
        self.kind
    }

    pub fn model(&self) -> &Model {
        &self.model
    }

    pub fn num_arms(&self) -> usize {
        self.counts.len()
    }

    pub fn is_contextual(&self) -> bool {
        self.kind.is_contextual()
    }

    pub fn context_dim(&self) -> Option<usize> {
        match &self.model {
            Model::LinUcb { ridge, .. } | Model::LinTs { ridge, .. } => Some(ridge.dim()),
            _ => None,
        }
    }

    /// Pull counts `N_a` (rewards consumed per arm).
    pub fn counts(&self) -> &[u64] {
        &self.counts
    }

    pub fn reward_sums(&self) -> &[f64] {
        &self.sums
    }

    /// Total rewards consumed through [`PolicyState::update`].
    pub fn consumed(&self) -> u64 {
        self.consumed
    }

    /// Beta posterior parameters for Thompson sampling.
    pub fn beta_params(&self) -> Option<(&[f64], &[f64])> {
        match &self.model {
            Model::Thompson { alpha, beta } => Some((alpha, beta)),
            _ => None,
        }
    }

    pub fn ridge(&self) -> Option<&RidgeArms> {
        match &self.model {
            Model::LinUcb { ridge, .. } | Model::LinTs { ridge, .. } => Some(ridge),
            _ => None,
        }
    }

    /// Point estimates of arm means: posterior means for Thompson sampling,
    /// empirical means otherwise (0 for unpulled arms), and the intercept of
    /// the ridge estimate for linear policies.
    pub fn estimated_means(&self) -> Result<Vec<f64>> {
        match &self.model {
            Model::Thompson { alpha, beta } => {
                Ok(alpha.iter().zip(beta).map(|(a, b)| a / (a + b)).collect())
            }
            Model::LinUcb { ridge, .. } | Model::LinTs { ridge, .. } => (0..self.num_arms())
                .map(|a| ridge.estimate(a).map(|theta| theta[0]))
                .collect(),
            _ => Ok(self.empirical_means()),
        }
    }

    fn empirical_means(&self) -> Vec<f64> {
        self.counts
            .iter()
            .zip(&self.sums)
            .map(|(&n, &s)| if n == 0 { 0.0 } else { s / n as f64 })
            .collect()
    }

    fn lowest_unpulled(&self) -> Option<usize> {
        self.counts.iter().position(|&n| n == 0)
    }

    fn check_finite(&self) -> Result<()> {
        if self.sums.iter().chain(&self.sum_squares).all(|v| v.is_finite()) {
            Ok(())
        } else {
            Err(Error::NonFinite)
        }
    }

    fn require_context<'a>(&self, context: Option<&'a [f64]>, dim: usize) -> Result<&'a [f64]> {
        let x = context.ok_or(Error::ContextRequired(self.kind.as_str()))?;
        if x.len() != dim {
            return Err(Error::DimensionMismatch {
                expected: dim,
                actual: x.len(),
            });
        }
        Ok(x)
    }

    /// The decision rule for the current state.
    ///
    /// Deterministic policies return point masses (ties to the lowest index).
    /// Sampling policies return the point mass realized by one fresh posterior
    /// draw, so repeated calls on a frozen state realize the
    /// probability-matching distribution.
    pub fn decide<R: Rng + ?Sized>(
        &self,
        context: Option<&[f64]>,
        rng: &mut R,
    ) -> Result<DecisionRule> {
        self.check_finite()?;
        let arms = self.num_arms();
        let rule = match &self.model {
            Model::Thompson { alpha, beta } => {
                let mut draws = Vec::with_capacity(arms);
                for (&a, &b) in alpha.iter().zip(beta) {
                    let dist = Beta::new(a, b).map_err(|_| Error::NonFinite)?;
                    draws.push(dist.sample(rng));
                }
                DecisionRule::point_mass(arms, argmax(&draws))
            }
            Model::Ucb1 => match self.lowest_unpulled() {
                Some(arm) => DecisionRule::point_mass(arms, arm),
                None => {
                    let log_t = ((self.consumed + 1) as f64).ln();
                    let index: Vec<f64> = self
                        .counts
                        .iter()
                        .zip(&self.sums)
                        .map(|(&n, &s)| {
                            let n = n as f64;
                            s / n + (2.0 * log_t / n).sqrt()
                        })
                        .collect();
                    DecisionRule::point_mass(arms, argmax(&index))
                }
            },
            Model::EpsilonGreedy { epsilon } => {
                let target = self
                    .lowest_unpulled()
                    .unwrap_or_else(|| argmax(&self.empirical_means()));
                DecisionRule::mix_uniform(arms, target, *epsilon)
            }
            Model::LinUcb { alpha, ridge } => {
                let x = self.require_context(context, ridge.dim())?;
                let x = DVector::from_column_slice(x);
                let mut scores = Vec::with_capacity(arms);
                for arm in 0..arms {
                    let chol = ridge.cholesky(arm)?;
                    let theta = chol.solve(&ridge.response[arm]);
                    let width = x.dot(&chol.solve(&x)).max(0.0).sqrt();
                    scores.push(theta.dot(&x) + alpha * width);
                }
                DecisionRule::point_mass(arms, argmax(&scores))
            }
            Model::LinTs { scale, ridge } => {
                let x = self.require_context(context, ridge.dim())?;
                let x = DVector::from_column_slice(x);
                let d = ridge.dim();
                let mut scores = Vec::with_capacity(arms);
                for arm in 0..arms {
                    let chol = ridge.cholesky(arm)?;
                    let theta = chol.solve(&ridge.response[arm]);
                    let z = DVector::from_fn(d, |_, _| StandardNormal.sample(rng));
                    // Lᵀ y = z gives y ~ N(0, A⁻¹)
                    let noise = chol
                        .l()
                        .transpose()
                        .solve_upper_triangular(&z)
                        .ok_or(Error::NonFinite)?;
                    scores.push((theta + noise * *scale).dot(&x));
                }
                DecisionRule::point_mass(arms, argmax(&scores))
            }
            Model::Uniform => DecisionRule::uniform(arms),
            Model::Fixed { arm } => DecisionRule::point_mass(arms, *arm),
        };
        Ok(rule)
    }

    /// Consume one reward for `arm`.
    pub fn update(&mut self, arm: usize, reward: f64, context: Option<&[f64]>) -> Result<()> {
        let arms = self.num_arms();
        if arm >= arms {
            return Err(Error::ArmOutOfRange { arm, arms });
        }
        if !reward.is_finite() {
            return Err(Error::InvalidReward {
                policy: self.kind.as_str(),
                reward,
            });
        }
        let kind = self.kind.as_str();
        let x = match self.context_dim() {
            Some(d) => Some(self.require_context(context, d)?),
            None => None,
        };
        match &mut self.model {
            Model::Thompson { alpha, beta } => {
                if reward != 0.0 && reward != 1.0 {
                    return Err(Error::InvalidReward {
                        policy: kind,
                        reward,
                    });
                }
                alpha[arm] += reward;
                beta[arm] += 1.0 - reward;
            }
            Model::LinUcb { ridge, .. } | Model::LinTs { ridge, .. } => {
                ridge.update(arm, x.expect("linear policies always carry a context"), reward);
            }
            _ => {}
        }
        self.counts[arm] += 1;
        self.sums[arm] += reward;
        self.sum_squares[arm] += reward * reward;
        self.consumed += 1;
        Ok(())
    }

    /// Conditional variance of each arm's estimated mean.
    ///
    /// Thompson sampling reports the exact Beta posterior variance. Linear
    /// policies report `scale² · tr(A⁻¹) / d`, the average coefficient
    /// variance. Frequentist policies report the proxy
    /// `(Σ(x − x̄)² + 1/4) / N²`, and [`UNPULLED_VARIANCE`] for unpulled arms.
    pub fn posterior_variance(&self) -> VarianceVector {
        let values = match &self.model {
            Model::Thompson { alpha, beta } => alpha
                .iter()
                .zip(beta)
                .map(|(&a, &b)| beta_variance(a, b))
                .collect(),
            Model::LinUcb { ridge, .. } | Model::LinTs { ridge, .. } => {
                let scale = match &self.model {
                    Model::LinTs { scale, .. } => *scale,
                    _ => 1.0,
                };
                (0..self.num_arms())
                    .map(|arm| {
                        let inv = ridge.cholesky(arm).map(|c| c.inverse());
                        match inv {
                            Ok(inv) => scale * scale * inv.trace() / ridge.dim() as f64,
                            Err(_) => UNPULLED_VARIANCE,
                        }
                    })
                    .collect()
            }
            _ => self
                .counts
                .iter()
                .zip(self.sums.iter().zip(&self.sum_squares))
                .map(|(&n, (&s, &ss))| {
                    if n == 0 {
                        return UNPULLED_VARIANCE;
                    }
                    let n = n as f64;
                    let centered = (ss - s * s / n).max(0.0);
                    (centered + VARIANCE_PRIOR) / (n * n)
                })
                .collect(),
        };
        VarianceVector(values)
    }

    /// Variances are exact posterior quantities rather than the frequentist proxy.
    pub fn has_bayesian_variance(&self) -> bool {
        matches!(self.model, Model::Thompson { .. } | Model::LinTs { .. })
    }
}

/// Variance of a `Beta(a, b)` distribution.
pub fn beta_variance(a: f64, b: f64) -> f64 {
    let s = a + b;
    a * b / (s * s * (s + 1.0))
}

/// Index of the largest value, ties to the lowest index.
pub(crate) fn argmax(values: &[f64]) -> usize {
    let mut best = 0;
    for (i, v) in values.iter().enumerate().skip(1) {
        if *v > values[best] {
            best = i;
        }
    }
    best
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn spec(s: &str) -> PolicySpec {
        s.parse().unwrap()
    }

    fn rng() -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(17)
    }

    #[test]
    fn thompson_prior() {
        let p = policy_init(&spec("ts"), 2).unwrap();
        assert_eq!(p.beta_params().unwrap(), (&[1.0, 1.0][..], &[1.0, 1.0][..]));
        assert_eq!(p.estimated_means().unwrap(), vec![0.5, 0.5]);
    }

    #[test]
    fn ucb_starts_unpulled() {
        let p = policy_init(&spec("ucb1"), 4).unwrap();
        assert_eq!(p.counts(), &[0, 0, 0, 0]);
    }

    #[test]
    fn linucb_ridge_init() {
        let p = policy_init(&spec("linucb:dim=3,lambda=1"), 2).unwrap();
        let ridge = p.ridge().unwrap();
        for arm in 0..2 {
            assert_eq!(ridge.design(arm), &DMatrix::<f64>::identity(3, 3));
        }
    }

    #[test]
    fn invalid_hyperparameters() {
        assert!(matches!(
            "softmax".parse::<PolicySpec>(),
            Err(Error::UnknownPolicy(_))
        ));
        assert!(policy_init(&spec("egreedy:epsilon=1.5"), 2).is_err());
        assert!(policy_init(&spec("egreedy:epsilon=-0.1"), 2).is_err());
        assert!(policy_init(&spec("linucb:dim=2,lambda=0"), 2).is_err());
        assert!(policy_init(&spec("linucb:dim=2,alpha=-1"), 2).is_err());
        assert!(policy_init(&spec("lints:dim=2,scale=0"), 2).is_err());
        assert!(policy_init(&spec("linucb"), 2).is_err());
        assert!(policy_init(&spec("fixed:arm=3"), 2).is_err());
        assert!(policy_init(&spec("fixed"), 2).is_err());
        assert!("ts:foo=1".parse::<PolicySpec>().is_err());
    }

    #[test]
    fn ucb_forces_unpulled_arm() {
        let mut p = policy_init(&spec("ucb1"), 2).unwrap();
        for _ in 0..5 {
            p.update(1, 1.0, None).unwrap();
        }
        let rule = p.decide(None, &mut rng()).unwrap();
        assert_eq!(rule.as_point_mass(), Some(0));
    }

    #[test]
    fn ucb_index_follows_formula() {
        let mut p = policy_init(&spec("ucb1"), 2).unwrap();
        // arm 0: 3 pulls, mean 2/3; arm 1: 1 pull, mean 0
        for r in [1.0, 1.0, 0.0] {
            p.update(0, r, None).unwrap();
        }
        p.update(1, 0.0, None).unwrap();
        let log_t = 5f64.ln();
        let i0 = 2.0 / 3.0 + (2.0 * log_t / 3.0).sqrt();
        let i1 = (2.0 * log_t).sqrt();
        let want = if i0 > i1 { 0 } else { 1 };
        assert_eq!(p.decide(None, &mut rng()).unwrap().as_point_mass(), Some(want));
    }

    #[test]
    fn pure_exploration() {
        let mut p = policy_init(&spec("egreedy:epsilon=1"), 3).unwrap();
        p.update(2, 1.0, None).unwrap();
        assert_eq!(p.decide(None, &mut rng()).unwrap(), DecisionRule::uniform(3));
    }

    #[test]
    fn greedy_mixture() {
        let mut p = policy_init(&spec("egreedy:epsilon=0.2"), 2).unwrap();
        p.update(0, 0.0, None).unwrap();
        p.update(1, 1.0, None).unwrap();
        let rule = p.decide(None, &mut rng()).unwrap();
        assert!((rule.prob(1) - 0.9).abs() < 1e-15);
        assert!((rule.prob(0) - 0.1).abs() < 1e-15);
    }

    #[test]
    fn thompson_update_is_conjugate() {
        let mut p = policy_init(&spec("ts"), 2).unwrap();
        p.update(0, 1.0, None).unwrap();
        assert_eq!(p.beta_params().unwrap().0, &[2.0, 1.0]);
        assert_eq!(p.beta_params().unwrap().1, &[1.0, 1.0]);
        assert!(matches!(
            p.update(0, 0.5, None),
            Err(Error::InvalidReward { .. })
        ));
    }

    #[test]
    fn ucb_update_counts() {
        let mut p = policy_init(&spec("ucb1"), 3).unwrap();
        p.update(2, 1.0, None).unwrap();
        p.update(2, 0.0, None).unwrap();
        assert_eq!(p.counts(), &[0, 0, 2]);
        assert_eq!(p.reward_sums()[2], 1.0);
        assert!(p.update(3, 0.0, None).is_err());
    }

    #[test]
    fn beta_variances() {
        let mut p = policy_init(&spec("ts"), 2).unwrap();
        assert!((p.posterior_variance().get(0) - 1.0 / 12.0).abs() < 1e-15);
        p.update(0, 1.0, None).unwrap();
        assert!((p.posterior_variance().get(0) - 2.0 / 36.0).abs() < 1e-15);
    }

    #[test]
    fn frequentist_variance_proxy() {
        let mut p = policy_init(&spec("ucb1"), 2).unwrap();
        assert_eq!(p.posterior_variance().get(0), UNPULLED_VARIANCE);
        p.update(0, 1.0, None).unwrap();
        p.update(0, 0.0, None).unwrap();
        // centered sum of squares 0.5, plus 0.25, over N² = 4
        assert!((p.posterior_variance().get(0) - 0.1875).abs() < 1e-15);
        assert!(p.posterior_variance().values().iter().all(|v| *v > 0.0));
    }

    #[test]
    fn contextual_policy_needs_context() {
        let p = policy_init(&spec("linucb:dim=2"), 2).unwrap();
        assert!(matches!(
            p.decide(None, &mut rng()),
            Err(Error::ContextRequired("linucb"))
        ));
        assert!(matches!(
            p.decide(Some(&[1.0]), &mut rng()),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn point_mass_policies_are_pure() {
        let mut p = policy_init(&spec("linucb:dim=2"), 3).unwrap();
        p.update(1, 1.0, Some(&[1.0, 0.5])).unwrap();
        let x = [1.0, -0.3];
        let a = p.decide(Some(&x), &mut ChaCha8Rng::seed_from_u64(1)).unwrap();
        let b = p.decide(Some(&x), &mut ChaCha8Rng::seed_from_u64(2)).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn non_finite_statistics_are_rejected() {
        let mut p = policy_init(&spec("ucb1"), 2).unwrap();
        assert!(p.update(0, f64::NAN, None).is_err());
        p.sums[0] = f64::INFINITY;
        assert!(matches!(p.decide(None, &mut rng()), Err(Error::NonFinite)));
    }

    #[test]
    fn argmax_ties_to_lowest() {
        assert_eq!(argmax(&[1.0, 3.0, 3.0]), 1);
        assert_eq!(argmax(&[f64::INFINITY, f64::INFINITY]), 0);
    }
}
