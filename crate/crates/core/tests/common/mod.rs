//! Exact-arithmetic oracle for average decision rules.

#![allow(dead_code)]

use batched_bandits::{DecisionRule, Environment};
use num::{BigInt, BigRational, ToPrimitive, Zero};
use rand::Rng;

pub type Q = BigRational;

pub fn q(n: i64, d: i64) -> Q {
    Q::new(BigInt::from(n), BigInt::from(d))
}

/// Means of an environment as exact rationals (inputs are short decimals).
pub fn exact_means(env: &Environment) -> Vec<Q> {
    env.means()
        .iter()
        .map(|&m| q((m * 1_000_000.0).round() as i64, 1_000_000))
        .collect()
}

pub fn value(rule: &[Q], means: &[Q]) -> Q {
    rule.iter().zip(means).map(|(p, m)| p * m).sum()
}

pub fn average(rules: &[Vec<Q>]) -> Vec<Q> {
    let k = rules[0].len();
    let t = q(rules.len() as i64, 1);
    (0..k)
        .map(|a| rules.iter().map(|r| r[a].clone()).sum::<Q>() / &t)
        .collect()
}

/// A rule with random integer weights over `k` arms.
pub fn random_rule<R: Rng>(rng: &mut R, k: usize) -> Vec<Q> {
    loop {
        let w: Vec<i64> = (0..k).map(|_| rng.random_range(0..=20)).collect();
        let total: i64 = w.iter().sum();
        if total > 0 {
            return w.into_iter().map(|x| q(x, total)).collect();
        }
    }
}

/// Random rules sorted by exact value with ties dropped, so that every step
/// strictly improves on the previous one.
pub fn improving_sequence<R: Rng>(rng: &mut R, k: usize, len: usize, means: &[Q]) -> Vec<Vec<Q>> {
    let mut rules: Vec<(Q, Vec<Q>)> = (0..len)
        .map(|_| {
            let r = random_rule(rng, k);
            (value(&r, means), r)
        })
        .collect();
    rules.sort_by(|a, b| a.0.cmp(&b.0));
    rules.dedup_by(|a, b| a.0 == b.0);
    rules.into_iter().map(|(_, r)| r).collect()
}

pub fn to_rule(r: &[Q]) -> DecisionRule {
    DecisionRule::new(r.iter().map(|p| p.to_f64().unwrap()).collect()).unwrap()
}

/// Violations of (part 1) `avg_{n2} > avg_{n1}` for all `n1 < n2` and
/// (part 2) `rule_t > avg_t` for `t ≥ 2`, in exact arithmetic.
pub fn exact_lemma_violations(rules: &[Vec<Q>], means: &[Q]) -> (usize, usize) {
    let avgs: Vec<Q> = (1..=rules.len())
        .map(|t| value(&average(&rules[..t]), means))
        .collect();
    let mut part1 = 0;
    for n2 in 1..avgs.len() {
        for n1 in 0..n2 {
            if avgs[n2] <= avgs[n1] {
                part1 += 1;
            }
        }
    }
    let mut part2 = 0;
    for t in 1..rules.len() {
        if value(&rules[t], means) <= avgs[t] {
            part2 += 1;
        }
    }
    (part1, part2)
}

pub fn exact_sum_is_one(rule: &[Q]) -> bool {
    let s: Q = rule.iter().cloned().sum();
    s == q(1, 1) && rule.iter().all(|p| *p >= Q::zero())
}
