//! Replicate summaries.
//!
//! Sums are taken over sorted copies of the samples, so every estimate is a
//! function of the multiset of replicate values and does not depend on the
//! order in which replicates finished.

use serde::Serialize;

/// Two-sided 95% normal quantile.
pub const Z95: f64 = 1.959_963_984_540_054;

/// Number of standard errors separating "holds" from noise in verdicts.
pub const VERDICT_STD_ERRS: f64 = 2.0;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Summary {
    pub count: usize,
    pub mean: f64,
    /// Sample standard deviation (`n − 1` denominator; 0 for a single sample).
    pub std: f64,
    pub std_err: f64,
    pub ci_lo: f64,
    pub ci_hi: f64,
}

impl Summary {
    pub fn from_samples(samples: &[f64]) -> Self {
        let count = samples.len();
        if count == 0 {
            return Self {
                count,
                mean: f64::NAN,
                std: f64::NAN,
                std_err: f64::NAN,
                ci_lo: f64::NAN,
                ci_hi: f64::NAN,
            };
        }
        let mean = sorted_sum(samples.iter().copied()) / count as f64;
        let var = if count > 1 {
            sorted_sum(samples.iter().map(|x| (x - mean) * (x - mean))) / (count - 1) as f64
        } else {
            0.0
        };
        let std = var.sqrt();
        let std_err = std / (count as f64).sqrt();
        Self {
            count,
            mean,
            std,
            std_err,
            ci_lo: mean - Z95 * std_err,
            ci_hi: mean + Z95 * std_err,
        }
    }

    /// Summary of paired differences `a_i − b_i`.
    pub fn paired_difference(a: &[f64], b: &[f64]) -> Self {
        assert_eq!(a.len(), b.len(), "paired samples must have equal length");
        let diffs: Vec<f64> = a.iter().zip(b).map(|(x, y)| x - y).collect();
        Self::from_samples(&diffs)
    }

    pub fn scaled(&self, factor: f64) -> Self {
        let f = factor.abs();
        Self {
            count: self.count,
            mean: self.mean * factor,
            std: self.std * f,
            std_err: self.std_err * f,
            ci_lo: (self.ci_lo * factor).min(self.ci_hi * factor),
            ci_hi: (self.ci_lo * factor).max(self.ci_hi * factor),
        }
    }
}

/// Sum after sorting, making the result independent of input order.
pub fn sorted_sum(values: impl Iterator<Item = f64>) -> f64 {
    let mut v: Vec<f64> = values.collect();
    v.sort_by(f64::total_cmp);
    v.iter().sum()
}

/// Neumaier-compensated sum.
pub fn compensated_sum(values: impl Iterator<Item = f64>) -> f64 {
    let mut sum = 0.0;
    let mut comp = 0.0;
    for v in values {
        let t = sum + v;
        if sum.abs() >= v.abs() {
            comp += (sum - t) + v;
        } else {
            comp += (v - t) + sum;
        }
        sum = t;
    }
    sum + comp
}

/// Spearman rank correlation with average ranks for ties.
pub fn spearman(x: &[f64], y: &[f64]) -> f64 {
    assert_eq!(x.len(), y.len());
    let rx = ranks(x);
    let ry = ranks(y);
    pearson(&rx, &ry)
}

fn ranks(v: &[f64]) -> Vec<f64> {
    let mut idx: Vec<usize> = (0..v.len()).collect();
    idx.sort_by(|&a, &b| v[a].total_cmp(&v[b]));
    let mut out = vec![0.0; v.len()];
    let mut i = 0;
    while i < idx.len() {
        let mut j = i;
        while j + 1 < idx.len() && v[idx[j + 1]] == v[idx[i]] {
            j += 1;
        }
        let rank = (i + j) as f64 / 2.0 + 1.0;
        for &k in &idx[i..=j] {
            out[k] = rank;
        }
        i = j + 1;
    }
    out
}

fn pearson(x: &[f64], y: &[f64]) -> f64 {
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let cov: f64 = x.iter().zip(y).map(|(a, b)| (a - mx) * (b - my)).sum();
    let vx: f64 = x.iter().map(|a| (a - mx) * (a - mx)).sum();
    let vy: f64 = y.iter().map(|b| (b - my) * (b - my)).sum();
    cov / (vx * vy).sqrt()
}

/// Coefficient of variation (sample std over mean).
pub fn coefficient_of_variation(values: &[f64]) -> f64 {
    let s = Summary::from_samples(values);
    s.std / s.mean
}
