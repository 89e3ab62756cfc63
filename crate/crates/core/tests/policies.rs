use batched_bandits::policy::{beta_variance, UNPULLED_VARIANCE};
use batched_bandits::{policy_init, PolicyKind, PolicySpec, PolicyState, RunSeed};

fn policy(spec: &str, arms: usize) -> PolicyState {
    policy_init(&spec.parse::<PolicySpec>().unwrap(), arms).unwrap()
}

fn ln_fact(n: u64) -> f64 {
    (2..=n).map(|k| (k as f64).ln()).sum()
}

/// Density of Beta(a, b) for integer parameters.
fn beta_pdf(a: u64, b: u64, x: f64) -> f64 {
    let ln_norm = ln_fact(a + b - 1) - ln_fact(a - 1) - ln_fact(b - 1);
    (ln_norm + (a - 1) as f64 * x.ln() + (b - 1) as f64 * (1.0 - x).ln()).exp()
}

/// P(arm i has the largest draw) for independent integer Beta posteriors,
/// by midpoint quadrature of f_i(x) · Π_{j≠i} F_j(x).
fn matching_masses(params: &[(u64, u64)]) -> Vec<f64> {
    let steps = 200_000;
    let h = 1.0 / steps as f64;
    let mut cdf = vec![0.0; params.len()];
    let mut mass = vec![0.0; params.len()];
    for s in 0..steps {
        let x = (s as f64 + 0.5) * h;
        let pdf: Vec<f64> = params.iter().map(|&(a, b)| beta_pdf(a, b, x)).collect();
        // CDF at the midpoint: accumulated mass plus half of this cell
        let mid: Vec<f64> = cdf.iter().zip(&pdf).map(|(c, p)| c + 0.5 * p * h).collect();
        for i in 0..params.len() {
            let others: f64 = (0..params.len()).filter(|&j| j != i).map(|j| mid[j]).product();
            mass[i] += pdf[i] * others * h;
        }
        for i in 0..params.len() {
            cdf[i] += pdf[i] * h;
        }
    }
    mass
}

fn ts_with(params: &[(u64, u64)]) -> PolicyState {
    let mut p = policy("ts", params.len());
    for (arm, &(a, b)) in params.iter().enumerate() {
        for _ in 1..a {
            p.update(arm, 1.0, None).unwrap();
        }
        for _ in 1..b {
            p.update(arm, 0.0, None).unwrap();
        }
    }
    p
}

#[test]
fn init_examples() {
    let ts = policy("ts", 2);
    let (a, b) = ts.beta_params().unwrap();
    assert_eq!((a, b), (&[1.0, 1.0][..], &[1.0, 1.0][..]));
    assert_eq!(ts.estimated_means().unwrap(), vec![0.5, 0.5]);

    assert_eq!(policy("ucb1", 4).counts(), &[0, 0, 0, 0]);

    let lin = policy_init(&PolicySpec::new(PolicyKind::Linucb).with_dim(3), 2).unwrap();
    let ridge = lin.ridge().unwrap();
    for arm in 0..2 {
        assert_eq!(ridge.design(arm), &nalgebra::DMatrix::<f64>::identity(3, 3));
    }

    for bad in ["egreedy:epsilon=1.5", "egreedy:epsilon=-0.1", "linucb:dim=2,lambda=0", "linucb:dim=2,alpha=-1", "lints:dim=2,lambda=-3", "softmax", "fixed:arm=7"] {
        let r = bad.parse::<PolicySpec>().and_then(|s| policy_init(&s, 3));
        assert!(r.is_err(), "{bad} accepted");
    }
}

#[test]
fn decide_examples() {
    let mut rng = RunSeed(0).policy_rng();
    let mut ucb = policy("ucb1", 2);
    for _ in 0..5 {
        ucb.update(1, 1.0, None).unwrap();
    }
    assert_eq!(ucb.counts(), &[0, 5]);
    assert_eq!(ucb.decide(None, &mut rng).unwrap().as_point_mass(), Some(0));

    let mut greedy = policy("egreedy:epsilon=1", 3);
    greedy.update(2, 1.0, None).unwrap();
    assert_eq!(greedy.decide(None, &mut rng).unwrap().probs(), &[1.0 / 3.0; 3]);

    let ts = ts_with(&[(100, 1), (1, 100)]);
    let hits = (0..10_000)
        .filter(|_| ts.decide(None, &mut rng).unwrap().as_point_mass() == Some(0))
        .count();
    let oracle = matching_masses(&[(100, 1), (1, 100)]);
    assert!(oracle[0] > 0.999999);
    assert!(hits as f64 / 10_000.0 >= 0.99);

    let lin = policy_init(&PolicySpec::new(PolicyKind::Lints).with_dim(2), 2).unwrap();
    assert!(lin.decide(None, &mut rng).is_err());
}

#[test]
fn ts_frequencies_match_probability_matching() {
    let params = [(3, 2), (2, 2), (5, 5)];
    let oracle = matching_masses(&params);
    assert!((oracle.iter().sum::<f64>() - 1.0).abs() < 1e-6);
    let ts = ts_with(&params);
    let mut rng = RunSeed(42).policy_rng();
    let draws = 10_000;
    let mut counts = [0usize; 3];
    for _ in 0..draws {
        counts[ts.decide(None, &mut rng).unwrap().as_point_mass().unwrap()] += 1;
    }
    let chi2: f64 = counts
        .iter()
        .zip(&oracle)
        .map(|(&c, &p)| {
            let e = p * draws as f64;
            (c as f64 - e).powi(2) / e
        })
        .sum();
    // chi-square, 2 degrees of freedom, 1% level
    assert!(chi2 < 9.2103, "chi2 = {chi2}, counts {counts:?}, oracle {oracle:?}");
}

#[test]
fn point_mass_decisions_are_pure() {
    let mut rng = RunSeed(3).policy_rng();
    for spec in ["ucb1", "egreedy:epsilon=0", "fixed:arm=1"] {
        let mut p = policy(spec, 3);
        for (arm, r) in [(0, 1.0), (1, 0.0), (2, 1.0), (1, 1.0)] {
            p.update(arm, r, None).unwrap();
        }
        let a = p.decide(None, &mut rng).unwrap();
        let b = p.decide(None, &mut rng).unwrap();
        assert_eq!(a, b, "{spec}");
    }
}

#[test]
fn update_examples() {
    let mut ts = policy("ts", 2);
    ts.update(0, 1.0, None).unwrap();
    let (a, b) = ts.beta_params().unwrap();
    assert_eq!((a[0], b[0], a[1], b[1]), (2.0, 1.0, 1.0, 1.0));
    assert!(ts.update(0, 0.5, None).is_err());
    assert!(ts.update(2, 1.0, None).is_err());

    let mut ucb = policy("ucb1", 3);
    ucb.update(2, 1.0, None).unwrap();
    let before = ucb.reward_sums().to_vec();
    ucb.update(2, 0.0, None).unwrap();
    assert_eq!(ucb.counts()[2], 2);
    assert_eq!(ucb.reward_sums(), &before[..]);
    assert_eq!(ucb.consumed(), 2);
}

/// Solve (λI + XᵀX) θ = Xᵀy by Gaussian elimination.
fn ridge_oracle(xs: &[Vec<f64>], ys: &[f64], lambda: f64) -> Vec<f64> {
    let d = xs[0].len();
    let mut m = vec![vec![0.0; d + 1]; d];
    for i in 0..d {
        m[i][i] = lambda;
    }
    for (x, y) in xs.iter().zip(ys) {
        for i in 0..d {
            for j in 0..d {
                m[i][j] += x[i] * x[j];
            }
            m[i][d] += x[i] * y;
        }
    }
    for c in 0..d {
        let p = (c..d).max_by(|&a, &b| m[a][c].abs().total_cmp(&m[b][c].abs())).unwrap();
        m.swap(c, p);
        for r in 0..d {
            if r != c {
                let f = m[r][c] / m[c][c];
                for k in c..=d {
                    m[r][k] -= f * m[c][k];
                }
            }
        }
    }
    (0..d).map(|i| m[i][d] / m[i][i]).collect()
}

#[test]
fn linucb_matches_ridge_regression() {
    use rand::Rng;
    let spec: PolicySpec = "linucb:dim=3,lambda=0.5,alpha=0.7".parse().unwrap();
    let mut lin = policy_init(&spec, 2).unwrap();
    let mut rng = RunSeed(8).env_rng();
    let mut data: Vec<(Vec<Vec<f64>>, Vec<f64>)> = vec![(vec![], vec![]); 2];
    for t in 0..60 {
        let x: Vec<f64> = (0..3).map(|_| rng.random_range(-1.0..1.0)).collect();
        let arm = t % 2;
        let y = if rng.random_bool(0.4) { 1.0 } else { 0.0 };
        lin.update(arm, y, Some(&x)).unwrap();
        data[arm].0.push(x);
        data[arm].1.push(y);
    }
    let thetas: Vec<Vec<f64>> = data.iter().map(|(x, y)| ridge_oracle(x, y, 0.5)).collect();
    for arm in 0..2 {
        let est = lin.ridge().unwrap().estimate(arm).unwrap();
        for i in 0..3 {
            assert!((est[i] - thetas[arm][i]).abs() < 1e-10);
        }
    }

    // decisions agree with the oracle index θᵀx + α·sqrt(xᵀA⁻¹x)
    let mut prng = RunSeed(1).policy_rng();
    for _ in 0..50 {
        let x: Vec<f64> = (0..3).map(|_| rng.random_range(-1.0..1.0)).collect();
        let scores: Vec<f64> = (0..2)
            .map(|arm| {
                let theta = &thetas[arm];
                let mean: f64 = theta.iter().zip(&x).map(|(a, b)| a * b).sum();
                // z = A⁻¹x from the augmented system [A | x]
                let (xs, _) = &data[arm];
                let mut cols = vec![vec![0.0; 4]; 3];
                for i in 0..3 {
                    cols[i][i] = 0.5;
                    for r in xs {
                        for j in 0..3 {
                            cols[i][j] += r[i] * r[j];
                        }
                    }
                    cols[i][3] = x[i];
                }
                let z = solve(cols);
                let width: f64 = x.iter().zip(&z).map(|(a, b)| a * b).sum::<f64>().sqrt();
                mean + 0.7 * width
            })
            .collect();
        let want = if scores[1] > scores[0] { 1 } else { 0 };
        if (scores[1] - scores[0]).abs() > 1e-9 {
            assert_eq!(lin.decide(Some(&x), &mut prng).unwrap().as_point_mass(), Some(want));
        }
    }
}

fn solve(mut m: Vec<Vec<f64>>) -> Vec<f64> {
    let d = m.len();
    for c in 0..d {
        for r in 0..d {
            if r != c {
                let f = m[r][c] / m[c][c];
                for k in c..=d {
                    m[r][k] -= f * m[c][k];
                }
            }
        }
    }
    (0..d).map(|i| m[i][d] / m[i][i]).collect()
}

#[test]
fn variance_examples() {
    let mut ts = policy("ts", 2);
    let v = ts.posterior_variance();
    assert!((v.get(0) - 1.0 / 12.0).abs() < 1e-15);
    ts.update(0, 1.0, None).unwrap();
    let after = ts.posterior_variance();
    assert!((after.get(0) - 2.0 / 36.0).abs() < 1e-15);
    assert!(after.get(0) < v.get(0));
    assert_eq!(after.get(1), v.get(1));
    // α = 5, β = 3: 15 / (64 · 9)
    assert!((beta_variance(5.0, 3.0) - 15.0 / 576.0).abs() < 1e-15);

    let mut ucb = policy("ucb1", 2);
    assert_eq!(ucb.posterior_variance().values(), &[UNPULLED_VARIANCE; 2]);
    for r in [1.0, 0.0, 1.0, 1.0] {
        ucb.update(0, r, None).unwrap();
    }
    // Σ(x − x̄)² = 0.75 over 4 pulls, plus the 1/4 prior, over N²
    assert!((ucb.posterior_variance().get(0) - (0.75 + 0.25) / 16.0).abs() < 1e-15);
    assert!(!ucb.has_bayesian_variance() && ts.has_bayesian_variance());
}

#[test]
fn ts_variance_shrinks_in_expectation() {
    // a single surprising reward can widen the posterior: Beta(1, 10) -> Beta(2, 10)
    assert!(beta_variance(2.0, 10.0) > beta_variance(1.0, 10.0));

    // averaged over the predictive outcome, every update shrinks it
    let mut ts = policy("ts", 3);
    let mut rng = RunSeed(4).env_rng();
    use rand::Rng;
    for t in 0..300 {
        let arm = t % 3;
        let (a, b) = ts.beta_params().map(|(a, b)| (a[arm], b[arm])).unwrap();
        let before = ts.posterior_variance().get(arm);
        let p = a / (a + b);
        let expected = p * beta_variance(a + 1.0, b) + (1.0 - p) * beta_variance(a, b + 1.0);
        assert!(expected < before);
        let r = if rng.random_bool(0.5) { 1.0 } else { 0.0 };
        ts.update(arm, r, None).unwrap();
        let want = if r == 1.0 { beta_variance(a + 1.0, b) } else { beta_variance(a, b + 1.0) };
        assert_eq!(ts.posterior_variance().get(arm), want);
    }
}
