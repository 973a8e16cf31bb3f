//! The dependent coefficient pair `(A, B) = (Y^{-2}, T Y^{-2})` built from two
//! Brownian motions started at 1: `T` is the earlier of their passage times to
//! 0 and `Y` the surviving motion's position at that moment. The pair's joint
//! law has explicit marginals (`A` half-Cauchy at scale 1/2, `B` with a
//! power-1 right tail) but is *not* positively quadrant dependent in the way
//! the sum/series formulas require, which the tail experiment here makes
//! visible.

use rand::Rng;
use rand_distr::{Distribution, Normal, StandardNormal};
use serde::{Deserialize, Serialize};
use statrs::distribution::{ContinuousCDF, Normal as StatNormal};

use crate::error::{IedError, Result};
use crate::rng::RngStream;

const PI: f64 = std::f64::consts::PI;

/// One draw of the pair together with the latent `(Y, T)` that produced it.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct FvSample {
    pub a: f64,
    pub b: f64,
    pub y: f64,
    pub t: f64,
}

/// First passage time to 0 of a Brownian motion started at 1: equal in law to
/// `1/Z^2` with `Z` standard normal.
pub fn sample_hitting_time(rng: &mut RngStream) -> f64 {
    loop {
        let z: f64 = StandardNormal.sample(rng);
        if z != 0.0 {
            return 1.0 / (z * z);
        }
    }
}

/// CDF of the hitting time: `P(tau <= t) = 2(1 - Phi(1/sqrt(t)))`.
pub fn hitting_time_cdf(t: f64) -> f64 {
    if t <= 0.0 {
        return 0.0;
    }
    let n = StatNormal::new(0.0, 1.0).unwrap();
    2.0 * (1.0 - n.cdf(1.0 / t.sqrt()))
}

const REJECTION_CAP: usize = 1_000_000;

/// Draw `(A, B, Y, T)`: `T = min(tau_1, tau_2)`, then `Y` from the transition
/// density at time `T` of a Brownian motion started at 1 and killed at 0 —
/// proposal `N(1, T)` restricted to `y > 0`, accepted with probability
/// `1 - exp(-2y/T)` (the reflection-principle survival factor).
pub fn sample_pair(rng: &mut RngStream) -> Result<FvSample> {
    let t = sample_hitting_time(rng).min(sample_hitting_time(rng));
    let proposal = Normal::new(1.0, t.sqrt()).unwrap();
    for _ in 0..REJECTION_CAP {
        let y: f64 = proposal.sample(rng);
        if y <= 0.0 {
            continue;
        }
        let accept = 1.0 - (-2.0 * y / t).exp();
        if rng.gen_range(0.0..1.0) < accept {
            let a = 1.0 / (y * y);
            return Ok(FvSample { a, b: t * a, y, t });
        }
    }
    Err(IedError::Sampler(format!(
        "rejection sampler exceeded {REJECTION_CAP} iterations at t = {t}"
    )))
}

/// The joint density of `(A, B)` at `(a, b)`.
pub fn density_joint(a: f64, b: f64) -> Result<f64> {
    if !(a > 0.0) || !(b > 0.0) {
        return Err(IedError::Domain(format!(
            "density requires a, b > 0, got ({a}, {b})"
        )));
    }
    let r = a.sqrt();
    let first =
        ((-(r - 0.5).powi(2) / b).exp() - (-(r + 0.5).powi(2) / b).exp()) / (2.0 * (PI * a * b).sqrt());
    let second = (-1.0 / (4.0 * b)).exp() / (PI.sqrt() * b.powf(1.5));
    Ok(first * second)
}

/// Marginal density of `A`: `4 / (pi (4a^2 + 1))`.
pub fn density_a(a: f64) -> Result<f64> {
    if !(a > 0.0) {
        return Err(IedError::Domain(format!("density requires a > 0, got {a}")));
    }
    Ok(4.0 / (PI * (4.0 * a * a + 1.0)))
}

/// Marginal CDF of `A`: `(2/pi) arctan(2a)`.
pub fn cdf_a(a: f64) -> f64 {
    if a <= 0.0 {
        0.0
    } else {
        2.0 / PI * (2.0 * a).atan()
    }
}

/// Marginal density of `B`: the standard-normal mass within
/// `[-1/sqrt(2b), 1/sqrt(2b)]` times `e^{-1/(4b)} / (sqrt(pi) b^{3/2})`.
pub fn density_b(b: f64) -> Result<f64> {
    if !(b > 0.0) {
        return Err(IedError::Domain(format!("density requires b > 0, got {b}")));
    }
    let n = StatNormal::new(0.0, 1.0).unwrap();
    let half_width = 1.0 / (2.0 * b).sqrt();
    let inner = n.cdf(half_width) - n.cdf(-half_width);
    Ok(inner * (-1.0 / (4.0 * b)).exp() / (PI.sqrt() * b.powf(1.5)))
}

/// One row of the dependent-tail experiment table.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ExperimentRow {
    pub epsilon: f64,
    pub n: u64,
    pub hits: u64,
    pub log_p_hat: f64,
    pub eps_log_p: f64,
    pub variant: String,
}

/// Settings for [`dependent_tail_experiment`].
#[derive(Debug, Clone)]
pub struct TailExperimentOptions {
    /// Chain length for the iterated variant.
    pub chain_m: usize,
    /// Skip the (m-times costlier per effective sample) chain variant.
    pub include_chain: bool,
}

impl Default for TailExperimentOptions {
    fn default() -> Self {
        TailExperimentOptions {
            chain_m: 50,
            include_chain: true,
        }
    }
}

/// Estimate `eps * log P(hat)` of the left tail at each `eps` for three
/// variants:
///
/// - `dependent_sum`: the two-step functional `A_2 B_1 + B_2` from independent
///   dependent-component pairs;
/// - `independent_control`: the same functional with the `A` factor replaced
///   by an `A` draw from a third, independent pair, so every vector has
///   independent components with matched marginals;
/// - `dependent_chain`: the length-`m` iterated chain (optional).
///
/// Direct Monte Carlo only: the call refuses grids whose smallest `eps` would
/// leave the expected hit count below 50 (heuristic `n e^{-1/(2 eps)}`).
pub fn dependent_tail_experiment(
    eps_grid: &[f64],
    n: u64,
    options: &TailExperimentOptions,
    rng: &mut RngStream,
) -> Result<Vec<ExperimentRow>> {
    if eps_grid.is_empty() {
        return Err(IedError::Argument("empty epsilon grid".into()));
    }
    for &eps in eps_grid {
        if !(0.04..=0.5).contains(&eps) {
            return Err(IedError::Argument(format!(
                "epsilon {eps} outside the supported window [0.04, 0.5]"
            )));
        }
    }
    let eps_min = eps_grid.iter().cloned().fold(f64::INFINITY, f64::min);
    let expected_hits = n as f64 * (-1.0 / (2.0 * eps_min)).exp();
    if expected_hits < 50.0 {
        let needed = (50.0 * (1.0 / (2.0 * eps_min)).exp()).ceil();
        return Err(IedError::Experiment(format!(
            "expected hits {expected_hits:.1} at eps = {eps_min} is below 50; need n >= {needed:.0}"
        )));
    }

    let mut dep_hits = vec![0u64; eps_grid.len()];
    let mut ctl_hits = vec![0u64; eps_grid.len()];
    for _ in 0..n {
        let p1 = sample_pair(rng)?;
        let p2 = sample_pair(rng)?;
        let p3 = sample_pair(rng)?;
        let dep = p2.a * p1.b + p2.b;
        let ctl = p3.a * p1.b + p2.b;
        for (i, &eps) in eps_grid.iter().enumerate() {
            if dep < eps {
                dep_hits[i] += 1;
            }
            if ctl < eps {
                ctl_hits[i] += 1;
            }
        }
    }

    let mut rows = Vec::new();
    let mut push = |variant: &str, eps: f64, count: u64, trials: u64| {
        let p = count as f64 / trials as f64;
        let log_p = if count == 0 { f64::NEG_INFINITY } else { p.ln() };
        rows.push(ExperimentRow {
            epsilon: eps,
            n: trials,
            hits: count,
            log_p_hat: log_p,
            eps_log_p: eps * log_p,
            variant: variant.to_string(),
        });
    };
    for (i, &eps) in eps_grid.iter().enumerate() {
        push("dependent_sum", eps, dep_hits[i], n);
    }
    for (i, &eps) in eps_grid.iter().enumerate() {
        push("independent_control", eps, ctl_hits[i], n);
    }

    if options.include_chain {
        let m = options.chain_m.max(1);
        let chains = (n / m as u64).max(1);
        let mut chain_hits = vec![0u64; eps_grid.len()];
        for _ in 0..chains {
            let mut x = 0.0f64;
            for _ in 0..m {
                let p = sample_pair(rng)?;
                x = p.a * x + p.b;
            }
            for (i, &eps) in eps_grid.iter().enumerate() {
                if x < eps {
                    chain_hits[i] += 1;
                }
            }
        }
        for (i, &eps) in eps_grid.iter().enumerate() {
            push("dependent_chain", eps, chain_hits[i], chains);
        }
    }
    Ok(rows)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::{assert_abs_diff_eq, assert_relative_eq};

    fn ks_distance(samples: &mut [f64], cdf: impl Fn(f64) -> f64) -> f64 {
        samples.sort_by(|a, b| a.partial_cmp(b).unwrap());
        let n = samples.len() as f64;
        let mut d = 0.0f64;
        for (i, &x) in samples.iter().enumerate() {
            let f = cdf(x);
            d = d.max((f - i as f64 / n).abs());
            d = d.max(((i + 1) as f64 / n - f).abs());
        }
        d
    }

    #[test]
    fn hitting_time_matches_reflection_cdf() {
        let mut rng = RngStream::new(31, 0);
        let mut xs: Vec<f64> = (0..200_000).map(|_| sample_hitting_time(&mut rng)).collect();
        let d = ks_distance(&mut xs, hitting_time_cdf);
        assert!(d < 0.0037, "KS = {d}");
        // P(tau <= 1) = 2(1 - Phi(1)).
        assert_abs_diff_eq!(hitting_time_cdf(1.0), 0.31731050786, epsilon = 1e-9);
        // Median = 1/qnorm(0.75)^2.
        let med = xs[xs.len() / 2];
        assert!((med - 2.1981).abs() < 0.05, "median {med}");
    }

    #[test]
    fn sample_internal_identities() {
        let mut rng = RngStream::new(5, 0);
        for _ in 0..1000 {
            let s = sample_pair(&mut rng).unwrap();
            assert!(s.a > 0.0 && s.b > 0.0 && s.y > 0.0 && s.t > 0.0);
            assert_relative_eq!(s.a, 1.0 / (s.y * s.y), max_relative = 1e-12);
            assert_relative_eq!(s.b, s.t * s.a, max_relative = 1e-12);
        }
    }

    #[test]
    fn a_marginal_matches_arctan_cdf() {
        let mut rng = RngStream::new(13, 0);
        let mut xs: Vec<f64> = (0..200_000)
            .map(|_| sample_pair(&mut rng).unwrap().a)
            .collect();
        let d = ks_distance(&mut xs, cdf_a);
        assert!(d < 0.0037, "KS = {d}");
    }

    #[test]
    fn b_marginal_matches_integrated_density() {
        // CDF of B by composite-Simpson integration of the closed-form density.
        let cdf_b = |x: f64| -> f64 {
            let steps = 4000;
            let lo = 1e-4;
            if x <= lo {
                return 0.0;
            }
            // Integrate on the log scale where the density varies smoothly.
            let (la, lb) = (lo.ln(), x.ln());
            let h = (lb - la) / steps as f64;
            let f = |l: f64| {
                let b = l.exp();
                density_b(b).unwrap() * b
            };
            let mut s = f(la) + f(lb);
            for i in 1..steps {
                s += f(la + i as f64 * h) * if i % 2 == 1 { 4.0 } else { 2.0 };
            }
            s * h / 3.0
        };
        let mut rng = RngStream::new(21, 0);
        let mut xs: Vec<f64> = (0..100_000)
            .map(|_| sample_pair(&mut rng).unwrap().b)
            .collect();
        let d = ks_distance(&mut xs, cdf_b);
        assert!(d < 0.006, "KS = {d}");
    }

    #[test]
    fn e_log_a_is_minus_log_two() {
        let mut rng = RngStream::new(2, 0);
        let n = 1_000_000;
        let mean = (0..n)
            .map(|_| sample_pair(&mut rng).unwrap().a.ln())
            .sum::<f64>()
            / n as f64;
        // Var(log A) = pi^2/4 for the half-Cauchy at scale 1/2, se ~ 0.0016.
        assert!((mean + 2f64.ln()).abs() < 0.006, "E[log A] = {mean}");
    }

    #[test]
    fn density_a_normalizes_and_matches_joint() {
        assert_relative_eq!(density_a(1e-12).unwrap(), 4.0 / PI, max_relative = 1e-6);
        // Quadrature of the closed form against the arctan antiderivative.
        let steps = 200_000;
        let h = 2000.0 / steps as f64;
        let mut s = 0.0;
        for i in 0..steps {
            s += density_a(h * (i as f64 + 0.5)).unwrap() * h;
        }
        // Tail beyond 2000: 4/(pi 4a^2) integrates to 1/(pi a).
        s += 1.0 / (PI * 2000.0);
        assert_abs_diff_eq!(s, 1.0, epsilon = 1e-8);
        // Marginalizing the joint density over b reproduces density_a.
        for &a in &[0.1, 1.0, 10.0] {
            let mut m = 0.0;
            let steps = 20_000;
            let (la, lb) = (1e-6f64.ln(), 1e6f64.ln());
            let hh = (lb - la) / steps as f64;
            for i in 0..steps {
                let l = la + hh * (i as f64 + 0.5);
                let b = l.exp();
                m += density_joint(a, b).unwrap() * b * hh;
            }
            assert_abs_diff_eq!(m, density_a(a).unwrap(), epsilon = 1e-6);
        }
    }

    #[test]
    fn joint_density_nonnegative_and_normalized() {
        for i in 0..100 {
            for j in 0..100 {
                let a = 10f64.powf(-3.0 + 6.0 * i as f64 / 99.0);
                let b = 10f64.powf(-3.0 + 6.0 * j as f64 / 99.0);
                assert!(density_joint(a, b).unwrap() >= 0.0);
            }
        }
        // 2D log-grid quadrature captures nearly all the mass.
        let steps = 400;
        let (la, lb) = (1e-5f64.ln(), 1e5f64.ln());
        let h = (lb - la) / steps as f64;
        let mut total = 0.0;
        for i in 0..steps {
            let a = (la + h * (i as f64 + 0.5)).exp();
            for j in 0..steps {
                let b = (la + h * (j as f64 + 0.5)).exp();
                total += density_joint(a, b).unwrap() * a * b * h * h;
            }
        }
        assert!(total > 0.99 && total < 1.001, "mass = {total}");
    }

    #[test]
    fn experiment_preconditions() {
        let mut rng = RngStream::new(1, 0);
        let opts = TailExperimentOptions::default();
        assert!(matches!(
            dependent_tail_experiment(&[0.01], 1000, &opts, &mut rng),
            Err(IedError::Argument(_))
        ));
        assert!(matches!(
            dependent_tail_experiment(&[0.05], 1000, &opts, &mut rng),
            Err(IedError::Experiment(_))
        ));
        assert!(matches!(
            dependent_tail_experiment(&[], 1000, &opts, &mut rng),
            Err(IedError::Argument(_))
        ));
    }

    #[test]
    fn experiment_small_run_shape() {
        let mut rng = RngStream::new(8, 0);
        let opts = TailExperimentOptions {
            chain_m: 10,
            include_chain: true,
        };
        let rows = dependent_tail_experiment(&[0.5, 0.3], 2000, &opts, &mut rng).unwrap();
        assert_eq!(rows.len(), 6);
        for row in &rows {
            assert!(row.hits <= row.n);
            if row.hits > 0 {
                assert!(row.eps_log_p < 0.0);
            }
        }
        let variants: Vec<&str> = rows.iter().map(|r| r.variant.as_str()).collect();
        assert!(variants.contains(&"dependent_sum"));
        assert!(variants.contains(&"independent_control"));
        assert!(variants.contains(&"dependent_chain"));
    }
}
