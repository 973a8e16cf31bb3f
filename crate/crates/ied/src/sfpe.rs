//! The stochastic fixed point equation `X =d AX + B`: coefficient-pair
//! models, the Markov recursion `X_n = A_n X_{n-1} + B_n`, the perpetuity
//! series `S = sum_i (prod_{j<i} A_j) B_i`, closed-form limit parameters, and
//! contraction diagnostics.

use serde::{Deserialize, Serialize};

use crate::class::IedClass;
use crate::distributions::DistributionSpec;
use crate::error::{IedError, Result};
use crate::flemingviot;
use crate::rng::RngStream;

/// A joint law for the coefficient pair `(A, B)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "pair", rename_all = "kebab-case")]
pub enum CoeffPairSpec {
    /// Degenerate multiplicative coefficient: `A = r` a.s., `B ~ noise`.
    ConstantA { r: f64, noise: DistributionSpec },
    /// Independent components with a declared essential infimum of `A` and an
    /// optional a.s. upper bound (needed by the envelope theorems).
    IndependentPair {
        spec_a: DistributionSpec,
        spec_b: DistributionSpec,
        essinf_a: f64,
        bound_beta: Option<f64>,
    },
    /// The dependent Brownian pair `(Y^{-2}, T Y^{-2})`.
    FlemingViotPair,
}

impl CoeffPairSpec {
    pub fn validate(&self) -> Result<()> {
        match self {
            CoeffPairSpec::ConstantA { r, noise } => {
                if !(*r >= 0.0 && *r < 1.0) {
                    return Err(IedError::Argument(format!(
                        "constant coefficient r = {r} must lie in [0, 1)"
                    )));
                }
                noise.validate()
            }
            CoeffPairSpec::IndependentPair {
                spec_a,
                spec_b,
                essinf_a,
                bound_beta,
            } => {
                spec_a.validate()?;
                spec_b.validate()?;
                if !(*essinf_a >= 0.0) {
                    return Err(IedError::Argument(format!(
                        "declared essential infimum {essinf_a} must be nonnegative"
                    )));
                }
                if let Some(beta) = bound_beta {
                    if !(*beta > 0.0 && *beta < 1.0) {
                        return Err(IedError::Argument(format!(
                            "a.s. bound {beta} must lie in (0, 1)"
                        )));
                    }
                }
                Ok(())
            }
            CoeffPairSpec::FlemingViotPair => Ok(()),
        }
    }

    /// The declared essential infimum of `A`.
    pub fn essinf_a(&self) -> f64 {
        match self {
            CoeffPairSpec::ConstantA { r, .. } => *r,
            CoeffPairSpec::IndependentPair { essinf_a, .. } => *essinf_a,
            // Y is unbounded above, so A = Y^{-2} reaches arbitrarily near 0.
            CoeffPairSpec::FlemingViotPair => 0.0,
        }
    }

    /// The declared a.s. upper bound on `A`, when one exists.
    pub fn bound_beta(&self) -> Option<f64> {
        match self {
            CoeffPairSpec::ConstantA { r, .. } => Some(*r),
            CoeffPairSpec::IndependentPair { bound_beta, .. } => *bound_beta,
            CoeffPairSpec::FlemingViotPair => None,
        }
    }

    /// Whether the quadrant-dependence hypotheses behind the closed-form
    /// `Lambda` results hold for this pair. Independence implies them; the
    /// dependent Brownian pair is exactly the case where they fail.
    pub fn pqd_theory_applies(&self) -> bool {
        !matches!(self, CoeffPairSpec::FlemingViotPair)
    }

    /// One draw of `(A, B)`.
    pub fn draw(&self, rng: &mut RngStream) -> Result<(f64, f64)> {
        match self {
            CoeffPairSpec::ConstantA { r, noise } => Ok((*r, noise.sample(rng))),
            CoeffPairSpec::IndependentPair { spec_a, spec_b, .. } => {
                Ok((spec_a.sample(rng), spec_b.sample(rng)))
            }
            CoeffPairSpec::FlemingViotPair => {
                let s = flemingviot::sample_pair(rng)?;
                Ok((s.a, s.b))
            }
        }
    }

    /// Check the declared essential infimum against the minimum of `n` draws:
    /// every observation must stay above `essinf_a - 1e-6`.
    pub fn validate_essinf(&self, n: usize, rng: &mut RngStream) -> Result<()> {
        let declared = self.essinf_a();
        let mut min = f64::INFINITY;
        for _ in 0..n {
            let (a, _) = self.draw(rng)?;
            min = min.min(a);
        }
        if min < declared - 1e-6 {
            return Err(IedError::Incompatible(format!(
                "observed A = {min} below the declared essential infimum {declared}"
            )));
        }
        Ok(())
    }
}

/// A simulated path `X_0..X_n` with its provenance.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Trajectory {
    pub values: Vec<f64>,
    pub seed: u64,
    pub stream_id: u64,
}

impl Trajectory {
    /// `X_n` for `n >= 1` (index 0 is the fixed start `X_0 = 0`).
    pub fn x(&self, n: usize) -> f64 {
        self.values[n]
    }
}

/// Run the recursion `X_n = A_n X_{n-1} + B_n` from `X_0 = 0`.
pub fn iterate(spec: &CoeffPairSpec, n: usize, rng: &mut RngStream) -> Result<Trajectory> {
    if n < 1 {
        return Err(IedError::Argument("chain length must be >= 1".into()));
    }
    spec.validate()?;
    let mut values = Vec::with_capacity(n + 1);
    values.push(0.0);
    let mut x = 0.0f64;
    for _ in 0..n {
        let (a, b) = spec.draw(rng)?;
        x = a * x + b;
        values.push(x);
    }
    Ok(Trajectory {
        values,
        seed: rng.seed(),
        stream_id: rng.stream_id(),
    })
}

/// How a series draw was truncated.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct SeriesDraw {
    pub value: f64,
    pub terms: usize,
    /// The running product of coefficients at the stopping index.
    pub residual_product: f64,
}

const SERIES_STABLE_RUN: usize = 32;
const SERIES_HARD_CAP: usize = 1_000_000;

/// One draw of the perpetuity `S = sum_i (prod_{j<i} A_j) B_i`, truncated
/// when the running product has been negligible relative to the partial sum
/// for 32 consecutive terms. A running product that fails to decay within
/// 10^6 terms is reported as divergence rather than silently truncated.
pub fn series_solution(spec: &CoeffPairSpec, tol: f64, rng: &mut RngStream) -> Result<SeriesDraw> {
    if !(tol > 0.0 && tol < 1.0) {
        return Err(IedError::Argument(format!(
            "truncation tolerance {tol} must lie in (0, 1)"
        )));
    }
    spec.validate()?;
    let mut sum = 0.0f64;
    let mut product = 1.0f64;
    let mut run = 0usize;
    for i in 0..SERIES_HARD_CAP {
        let (a, b) = spec.draw(rng)?;
        sum += product * b;
        product *= a;
        if product < tol * (sum.abs() + f64::MIN_POSITIVE) {
            run += 1;
            if run >= SERIES_STABLE_RUN {
                return Ok(SeriesDraw {
                    value: sum,
                    terms: i + 1,
                    residual_product: product,
                });
            }
        } else {
            run = 0;
        }
    }
    Err(IedError::Divergence(format!(
        "running coefficient product still {product:.3e} after {SERIES_HARD_CAP} terms"
    )))
}

/// `Lambda = lambda / (1 - r^{rho/(1+rho)})^{1+rho}` for the constant-`A`
/// recursion `X =d rX + B`.
pub fn lambda_ar1(noise_class: &IedClass, r: f64) -> Result<IedClass> {
    if !(0.0..1.0).contains(&r) {
        return Err(IedError::Argument(format!("r = {r} must lie in [0, 1)")));
    }
    lambda_fixed_point(noise_class, r)
}

/// `Lambda = (1 - essinf(A)^{rho/(1+rho)})^{-1-rho} lambda`; `essinf = 0`
/// collapses to `Lambda = lambda`.
pub fn lambda_fixed_point(noise_class: &IedClass, essinf_a: f64) -> Result<IedClass> {
    if !(0.0..1.0).contains(&essinf_a) {
        return Err(IedError::Argument(format!(
            "essential infimum {essinf_a} must lie in [0, 1)"
        )));
    }
    if essinf_a == 0.0 {
        return noise_class.with_lambda(noise_class.lambda());
    }
    let rho = noise_class.rho();
    let e = rho / (1.0 + rho);
    let lambda = noise_class.lambda() / (1.0 - essinf_a.powf(e)).powf(1.0 + rho);
    noise_class.with_lambda(lambda)
}

/// Finite-horizon constant:
/// `Lambda_n = lambda ((1 - a^{n rho/(1+rho)}) / (1 - a^{rho/(1+rho)}))^{1+rho}`.
pub fn lambda_n_fixed_point(noise_class: &IedClass, essinf_a: f64, n: usize) -> Result<IedClass> {
    if !(0.0..1.0).contains(&essinf_a) {
        return Err(IedError::Argument(format!(
            "essential infimum {essinf_a} must lie in [0, 1)"
        )));
    }
    if n < 1 {
        return Err(IedError::Argument("horizon must be >= 1".into()));
    }
    if essinf_a == 0.0 {
        return noise_class.with_lambda(noise_class.lambda());
    }
    let rho = noise_class.rho();
    let e = rho / (1.0 + rho);
    let q = essinf_a.powf(e);
    let ratio = (1.0 - q.powi(n as i32)) / (1.0 - q);
    noise_class.with_lambda(noise_class.lambda() * ratio.powf(1.0 + rho))
}

/// Monte Carlo check of the contraction hypotheses `E[log A] < 0` and
/// `E[log^+ B] < infinity`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ContractionReport {
    pub e_log_a: f64,
    pub stderr: f64,
    pub e_logplus_b: f64,
    pub pass: bool,
}

pub fn contraction_check(
    spec: &CoeffPairSpec,
    n: usize,
    rng: &mut RngStream,
) -> Result<ContractionReport> {
    if n < 10_000 {
        return Err(IedError::Argument(format!(
            "contraction check needs n >= 10000, got {n}"
        )));
    }
    spec.validate()?;
    let mut sum = 0.0f64;
    let mut sumsq = 0.0f64;
    let mut logplus_b = 0.0f64;
    for _ in 0..n {
        let (a, b) = spec.draw(rng)?;
        let la = a.ln();
        sum += la;
        sumsq += la * la;
        logplus_b += b.ln().max(0.0);
    }
    let mean = sum / n as f64;
    let var = (sumsq / n as f64 - mean * mean).max(0.0);
    let stderr = (var / n as f64).sqrt();
    Ok(ContractionReport {
        e_log_a: mean,
        stderr,
        e_logplus_b: logplus_b / n as f64,
        // Pass when the estimate sits 3 sigma below zero. A degenerate A
        // (stderr = 0) passes on sign alone.
        pass: mean + 3.0 * stderr < 0.0,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn fig1_spec() -> CoeffPairSpec {
        CoeffPairSpec::ConstantA {
            r: 0.25,
            noise: DistributionSpec::ReciprocalExponential {
                rate: 0.5,
                cap: Some(1.0),
            },
        }
    }

    #[test]
    fn iterate_constant_recursion() {
        let spec = CoeffPairSpec::ConstantA {
            r: 0.5,
            noise: DistributionSpec::Constant { value: 1.0 },
        };
        let mut rng = RngStream::new(1, 0);
        let t = iterate(&spec, 20, &mut rng).unwrap();
        assert_eq!(t.values[0], 0.0);
        for n in 1..=20 {
            assert_relative_eq!(t.x(n), 2.0 * (1.0 - 0.5f64.powi(n as i32)), max_relative = 1e-12);
        }
    }

    #[test]
    fn iterate_degenerate_a_forgets() {
        let spec = CoeffPairSpec::ConstantA {
            r: 0.0,
            noise: DistributionSpec::ReciprocalExponential {
                rate: 1.0,
                cap: Some(2.0),
            },
        };
        let mut rng = RngStream::new(3, 0);
        let t = iterate(&spec, 100, &mut rng).unwrap();
        // X_n = B_n: replay the same stream.
        let mut rng2 = RngStream::new(3, 0);
        for n in 1..=100 {
            let (_, b) = spec.draw(&mut rng2).unwrap();
            assert_eq!(t.x(n), b);
        }
    }

    #[test]
    fn trajectories_nonnegative_and_bounded() {
        let mut rng = RngStream::new(7, 0);
        let t = iterate(&fig1_spec(), 5000, &mut rng).unwrap();
        // Capped noise keeps the chain under cap/(1-r) = 4/3.
        assert!(t.values.iter().all(|&x| (0.0..=4.0 / 3.0).contains(&x)));
    }

    #[test]
    fn series_constant_geometric() {
        let spec = CoeffPairSpec::ConstantA {
            r: 0.5,
            noise: DistributionSpec::Constant { value: 1.0 },
        };
        let mut rng = RngStream::new(1, 0);
        let d = series_solution(&spec, 1e-12, &mut rng).unwrap();
        assert_relative_eq!(d.value, 2.0, max_relative = 1e-10);
    }

    #[test]
    fn series_degenerate_a_single_term() {
        let spec = CoeffPairSpec::ConstantA {
            r: 0.0,
            noise: DistributionSpec::Constant { value: 7.0 },
        };
        let mut rng = RngStream::new(1, 0);
        let d = series_solution(&spec, 1e-12, &mut rng).unwrap();
        assert_eq!(d.value, 7.0);
    }

    #[test]
    fn series_matches_iterate_in_distribution() {
        // KS distance between series draws and long-chain endpoints.
        let spec = fig1_spec();
        let m = 20_000;
        let mut r1 = RngStream::new(10, 0);
        let mut s: Vec<f64> = (0..m)
            .map(|_| series_solution(&spec, 1e-10, &mut r1).unwrap().value)
            .collect();
        let mut r2 = RngStream::new(10, 1);
        let mut e: Vec<f64> = (0..m)
            .map(|_| iterate(&spec, 200, &mut r2).unwrap().x(200))
            .collect();
        s.sort_by(|a, b| a.partial_cmp(b).unwrap());
        e.sort_by(|a, b| a.partial_cmp(b).unwrap());
        let mut d = 0.0f64;
        let (mut i, mut j) = (0usize, 0usize);
        while i < m && j < m {
            if s[i] <= e[j] {
                i += 1;
            } else {
                j += 1;
            }
            d = d.max((i as f64 - j as f64).abs() / m as f64);
        }
        assert!(d < 0.02, "KS = {d}");
    }

    #[test]
    fn lambda_formulas() {
        let c = IedClass::unit(1.0, 0.5).unwrap();
        assert_relative_eq!(lambda_ar1(&c, 0.25).unwrap().lambda(), 2.0);
        assert_eq!(lambda_ar1(&c, 0.0).unwrap().lambda(), 0.5);
        assert!(lambda_ar1(&c, 1.0).is_err());
        assert!(lambda_ar1(&c, -0.1).is_err());
        let c2 = IedClass::unit(2.0, 1.0).unwrap();
        assert_relative_eq!(
            lambda_ar1(&c2, 0.125).unwrap().lambda(),
            64.0 / 27.0,
            max_relative = 1e-12
        );
        // Constant A is the essential-infimum special case.
        assert_eq!(
            lambda_ar1(&c, 0.25).unwrap().lambda(),
            lambda_fixed_point(&c, 0.25).unwrap().lambda()
        );
        let c4 = IedClass::unit(1.0, 0.25).unwrap();
        assert_relative_eq!(lambda_fixed_point(&c4, 0.25).unwrap().lambda(), 1.0);
        assert_eq!(lambda_fixed_point(&c, 0.0).unwrap().lambda(), 0.5);
        assert!(lambda_fixed_point(&c, 1.0).is_err());
    }

    #[test]
    fn lambda_n_formula_and_limit() {
        let c = IedClass::unit(1.0, 0.5).unwrap();
        assert_eq!(lambda_n_fixed_point(&c, 0.25, 1).unwrap().lambda(), 0.5);
        assert_relative_eq!(
            lambda_n_fixed_point(&c, 0.25, 2).unwrap().lambda(),
            1.125,
            max_relative = 1e-12
        );
        let lim = lambda_fixed_point(&c, 0.25).unwrap().lambda();
        let mut prev = 0.0;
        for n in 1..=80 {
            let v = lambda_n_fixed_point(&c, 0.25, n).unwrap().lambda();
            assert!(v >= prev && v <= lim * (1.0 + 1e-12));
            prev = v;
        }
        assert!((lim - lambda_n_fixed_point(&c, 0.25, 60).unwrap().lambda()).abs() < 1e-6);
    }

    #[test]
    fn contraction_reports() {
        let mut rng = RngStream::new(4, 0);
        let r = contraction_check(&fig1_spec(), 10_000, &mut rng).unwrap();
        assert_relative_eq!(r.e_log_a, 0.25f64.ln(), max_relative = 1e-9);
        assert!(r.stderr < 1e-8, "stderr {}", r.stderr);
        assert!(r.pass);
        assert!(r.e_logplus_b <= 1e-12); // capped at 1, log+ is 0
        let mut rng = RngStream::new(4, 1);
        let r = contraction_check(&CoeffPairSpec::FlemingViotPair, 100_000, &mut rng).unwrap();
        assert!((r.e_log_a + 2f64.ln()).abs() < 0.02, "{}", r.e_log_a);
        assert!(r.pass);
        assert!(r.e_logplus_b > 0.0 && r.e_logplus_b.is_finite());
    }

    #[test]
    fn essinf_validation() {
        let spec = fig1_spec();
        let mut rng = RngStream::new(6, 0);
        assert!(spec.validate_essinf(1000, &mut rng).is_ok());
        let bad = CoeffPairSpec::IndependentPair {
            spec_a: DistributionSpec::HalfCauchyScaled { scale: 0.5 },
            spec_b: DistributionSpec::Constant { value: 1.0 },
            essinf_a: 0.5, // half-Cauchy reaches arbitrarily near 0
            bound_beta: None,
        };
        let mut rng = RngStream::new(6, 1);
        assert!(matches!(
            bad.validate_essinf(100_000, &mut rng),
            Err(IedError::Incompatible(_))
        ));
    }

    #[test]
    fn pqd_flag() {
        assert!(fig1_spec().pqd_theory_applies());
        assert!(!CoeffPairSpec::FlemingViotPair.pqd_theory_applies());
    }

    #[test]
    fn report_serializes_with_fixed_names() {
        let report = ContractionReport {
            e_log_a: -1.0,
            stderr: 0.1,
            e_logplus_b: 0.5,
            pass: true,
        };
        let json = serde_json::to_string(&report).unwrap();
        for key in ["e_log_a", "stderr", "e_logplus_b", "pass"] {
            assert!(json.contains(key), "{json}");
        }
    }
}
