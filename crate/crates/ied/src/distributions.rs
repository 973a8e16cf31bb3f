//! Samplers, CDFs, and known class parameters for the concrete laws used
//! throughout the crate.

use rand::Rng;
use rand_distr::{Cauchy, Distribution, Exp, Gamma, Normal};
use serde::{Deserialize, Serialize};
use statrs::distribution::{ContinuousCDF, Normal as StatNormal};
use statrs::function::gamma::gamma_ur;

use crate::class::IedClass;
use crate::error::{IedError, Result};
use crate::rng::RngStream;

/// A positive-noise law: sampler, closed-form CDF where one exists, and the
/// theoretical class parameters where known.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "dist", rename_all = "kebab-case")]
pub enum DistributionSpec {
    /// Reciprocal of a gamma variable: density `beta^alpha/Gamma(alpha) x^{-alpha-1} e^{-beta/x}`.
    InverseGamma { alpha: f64, beta: f64 },
    /// `min(E^{-1}, cap)` for `E` exponential with the given rate; `cap = None` leaves it uncapped.
    ReciprocalExponential { rate: f64, cap: Option<f64> },
    /// `|N(mu, sigma^2)|^{-1}`.
    ReciprocalAbsNormal { mu: f64, sigma: f64 },
    /// The bounded law `F_i(x) = e^{1 - tau_i} e^{-1/(2^i x)}` on `(0, 2^{-i})`
    /// with an atom at `2^{-i}`, `tau_i = c 2^{i - 1/2}`.
    CounterexampleB { index: u32, c: f64 },
    /// Half-Cauchy with scale `s`: density `2/(pi s (1 + (a/s)^2))` on `a > 0`.
    HalfCauchyScaled { scale: f64 },
    /// Point mass.
    Constant { value: f64 },
}

use DistributionSpec::*;

impl DistributionSpec {
    /// Validate parameters; every constructor goes through here so `sample`
    /// and `cdf` can assume a well-formed spec.
    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(IedError::Argument(msg));
        match *self {
            InverseGamma { alpha, beta } => {
                if alpha > 0.0 && beta > 0.0 {
                    Ok(())
                } else {
                    bad(format!("inverse gamma needs alpha, beta > 0, got ({alpha}, {beta})"))
                }
            }
            ReciprocalExponential { rate, cap } => {
                if rate <= 0.0 {
                    return bad(format!("reciprocal exponential rate {rate} must be positive"));
                }
                if let Some(c) = cap {
                    if c <= 0.0 {
                        return bad(format!("cap {c} must be positive"));
                    }
                }
                Ok(())
            }
            ReciprocalAbsNormal { sigma, .. } => {
                if sigma > 0.0 {
                    Ok(())
                } else {
                    bad(format!("sigma {sigma} must be positive"))
                }
            }
            CounterexampleB { index, c } => {
                if index >= 1 && c > 0.0 {
                    Ok(())
                } else {
                    bad(format!("counterexample law needs index >= 1 and c > 0, got ({index}, {c})"))
                }
            }
            HalfCauchyScaled { scale } => {
                if scale > 0.0 {
                    Ok(())
                } else {
                    bad(format!("scale {scale} must be positive"))
                }
            }
            Constant { value } => {
                if value >= 0.0 && value.is_finite() {
                    Ok(())
                } else {
                    bad(format!("constant value {value} must be finite and nonnegative"))
                }
            }
        }
    }

    /// One draw from the law.
    pub fn sample(&self, rng: &mut RngStream) -> f64 {
        match *self {
            InverseGamma { alpha, beta } => {
                // Reciprocal identity: 1/G with G ~ Gamma(shape alpha, rate beta).
                let g = Gamma::new(alpha, 1.0 / beta).unwrap();
                loop {
                    let v = g.sample(rng);
                    if v > 0.0 {
                        return 1.0 / v;
                    }
                }
            }
            ReciprocalExponential { rate, cap } => {
                let e: f64 = Exp::new(rate).unwrap().sample(rng);
                let x = if e > 0.0 { 1.0 / e } else { f64::INFINITY };
                match cap {
                    Some(c) => x.min(c),
                    None => x,
                }
            }
            ReciprocalAbsNormal { mu, sigma } => {
                let normal = Normal::new(mu, sigma).unwrap();
                loop {
                    let v: f64 = normal.sample(rng);
                    // Guard |N| near zero so the reciprocal cannot overflow.
                    if v.abs() > 1e-300 {
                        return 1.0 / v.abs();
                    }
                }
            }
            CounterexampleB { index, c } => {
                let tau = c * 2f64.powf(index as f64 - 0.5);
                let scale = 2f64.powi(-(index as i32));
                let u: f64 = rng.gen_range(0.0..1.0);
                // Atom of mass 1 - e^{-tau} at the upper endpoint; below it the
                // continuous branch inverts in closed form.
                if u >= (-tau).exp() {
                    scale
                } else {
                    // u = e^{1 - tau} e^{-1/(2^i x)}  =>  1/(2^i x) = 1 - tau - ln u.
                    1.0 / (2f64.powi(index as i32) * (1.0 - tau - u.ln()))
                }
            }
            HalfCauchyScaled { scale } => {
                let v: f64 = Cauchy::new(0.0, scale).unwrap().sample(rng);
                let a = v.abs();
                if a > 0.0 {
                    a
                } else {
                    f64::MIN_POSITIVE
                }
            }
            Constant { value } => value,
        }
    }

    /// `P(X <= x)` for `x > 0`; exact where the law has a closed form.
    pub fn cdf(&self, x: f64) -> Result<f64> {
        if !(x > 0.0) {
            return Err(IedError::Domain(format!("cdf argument {x} must be positive")));
        }
        Ok(match *self {
            InverseGamma { alpha, beta } => {
                // P(1/G <= x) = P(G >= beta-rate inverse) = Q(alpha, beta/x).
                gamma_ur(alpha, beta / x)
            }
            ReciprocalExponential { rate, cap } => match cap {
                Some(c) if x >= c => 1.0,
                _ => (-rate / x).exp(),
            },
            ReciprocalAbsNormal { mu, sigma } => {
                let n = StatNormal::new(mu, sigma).unwrap();
                // P(1/|N| <= x) = P(|N| >= 1/x).
                1.0 - (n.cdf(1.0 / x) - n.cdf(-1.0 / x))
            }
            CounterexampleB { index, c } => {
                let tau = c * 2f64.powf(index as f64 - 0.5);
                let upper = 2f64.powi(-(index as i32));
                if x >= upper {
                    1.0
                } else {
                    (1.0 - tau).exp() * (-1.0 / (2f64.powi(index as i32) * x)).exp()
                }
            }
            HalfCauchyScaled { scale } => 2.0 / std::f64::consts::PI * (x / scale).atan(),
            Constant { value } => {
                if x >= value {
                    1.0
                } else {
                    0.0
                }
            }
        })
    }

    /// The class parameters of the left tail, where a closed form exists.
    pub fn theoretical_ied(&self) -> Option<IedClass> {
        match *self {
            InverseGamma { beta, .. } => Some(IedClass::unit(1.0, beta).unwrap()),
            ReciprocalExponential { rate, .. } => Some(IedClass::unit(1.0, rate).unwrap()),
            ReciprocalAbsNormal { sigma, .. } => {
                Some(IedClass::unit(2.0, 1.0 / (2.0 * sigma * sigma)).unwrap())
            }
            CounterexampleB { index, .. } => {
                Some(IedClass::unit(1.0, 2f64.powi(-(index as i32))).unwrap())
            }
            HalfCauchyScaled { .. } => None,
            Constant { .. } => None,
        }
    }

    /// A short human-readable tag used in manifests and CSV metadata.
    pub fn tag(&self) -> String {
        match *self {
            InverseGamma { alpha, beta } => format!("inverse-gamma({alpha},{beta})"),
            ReciprocalExponential { rate, cap } => match cap {
                Some(c) => format!("reciprocal-exponential({rate},cap={c})"),
                None => format!("reciprocal-exponential({rate})"),
            },
            ReciprocalAbsNormal { mu, sigma } => format!("reciprocal-abs-normal({mu},{sigma})"),
            CounterexampleB { index, c } => format!("counterexample-b({index},{c})"),
            HalfCauchyScaled { scale } => format!("half-cauchy({scale})"),
            Constant { value } => format!("constant({value})"),
        }
    }
}

/// The counterexample's partial-sum product `x * sum_{i<=n} tau_i` evaluated at
/// `x = 2^{-(n+1/2)}` with `tau_i = c 2^{i-1/2}`; the geometric sum collapses
/// to the closed form `c (1 - 2^{-n-1})`, which the caller can compare against.
pub fn counterexample_partial_sum(n: u32, c: f64) -> f64 {
    let x = 2f64.powf(-(n as f64 + 0.5));
    let mut sum = 0.0;
    for i in 0..=n {
        sum += c * 2f64.powf(i as f64 - 0.5);
    }
    x * sum
}
