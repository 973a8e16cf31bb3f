//! The IED class triple `(rho, L, lambda)` and its closed-form arithmetic.
//!
//! A nonnegative random variable `X` belongs to the class when
//! `lim_{x->0+} x^rho L(x) log P(X < x) = -lambda` for a function `L` slowly
//! varying at 0. Everything in this module is pure parameter arithmetic:
//! scaling, powers, finite weighted sums, infinite series, and the Laplace
//! exponent coefficients used by the transform-based estimator.

use serde::{Deserialize, Serialize};

use crate::error::{IedError, Result};

/// The slowly varying factor `L`. Either identically 1 or user-tabulated on
/// a finite grid; `L` is never estimated from data.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum SlowVarSpec {
    /// `L(x) = 1` everywhere.
    Unit,
    /// Piecewise-linear interpolation of strictly positive values on a
    /// strictly increasing grid. Evaluation outside `[xs[0], xs[last]]` is a
    /// domain error.
    Tabulated { xs: Vec<f64>, values: Vec<f64> },
}

impl SlowVarSpec {
    pub fn tabulated(xs: Vec<f64>, values: Vec<f64>) -> Result<Self> {
        if xs.len() < 2 || xs.len() != values.len() {
            return Err(IedError::Argument(
                "tabulated L needs at least two (x, L(x)) pairs of equal length".into(),
            ));
        }
        if !xs.windows(2).all(|w| w[0] < w[1]) {
            return Err(IedError::Argument(
                "tabulated L grid must be strictly increasing".into(),
            ));
        }
        if !xs.iter().all(|&x| x > 0.0) || !values.iter().all(|&v| v > 0.0 && v.is_finite()) {
            return Err(IedError::Argument(
                "tabulated L grid and values must be strictly positive".into(),
            ));
        }
        Ok(SlowVarSpec::Tabulated { xs, values })
    }

    pub fn is_unit(&self) -> bool {
        matches!(self, SlowVarSpec::Unit)
    }

    /// Evaluate `L(x)`.
    pub fn eval(&self, x: f64) -> Result<f64> {
        match self {
            SlowVarSpec::Unit => {
                if x > 0.0 {
                    Ok(1.0)
                } else {
                    Err(IedError::Domain(format!("L evaluated at x = {x} <= 0")))
                }
            }
            SlowVarSpec::Tabulated { xs, values } => {
                let (lo, hi) = (xs[0], *xs.last().unwrap());
                if x < lo || x > hi {
                    return Err(IedError::Domain(format!(
                        "x = {x} outside tabulated window [{lo}, {hi}]"
                    )));
                }
                let i = match xs.binary_search_by(|p| p.partial_cmp(&x).unwrap()) {
                    Ok(i) => return Ok(values[i]),
                    Err(i) => i,
                };
                let t = (x - xs[i - 1]) / (xs[i] - xs[i - 1]);
                Ok(values[i - 1] + t * (values[i] - values[i - 1]))
            }
        }
    }

    /// The interval on which `L` is defined.
    fn window(&self) -> Option<(f64, f64)> {
        match self {
            SlowVarSpec::Unit => None,
            SlowVarSpec::Tabulated { xs, .. } => Some((xs[0], *xs.last().unwrap())),
        }
    }
}

/// The class parameters `(rho, L, lambda)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IedClass {
    rho: f64,
    lambda: f64,
    slow_var: SlowVarSpec,
}

impl IedClass {
    pub fn new(rho: f64, lambda: f64, slow_var: SlowVarSpec) -> Result<Self> {
        if !(rho > 0.0) || !rho.is_finite() {
            return Err(IedError::Argument(format!("rho = {rho} must be positive")));
        }
        if !(lambda >= 0.0) || !lambda.is_finite() {
            return Err(IedError::Argument(format!(
                "lambda = {lambda} must be nonnegative"
            )));
        }
        Ok(IedClass {
            rho,
            lambda,
            slow_var,
        })
    }

    /// Class with `L = 1`.
    pub fn unit(rho: f64, lambda: f64) -> Result<Self> {
        IedClass::new(rho, lambda, SlowVarSpec::Unit)
    }

    pub fn rho(&self) -> f64 {
        self.rho
    }

    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    pub fn slow_var(&self) -> &SlowVarSpec {
        &self.slow_var
    }

    /// Same `(rho, L)` with a different decay constant.
    pub fn with_lambda(&self, lambda: f64) -> Result<Self> {
        IedClass::new(self.rho, lambda, self.slow_var.clone())
    }

    /// The regularly varying rate function `f(x) = x^rho L(x)`.
    pub fn regvar(&self, x: f64) -> Result<f64> {
        if !(x > 0.0) {
            return Err(IedError::Domain(format!("x = {x} must be positive")));
        }
        Ok(x.powf(self.rho) * self.slow_var.eval(x)?)
    }

    /// The generalized inverse `g(y)` of `x -> x^rho L(x)`, exact `y^{1/rho}`
    /// for unit `L`, otherwise bisection on the tabulated monotone window to
    /// relative tolerance 1e-10.
    pub fn envelope_scale(&self, y: f64) -> Result<f64> {
        if !(y > 0.0) {
            return Err(IedError::Domain(format!("y = {y} must be positive")));
        }
        if self.slow_var.is_unit() {
            return Ok(y.powf(1.0 / self.rho));
        }
        let (mut lo, mut hi) = self.slow_var.window().unwrap();
        let (flo, fhi) = (self.regvar(lo)?, self.regvar(hi)?);
        if !(flo <= y && y <= fhi) {
            return Err(IedError::Domain(format!(
                "y = {y} not bracketed by the window image [{flo}, {fhi}]"
            )));
        }
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if self.regvar(mid)? < y {
                lo = mid;
            } else {
                hi = mid;
            }
            if (hi - lo) <= 1e-10 * hi {
                break;
            }
        }
        Ok(0.5 * (lo + hi))
    }

    /// Parameters of `alpha * X`: `(rho, L, alpha^rho * lambda)`.
    pub fn scale(&self, alpha: f64) -> Result<IedClass> {
        if !(alpha > 0.0) || !alpha.is_finite() {
            return Err(IedError::Argument(format!(
                "scale alpha = {alpha} must be positive"
            )));
        }
        IedClass::new(
            self.rho,
            alpha.powf(self.rho) * self.lambda,
            self.slow_var.clone(),
        )
    }

    /// Parameters of `X^gamma`: `(rho/gamma, L(x^{1/gamma}), lambda)`.
    pub fn power(&self, gamma: f64) -> Result<IedClass> {
        if !(gamma > 0.0) || !gamma.is_finite() {
            return Err(IedError::Argument(format!(
                "power gamma = {gamma} must be positive"
            )));
        }
        let slow_var = match &self.slow_var {
            SlowVarSpec::Unit => SlowVarSpec::Unit,
            SlowVarSpec::Tabulated { xs, values } => {
                // L1(x) = L(x^{1/gamma}): reuse the values on the pushed-forward grid.
                let xs1: Vec<f64> = xs.iter().map(|&x| x.powf(gamma)).collect();
                SlowVarSpec::Tabulated {
                    xs: xs1,
                    values: values.clone(),
                }
            }
        };
        IedClass::new(self.rho / gamma, self.lambda, slow_var)
    }

    /// Exponent and coefficient of the Laplace-transform asymptote
    /// `-log M(z) ~ coeff * z^exponent` as `z -> infinity`, for unit `L`:
    /// exponent `rho/(1+rho)`, coefficient `(1 + 1/rho)(lambda rho)^{1/(1+rho)}`.
    pub fn bruijn_exponent(&self) -> Result<(f64, f64)> {
        if !self.slow_var.is_unit() {
            return Err(IedError::Unsupported(
                "Laplace exponent coefficients are only available for unit L".into(),
            ));
        }
        let e = self.rho / (1.0 + self.rho);
        let c = (1.0 + 1.0 / self.rho) * (self.lambda * self.rho).powf(1.0 / (1.0 + self.rho));
        Ok((e, c))
    }
}

/// Result of [`ied_sum`]: the class of the weighted sum plus the indices of
/// lower-`rho` terms that contribute 0 to the decay constant and were dropped.
#[derive(Debug, Clone)]
pub struct IedSum {
    pub class: IedClass,
    /// Indices (into the input list) of terms with `rho_i < max rho`.
    pub dropped: Vec<usize>,
}

/// Class of a finite weighted sum `sum_i w_i X_i` of independent members.
///
/// The maximal `rho` wins; among those terms
/// `Lambda = (sum (w_i^rho lambda_i)^{1/(1+rho)})^{1+rho}`, and lower-`rho`
/// terms contribute exactly 0 (they are recorded in `dropped`).
pub fn ied_sum(terms: &[(IedClass, f64)]) -> Result<IedSum> {
    if terms.is_empty() {
        return Err(IedError::Argument("ied_sum of an empty list".into()));
    }
    for (i, (_, w)) in terms.iter().enumerate() {
        if !(*w > 0.0) || !w.is_finite() {
            return Err(IedError::Argument(format!(
                "weight {w} at index {i} must be positive"
            )));
        }
    }
    let rho_max = terms.iter().map(|(c, _)| c.rho).fold(f64::MIN, f64::max);
    let lead: Vec<&(IedClass, f64)> = terms.iter().filter(|(c, _)| c.rho == rho_max).collect();
    let slow_var = lead[0].0.slow_var.clone();
    if !lead.iter().all(|(c, _)| c.slow_var == slow_var) {
        return Err(IedError::Incompatible(
            "maximal-rho terms carry different slowly varying factors".into(),
        ));
    }
    let inv = 1.0 / (1.0 + rho_max);
    let root_sum: f64 = lead
        .iter()
        .map(|(c, w)| (w.powf(rho_max) * c.lambda).powf(inv))
        .sum();
    let lambda = root_sum.powf(1.0 + rho_max);
    let dropped = terms
        .iter()
        .enumerate()
        .filter(|(_, (c, _))| c.rho < rho_max)
        .map(|(i, _)| i)
        .collect();
    Ok(IedSum {
        class: IedClass::new(rho_max, lambda, slow_var)?,
        dropped,
    })
}

/// Positive series weights `(alpha_i)` with an optional geometric decay hint
/// `kappa` (meaning `alpha_i` decays roughly like `kappa^i`).
#[derive(Debug, Clone)]
pub struct SeriesWeights {
    weights: Vec<f64>,
    decay_hint: Option<f64>,
}

impl SeriesWeights {
    pub fn new(weights: Vec<f64>, decay_hint: Option<f64>) -> Result<Self> {
        if weights.is_empty() {
            return Err(IedError::Argument("series weights are empty".into()));
        }
        if !weights.iter().all(|&w| w > 0.0 && w.is_finite()) {
            return Err(IedError::Argument(
                "series weights must all be positive and finite".into(),
            ));
        }
        if let Some(k) = decay_hint {
            if !(k > 0.0 && k < 1.0) {
                return Err(IedError::Argument(format!(
                    "geometric decay hint {k} must lie in (0, 1)"
                )));
            }
        }
        Ok(SeriesWeights {
            weights,
            decay_hint,
        })
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }
}

/// Result of [`ied_series`].
#[derive(Debug, Clone)]
pub struct SeriesResult {
    pub class: IedClass,
    /// Bound on the error in `Lambda` from truncating the weight series.
    pub truncation_error: f64,
    /// Number of weights actually consumed.
    pub terms_used: usize,
}

// Stop once this many consecutive increments are relatively negligible.
const STABLE_RUN: usize = 64;
const STABLE_REL: f64 = 1e-12;

/// Class of the series `sum_i alpha_i X_i` with i.i.d. `X_i` in `class`:
/// `Lambda = lambda (sum_i alpha_i^{rho/(1+rho)})^{1+rho}`, with the tail of
/// the weight sum beyond the supplied terms extrapolated from the observed
/// decay (geometric when hinted or detected, power-law otherwise).
///
/// Divergence — increments that fail to decay — is an error rather than a
/// silently wrong constant.
pub fn ied_series(class: &IedClass, weights: &SeriesWeights) -> Result<SeriesResult> {
    let e = class.rho / (1.0 + class.rho);
    let terms: Vec<f64> = weights.weights.iter().map(|&w| w.powf(e)).collect();

    // Compensated partial sum with early stop on stabilization.
    let mut sum = 0.0f64;
    let mut comp = 0.0f64;
    let mut small_run = 0usize;
    let mut used = terms.len();
    for (i, &t) in terms.iter().enumerate() {
        let y = t - comp;
        let s = sum + y;
        comp = (s - sum) - y;
        sum = s;
        if t <= STABLE_REL * sum {
            small_run += 1;
            if small_run >= STABLE_RUN {
                used = i + 1;
                break;
            }
        } else {
            small_run = 0;
        }
    }
    let tail = series_tail_estimate(&terms[..used], weights.decay_hint.map(|k| k.powf(e)), sum)?;
    let total = sum + tail;
    let lambda = class.lambda * total.powf(1.0 + class.rho);
    // First-order effect of the tail uncertainty on Lambda.
    let truncation_error =
        class.lambda * (1.0 + class.rho) * total.powf(class.rho) * tail.max(f64::MIN_POSITIVE);
    Ok(SeriesResult {
        class: class.with_lambda(lambda)?,
        truncation_error,
        terms_used: used,
    })
}

/// Estimate the tail `sum_{i > N} t_i` of a positive decaying term sequence.
///
/// Preference order: an explicit geometric ratio (already raised to the
/// series exponent), then a geometric fit when the term ratios are bounded
/// away from 1, then a power-law fit `t_i ~ c i^{-p}` integrated beyond the
/// last index. Non-decaying terms are a divergence error.
fn series_tail_estimate(terms: &[f64], geom_ratio: Option<f64>, sum: f64) -> Result<f64> {
    let n = terms.len();
    let last = terms[n - 1];
    if let Some(q) = geom_ratio {
        return Ok(last * q / (1.0 - q));
    }
    if n < 8 {
        // Short explicit weight lists are taken as complete finite sums.
        return Ok(0.0);
    }
    let window = n.min(32);
    let tail_terms = &terms[n - window..];
    let max_ratio = tail_terms
        .windows(2)
        .map(|w| w[1] / w[0])
        .fold(0.0f64, f64::max);
    if max_ratio >= 1.0 {
        if last <= STABLE_REL * sum {
            // Flat but already below resolution: remainder is negligible.
            return Ok(0.0);
        }
        return Err(IedError::Divergence(format!(
            "series increments are not decaying (max ratio {max_ratio:.6} over the last {window} terms)"
        )));
    }
    if max_ratio < 0.999 {
        // Clearly geometric.
        return Ok(last * max_ratio / (1.0 - max_ratio));
    }
    // Power-law fit t_i ~ c i^{-p} over the window, least squares in log-log.
    let pts: Vec<(f64, f64)> = tail_terms
        .iter()
        .enumerate()
        .map(|(j, &t)| (((n - window + j + 1) as f64).ln(), t.ln()))
        .collect();
    let m = pts.len() as f64;
    let sx: f64 = pts.iter().map(|p| p.0).sum();
    let sy: f64 = pts.iter().map(|p| p.1).sum();
    let sxx: f64 = pts.iter().map(|p| p.0 * p.0).sum();
    let sxy: f64 = pts.iter().map(|p| p.0 * p.1).sum();
    let slope = (m * sxy - sx * sy) / (m * sxx - sx * sx);
    let p = -slope;
    if !(p > 1.0 + 1e-6) {
        return Err(IedError::Divergence(format!(
            "fitted decay exponent {p:.4} does not certify a convergent tail"
        )));
    }
    // Midpoint-corrected integral of c x^{-p} beyond N, with c = t_N N^p.
    let nn = n as f64;
    Ok(last * nn.powf(p) * (nn + 0.5).powf(1.0 - p) / (p - 1.0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::{assert_abs_diff_eq, assert_relative_eq};

    fn unit(rho: f64, lambda: f64) -> IedClass {
        IedClass::unit(rho, lambda).unwrap()
    }

    fn constant_l(value: f64) -> SlowVarSpec {
        SlowVarSpec::tabulated(vec![1e-6, 1.0], vec![value, value]).unwrap()
    }

    #[test]
    fn regvar_closed_forms() {
        assert_eq!(unit(1.0, 1.0).regvar(0.5).unwrap(), 0.5);
        assert_eq!(unit(2.0, 1.0).regvar(0.25).unwrap(), 0.0625);
        let c = IedClass::new(1.0, 1.0, constant_l(2.0)).unwrap();
        assert_relative_eq!(c.regvar(0.5).unwrap(), 1.0);
    }

    #[test]
    fn regvar_rejects_out_of_window() {
        let c = IedClass::new(1.0, 1.0, constant_l(2.0)).unwrap();
        assert!(matches!(c.regvar(2.0), Err(IedError::Domain(_))));
        assert!(matches!(unit(1.0, 1.0).regvar(-1.0), Err(IedError::Domain(_))));
    }

    #[test]
    fn envelope_scale_closed_forms() {
        assert_eq!(unit(1.0, 1.0).envelope_scale(0.01).unwrap(), 0.01);
        assert_relative_eq!(unit(2.0, 1.0).envelope_scale(0.04).unwrap(), 0.2);
        // Bisection: solve 2x = 0.5.
        let c = IedClass::new(1.0, 1.0, constant_l(2.0)).unwrap();
        assert_abs_diff_eq!(c.envelope_scale(0.5).unwrap(), 0.25, epsilon = 1e-9);
    }

    #[test]
    fn envelope_scale_inverts_regvar() {
        let c = unit(2.0, 3.0);
        for &x in &[1e-4, 1e-2, 0.3, 0.9] {
            let y = c.regvar(x).unwrap();
            let back = c.envelope_scale(y).unwrap();
            assert!(((back - x) / x).abs() < 1e-8);
        }
    }

    #[test]
    fn scale_formula() {
        let c = unit(1.0, 3.0).scale(2.0).unwrap();
        assert_eq!((c.rho(), c.lambda()), (1.0, 6.0));
        let c = unit(2.0, 0.5).scale(2.0).unwrap();
        assert_eq!(c.lambda(), 2.0);
        let c = unit(1.0, 0.0).scale(7.0).unwrap();
        assert_eq!(c.lambda(), 0.0);
        assert!(unit(1.0, 1.0).scale(0.0).is_err());
    }

    #[test]
    fn power_formula() {
        // |X|^{-1} = (X^{-2})^{1/2}: a (rho=1, lambda) class becomes (rho=2, lambda).
        let c = unit(1.0, 0.5).power(0.5).unwrap();
        assert_eq!((c.rho(), c.lambda()), (2.0, 0.5));
        let c = unit(2.0, 3.0).power(2.0).unwrap();
        assert_eq!((c.rho(), c.lambda()), (1.0, 3.0));
        let c = unit(1.0, 1.0).power(1.0).unwrap();
        assert_eq!((c.rho(), c.lambda()), (1.0, 1.0));
        assert!(unit(1.0, 1.0).power(-1.0).is_err());
    }

    #[test]
    fn sum_formula() {
        let s = ied_sum(&[(unit(1.0, 1.0), 1.0), (unit(1.0, 1.0), 1.0)]).unwrap();
        assert_relative_eq!(s.class.lambda(), 4.0);
        assert!(s.dropped.is_empty());

        // Mixed rho: the lower-rho term contributes zero and is recorded.
        let s = ied_sum(&[(unit(1.0, 5.0), 1.0), (unit(2.0, 3.0), 2.0)]).unwrap();
        assert_eq!(s.class.rho(), 2.0);
        assert_relative_eq!(s.class.lambda(), 12.0, max_relative = 1e-12);
        assert_eq!(s.dropped, vec![0]);

        let s = ied_sum(&[(unit(1.0, 0.25), 1.0)]).unwrap();
        assert_relative_eq!(s.class.lambda(), 0.25);

        assert!(ied_sum(&[]).is_err());
    }

    #[test]
    fn sum_rejects_mismatched_l() {
        let a = IedClass::new(1.0, 1.0, constant_l(2.0)).unwrap();
        let b = unit(1.0, 1.0);
        assert!(matches!(
            ied_sum(&[(a, 1.0), (b, 1.0)]),
            Err(IedError::Incompatible(_))
        ));
    }

    #[test]
    fn series_geometric_quarter() {
        // alpha_i = 4^{-(i-1)}, rho = 1, lambda = 1/2 gives Lambda = 2.
        let w: Vec<f64> = (0..200).map(|i| 0.25f64.powi(i)).collect();
        let sw = SeriesWeights::new(w, Some(0.25)).unwrap();
        let r = ied_series(&unit(1.0, 0.5), &sw).unwrap();
        assert_relative_eq!(r.class.lambda(), 2.0, max_relative = 1e-12);
    }

    #[test]
    fn series_single_weight() {
        let sw = SeriesWeights::new(vec![1.0], None).unwrap();
        let r = ied_series(&unit(1.0, 1.0), &sw).unwrap();
        assert_relative_eq!(r.class.lambda(), 1.0);
    }

    #[test]
    fn series_quartic_weights_match_basel() {
        // alpha_i = i^{-4}, rho = 1: Lambda = (sum i^{-2})^2 = (pi^2/6)^2.
        let w: Vec<f64> = (1..=200_000).map(|i| (i as f64).powi(-4)).collect();
        let sw = SeriesWeights::new(w, None).unwrap();
        let r = ied_series(&unit(1.0, 1.0), &sw).unwrap();
        let basel = std::f64::consts::PI * std::f64::consts::PI / 6.0;
        assert_abs_diff_eq!(r.class.lambda(), basel * basel, epsilon = 1e-9);
    }

    #[test]
    fn series_divergence_flagged() {
        let sw = SeriesWeights::new(vec![1.0; 4096], None).unwrap();
        assert!(matches!(
            ied_series(&unit(1.0, 1.0), &sw),
            Err(IedError::Divergence(_))
        ));
        // Harmonic-like weights: alpha_i^{1/2} = i^{-1} diverges.
        let w: Vec<f64> = (1..=4096).map(|i| (i as f64).powi(-2)).collect();
        let sw = SeriesWeights::new(w, None).unwrap();
        assert!(matches!(
            ied_series(&unit(1.0, 1.0), &sw),
            Err(IedError::Divergence(_))
        ));
    }

    #[test]
    fn series_consistent_with_finite_sum() {
        // A short list with no hint is a complete finite sum and must match
        // ied_sum exactly.
        let class = unit(1.0, 0.7);
        let weights = [1.0, 0.5, 0.25, 0.125];
        let sw = SeriesWeights::new(weights.to_vec(), None).unwrap();
        let via_series = ied_series(&class, &sw).unwrap().class.lambda();
        let terms: Vec<(IedClass, f64)> = weights.iter().map(|&w| (class.clone(), w)).collect();
        let via_sum = ied_sum(&terms).unwrap().class.lambda();
        assert_relative_eq!(via_series, via_sum, max_relative = 1e-12);
        // With a hint, the geometric tail beyond the list is included: four
        // terms of 4^{-(i-1)} plus the hinted tail give the infinite-series
        // constant 0.7/(1 - 1/2)^2 exactly.
        let weights = [1.0, 0.25, 0.0625, 0.015625];
        let sw = SeriesWeights::new(weights.to_vec(), Some(0.25)).unwrap();
        let r = ied_series(&class, &sw).unwrap();
        assert_relative_eq!(r.class.lambda(), 2.8, max_relative = 1e-12);
        assert!(r.truncation_error > 0.0);
        // A long, stabilized geometric list agrees with ied_sum to full
        // precision: the hinted tail is below resolution there. (The series
        // exponent halves the decay rate, so this needs ~200 terms.)
        let weights: Vec<f64> = (0..200).map(|i| 0.5f64.powi(i)).collect();
        let sw = SeriesWeights::new(weights.clone(), Some(0.5)).unwrap();
        let via_series = ied_series(&class, &sw).unwrap().class.lambda();
        let terms: Vec<(IedClass, f64)> = weights.iter().map(|&w| (class.clone(), w)).collect();
        let via_sum = ied_sum(&terms).unwrap().class.lambda();
        assert_relative_eq!(via_series, via_sum, max_relative = 1e-12);
    }

    #[test]
    fn bruijn_exponent_values() {
        let (e, c) = unit(1.0, 1.0).bruijn_exponent().unwrap();
        assert_eq!((e, c), (0.5, 2.0));
        let (e, c) = unit(1.0, 4.0).bruijn_exponent().unwrap();
        assert_eq!(e, 0.5);
        assert_relative_eq!(c, 4.0);
        let (e, c) = unit(2.0, 1.0).bruijn_exponent().unwrap();
        assert_relative_eq!(e, 2.0 / 3.0);
        assert_relative_eq!(c, 1.5 * 2f64.powf(1.0 / 3.0), max_relative = 1e-12);
        let tab = IedClass::new(1.0, 1.0, constant_l(2.0)).unwrap();
        assert!(matches!(
            tab.bruijn_exponent(),
            Err(IedError::Unsupported(_))
        ));
    }

    #[test]
    fn scale_composes() {
        let c = unit(1.7, 0.9);
        let ab = c.scale(1.3).unwrap().scale(2.1).unwrap();
        let direct = c.scale(1.3 * 2.1).unwrap();
        assert_relative_eq!(ab.lambda(), direct.lambda(), max_relative = 1e-12);
    }

    #[test]
    fn power_round_trips() {
        let c = unit(1.4, 2.2);
        let back = c.power(0.37).unwrap().power(1.0 / 0.37).unwrap();
        assert_relative_eq!(back.rho(), c.rho(), max_relative = 1e-12);
        assert_eq!(back.lambda(), c.lambda());
    }
}
