//! Closed-form bounds on the randomness cost of symmetric twirling, entropy
//! helpers, and a consolidated report.
//!
//! All logarithms are base 2.

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Pow, ToPrimitive};
use serde::{Serialize, Serializer};

use crate::design::WeightedDesign;
use crate::error::{Error, Result};
use crate::exact::FloatOperator;
use crate::util::binomial;

/// Slack allowed when comparing a design's entropy rate with a lower bound.
pub const ENTROPY_SLACK: f64 = 1e-9;

/// Shannon entropy in bits of a probability vector.
pub fn shannon_entropy(p: &[f64]) -> Result<f64> {
    if p.is_empty() || p.iter().any(|x| !x.is_finite() || *x < 0.0) {
        return Err(Error::contract("probabilities must be finite and nonnegative"));
    }
    let total: f64 = p.iter().sum();
    if (total - 1.0).abs() > 1e-9 {
        return Err(Error::contract(format!("probabilities sum to {total}")));
    }
    Ok(crate::util::entropy_bits(p.iter().copied()))
}

/// `H₂(x)`, with `H₂(0) = H₂(1) = 0`.
pub fn binary_entropy(x: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&x) {
        return Err(Error::invalid(format!("binary entropy argument {x} outside [0, 1]")));
    }
    Ok(crate::util::entropy_bits([x, 1.0 - x]))
}

/// `d^{4n} + 1`: the number of permutations a design ever needs.
pub fn support_upper_bound(d: usize, n: usize) -> BigUint {
    Pow::pow(BigUint::from(d), 4 * n) + BigUint::one()
}

/// `4·log₂(d+1)`: a design from the support bound never needs more than this
/// many bits per subsystem.
pub fn entropy_rate_upper(d: usize) -> f64 {
    4.0 * ((d + 1) as f64).log2()
}

/// `log₂ d − 2d·log₂(n+1)/n`, unclamped.
pub fn entropy_rate_lower(d: usize, n: usize) -> f64 {
    let (d, n) = (d as f64, n as f64);
    d.log2() - 2.0 * d * (n + 1.0).log2() / n
}

/// `2ε·log₂(D−1) + 2H₂(ε)`.
pub fn audenaert_f(eps: f64, dim: f64) -> Result<f64> {
    if dim < 2.0 {
        return Err(Error::invalid(format!("dimension {dim} is below 2")));
    }
    Ok(2.0 * eps * (dim - 1.0).log2() + 2.0 * binary_entropy(eps)?)
}

/// Which dimension enters the continuity term of the approximate bound.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum DimensionConvention {
    /// `D = d^n`, the space the states live on.
    #[default]
    TensorPower,
    /// `D = d`.
    Local,
}

impl DimensionConvention {
    pub fn dimension(self, d: usize, n: usize) -> f64 {
        match self {
            DimensionConvention::TensorPower => (d as f64).powi(n as i32),
            DimensionConvention::Local => d as f64,
        }
    }
}

/// Largest distance accepted by the approximate bound.
pub const MAX_EPS: f64 = 2.0;

/// `entropy_rate_lower(d, n) − f(min(ε, 1), D)/n`.
pub fn entropy_rate_lower_approx(d: usize, n: usize, eps: f64, convention: DimensionConvention) -> Result<f64> {
    if !(0.0..=MAX_EPS).contains(&eps) {
        return Err(Error::invalid(format!("ε = {eps} outside [0, 2]")));
    }
    let f = audenaert_f(eps.min(1.0), convention.dimension(d, n))?;
    Ok(entropy_rate_lower(d, n) - f / n as f64)
}

/// The state bound at local dimension `dK·dH`.
pub fn channel_entropy_rate_lower(dk: usize, dh: usize, n: usize) -> f64 {
    entropy_rate_lower(dk * dh, n)
}

/// `d^n − C(d+n−1, d−1)`; negative for small `n`.
pub fn support_lower_bound(d: usize, n: usize) -> BigInt {
    BigInt::from(Pow::pow(BigUint::from(d), n)) - BigInt::from(sym_dimension(d, n))
}

/// `C(d+n−1, d−1)`, the dimension of the symmetric subspace.
pub fn sym_dimension(d: usize, n: usize) -> BigUint {
    binomial(d + n - 1, d - 1)
}

/// `Σ p_x S(ρ_x) + H(p) − S(Σ p_x ρ_x)`, which is never negative.
pub fn almost_convexity_gap(p: &[f64], states: &[FloatOperator]) -> Result<f64> {
    if p.len() != states.len() {
        return Err(Error::dim(format!("{} weights for {} states", p.len(), states.len())));
    }
    let h = shannon_entropy(p)?;
    let dim = states[0].dim();
    let mut mixture = FloatOperator::zeros(dim);
    let mut average = 0.0;
    for (&px, rho) in p.iter().zip(states) {
        rho.check_density()?;
        average += px * rho.von_neumann_entropy()?;
        mixture = mixture.add(&rho.scale(px))?;
    }
    let gap = average + h - mixture.von_neumann_entropy()?;
    if gap < -ENTROPY_SLACK {
        return Err(Error::contract(format!("negative almost-convexity gap {gap}")));
    }
    Ok(gap)
}

/// `T·log₂(D−1) + H₂(T) − |S(ρ) − S(σ)|` with `T = ½‖ρ − σ‖₁`; never negative.
pub fn fannes_audenaert_slack(rho: &FloatOperator, sigma: &FloatOperator) -> Result<f64> {
    rho.check_density()?;
    sigma.check_density()?;
    let t = (0.5 * rho.sub(sigma)?.trace_norm()?).clamp(0.0, 1.0);
    let dim = rho.dim() as f64;
    let modulus = if dim < 2.0 { 0.0 } else { t * (dim - 1.0).log2() + binary_entropy(t)? };
    Ok(modulus - (rho.von_neumann_entropy()? - sigma.von_neumann_entropy()?).abs())
}

/// A bound that may be negative, alongside its value clamped at zero.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Clamped {
    pub raw: f64,
    pub clamped: f64,
}

impl From<f64> for Clamped {
    fn from(raw: f64) -> Self {
        Clamped { raw, clamped: raw.max(0.0) }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ApproxSection {
    pub eps: f64,
    /// Whether `ε` was clamped to 1 inside the continuity term.
    pub eps_clamped: bool,
    pub dimension_convention: DimensionConvention,
    pub continuity_dimension: f64,
    pub entropy_rate_lower: Clamped,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DesignSection {
    pub support: usize,
    pub entropy_bits: f64,
    pub entropy_rate: f64,
    pub rate_meets_lower_bound: bool,
    /// The lower bound is negative, so meeting it says nothing.
    pub rate_bound_vacuous: bool,
    pub support_within_bounds: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BoundsReport {
    pub d: usize,
    pub n: usize,
    #[serde(serialize_with = "as_number")]
    pub support_upper_bound: BigUint,
    #[serde(serialize_with = "as_signed_number")]
    pub support_lower_bound: BigInt,
    #[serde(serialize_with = "as_number")]
    pub sym_dimension: BigUint,
    pub entropy_rate_upper: f64,
    pub entropy_rate_lower: Clamped,
    /// Channel bound with `dK = dH = d`.
    pub channel_entropy_rate_lower: Clamped,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub approx: Option<ApproxSection>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub design: Option<DesignSection>,
}

fn as_number<S: Serializer>(value: &BigUint, s: S) -> std::result::Result<S::Ok, S::Error> {
    match value.to_u64() {
        Some(v) => s.serialize_u64(v),
        None => s.serialize_str(&value.to_string()),
    }
}

fn as_signed_number<S: Serializer>(value: &BigInt, s: S) -> std::result::Result<S::Ok, S::Error> {
    match value.to_i64() {
        Some(v) => s.serialize_i64(v),
        None => s.serialize_str(&value.to_string()),
    }
}

/// Evaluates every bound for `(d, n)`; with a design, also its entropy rate
/// and the bound verdicts. Designs can only be obtained through verification,
/// so a supplied design is always a real one.
pub fn bounds_report(
    d: usize,
    n: usize,
    design: Option<&WeightedDesign>,
    eps: Option<f64>,
    convention: DimensionConvention,
) -> Result<BoundsReport> {
    if d == 0 || n == 0 {
        return Err(Error::invalid("d and n must be at least 1"));
    }
    let lower = entropy_rate_lower(d, n);
    let upper_support = support_upper_bound(d, n);
    let lower_support = support_lower_bound(d, n);

    let approx = eps
        .map(|eps| -> Result<ApproxSection> {
            Ok(ApproxSection {
                eps,
                eps_clamped: eps > 1.0,
                dimension_convention: convention,
                continuity_dimension: convention.dimension(d, n),
                entropy_rate_lower: entropy_rate_lower_approx(d, n, eps, convention)?.into(),
            })
        })
        .transpose()?;

    let design = design
        .map(|w| -> Result<DesignSection> {
            if w.d() != d || w.n() != n {
                return Err(Error::dim(format!("design for d={}, n={} in a report for d={d}, n={n}", w.d(), w.n())));
            }
            let support = w.support_len();
            let entropy_bits = w.entropy_bits();
            let entropy_rate = entropy_bits / n as f64;
            Ok(DesignSection {
                support,
                entropy_bits,
                entropy_rate,
                rate_meets_lower_bound: entropy_rate >= lower - ENTROPY_SLACK,
                rate_bound_vacuous: lower < 0.0,
                support_within_bounds: BigInt::from(support) >= lower_support
                    && BigUint::from(support) <= upper_support,
            })
        })
        .transpose()?;

    Ok(BoundsReport {
        d,
        n,
        support_upper_bound: upper_support,
        support_lower_bound: lower_support,
        sym_dimension: sym_dimension(d, n),
        entropy_rate_upper: entropy_rate_upper(d),
        entropy_rate_lower: lower.into(),
        channel_entropy_rate_lower: channel_entropy_rate_lower(d, d, n).into(),
        approx,
        design,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::limits::Limits;
    use crate::sample;
    use crate::twirl::DistributionOverSn;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol
    }

    #[test]
    fn entropies() {
        assert_eq!(shannon_entropy(&[1.0]).unwrap(), 0.0);
        assert!(close(shannon_entropy(&[0.5, 0.25, 0.25]).unwrap(), 1.5, 1e-15));
        assert!(close(shannon_entropy(&[1.0 / 120.0; 120]).unwrap(), 120f64.log2(), 1e-12));
        assert!(shannon_entropy(&[0.5, 0.4]).is_err());
        assert!(shannon_entropy(&[1.5, -0.5]).is_err());
        assert_eq!(binary_entropy(0.0).unwrap(), 0.0);
        assert_eq!(binary_entropy(1.0).unwrap(), 0.0);
        assert!(close(binary_entropy(0.5).unwrap(), 1.0, 1e-15));
        // -¼log¼ - ¾log¾ = ½ + ¾log(4/3)
        assert!(close(binary_entropy(0.25).unwrap(), 0.5 + 0.75 * (4.0f64 / 3.0).log2(), 1e-15));
        assert!(binary_entropy(1.1).is_err());
    }

    #[test]
    fn support_bounds() {
        assert_eq!(support_upper_bound(2, 1), BigUint::from(17u32));
        assert_eq!(support_upper_bound(2, 2), BigUint::from(257u32));
        assert_eq!(support_upper_bound(1, 9), BigUint::from(2u32));
        assert_eq!(support_upper_bound(2, 5), BigUint::from(1_048_577u32));
        assert_eq!(support_lower_bound(2, 2), BigInt::from(1));
        assert_eq!(support_lower_bound(2, 3), BigInt::from(4));
        assert_eq!(support_lower_bound(2, 5), BigInt::from(26));
        assert_eq!(support_lower_bound(3, 1), BigInt::from(0));
        assert_eq!(sym_dimension(2, 2), BigUint::from(3u32));
        assert_eq!(sym_dimension(2, 5), BigUint::from(6u32));
        assert_eq!(sym_dimension(3, 2), BigUint::from(6u32));
    }

    #[test]
    fn entropy_rates() {
        assert_eq!(entropy_rate_upper(1), 4.0);
        assert!(close(entropy_rate_upper(2), 4.0 * 3f64.log2(), 1e-12));
        assert!(close(entropy_rate_upper(3), 8.0, 1e-12));
        assert!(close(entropy_rate_lower(2, 5), 1.0 - 0.8 * 6f64.log2(), 1e-12));
        assert!(close(entropy_rate_lower(2, 5), -1.0678, 5e-4));
        assert!(entropy_rate_lower(1, 7) < 0.0);
        assert!(close(entropy_rate_lower(2, 1_000_000), 0.99992, 1e-5));
        assert!(close(channel_entropy_rate_lower(2, 2, 5), 2.0 - 1.6 * 6f64.log2(), 1e-12));
        assert!(close(channel_entropy_rate_lower(2, 2, 5), -2.136, 1e-3));
        assert_eq!(channel_entropy_rate_lower(1, 3, 4), entropy_rate_lower(3, 4));
        assert!(close(channel_entropy_rate_lower(2, 2, 1_000_000), 2.0, 1e-3));
    }

    #[test]
    fn continuity_term() {
        assert_eq!(audenaert_f(0.0, 8.0).unwrap(), 0.0);
        assert!(close(audenaert_f(0.5, 4.0).unwrap(), 3f64.log2() + 2.0, 1e-12));
        assert_eq!(audenaert_f(1.0, 2.0).unwrap(), 0.0);
        assert!(audenaert_f(0.1, 1.0).is_err());
    }

    #[test]
    fn approximate_bound() {
        let conv = DimensionConvention::TensorPower;
        assert_eq!(entropy_rate_lower_approx(2, 5, 0.0, conv).unwrap(), entropy_rate_lower(2, 5));
        let expected = entropy_rate_lower(2, 5) - (0.2 * 31f64.log2() + 2.0 * binary_entropy(0.1).unwrap()) / 5.0;
        let got = entropy_rate_lower_approx(2, 5, 0.1, conv).unwrap();
        assert!(close(got, expected, 1e-12));
        assert!(close(got, -1.4535, 5e-4));
        let mut prev = f64::INFINITY;
        for k in 0..=50 {
            let value = entropy_rate_lower_approx(2, 5, k as f64 / 100.0, conv).unwrap();
            assert!(value <= prev + 1e-15);
            prev = value;
        }
        // clamp: everything above 1 is evaluated at 1
        assert_eq!(
            entropy_rate_lower_approx(2, 5, 1.7, conv).unwrap(),
            entropy_rate_lower_approx(2, 5, 1.0, conv).unwrap()
        );
        assert!(entropy_rate_lower_approx(2, 5, 2.5, conv).is_err());
        let local = entropy_rate_lower_approx(3, 4, 0.2, DimensionConvention::Local).unwrap();
        let expected = entropy_rate_lower(3, 4) - audenaert_f(0.2, 3.0).unwrap() / 4.0;
        assert!(close(local, expected, 1e-15));
    }

    #[test]
    fn convexity_gap_examples() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let rho = sample::density_matrix(3, &mut rng);
        assert!(close(almost_convexity_gap(&[1.0], std::slice::from_ref(&rho)).unwrap(), 0.0, 1e-9));
        assert!(close(almost_convexity_gap(&[0.5, 0.5], &[rho.clone(), rho]).unwrap(), 1.0, 1e-9));
        let e0 = FloatOperator::from_fn(2, |r, c| ((r == 0 && c == 0) as u8 as f64).into());
        let e1 = FloatOperator::from_fn(2, |r, c| ((r == 1 && c == 1) as u8 as f64).into());
        assert!(close(almost_convexity_gap(&[0.5, 0.5], &[e0, e1]).unwrap(), 0.0, 1e-9));
    }

    #[test]
    fn uniform_beats_rate_bound() {
        for n in 1..=7 {
            let h = DistributionOverSn::uniform(n, &Limits::DEFAULT).unwrap().entropy_bits() / n as f64;
            for d in 1..=4 {
                assert!(h >= entropy_rate_lower(d, n));
            }
        }
    }

    #[test]
    fn report_without_design() {
        let report = bounds_report(2, 5, None, None, DimensionConvention::default()).unwrap();
        let json = serde_json::to_value(&report).unwrap();
        assert_eq!(json["support_upper_bound"], 1_048_577);
        assert_eq!(json["support_lower_bound"], 26);
        assert!(json.get("design").is_none());
        let report = bounds_report(3, 3, None, None, DimensionConvention::default()).unwrap();
        assert_eq!(report.sym_dimension, BigUint::from(10u32));
        let huge = bounds_report(10, 30, None, None, DimensionConvention::default()).unwrap();
        assert!(serde_json::to_value(&huge).unwrap()["support_upper_bound"].is_string());
    }

    #[test]
    fn report_with_uniform_design() {
        let w = WeightedDesign::uniform(2, 2, &Limits::DEFAULT).unwrap();
        let report = bounds_report(2, 2, Some(&w), Some(0.1), DimensionConvention::default()).unwrap();
        let design = report.design.unwrap();
        assert!(close(design.entropy_rate, 0.5, 1e-15));
        assert!(close(report.entropy_rate_lower.raw, 1.0 - 4.0 * 3f64.log2() / 2.0, 1e-12));
        assert!(close(report.entropy_rate_lower.raw, -2.17, 1e-2));
        assert_eq!(report.entropy_rate_lower.clamped, 0.0);
        assert!(design.rate_meets_lower_bound && design.rate_bound_vacuous && design.support_within_bounds);
        assert!(report.approx.is_some());
        assert!(bounds_report(3, 2, Some(&w), None, DimensionConvention::default()).is_err());
    }
}
