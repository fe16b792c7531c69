use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

pub(crate) fn factorial(n: usize) -> BigUint {
    (1..=n).fold(BigUint::one(), |acc, k| acc * BigUint::from(k))
}

pub(crate) fn binomial(n: usize, k: usize) -> BigUint {
    if k > n {
        return BigUint::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigUint::one();
    for i in 0..k {
        acc = acc * BigUint::from(n - i) / BigUint::from(i + 1);
    }
    acc
}

pub(crate) fn ratio(num: usize, den: usize) -> BigRational {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

/// `p/q` always, including integers (`1/1`), so that files have one spelling.
pub(crate) fn fraction_string(value: &BigRational) -> String {
    format!("{}/{}", value.numer(), value.denom())
}

pub(crate) fn parse_fraction(text: &str) -> Result<BigRational> {
    let bad = || Error::invalid(format!("malformed fraction {text:?}"));
    let text = text.trim();
    let (num, den) = match text.split_once('/') {
        Some((num, den)) => (num.trim(), den.trim()),
        None => (text, "1"),
    };
    let num: BigInt = num.parse().map_err(|_| bad())?;
    let den: BigInt = den.parse().map_err(|_| bad())?;
    if den.is_zero() {
        return Err(bad());
    }
    Ok(BigRational::new(num, den))
}

pub(crate) fn rational_to_f64(value: &BigRational) -> f64 {
    value.to_f64().unwrap_or(f64::NAN)
}

/// Closest rational to `x` with denominator at most `max_den` (continued
/// fractions with semiconvergents).
pub(crate) fn nearest_rational(x: f64, max_den: u64) -> BigRational {
    assert!(x.is_finite() && max_den >= 1);
    let exact = BigRational::from_float(x).expect("finite");
    let (mut p0, mut q0) = (BigInt::zero(), BigInt::one());
    let (mut p1, mut q1) = (BigInt::one(), BigInt::zero());
    let max_den = BigInt::from(max_den);
    let mut rest = exact.clone();
    loop {
        let a = rest.floor().to_integer();
        let q2 = &q0 + &a * &q1;
        if q2 > max_den {
            // largest admissible semiconvergent
            let k = (&max_den - &q0) / &q1;
            let semi = BigRational::new(&p0 + &k * &p1, &q0 + &k * &q1);
            let conv = BigRational::new(p1.clone(), q1.clone());
            let err_semi = (&semi - &exact).abs();
            let err_conv = (&conv - &exact).abs();
            return if err_semi < err_conv { semi } else { conv };
        }
        let p2 = &p0 + &a * &p1;
        p0 = std::mem::replace(&mut p1, p2);
        q0 = std::mem::replace(&mut q1, q2);
        let frac = &rest - BigRational::from_integer(a);
        if frac.is_zero() {
            return BigRational::new(p1, q1);
        }
        rest = frac.recip();
    }
}

/// Shannon entropy in bits of nonnegative weights that sum to one.
pub(crate) fn entropy_bits(probs: impl IntoIterator<Item = f64>) -> f64 {
    probs.into_iter().filter(|&p| p > 0.0).map(|p| -p * p.log2()).sum()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fractions_round_trip() {
        let r = ratio(6, 4);
        assert_eq!(fraction_string(&r), "3/2");
        assert_eq!(parse_fraction("3/2").unwrap(), r);
        assert_eq!(fraction_string(&ratio(1, 1)), "1/1");
        assert_eq!(parse_fraction("1").unwrap(), ratio(1, 1));
        assert!(parse_fraction("1/0").is_err());
        assert!(parse_fraction("x").is_err());
    }

    #[test]
    fn nearest_rational_recovers_small_fractions() {
        for (p, q) in [(1i64, 3i64), (-7, 11), (355, 113), (999_999, 1_000_000), (0, 1)] {
            let x = p as f64 / q as f64;
            let r = nearest_rational(x, 1_000_000);
            assert_eq!(r, BigRational::new(p.into(), q.into()), "{p}/{q}");
        }
    }

    #[test]
    fn binomials() {
        assert_eq!(binomial(6, 1), BigUint::from(6u32));
        assert_eq!(binomial(5, 2), BigUint::from(10u32));
        assert_eq!(binomial(2, 3), BigUint::zero());
        assert_eq!(factorial(5), BigUint::from(120u32));
    }
}
