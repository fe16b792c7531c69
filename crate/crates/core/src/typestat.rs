//! Types (empirical letter distributions) of words in `[d]^n` and their type
//! classes.

use num_bigint::BigUint;
use num_traits::{One, Pow};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::limits::Limits;
use crate::perm::{next_permutation, IndexTuple};
use crate::util::{binomial, entropy_bits, factorial};

/// Largest number of types [`enumerate_types`] will materialize.
pub const MAX_TYPES: usize = 1 << 20;

/// An n-type over `d` letters, stored as letter counts summing to `n`.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Serialize, Deserialize)]
#[serde(try_from = "Vec<usize>", into = "Vec<usize>")]
pub struct TypeDistribution {
    counts: Vec<usize>,
}

impl TypeDistribution {
    pub fn new(counts: Vec<usize>) -> Result<Self> {
        if counts.is_empty() {
            return Err(Error::invalid("type over an empty alphabet"));
        }
        if counts.iter().sum::<usize>() == 0 {
            return Err(Error::invalid("type of the empty word"));
        }
        Ok(TypeDistribution { counts })
    }

    pub fn n(&self) -> usize {
        self.counts.iter().sum()
    }

    pub fn d(&self) -> usize {
        self.counts.len()
    }

    pub fn counts(&self) -> &[usize] {
        &self.counts
    }

    pub fn probabilities(&self) -> Vec<f64> {
        let n = self.n() as f64;
        self.counts.iter().map(|&c| c as f64 / n).collect()
    }

    /// `H(μ)` in bits.
    pub fn entropy_bits(&self) -> f64 {
        entropy_bits(self.probabilities())
    }

    /// The lexicographically first word of this type.
    pub fn representative(&self) -> IndexTuple {
        let digits = self.counts.iter().enumerate().flat_map(|(a, &c)| std::iter::repeat_n(a, c)).collect();
        IndexTuple::from_digits(self.d(), digits)
    }
}

impl TryFrom<Vec<usize>> for TypeDistribution {
    type Error = Error;
    fn try_from(counts: Vec<usize>) -> Result<Self> {
        TypeDistribution::new(counts)
    }
}

impl From<TypeDistribution> for Vec<usize> {
    fn from(t: TypeDistribution) -> Self {
        t.counts
    }
}

/// All compositions of `n` into `d` parts, lexicographically descending in the
/// count vector (so `(n, 0, …, 0)` comes first).
pub fn enumerate_types(n: usize, d: usize, _limits: &Limits) -> Result<Vec<TypeDistribution>> {
    if n == 0 || d == 0 {
        return Err(Error::invalid("n and d must be at least 1"));
    }
    let count = binomial(n + d - 1, d - 1);
    if count > BigUint::from(MAX_TYPES) {
        return Err(Error::size(format!("{count} types of length {n} over {d} letters")));
    }
    let mut out = Vec::new();
    let mut counts = vec![0; d];
    fill(&mut counts, 0, n, &mut out);
    Ok(out)
}

fn fill(counts: &mut [usize], pos: usize, left: usize, out: &mut Vec<TypeDistribution>) {
    if pos + 1 == counts.len() {
        counts[pos] = left;
        out.push(TypeDistribution { counts: counts.to_vec() });
        return;
    }
    for c in (0..=left).rev() {
        counts[pos] = c;
        fill(counts, pos + 1, left - c, out);
    }
}

/// `|T_μ^n| = n! / Π counts!`.
pub fn type_class_size(mu: &TypeDistribution) -> BigUint {
    let den = mu.counts.iter().fold(BigUint::one(), |acc, &c| acc * factorial(c));
    factorial(mu.n()) / den
}

/// Words of type `mu`, in lexicographic order.
pub fn type_class(mu: &TypeDistribution) -> TypeClass {
    TypeClass { d: mu.d(), next: Some(mu.representative().digits().to_vec()) }
}

pub struct TypeClass {
    d: usize,
    next: Option<Vec<usize>>,
}

impl Iterator for TypeClass {
    type Item = IndexTuple;

    fn next(&mut self) -> Option<IndexTuple> {
        let current = self.next.take()?;
        let mut following = current.clone();
        if next_permutation(&mut following) {
            self.next = Some(following);
        }
        Some(IndexTuple::from_digits(self.d, current))
    }
}

/// The balanced type: counts differ by at most one, earlier letters take the
/// remainder.
pub fn max_entropy_type(n: usize, d: usize) -> Result<TypeDistribution> {
    if n == 0 || d == 0 {
        return Err(Error::invalid("n and d must be at least 1"));
    }
    let (base, extra) = (n / d, n % d);
    Ok(TypeDistribution { counts: (0..d).map(|a| base + usize::from(a < extra)).collect() })
}

/// `log₂ d − d·log₂(n+1)/n`, the guaranteed entropy of the best n-type.
pub fn max_entropy_type_floor(n: usize, d: usize) -> f64 {
    (d as f64).log2() - d as f64 * ((n + 1) as f64).log2() / n as f64
}

/// Exact check of `(n+1)^{-d} 2^{nH(μ)} ≤ |T_μ^n| ≤ 2^{nH(μ)}`.
///
/// With counts `k_a`, `2^{nH(μ)} = n^n / Π k_a^{k_a}`, so both sides are
/// compared as integers after clearing denominators.
pub fn type_class_sandwich_holds(mu: &TypeDistribution) -> bool {
    let n = mu.n();
    let size = type_class_size(mu);
    let prod = mu.counts.iter().fold(BigUint::one(), |acc, &k| acc * Pow::pow(BigUint::from(k), k as u32));
    let n_pow_n = Pow::pow(BigUint::from(n), n as u32);
    let slack = Pow::pow(BigUint::from(n + 1), mu.d() as u32);
    let upper = &size * &prod <= n_pow_n;
    let lower = n_pow_n <= slack * size * prod;
    upper && lower
}
