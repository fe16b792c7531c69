//! The uniform permutation twirl and weighted twirls over `S_n`.

use std::collections::{BTreeMap, HashMap};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::exact::{ExactOperator, ExactScalar};
use crate::limits::Limits;
use crate::perm::{decode_into, enumerate_permutations, Permutation};
use crate::typestat::TypeDistribution;
use crate::util::{factorial, rational_to_f64};

/// Probability distribution on `S_n` with strictly positive exact weights on
/// its support.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct DistributionOverSn {
    n: usize,
    weights: BTreeMap<Permutation, BigRational>,
}

impl DistributionOverSn {
    /// Weights must be strictly positive, sum to one exactly, and name each
    /// permutation at most once.
    pub fn new(n: usize, weights: impl IntoIterator<Item = (Permutation, BigRational)>) -> Result<Self> {
        let mut map = BTreeMap::new();
        let mut total = BigRational::zero();
        for (perm, w) in weights {
            if perm.n() != n {
                return Err(Error::dim(format!("permutation {perm} is not in S_{n}")));
            }
            if !w.is_positive() {
                return Err(Error::invalid(format!("weight {w} of {perm} is not positive")));
            }
            total += &w;
            if map.insert(perm.clone(), w).is_some() {
                return Err(Error::invalid(format!("permutation {perm} listed twice")));
            }
        }
        if map.is_empty() {
            return Err(Error::invalid("empty distribution"));
        }
        if !total.is_one() {
            return Err(Error::invalid(format!("weights sum to {total}, not 1")));
        }
        Ok(DistributionOverSn { n, weights: map })
    }

    pub fn uniform(n: usize, limits: &Limits) -> Result<Self> {
        let perms = enumerate_permutations(n, limits)?;
        let w = BigRational::new(BigInt::one(), BigInt::from(perms.len()));
        Ok(DistributionOverSn { n, weights: perms.into_iter().map(|p| (p, w.clone())).collect() })
    }

    pub fn point_mass(perm: Permutation) -> Self {
        DistributionOverSn { n: perm.n(), weights: BTreeMap::from([(perm, BigRational::one())]) }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Support with weights, in lexicographic order of the permutations.
    pub fn iter(&self) -> impl Iterator<Item = (&Permutation, &BigRational)> {
        self.weights.iter()
    }

    pub fn weight(&self, perm: &Permutation) -> BigRational {
        self.weights.get(perm).cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn support_len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_uniform(&self) -> bool {
        let nf = BigInt::from(factorial(self.n));
        BigInt::from(self.weights.len()) == nf && self.weights.values().all(|w| w.numer().is_one() && *w.denom() == nf)
    }

    pub fn probabilities(&self) -> Vec<f64> {
        self.weights.values().map(rational_to_f64).collect()
    }

    /// Shannon entropy in bits, evaluated in double precision.
    pub fn entropy_bits(&self) -> f64 {
        crate::util::entropy_bits(self.probabilities())
    }
}

fn check_operator(a: &ExactOperator, d: usize, n: usize, limits: &Limits) -> Result<()> {
    let dim = limits.check_dim(d, n)?;
    if a.dim() != dim {
        return Err(Error::dim(format!("operator of dimension {} on (C^{d})^(⊗{n})", a.dim())));
    }
    Ok(())
}

/// `Σ_π weight(π) U^π A U^π†`, by relabeling and skipping zero entries.
fn conjugation_sum<'a>(
    a: &ExactOperator,
    d: usize,
    terms: impl Iterator<Item = (&'a Permutation, ExactScalar)>,
) -> ExactOperator {
    let dim = a.dim();
    let nonzero: Vec<(usize, usize)> =
        (0..dim).flat_map(|r| (0..dim).map(move |c| (r, c))).filter(|&(r, c)| !a.get(r, c).is_zero()).collect();
    let mut out = ExactOperator::zeros(dim);
    for (perm, weight) in terms {
        let table = perm.basis_action(d);
        for &(r, c) in &nonzero {
            out.add_at(table[r], table[c], &(&weight * a.get(r, c)));
        }
    }
    out
}

/// `(1/n!) Σ_{π∈S_n} U^π A U^π†`, summing over every permutation.
pub fn uniform_twirl(a: &ExactOperator, d: usize, n: usize, limits: &Limits) -> Result<ExactOperator> {
    check_operator(a, d, n, limits)?;
    let perms = enumerate_permutations(n, limits)?;
    let w = ExactScalar::real(BigRational::new(BigInt::one(), BigInt::from(perms.len())));
    Ok(conjugation_sum(a, d, perms.iter().map(|p| (p, w.clone()))))
}

/// Same value as [`uniform_twirl`], computed by averaging `A` over the orbits
/// of index pairs under the diagonal action. An orbit of `(y, z)` is the set of
/// rearrangements of the zipped word `((y_1, z_1), …, (y_n, z_n))`, keyed by its
/// sorted letters.
pub fn uniform_twirl_orbits(a: &ExactOperator, d: usize, n: usize, limits: &Limits) -> Result<ExactOperator> {
    check_operator(a, d, n, limits)?;
    let dim = a.dim();
    let mut digits = vec![0; n];
    let keys: Vec<Vec<usize>> = (0..dim)
        .map(|x| {
            decode_into(x, d, &mut digits);
            digits.clone()
        })
        .collect();
    let orbit_key = |y: usize, z: usize| -> Vec<usize> {
        let mut pairs: Vec<usize> = keys[y].iter().zip(&keys[z]).map(|(a, b)| a * d + b).collect();
        pairs.sort_unstable();
        pairs
    };
    let mut sums: HashMap<Vec<usize>, (ExactScalar, usize)> = HashMap::new();
    for y in 0..dim {
        for z in 0..dim {
            let entry = sums.entry(orbit_key(y, z)).or_default();
            entry.0 += a.get(y, z);
            entry.1 += 1;
        }
    }
    Ok(ExactOperator::from_fn(dim, |y, z| {
        let (sum, count) = &sums[&orbit_key(y, z)];
        sum.scale(&BigRational::new(BigInt::one(), BigInt::from(*count)))
    }))
}

/// `Σ_π q(π) U^π A U^π†`.
pub fn weighted_twirl(q: &DistributionOverSn, a: &ExactOperator, d: usize, limits: &Limits) -> Result<ExactOperator> {
    check_operator(a, d, q.n(), limits)?;
    Ok(conjugation_sum(a, d, q.iter().map(|(p, w)| (p, ExactScalar::real(w.clone())))))
}

/// Diagonal projector onto the span of `e_x` for words `x` of type `mu`.
pub fn type_projector(mu: &TypeDistribution, d: usize, limits: &Limits) -> Result<ExactOperator> {
    if mu.d() != d {
        return Err(Error::invalid(format!("type over {} letters used with d = {d}", mu.d())));
    }
    let n = mu.n();
    let dim = limits.check_dim(d, n)?;
    let mut out = ExactOperator::zeros(dim);
    let mut digits = vec![0; n];
    let mut counts = vec![0; d];
    for x in 0..dim {
        decode_into(x, d, &mut digits);
        counts.iter_mut().for_each(|c| *c = 0);
        digits.iter().for_each(|&a| counts[a] += 1);
        if counts == mu.counts() {
            out.set(x, x, ExactScalar::one());
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::perm::IndexTuple;
    use crate::sample;
    use crate::typestat::{enumerate_types, type_class, type_class_size};
    use crate::util::ratio;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    const LIM: Limits = Limits::DEFAULT;

    fn proj(d: usize, letters: &[usize]) -> ExactOperator {
        let x = IndexTuple::from_letters(d, letters).unwrap();
        let dim = d.pow(letters.len() as u32);
        ExactOperator::matrix_unit(dim, x.index().0, x.index().0)
    }

    fn swap() -> Permutation {
        Permutation::from_one_line(&[2, 1]).unwrap()
    }

    #[test]
    fn distribution_validation() {
        let id = Permutation::identity(2);
        assert!(DistributionOverSn::new(2, [(id.clone(), ratio(1, 2))]).is_err());
        assert!(DistributionOverSn::new(2, [(id.clone(), ratio(1, 2)), (id.clone(), ratio(1, 2))]).is_err());
        assert!(DistributionOverSn::new(2, [(id.clone(), ratio(3, 2)), (swap(), -ratio(1, 2))]).is_err());
        assert!(DistributionOverSn::new(3, [(id.clone(), ratio(1, 1))]).is_err());
        assert!(DistributionOverSn::new(2, []).is_err());
        let q = DistributionOverSn::new(2, [(id, ratio(1, 3)), (swap(), ratio(2, 3))]).unwrap();
        assert_eq!(q.support_len(), 2);
        assert!(!q.is_uniform());
        assert!(DistributionOverSn::uniform(4, &LIM).unwrap().is_uniform());
    }

    #[test]
    fn uniform_twirl_examples() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let a = sample::rational_operator(3, &mut rng);
        assert_eq!(uniform_twirl(&a, 3, 1, &LIM).unwrap(), a);

        let out = uniform_twirl(&proj(2, &[1, 2]), 2, 2, &LIM).unwrap();
        let expected = proj(2, &[1, 2]).add(&proj(2, &[2, 1])).unwrap().scale(&ratio(1, 2));
        assert_eq!(out, expected);

        // a word of type (2/3, 1/3) twirls to p_mu / 3
        let out = uniform_twirl(&proj(2, &[1, 1, 2]), 2, 3, &LIM).unwrap();
        let mu = TypeDistribution::new(vec![2, 1]).unwrap();
        assert_eq!(out, type_projector(&mu, 2, &LIM).unwrap().scale(&ratio(1, 3)));
    }

    #[test]
    fn weighted_twirl_examples() {
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        let a = sample::rational_operator(8, &mut rng);
        let id = DistributionOverSn::point_mass(Permutation::identity(3));
        assert_eq!(weighted_twirl(&id, &a, 2, &LIM).unwrap(), a);
        let uni = DistributionOverSn::uniform(3, &LIM).unwrap();
        assert_eq!(weighted_twirl(&uni, &a, 2, &LIM).unwrap(), uniform_twirl(&a, 2, 3, &LIM).unwrap());

        let q = DistributionOverSn::new(2, [(Permutation::identity(2), ratio(1, 3)), (swap(), ratio(2, 3))]).unwrap();
        let out = weighted_twirl(&q, &proj(2, &[1, 2]), 2, &LIM).unwrap();
        let expected = proj(2, &[1, 2]).scale(&ratio(1, 3)).add(&proj(2, &[2, 1]).scale(&ratio(2, 3))).unwrap();
        assert_eq!(out, expected);
        let rho = sample::rational_state(8, &mut rng);
        let q = sample::distribution(3, &mut rng);
        assert_eq!(weighted_twirl(&q, &rho, 2, &LIM).unwrap().trace(), rho.trace());
    }

    #[test]
    fn type_projector_examples() {
        let p = type_projector(&TypeDistribution::new(vec![2, 0]).unwrap(), 2, &LIM).unwrap();
        assert_eq!(p, proj(2, &[1, 1]));
        let p = type_projector(&TypeDistribution::new(vec![1, 1]).unwrap(), 2, &LIM).unwrap();
        assert_eq!(p.trace(), ExactScalar::from_integer(2));
        let p = type_projector(&TypeDistribution::new(vec![2, 2]).unwrap(), 2, &LIM).unwrap();
        assert_eq!(p.trace(), ExactScalar::from_integer(6));
        assert!(type_projector(&TypeDistribution::new(vec![2, 2]).unwrap(), 3, &LIM).is_err());
    }

    #[test]
    fn twirl_is_idempotent_and_fast_path_agrees() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for (d, n) in [(2usize, 2usize), (2, 3), (3, 2), (2, 4), (3, 3)] {
            let a = sample::rational_operator(d.pow(n as u32), &mut rng);
            let once = uniform_twirl(&a, d, n, &LIM).unwrap();
            assert_eq!(uniform_twirl_orbits(&a, d, n, &LIM).unwrap(), once, "d={d} n={n}");
            assert_eq!(uniform_twirl(&once, d, n, &LIM).unwrap(), once);
        }
    }

    #[test]
    fn twirl_output_is_permutation_invariant() {
        for n in 1..=4 {
            let dim = 1 << n;
            let perms = enumerate_permutations(n, &LIM).unwrap();
            for r in 0..dim {
                for c in 0..dim {
                    let out = uniform_twirl_orbits(&ExactOperator::matrix_unit(dim, r, c), 2, n, &LIM).unwrap();
                    for pi in &perms {
                        assert_eq!(out.conjugate_by_permutation(pi, 2).unwrap(), out);
                    }
                }
            }
        }
    }

    #[test]
    fn type_class_twirl_identity_small() {
        for (d, n) in [(2, 1), (2, 2), (2, 3), (2, 4), (3, 2)] {
            for mu in enumerate_types(n, d, &LIM).unwrap() {
                let p = type_projector(&mu, d, &LIM).unwrap();
                let size = BigInt::from(type_class_size(&mu));
                let expected = p.scale(&BigRational::new(BigInt::one(), size));
                for x in type_class(&mu) {
                    let e = ExactOperator::matrix_unit(p.dim(), x.index().0, x.index().0);
                    assert_eq!(uniform_twirl(&e, d, n, &LIM).unwrap(), expected);
                }
            }
        }
    }
}
