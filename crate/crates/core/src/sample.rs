//! Seeded random instances for property checks: rational operators and
//! states, float density matrices, distributions over `S_n`.

use nalgebra::DMatrix;
use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::Zero;
use rand::Rng;
use rand_distr::StandardNormal;

use crate::exact::{ExactOperator, ExactScalar, FloatOperator};
use crate::limits::Limits;
use crate::perm::enumerate_permutations;
use crate::twirl::DistributionOverSn;

fn small_fraction<R: Rng + ?Sized>(rng: &mut R) -> BigRational {
    let num: i64 = rng.random_range(-6..=6);
    let den: i64 = rng.random_range(1..=7);
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

/// Complex-rational matrix with small random numerators and denominators.
pub fn rational_operator<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> ExactOperator {
    ExactOperator::from_fn(dim, |_, _| ExactScalar::new(small_fraction(rng), small_fraction(rng)))
}

/// Exact density matrix `B B† / tr(B B†)` for a random rational `B`.
pub fn rational_state<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> ExactOperator {
    loop {
        let b = rational_operator(dim, rng);
        let gram = b.mul(&b.adjoint()).expect("square");
        let trace = gram.trace().re;
        if !trace.is_zero() {
            return gram.scale(&trace.recip());
        }
    }
}

fn normal_complex<R: Rng + ?Sized>(rng: &mut R) -> Complex64 {
    Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
}

/// Float density matrix from a complex Ginibre matrix, full rank almost surely.
pub fn density_matrix<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> FloatOperator {
    let g = DMatrix::from_fn(dim, dim, |_, _| normal_complex(rng));
    let m = &g * g.adjoint();
    let trace = m.trace().re;
    FloatOperator::from_matrix(m / Complex64::new(trace, 0.0)).expect("square")
}

/// Density matrix of rank at most `rank`.
pub fn low_rank_density_matrix<R: Rng + ?Sized>(dim: usize, rank: usize, rng: &mut R) -> FloatOperator {
    let g = DMatrix::from_fn(dim, rank.max(1), |_, _| normal_complex(rng));
    let m = &g * g.adjoint();
    let trace = m.trace().re;
    FloatOperator::from_matrix(m / Complex64::new(trace, 0.0)).expect("square")
}

/// Strictly positive float probability vector of length `len`.
pub fn probability_vector<R: Rng + ?Sized>(len: usize, rng: &mut R) -> Vec<f64> {
    let raw: Vec<f64> = (0..len).map(|_| rng.random_range(0.01..1.0)).collect();
    let total: f64 = raw.iter().sum();
    raw.into_iter().map(|x| x / total).collect()
}

/// Distribution on a random nonempty subset of `S_n` with positive rational
/// weights.
pub fn distribution<R: Rng + ?Sized>(n: usize, rng: &mut R) -> DistributionOverSn {
    let perms = enumerate_permutations(n, &Limits::DEFAULT).expect("small n");
    let keep = rng.random_range(0.2..=1.0);
    let mut chosen: Vec<_> = perms.into_iter().filter(|_| rng.random_bool(keep)).collect();
    if chosen.is_empty() {
        chosen.push(crate::perm::Permutation::identity(n));
    }
    let raw: Vec<i64> = chosen.iter().map(|_| rng.random_range(1..=9)).collect();
    let total: i64 = raw.iter().sum();
    let weights = chosen.into_iter().zip(raw).map(|(p, w)| (p, BigRational::new(w.into(), total.into())));
    DistributionOverSn::new(n, weights).expect("valid by construction")
}
