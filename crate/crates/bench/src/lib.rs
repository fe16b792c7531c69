//! Fixtures shared by the benchmarks.

use symtwirl::design::{build_constraint_system, ConstraintSystem};
use symtwirl::{DistributionOverSn, ExactOperator, ExactScalar, Limits};

pub const LIMITS: Limits = Limits::DEFAULT;

pub fn system(d: usize, n: usize) -> ConstraintSystem {
    build_constraint_system(d, n, &LIMITS).expect("benchmark sizes are within limits")
}

pub fn uniform(n: usize) -> DistributionOverSn {
    DistributionOverSn::uniform(n, &LIMITS).expect("benchmark sizes are within limits")
}

/// Dense integer operator with a scrambled entry pattern.
pub fn dense_operator(dim: usize) -> ExactOperator {
    ExactOperator::from_fn(dim, |r, c| ExactScalar::from_integer(((r * 7 + c * 3) % 11) as i64 - 5))
}
