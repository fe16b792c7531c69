//! Weighted symmetric designs for the permutation twirl on `(C^d)^{⊗n}`.
//!
//! A weighted symmetric design is a probability distribution over a subset of
//! the symmetric group `S_n` whose averaged conjugation action on the n-fold
//! tensor product coincides exactly with the uniform average over all of
//! `S_n`. This crate builds such designs with exact rational arithmetic,
//! verifies them, and evaluates the entropy and cardinality bounds that govern
//! how much shared randomness a twirl costs.
//!
//! Module map:
//! - [`perm`]: permutations, their action on index tuples, permutation matrices.
//! - [`exact`]: exact complex-rational operators and a float companion layer.
//! - [`linalg`]: exact rational row reduction, rank and kernels.
//! - [`twirl`]: uniform and weighted twirl channels, type projectors.
//! - [`design`]: the compressed constraint system, verifiers, support reduction.
//! - [`bounds`]: closed-form bounds and the consolidated report.
//! - [`typestat`]: types, type classes and bounds on their sizes.
//! - [`symspace`]: the symmetric subspace and the purification check.
//! - [`approx`]: approximate designs and channel designs.

pub mod approx;
pub mod bounds;
pub mod design;
pub mod error;
pub mod exact;
pub mod limits;
pub mod linalg;
pub mod perm;
pub mod sample;
pub mod symspace;
pub mod twirl;
pub mod typestat;

pub(crate) mod util;

pub use approx::{ApproxBoundReport, ChannelRep, DiamondBracket, KrausOperator};
pub use bounds::BoundsReport;
pub use design::{ConstraintSystem, DesignFile, FeatureVector, MinimalSupport, Verdict, WeightedDesign};
pub use error::{Error, Result};
pub use exact::{ExactOperator, ExactScalar, FloatOperator};
pub use limits::Limits;
pub use perm::{BasisIndex, IndexTuple, Permutation};
pub use twirl::DistributionOverSn;
pub use typestat::TypeDistribution;
