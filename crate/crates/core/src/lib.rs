//! Pair-partition combinatorics and the moment calculus of generalized
//! Gaussian weights.
//!
//! * [`pairings`]: enumeration of `P2(2n)`, crossings, singletons, components,
//!   the collapse map onto even non-crossing partitions, rotation, and the
//!   classical counting sequences.
//! * [`weights`]: weight functions `q^cr`, `s^(n-cc)`, `b^H`, `beta^h` and their
//!   products, with factorization and rotation-invariance checks.
//! * [`moments`]: moments, free cumulants, free convolution, dilation, the
//!   `mu_b` interpolation between a law and the semicircle, Hankel positivity.
//! * [`randmat`]: Monte Carlo spectra of Markov random matrices.
//! * [`permgroup`]: the embedding of `S(n)` into `P2(2n)`, isolated fixed
//!   points, Gram-matrix positivity and the metric `H(sigma^-1 tau)`.
//! * [`verify`]: the bundled verification suite behind `ggauss verify`.
//!
//! Counts are exact ([`num_bigint::BigUint`]); moment arithmetic is generic
//! over [`Scalar`] and exact when instantiated with [`num_rational::BigRational`].

pub mod error;
pub mod linalg;
pub mod moments;
pub mod pairings;
pub mod permgroup;
pub mod randmat;
pub mod scalar;
pub mod verify;
pub mod weights;

pub use error::{Error, Result};
pub use moments::{CumulantSequence, GramMatrix, MomentSequence, SetPartition};
pub use pairings::{ChordStatistics, EnumerationCap, PairPartition, StatisticDistribution};
pub use permgroup::Permutation;
pub use scalar::Scalar;
pub use weights::WeightSpec;
