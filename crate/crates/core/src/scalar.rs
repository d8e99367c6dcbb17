//! Scalar abstraction: the numeric kernels are generic over `f32`/`f64`.

use std::fmt;

use num_traits::{Float, FromPrimitive, NumAssign};
use rand::Rng;
use rand_distr::{Distribution, StandardNormal};

/// Floating-point scalar the latent-space math runs on.
///
/// `from_usize_lossy` and `standard_normal` cover the two places plain
/// `num_traits::Float` falls short: dimension-dependent constants and
/// seeded Gaussian draws inside generic code.
pub trait Scalar:
    Float + FromPrimitive + NumAssign + fmt::Debug + fmt::Display + Send + Sync + 'static
{
    /// Draw one standard-normal sample.
    fn standard_normal<R: Rng + ?Sized>(rng: &mut R) -> Self;

    /// Convert a count to a scalar (exact for the sizes used here).
    fn from_usize_lossy(n: usize) -> Self {
        Self::from_usize(n).expect("usize fits in scalar")
    }
}

impl Scalar for f32 {
    fn standard_normal<R: Rng + ?Sized>(rng: &mut R) -> Self {
        StandardNormal.sample(rng)
    }
}

impl Scalar for f64 {
    fn standard_normal<R: Rng + ?Sized>(rng: &mut R) -> Self {
        StandardNormal.sample(rng)
    }
}
