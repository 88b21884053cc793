//! Numeric traits the library is generic over.
//!
//! Two tiers are used. [`Threshold`] only needs ordered field arithmetic and
//! is enough for the diffusion engine, so it admits exact rationals as well
//! as `f32`/`f64`. [`Scalar`] adds the transcendental functions needed by the
//! centrality solvers and the statistics, and is implemented for floats only.

use std::fmt::{Debug, Display};
use std::iter::Sum;

use num_traits::{Float, FromPrimitive, Num, ToPrimitive};

/// Ordered field used for activation thresholds and mean actor inputs.
pub trait Threshold: Num + PartialOrd + Copy + FromPrimitive + Debug + Send + Sync {
    fn from_count(n: usize) -> Self {
        Self::from_usize(n).expect("count representable in threshold type")
    }

    fn ratio(num: usize, den: usize) -> Self {
        Self::from_count(num) / Self::from_count(den)
    }
}

impl<T> Threshold for T where T: Num + PartialOrd + Copy + FromPrimitive + Debug + Send + Sync {}

/// Floating point scalar for iterative solvers and statistics.
pub trait Scalar:
    Float + FromPrimitive + ToPrimitive + Sum + Debug + Display + Default + Send + Sync + 'static
{
    fn lit(v: f64) -> Self {
        Self::from_f64(v).expect("literal representable in scalar type")
    }

    fn count(n: usize) -> Self {
        Self::from_usize(n).expect("count representable in scalar type")
    }

    fn to_f64_lossy(self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }
}

impl Scalar for f32 {}
impl Scalar for f64 {}
