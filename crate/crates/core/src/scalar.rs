//! Floating point abstraction shared by every numerical module.

use std::fmt::{Debug, Display};
use std::iter::Sum;

use num_traits::{Float, FloatConst, FromPrimitive, ToPrimitive};
use serde::de::DeserializeOwned;
use serde::Serialize;

/// Real scalar used throughout the crate.
///
/// Implemented for `f32` and `f64`. Tolerances that are stated in absolute
/// terms (for example the `1e-12` mass normalization check) are widened to a
/// small multiple of machine epsilon for types that cannot represent them.
pub trait Scalar:
    Float
    + FloatConst
    + FromPrimitive
    + ToPrimitive
    + Sum
    + Default
    + Debug
    + Display
    + Send
    + Sync
    + Serialize
    + DeserializeOwned
    + 'static
{
    /// Converts an `f64` literal into `Self`.
    #[inline]
    fn lit(v: f64) -> Self {
        Self::from_f64(v).expect("f64 literal representable in scalar type")
    }

    #[inline]
    fn from_usize_lossy(n: usize) -> Self {
        Self::from_usize(n).expect("integer representable in scalar type")
    }

    #[inline]
    fn as_f64(self) -> f64 {
        self.to_f64().expect("scalar convertible to f64")
    }

    /// `max(base, 1024 * epsilon)`.
    #[inline]
    fn tolerance(base: f64) -> Self {
        Self::lit(base).max(Self::epsilon() * Self::lit(1024.0))
    }
}

impl Scalar for f32 {}
impl Scalar for f64 {}
