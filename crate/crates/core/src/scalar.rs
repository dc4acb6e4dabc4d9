use std::fmt::{Debug, Display};
use std::iter::Sum;

use num_traits::{Float, FromPrimitive, NumCast, ToPrimitive};

/// Floating-point scalar the numerical routines are generic over.
pub trait Scalar:
    Float
    + FromPrimitive
    + ToPrimitive
    + NumCast
    + Sum
    + Debug
    + Display
    + Default
    + Send
    + Sync
    + 'static
{
    /// Converts an `f64` literal.
    #[inline]
    fn lit(x: f64) -> Self {
        <Self as NumCast>::from(x).expect("f64 literal representable")
    }

    /// Converts a count.
    #[inline]
    fn from_count(n: usize) -> Self {
        <Self as NumCast>::from(n).expect("count representable")
    }

    /// Widens to `f64`.
    #[inline]
    fn as_f64(self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }

    /// `tol`, raised to a small multiple of machine epsilon when the type
    /// cannot resolve it (relevant for `f32`).
    #[inline]
    fn noise_floor(tol: f64) -> Self {
        let eps = Self::epsilon().as_f64() * 64.0;
        Self::lit(tol.max(eps))
    }
}

impl Scalar for f32 {}
impl Scalar for f64 {}
