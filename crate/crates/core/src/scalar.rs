use std::fmt::{Debug, Display};
use std::iter::Sum;
use std::ops::{AddAssign, MulAssign, SubAssign};

use num_traits::{Float, FromPrimitive, ToPrimitive};

/// Floating-point scalar the algebra is generic over: f32 or f64.
///
/// All tolerances in this crate are stated for f64; f32 works for the
/// algebraic operations but the linear-solve residual checks scale with
/// the type's epsilon.
pub trait Scalar:
    Float
    + FromPrimitive
    + ToPrimitive
    + AddAssign
    + SubAssign
    + MulAssign
    + Sum
    + Debug
    + Display
    + Send
    + Sync
    + 'static
{
}

impl<T> Scalar for T where
    T: Float
        + FromPrimitive
        + ToPrimitive
        + AddAssign
        + SubAssign
        + MulAssign
        + Sum
        + Debug
        + Display
        + Send
        + Sync
        + 'static
{
}

/// Lift an f64 constant into the working scalar type.
#[inline]
pub fn real<T: Scalar>(x: f64) -> T {
    T::from_f64(x).expect("f64 constant must be representable")
}

/// x^e by repeated multiplication for small non-negative exponents.
#[inline]
pub fn powu<T: Scalar>(x: T, e: u32) -> T {
    let mut acc = T::one();
    for _ in 0..e {
        acc *= x;
    }
    acc
}
