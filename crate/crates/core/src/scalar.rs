//! Scalar abstraction for the numerical kernels.
//!
//! Everything downstream is generic over [`Real`], so the same code runs in
//! `f32` or `f64`. The concrete aliases at the crate root pin `f64`, which is
//! what the verification suites use.

use std::fmt::{Debug, Display};
use std::iter::Sum;
use std::ops::{AddAssign, DivAssign, MulAssign, SubAssign};

use num_traits::{Float, FloatConst, FromPrimitive};

/// Floating-point scalar: `f32` or `f64`.
pub trait Real:
    Float
    + FloatConst
    + FromPrimitive
    + AddAssign
    + SubAssign
    + MulAssign
    + DivAssign
    + Sum
    + Default
    + Debug
    + Display
    + Send
    + Sync
    + 'static
{
    /// Shorthand for converting an `f64` literal.
    fn of(x: f64) -> Self {
        Self::from_f64(x).expect("f64 literal must convert")
    }

    /// Conversion to `f64` for reporting.
    fn to_f64(self) -> f64;

    /// `i` as a scalar.
    fn of_usize(n: usize) -> Self {
        Self::from_usize(n).expect("usize must convert")
    }
}

impl Real for f32 {
    fn to_f64(self) -> f64 {
        self as f64
    }
}

impl Real for f64 {
    fn to_f64(self) -> f64 {
        self
    }
}
