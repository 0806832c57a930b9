//! Scalar abstraction: the whole engine is generic over the floating-point
//! type. `f64` is the default used by the CLI and the verification harness;
//! `f32` works for quick, lower-precision experiments.

use std::fmt;

use serde::{de::DeserializeOwned, Serialize};

/// Floating-point scalar the geometry and simulation code is generic over.
pub trait Real:
    num_traits::Float
    + num_traits::FloatConst
    + num_traits::FromPrimitive
    + num_traits::ToPrimitive
    + fmt::Debug
    + fmt::Display
    + Default
    + Serialize
    + DeserializeOwned
    + Send
    + Sync
    + 'static
{
    /// Lossy conversion from `f64`, for constants and RNG draws.
    fn from_f64_lossy(v: f64) -> Self {
        Self::from_f64(v).expect("finite f64 converts to any Real")
    }
}

impl Real for f32 {}
impl Real for f64 {}

/// Shorthand for embedding an `f64` constant into generic code.
#[inline]
pub fn real<T: Real>(v: f64) -> T {
    T::from_f64_lossy(v)
}
