//! Scalar abstraction for the simulation and estimation kernels.
//!
//! Everything numerical in this crate is generic over [`Real`], so the same
//! recursions run in `f32` or `f64`. Scenario files and reports are exchanged
//! as `f64`; the lossy conversions below are the single crossing point.

use core::fmt;

/// Floating-point scalar usable by the queueing and estimation kernels.
pub trait Real:
    num_traits::Float
    + num_traits::FromPrimitive
    + num_traits::ToPrimitive
    + fmt::Debug
    + fmt::Display
    + fmt::LowerExp
    + Default
    + Send
    + Sync
    + 'static
{
    /// Conversion from `f64`, used for constants, file input, and quantiles.
    fn from_f64_lossy(value: f64) -> Self;

    /// Conversion to `f64`, used for reporting and digests.
    fn to_f64_lossy(self) -> f64;

    fn from_usize_lossy(value: usize) -> Self {
        Self::from_f64_lossy(value as f64)
    }
}

impl Real for f32 {
    fn from_f64_lossy(value: f64) -> Self {
        value as f32
    }

    fn to_f64_lossy(self) -> f64 {
        f64::from(self)
    }
}

impl Real for f64 {
    fn from_f64_lossy(value: f64) -> Self {
        value
    }

    fn to_f64_lossy(self) -> f64 {
        self
    }
}
