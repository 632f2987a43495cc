//! Scalar abstraction shared by every numeric kernel in the crate.

use std::fmt::{Debug, Display};
use std::iter::Sum;

use num_traits::{Float, FloatConst, FromPrimitive, ToPrimitive};

/// Real floating point scalar: `f32` or `f64`.
///
/// Thresholds in this crate are written as `f64` literals and converted with
/// [`Real::tol`], which never returns less than a small multiple of the
/// type's machine epsilon. For `f64` that floor sits far below every default
/// threshold, so the literal value is used unchanged.
pub trait Real:
    Float + FloatConst + FromPrimitive + ToPrimitive + Debug + Display + Sum + Send + Sync + 'static
{
    /// Converts an `f64` literal.
    fn lit(v: f64) -> Self {
        Self::from_f64(v).expect("literal representable in scalar type")
    }

    /// Converts a tolerance, clamped from below at `32 * epsilon`.
    fn tol(v: f64) -> Self {
        let floor = Self::epsilon() * Self::lit(32.0);
        Self::lit(v).max(floor)
    }

    /// Lossy conversion used for error payloads and reports.
    fn as_f64(self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }
}

impl Real for f32 {}
impl Real for f64 {}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tolerance_floor_only_binds_for_single_precision() {
        assert_eq!(<f64 as Real>::tol(1e-12), 1e-12);
        assert!(<f32 as Real>::tol(1e-12) > 1e-12);
        assert_eq!(<f32 as Real>::tol(1e-2), 1e-2);
    }
}
