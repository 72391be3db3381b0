//! Scalar abstraction shared by every numeric module.

use std::fmt::{Debug, Display, LowerExp};

use num_traits::{Float, FloatConst, FromPrimitive, NumAssign, ToPrimitive};

/// Floating point scalar the library is generic over (`f32` or `f64`).
///
/// All tolerances quoted in the documentation assume `f64`; `f32` builds
/// work but will not meet them.
pub trait Real:
    'static
    + Float
    + FloatConst
    + FromPrimitive
    + ToPrimitive
    + NumAssign
    + Default
    + Debug
    + Display
    + LowerExp
    + Send
    + Sync
{
    /// Converts an `f64` literal into the scalar type.
    #[inline]
    fn lit(v: f64) -> Self {
        Self::from_f64(v).expect("f64 literal representable in scalar type")
    }

    /// Lossy conversion to `f64` for reporting.
    #[inline]
    fn as_f64(self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }
}

impl Real for f32 {}
impl Real for f64 {}

/// Euclidean norm of a coordinate slice, with scaling against overflow.
pub fn norm<T: Real>(v: &[T]) -> T {
    let scale = v.iter().fold(T::zero(), |m, x| m.max(x.abs()));
    if scale == T::zero() || !scale.is_finite() {
        return scale;
    }
    let s = v.iter().fold(T::zero(), |acc, x| {
        let r = *x / scale;
        acc + r * r
    });
    scale * s.sqrt()
}

pub fn dot<T: Real>(a: &[T], b: &[T]) -> T {
    a.iter().zip(b).fold(T::zero(), |acc, (x, y)| acc + *x * *y)
}
