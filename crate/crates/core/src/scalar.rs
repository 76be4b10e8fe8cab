//! Scalar abstractions.
//!
//! Everything numeric in this crate is written against [`Real`], which is
//! implemented for `f32` and `f64`. The polynomial identities of the region
//! analysis only need field operations and are written against [`Field`],
//! so they can also be evaluated exactly over rationals.

use std::fmt::{Debug, Display};

use num_traits::{Float, FloatConst, FromPrimitive, Num, ToPrimitive};

/// Floating point scalar: `f32` or `f64`.
pub trait Real: Float + FloatConst + FromPrimitive + ToPrimitive + Debug + Display + Send + Sync + 'static {
    /// Lossy conversion from an `f64` literal.
    #[inline]
    fn lit(v: f64) -> Self {
        Self::from_f64(v).expect("f64 literal representable")
    }

    /// Conversion from a count or index.
    #[inline]
    fn from_count(n: usize) -> Self {
        Self::from_usize(n).expect("count representable")
    }

    #[inline]
    fn as_f64(self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }
}

impl Real for f32 {}
impl Real for f64 {}

/// Commutative field with integer constants; enough for polynomial identities.
pub trait Field: Num + Clone + FromPrimitive {
    #[inline]
    fn int(v: i64) -> Self {
        Self::from_i64(v).expect("integer constant representable")
    }
}

impl<T: Num + Clone + FromPrimitive> Field for T {}
