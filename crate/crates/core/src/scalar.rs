// SPDX-License-Identifier: Apache-2.0

//! Floating-point abstraction shared by the numerical modules.

use std::fmt::{Debug, Display};
use std::iter::Sum;

use num_traits::{Float, FloatConst, FromPrimitive, ToPrimitive};

/// Real scalar the numerical core is generic over: `f32` or `f64`.
pub trait Scalar:
    Float
    + FloatConst
    + FromPrimitive
    + ToPrimitive
    + Sum
    + Debug
    + Display
    + Default
    + Send
    + Sync
    + 'static
{
    /// Converts an `f64` literal. Panics only if the target cannot represent
    /// finite `f64` values at all, which no implementor does.
    #[inline]
    fn lit(v: f64) -> Self {
        Self::from_f64(v).expect("finite literal")
    }

    #[inline]
    fn from_usize_lossy(v: usize) -> Self {
        Self::from_usize(v).expect("usize is representable")
    }

    #[inline]
    fn as_f64(self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }
}

impl Scalar for f32 {}
impl Scalar for f64 {}

/// Trapezoid rule for samples on a uniform grid with spacing `h`.
pub fn trapezoid<T: Scalar>(values: &[T], h: T) -> T {
    match values.len() {
        0 | 1 => T::zero(),
        n => {
            let inner: T = values[1..n - 1].iter().copied().sum();
            h * (inner + (values[0] + values[n - 1]) * T::lit(0.5))
        }
    }
}

/// Running trapezoid integral, starting at zero.
pub fn cumulative_trapezoid<T: Scalar>(values: &[T], h: T) -> Vec<T> {
    let mut out = Vec::with_capacity(values.len());
    let mut acc = T::zero();
    let half = T::lit(0.5) * h;
    for (i, &v) in values.iter().enumerate() {
        if i > 0 {
            acc = acc + half * (values[i - 1] + v);
        }
        out.push(acc);
    }
    out
}
